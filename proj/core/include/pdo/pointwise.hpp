#pragma once

// Peetre-Fefferman-Stein maximal functions, the symbol factor
//   F_a(N,R;x) = sum_y (1 + R|y|)^N |F^{-1}_{eta->y}(a(x,eta) chi(eta))| dy^n,
// the factorisation inequality |OP(a)u(x)| <= F_a(N,R;x) u*(N,R;x) (exact on
// the lattice when chi = 1 on supp hat u), and the R/Q/k scaling studies.

#include <optional>
#include <string>
#include <vector>

#include "pdo/cutoffs.hpp"
#include "pdo/grid.hpp"
#include "pdo/symbols.hpp"

namespace pdo {

struct MaximalFunction {
  double N = 0, R = 0;
  std::vector<double> values;  // one per node
};

// u*(N,R;x) = sup_y |u(x-y)| / (1 + R |y|)^N with torus distance; O(M^2n).
MaximalFunction maximal(const GridFunction& u, double N, double R);

struct SymbolFactor {
  double N = 0, R = 0;
  std::vector<double> values;  // one per node, >= 0
};

// The auxiliary cutoff chi_aux acts on |eta|; when a u-band is declared it
// must equal 1 there (checked on the lattice; rejected otherwise).
SymbolFactor symbol_factor(const Symbol& a, double N, double R,
                           const RadialFilter& chi_aux,
                           std::optional<EtaBand> u_band = std::nullopt);

// max_x |OP(a)u(x)| / (F_a(x) u*(x)), with 0/0 treated as 0.
double factorization_check(const Symbol& a, const GridFunction& u, double N, double R,
                           const RadialFilter& chi_aux);

enum class ScalingVariant { mh_bound, r_scaling, q_scaling, ck_growth };

struct ScalingRow {
  double parameter = 0;  // R, Q or k
  double value = 0;
};

struct ScalingResult {
  ScalingVariant variant;
  std::vector<ScalingRow> rows;
  double fitted_slope = 0;
  std::string note;
};

// Corona-supported auxiliary profile psi_aux for F_a: 1 on [3/4, 3/2],
// supported in [1/2, 2] (dilated by R at use sites).
RadialProfile corona_aux_profile();
// Ball auxiliary profile: 1 on [0,1], supported in [0,2].
RadialProfile ball_aux_profile();

// mh_bound: per-R ratio max_x F_a / RHS of the Mihlin-Hoermander-style bound
//   c sum_{|alpha| <= [N+n/2]+1} ( sum_{R supp psi} |R^|alpha| D^alpha_eta a|^2 / R^n )^{1/2};
// rows carry the measured ratio; fitted_slope is log2-ratio drift per octave.
ScalingResult scaling_mh(const Symbol& a, double N, const RadialProfile& aux,
                         const std::vector<double>& Rs);

// r_scaling: slope of log2 max_x F_a(N,R;.) vs log2 R.
ScalingResult scaling_r(const Symbol& a, double N, const RadialProfile& aux,
                        const std::vector<double>& Rs);

// q_scaling: F_{a_Q} for the high-pass a_Q = phi(Q^{-1} D_x) a, slope vs Q.
ScalingResult scaling_q(const Symbol& a, double N, const RadialProfile& aux,
                        const RadialCutoff& psi, const std::vector<double>& Qs, double R);

// ck_growth: sup_x |OP(Phi(2^-k D_x) a Psi(2^-k eta)) v| vs k for the
// lacunary v = sum_j e^{i 2^j x}; Psi either the ball psi or the corona phi.
ScalingResult scaling_ck(const Symbol& a, const RadialCutoff& psi, bool corona_Psi,
                         const std::vector<int>& ks);

}  // namespace pdo
