#pragma once

// Littlewood-Paley decomposition of functions and symbols, the three
// paradifferential operator series
//   S1 = sum_k a^{k-h}(x,D) u_k,
//   S2 = sum_k ((a^k - a^{k-h})(x,D) u_k + a_k(x,D)(u^{k-1} - u^{k-h})),
//   S3 = sum_j a_j(x,D) u^{j-h},
// their corona/ball support verdicts, the spectral support rule, the dyadic
// corona convergence criterion, the remainder terms of a second frequency
// modulation, and the theta-splitting diagnostic for the self-adjoint class.

#include <array>
#include <optional>
#include <vector>

#include "pdo/cutoffs.hpp"
#include "pdo/grid.hpp"
#include "pdo/operators.hpp"
#include "pdo/symbols.hpp"

namespace pdo {

struct LPDecomposition {
  std::vector<GridFunction> pieces;      // u_0 = psi(D)u, u_j = phi(2^-j D)u
  std::vector<GridFunction> cumulative;  // u^j = psi(2^-j D)u
};

LPDecomposition lp_pieces(const GridFunction& u, const RadialCutoff& psi, int J);

struct SymbolPieces {
  std::vector<Symbol> corona;  // a_j, j = 0..J (a_0 = a^0)
  std::vector<Symbol> low;     // a^j, j = 0..J
};
SymbolPieces symbol_pieces(const Symbol& a, const RadialCutoff& psi, int J);

struct SeriesTerm {
  int k = 0;
  double sup = 0, l2 = 0;
  double supp_min = -1, supp_max = -1;  // radii of the term's spectral support
};

struct SeriesDiagnostics {
  std::vector<SeriesTerm> terms;
  GridFunction total;              // partial sum over the computed range
  double growth_exponent = 0;      // fit of log2 sup-norm vs k (0 if all terms null)
  bool all_terms_null = true;
};

// Evaluates the three series for k = 0..K (S1/S3 effectively start at h).
std::array<SeriesDiagnostics, 3> series_terms(const Symbol& a, const GridFunction& u,
                                              const RadialCutoff& psi, int h, int K);

// A single series term, exposed for remainder identities and experiments.
GridFunction series_term(const Symbol& a, const GridFunction& u, const RadialCutoff& psi,
                         int h, int series /*1,2,3*/, int k);

struct SupportVerdict {
  int series = 0;  // 1, 2, 3
  int k = 0;
  double lo = 0, hi = 0;  // required radius window (lo = 0: ball)
  double supp_min = -1, supp_max = -1;
  bool pass = true;  // vacuous terms pass
};

struct SupportCheckReport {
  std::vector<SupportVerdict> verdicts;
  bool all_pass = true;
  double R_h = 0;  // r/2 - R 2^-h
};

// Prop.-style corona (S1/S3), ball (S2) and, when a TDC constant B is given,
// the S2 annulus for k >= h + 1 + log2(B/r).  Lattice-exact at threshold tau.
SupportCheckReport support_checks(const Symbol& a, const GridFunction& u,
                                  const RadialCutoff& psi, int h,
                                  std::optional<double> B = std::nullopt,
                                  double tau = 1e-10);

struct SpectralSupportReport {
  std::vector<LatticePoint> xi_set;       // allowed output frequencies (sorted)
  bool verdict = true;                    // supp F(OP(a)u) subset of xi_set
  std::vector<LatticePoint> violations;
};

// Theorem-B.1-style rule: Xi = {xi + eta | (xi,eta) in supp hat a, eta in
// supp hat u} with wrapped lattice sums; verdict checks the computed output.
SpectralSupportReport spectral_support_check(const Symbol& a, const GridFunction& u,
                                             double tau = 1e-10);

struct CoronaCriterionReport {
  bool dac_ok = true;          // dyadic corona hypothesis
  bool cm_ok = true;           // polynomial growth hypothesis
  bool hypotheses_hold = true;
  double pairing_decay_exponent = 0;  // e in |<u_j, phi>| ~ c 2^{-j e}
  std::vector<double> pairings;
};

CoronaCriterionReport corona_criterion(const std::vector<GridFunction>& u_list, double A,
                                       double theta0, double theta1, double C, double N,
                                       const GridFunction& phi_test);

struct RemainderReport {
  GridFunction r1, r2, r3;
  int primed_term_count = 0;
  double count_bound = 0;  // 1 + log2(R Lambda / (r lambda))
  int mu = 0;              // [log2(lambda / R)]
};

// Remainders of the second frequency modulation Psi at level m (m >= h).
RemainderReport remainder_terms(const Symbol& a, const GridFunction& u,
                                const RadialCutoff& psi, const RadialCutoff& Psi, int m,
                                int h);

struct SelfadjointRow {
  int k = 0;
  double eps = 0;
  bool corona_applicable = false;
  bool corona_pass = true;
  double loc_sup = 0;  // ||a_{k,chi,eps}(x,D) v_k||_inf
  double b_sup = 0;    // ||b_k(x,D) v_k||_inf
};

struct SelfadjointReport {
  std::vector<SelfadjointRow> rows;
  double decay_exponent = 0;  // of the localized part, fitted over k
  bool all_coronas_pass = true;
};

// Splitting a_k = a_{k,chi,eps} + b_k with eps = 2^{-k theta}, applied to
// v_k = u^{k-1} - u^{k-h}; checks the b_k output corona
// (r 2^{-h-2}) 2^{k(1-theta)} <= |zeta| <= R 2^k once 2^{k(1-theta)} > 2^{h+2}/r.
SelfadjointReport selfadjoint_splitting_diagnostic(const Symbol& a, const GridFunction& u,
                                                   double theta, const RadialCutoff& psi,
                                                   int h, const TwistedCutoff& chi,
                                                   double tau = 1e-10);

}  // namespace pdo
