#pragma once

// Symbols a(x,eta) of order d sampled on the x-grid times an integer
// eta-band, together with the partially Fourier transformed symbol
// hat a(xi,eta) = F_{x->xi} a(x,eta) and the machinery built on it:
// seminorm estimation, x-frequency modulation, twisted-diagonal
// localization and seminorms, adjoints, TDC checks, and the three-way
// paradifferential splitting of the symbol.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdo/cutoffs.hpp"
#include "pdo/grid.hpp"

namespace pdo {

// Per-axis frequency interval; the eta-band is the box [lo,hi]^n.
struct EtaBand {
  int lo = 0, hi = -1;
  int count1() const { return hi - lo + 1; }
  bool contains1(int k) const { return lo <= k && k <= hi; }
  bool contains(const LatticePoint& k, int n) const {
    return contains1(k[0]) && (n == 1 || contains1(k[1]));
  }
  bool operator==(const EtaBand&) const = default;
};

EtaBand full_band(const TorusGrid& g);

// Closed-form evaluator and its analytic eta-derivatives (n = 1 orders).
using SymbolForm = std::function<cplx(const std::array<double, 2>& x, const LatticePoint& eta)>;

struct ChingParams {
  double d = 0;
  int sigma = 0;
  int theta = 1;
  int jmax = 0;
};

class Symbol {
 public:
  Symbol() = default;
  // Sample a closed form on grid x band.
  Symbol(const TorusGrid& g, double order, EtaBand band, SymbolForm form);
  // Wrap an existing sample array (values[ei * g.points() + xi]).
  Symbol(const TorusGrid& g, double order, EtaBand band, std::vector<cplx> values);

  const TorusGrid& grid() const { return grid_; }
  double order() const { return order_; }
  const EtaBand& band() const { return band_; }
  std::size_t band_points() const;  // number of eta lattice points
  std::size_t x_points() const { return grid_.points(); }

  // eta lattice point of flat band index ei (row-major over the band box).
  LatticePoint eta_at(std::size_t ei) const;
  std::ptrdiff_t band_index(const LatticePoint& eta) const;  // -1 if outside

  const std::vector<cplx>& values() const { return values_; }
  std::vector<cplx>& values() { return values_; }
  const cplx* column(std::size_t ei) const { return values_.data() + ei * x_points(); }
  cplx* column(std::size_t ei) { return values_.data() + ei * x_points(); }
  cplx at(std::size_t xi, const LatticePoint& eta) const;

  bool has_form() const { return static_cast<bool>(form_); }
  cplx form_at(const std::array<double, 2>& x, const LatticePoint& eta) const {
    return form_(x, eta);
  }
  // Analytic d^a/d eta^a evaluators, a = 1..size(); empty if none (n=1 only).
  const std::vector<SymbolForm>& eta_derivs() const { return eta_derivs_; }
  void set_form(SymbolForm f, std::vector<SymbolForm> derivs = {});

  std::optional<double> tdc_B;         // known twisted diagonal constant
  std::optional<ChingParams> ching;    // provenance of Ching-family symbols

 private:
  TorusGrid grid_;
  double order_ = 0;
  EtaBand band_;
  std::vector<cplx> values_;
  SymbolForm form_;
  std::vector<SymbolForm> eta_derivs_;
};

// hat a(xi,eta): xi in FFT bin layout over the full lattice, eta over band.
struct PartialFT {
  TorusGrid grid;
  double order = 0;
  EtaBand band;
  std::vector<cplx> values;  // [ei * grid.points() + xi_bin]

  const cplx* column(std::size_t ei) const { return values.data() + ei * grid.points(); }
  cplx* column(std::size_t ei) { return values.data() + ei * grid.points(); }
  cplx at_freq(const LatticePoint& xi, std::size_t ei) const;
};

PartialFT partial_ft(const Symbol& a);
Symbol inverse_partial_ft(const PartialFT& h);

// Max |xi|_inf with a non-negligible hat a column entry (relative 1e-13).
int x_bandwidth(const PartialFT& h);
int x_bandwidth(const Symbol& a);

// --- constructions ---------------------------------------------------------

// Constant-coefficient symbol a(eta) (multiplier).
Symbol multiplier_symbol(const TorusGrid& g, double order, EtaBand band,
                         std::function<cplx(const LatticePoint&)> m,
                         std::vector<std::function<cplx(double)>> derivs = {});

// Ching symbol sum_{j=0}^{jmax} 2^{jd} e^{-i 2^j x theta} A_sigma(2^-j eta)
// with A_sigma(t) = (t - theta)^sigma bump(|t|), bump = 1 on [7/8,9/8],
// supported in [3/4,5/4].  n = 1, theta = +-1.  Rejects jmax too large for
// the band with a message naming the maximal admissible value.
Symbol ching(double d, int sigma, int theta, int jmax, const TorusGrid& g);
int ching_max_jmax(const TorusGrid& g);

// Scalar profile A_sigma and its derivative (exposed for oracles/tests).
double ching_bump(double t);
cplx ching_A(int sigma, int theta, double t);
cplx ching_A_deriv(int sigma, int theta, double t);

// Fixed-seed random symbol: x-band |xi| <= xband, eta-band as given,
// smooth random multiplier profile per eta; order d.
Symbol random_symbol(const TorusGrid& g, double order, EtaBand band, int xband,
                     std::uint64_t seed);

// --- operations ------------------------------------------------------------

struct SeminormResult {
  double value = 0;
  std::string method;  // "analytic" or "fd4"
};

// p_{alpha,beta}(a) = sup (1+|eta|)^{-(d-|alpha|+|beta|)} |D^a_eta D^b_x a|.
// x-derivatives are spectral (exact on the lattice); eta-derivatives use the
// symbol's analytic evaluators when present, otherwise order-4 central
// differences on the unit lattice (rejecting bands too narrow for the stencil).
SeminormResult seminorm_p(const Symbol& a, const LatticePoint& alpha,
                          const LatticePoint& beta);

// D^order_eta a for n = 1: analytic evaluator when available, otherwise
// order-4 central differences (columns whose stencil leaves the band are
// zeroed).  Order 0 returns a copy.
Symbol eta_derivative(const Symbol& a, int order);

// Generic filter application: hat a(xi,eta) * xf(|xi|) * ef(|eta|).
Symbol filtered(const Symbol& a, const RadialFilter& xf, const RadialFilter& ef);

// Phi(2^-k D_x) a.
Symbol xmod(const Symbol& a, const RadialFilter& profile_at_scale_k);
Symbol xmod(const Symbol& a, const RadialCutoff& psi, int k);
Symbol xmod_corona(const Symbol& a, const RadialCutoff& psi, int k);

// a_{chi,eps}: hat a(xi,eta) * chi(xi+eta, eps*eta), plain integer sums
// (no wrap-around; bands are assumed well inside the lattice).
Symbol twisted_localize(const Symbol& a, const TwistedCutoff& chi, double eps);

struct TwistedDecomposition {
  Symbol head;             // a - a_{chi,1}; satisfies TDC with B = 1
  std::vector<Symbol> e;   // e_{2^-nu} = a_{chi,2^-nu} - a_{chi,2^-nu-1}, nu = 0..
};
TwistedDecomposition twisted_decomposition(const Symbol& a, const TwistedCutoff& chi,
                                           int nu_max);

struct NSeminormResult {
  double value = 0;
  std::vector<std::pair<double, double>> per_R;  // (R, corona value)
  std::string method;
};

// N_{chi,eps,alpha}(a): sup over x and dyadic R <= M/4 of
//   R^{|alpha|-d} ( sum_{R<=|eta|<=2R} |D^alpha_eta a_{chi,eps}(x,eta)|^2 / R^n )^{1/2}.
NSeminormResult n_seminorm(const Symbol& a, const TwistedCutoff& chi, double eps,
                           int alpha);

// Adjoint symbol: hat a*(xi,eta) = conj(hat a(-xi, eta+xi)), alias-free
// inside the stored band (entries needing data outside the band are zero).
// valid_band() is the eta-interval on which the twist used only stored data;
// rejects symbols whose x-bandwidth leaves no valid band.
struct AdjointSymbol {
  Symbol symbol;
  EtaBand valid;  // per-axis interval where the twist was alias-free
};
AdjointSymbol adjoint_symbol(const Symbol& a);

struct TdcReport {
  bool pass = true;
  double max_abs = 0;         // global max |hat a|
  double worst_violation = 0; // largest |hat a| in the forbidden region
  LatticePoint worst_xi{0, 0};
  LatticePoint worst_eta{0, 0};
};
// Pass iff |hat a(xi,eta)| <= tau * max|hat a| whenever B(1+|xi+eta|) < |eta|.
TdcReport tdc_check(const Symbol& a, double B, double tau = 1e-12);

struct SplitSymbols {
  Symbol a1, a2, a3;
  double B1 = 0;  // TDC constant of a1 and a3: (1 - 2R/(r 2^h))^{-1}
};
// Paradifferential splitting a = a1 + a2 + a3 over the truncated lattice.
// Requires 2R < r 2^h.
SplitSymbols split_symbols(const Symbol& a, const RadialCutoff& psi, int h);

// Top dyadic level K with corona phi(2^-K .) meeting the lattice band, plus
// the level at which psi(2^-K .) == 1 on the whole band (saturation).
int band_top_level(const TorusGrid& g, const RadialCutoff& psi);
int saturation_level(const TorusGrid& g, const RadialCutoff& psi);

}  // namespace pdo
