#include "pdo/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pdo {

namespace {
constexpr int kForward = -1;   // FFTW_FORWARD
constexpr int kBackward = +1;  // FFTW_BACKWARD

double eu_norm(const LatticePoint& k) {
  return std::hypot(static_cast<double>(k[0]), static_cast<double>(k[1]));
}

double inv_two_pi_n(const TorusGrid& g) {
  return g.n == 1 ? 1.0 / two_pi : 1.0 / (two_pi * two_pi);
}
}  // namespace

EtaBand full_band(const TorusGrid& g) { return EtaBand{-g.M / 2, g.M / 2 - 1}; }

Symbol::Symbol(const TorusGrid& g, double order, EtaBand band, SymbolForm form)
    : grid_(g), order_(order), band_(band), form_(std::move(form)) {
  if (band_.count1() <= 0) throw std::invalid_argument("Symbol: empty eta band");
  values_.resize(band_points() * x_points());
  const std::size_t X = x_points();
  for (std::size_t ei = 0; ei < band_points(); ++ei) {
    LatticePoint eta = eta_at(ei);
    cplx* col = column(ei);
    for (std::size_t xi = 0; xi < X; ++xi) col[xi] = form_(grid_.node(xi), eta);
  }
}

Symbol::Symbol(const TorusGrid& g, double order, EtaBand band, std::vector<cplx> values)
    : grid_(g), order_(order), band_(band), values_(std::move(values)) {
  if (band_.count1() <= 0) throw std::invalid_argument("Symbol: empty eta band");
  if (values_.size() != band_points() * x_points())
    throw std::invalid_argument("Symbol: sample array does not match grid x band");
}

std::size_t Symbol::band_points() const {
  std::size_t c = band_.count1();
  return grid_.n == 1 ? c : c * c;
}

LatticePoint Symbol::eta_at(std::size_t ei) const {
  int c = band_.count1();
  if (grid_.n == 1) return {band_.lo + static_cast<int>(ei), 0};
  return {band_.lo + static_cast<int>(ei) / c, band_.lo + static_cast<int>(ei) % c};
}

std::ptrdiff_t Symbol::band_index(const LatticePoint& eta) const {
  if (!band_.contains(eta, grid_.n)) return -1;
  int c = band_.count1();
  if (grid_.n == 1) return eta[0] - band_.lo;
  return static_cast<std::ptrdiff_t>(eta[0] - band_.lo) * c + (eta[1] - band_.lo);
}

cplx Symbol::at(std::size_t xi, const LatticePoint& eta) const {
  std::ptrdiff_t ei = band_index(eta);
  if (ei < 0) throw std::out_of_range("Symbol::at: eta outside band");
  return values_[static_cast<std::size_t>(ei) * x_points() + xi];
}

void Symbol::set_form(SymbolForm f, std::vector<SymbolForm> derivs) {
  form_ = std::move(f);
  eta_derivs_ = std::move(derivs);
}

cplx PartialFT::at_freq(const LatticePoint& xi, std::size_t ei) const {
  std::size_t b = grid.flat(grid.bin_of_freq(xi[0]),
                            grid.n == 2 ? grid.bin_of_freq(xi[1]) : 0);
  return column(ei)[b];
}

PartialFT partial_ft(const Symbol& a) {
  PartialFT h{a.grid(), a.order(), a.band(), {}};
  h.values.resize(a.values().size());
  const double w = a.grid().cell();
  for (std::size_t ei = 0; ei < a.band_points(); ++ei) {
    dft(a.grid(), a.column(ei), h.column(ei), kForward);
    cplx* col = h.column(ei);
    for (std::size_t b = 0; b < a.x_points(); ++b) col[b] *= w;
  }
  return h;
}

Symbol inverse_partial_ft(const PartialFT& h) {
  Symbol a(h.grid, h.order, h.band,
           std::vector<cplx>(h.values.size()));
  const double w = inv_two_pi_n(h.grid);
  for (std::size_t ei = 0; ei < h.values.size() / h.grid.points(); ++ei) {
    dft(h.grid, h.column(ei), a.column(ei), kBackward);
    cplx* col = a.column(ei);
    for (std::size_t b = 0; b < h.grid.points(); ++b) col[b] *= w;
  }
  return a;
}

int x_bandwidth(const PartialFT& h) {
  double mx = 0;
  for (const auto& v : h.values) mx = std::max(mx, std::abs(v));
  if (mx == 0) return 0;
  const double thr = 1e-13 * mx;
  int bw = 0;
  const std::size_t X = h.grid.points();
  for (std::size_t ei = 0; ei < h.values.size() / X; ++ei) {
    const cplx* col = h.column(ei);
    for (std::size_t b = 0; b < X; ++b) {
      if (std::abs(col[b]) > thr) {
        LatticePoint xi = h.grid.freq_at(b);
        bw = std::max({bw, std::abs(xi[0]), std::abs(xi[1])});
      }
    }
  }
  return bw;
}

int x_bandwidth(const Symbol& a) { return x_bandwidth(partial_ft(a)); }

// --- constructions ---------------------------------------------------------

Symbol multiplier_symbol(const TorusGrid& g, double order, EtaBand band,
                         std::function<cplx(const LatticePoint&)> m,
                         std::vector<std::function<cplx(double)>> derivs) {
  Symbol a(g, order, band,
           [m](const std::array<double, 2>&, const LatticePoint& eta) { return m(eta); });
  std::vector<SymbolForm> dforms;
  for (auto& d : derivs)
    dforms.push_back([d](const std::array<double, 2>&, const LatticePoint& eta) {
      return d(static_cast<double>(eta[0]));
    });
  a.set_form([m](const std::array<double, 2>&, const LatticePoint& eta) { return m(eta); },
             std::move(dforms));
  return a;
}

namespace {
const RadialProfile& bump_profile() {
  static const RadialProfile p(0.75, 0.875, 1.125, 1.25);
  return p;
}
}  // namespace

double ching_bump(double t) { return bump_profile().at(t); }

cplx ching_A(int sigma, int theta, double t) {
  double b = bump_profile().at(std::fabs(t));
  if (b == 0.0) return 0.0;
  double p = 1.0;
  for (int i = 0; i < sigma; ++i) p *= (t - theta);
  return p * b;
}

cplx ching_A_deriv(int sigma, int theta, double t) {
  double ab = std::fabs(t);
  double b = bump_profile().at(ab);
  double db = bump_profile().deriv(ab) * (t >= 0 ? 1.0 : -1.0);
  double p = 1.0;
  for (int i = 0; i < sigma; ++i) p *= (t - theta);
  double pm1 = 1.0;
  for (int i = 0; i + 1 < sigma; ++i) pm1 *= (t - theta);
  return (sigma > 0 ? sigma * pm1 * b : 0.0) + p * db;
}

int ching_max_jmax(const TorusGrid& g) {
  int j = 0;
  while (1.25 * std::ldexp(1.0, j + 1) <= g.M / 2 - 1) ++j;
  return j;
}

Symbol ching(double d, int sigma, int theta, int jmax, const TorusGrid& g) {
  if (g.n != 1) throw std::invalid_argument("ching: n = 1 only");
  if (theta != 1 && theta != -1)
    throw std::invalid_argument("ching: theta must be a unit lattice direction (+-1)");
  if (sigma < 0) throw std::invalid_argument("ching: sigma must be a nonnegative integer");
  if (1.25 * std::ldexp(1.0, jmax) > g.M / 2 - 1)
    throw std::invalid_argument("ching: jmax too large for the band; maximal admissible jmax = " +
                                std::to_string(ching_max_jmax(g)));

  EtaBand band = full_band(g);
  std::vector<cplx> values(static_cast<std::size_t>(band.count1()) * g.points());
  // Per level j: phase column e^{-i 2^j theta x} over the grid.
  std::vector<std::vector<cplx>> phases(jmax + 1);
  for (int j = 0; j <= jmax; ++j) {
    phases[j].resize(g.points());
    double f = -std::ldexp(1.0, j) * theta;
    for (std::size_t m = 0; m < g.points(); ++m) {
      double x = g.node(m)[0];
      phases[j][m] = std::polar(1.0, f * x);
    }
  }
  const std::size_t X = g.points();
  for (int eta = band.lo; eta <= band.hi; ++eta) {
    std::size_t ei = static_cast<std::size_t>(eta - band.lo);
    cplx* col = values.data() + ei * X;
    // Dyadic coronas are disjoint: at most one level contributes per eta.
    for (int j = 0; j <= jmax; ++j) {
      double t = std::ldexp(static_cast<double>(eta), -j);
      if (std::fabs(t) < 0.75 || std::fabs(t) > 1.25) continue;
      cplx amp = std::pow(2.0, j * d) * ching_A(sigma, theta, t);
      if (amp == cplx(0.0)) continue;
      for (std::size_t m = 0; m < X; ++m) col[m] += amp * phases[j][m];
    }
  }
  Symbol a(g, d, band, std::move(values));
  a.ching = ChingParams{d, sigma, theta, jmax};
  SymbolForm form = [d, sigma, theta, jmax](const std::array<double, 2>& x,
                                            const LatticePoint& eta) {
    cplx acc = 0;
    for (int j = 0; j <= jmax; ++j) {
      double t = std::ldexp(static_cast<double>(eta[0]), -j);
      cplx A = ching_A(sigma, theta, t);
      if (A == cplx(0.0)) continue;
      acc += std::pow(2.0, j * d) * std::polar(1.0, -std::ldexp(1.0, j) * theta * x[0]) * A;
    }
    return acc;
  };
  SymbolForm deriv1 = [d, sigma, theta, jmax](const std::array<double, 2>& x,
                                              const LatticePoint& eta) {
    cplx acc = 0;
    for (int j = 0; j <= jmax; ++j) {
      double t = std::ldexp(static_cast<double>(eta[0]), -j);
      cplx dA = ching_A_deriv(sigma, theta, t);
      if (dA == cplx(0.0)) continue;
      acc += std::pow(2.0, j * d) * std::ldexp(1.0, -j) *
             std::polar(1.0, -std::ldexp(1.0, j) * theta * x[0]) * dA;
    }
    return acc;
  };
  a.set_form(form, {deriv1});
  return a;
}

Symbol random_symbol(const TorusGrid& g, double order, EtaBand band, int xband,
                     std::uint64_t seed) {
  if (xband < 0 || xband >= g.M / 2)
    throw std::invalid_argument("random_symbol: xband out of lattice");
  Rng rng(seed);
  PartialFT h{g, order, band, {}};
  std::size_t cnt = (g.n == 1) ? band.count1()
                               : static_cast<std::size_t>(band.count1()) * band.count1();
  h.values.assign(cnt * g.points(), cplx(0.0));
  for (std::size_t ei = 0; ei < cnt; ++ei) {
    LatticePoint eta = (g.n == 1)
                           ? LatticePoint{band.lo + static_cast<int>(ei), 0}
                           : LatticePoint{band.lo + static_cast<int>(ei) / band.count1(),
                                          band.lo + static_cast<int>(ei) % band.count1()};
    double w = std::pow(1.0 + eu_norm(eta) * eu_norm(eta), order / 2.0);
    cplx* col = h.column(ei);
    if (g.n == 1) {
      for (int xi = -xband; xi <= xband; ++xi)
        col[g.bin_of_freq(xi)] = w * rng.normal_cplx();
    } else {
      for (int x0 = -xband; x0 <= xband; ++x0)
        for (int x1 = -xband; x1 <= xband; ++x1)
          col[g.flat(g.bin_of_freq(x0), g.bin_of_freq(x1))] = w * rng.normal_cplx();
    }
  }
  return inverse_partial_ft(h);
}

// --- seminorms --------------------------------------------------------------

namespace {

// Order-4 central difference stencils on the unit lattice, orders 1..4.
struct Stencil {
  int radius;
  std::array<double, 7> w;  // offsets -radius..radius
};

const Stencil& stencil(int order) {
  static const Stencil s1{2, {0, 1.0 / 12, -8.0 / 12, 0, 8.0 / 12, -1.0 / 12, 0}};
  static const Stencil s2{2, {0, -1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12, 0}};
  static const Stencil s3{3, {1.0 / 8, -8.0 / 8, 13.0 / 8, 0, -13.0 / 8, 8.0 / 8, -1.0 / 8}};
  static const Stencil s4{3, {-1.0 / 6, 12.0 / 6, -39.0 / 6, 56.0 / 6, -39.0 / 6, 12.0 / 6, -1.0 / 6}};
  switch (order) {
    case 1: return s1;
    case 2: return s2;
    case 3: return s3;
    case 4: return s4;
    default: throw std::invalid_argument("difference stencil: order 1..4 only");
  }
}

}  // namespace

SeminormResult seminorm_p(const Symbol& a, const LatticePoint& alpha,
                          const LatticePoint& beta) {
  const TorusGrid& g = a.grid();
  int atot = alpha[0] + (g.n == 2 ? alpha[1] : 0);
  int btot = beta[0] + (g.n == 2 ? beta[1] : 0);
  if (alpha[0] < 0 || alpha[1] < 0 || beta[0] < 0 || beta[1] < 0)
    throw std::invalid_argument("seminorm_p: negative multi-index");

  // Step 1: eta-derivative of the symbol.
  bool analytic = (g.n == 1) && atot <= static_cast<int>(a.eta_derivs().size()) && a.has_form();
  Symbol da = a;
  std::string method = "analytic";
  if (atot > 0) {
    if (analytic) {
      da = Symbol(g, a.order(), a.band(), a.eta_derivs()[atot - 1]);
    } else {
      method = "fd4";
      // Per-axis composition of central differences.
      std::vector<cplx> cur = a.values();
      auto apply_axis = [&](int axis, int order) {
        const Stencil& st = stencil(order);
        int c = a.band().count1();
        if (c < 2 * st.radius + 1)
          throw std::invalid_argument("seminorm_p: eta band too narrow for the stencil");
        std::vector<cplx> next(cur.size(), cplx(0.0));
        const std::size_t X = g.points();
        std::size_t cnt = a.band_points();
        for (std::size_t ei = 0; ei < cnt; ++ei) {
          int i0 = (g.n == 1) ? static_cast<int>(ei) : static_cast<int>(ei) / c;
          int i1 = (g.n == 1) ? 0 : static_cast<int>(ei) % c;
          int idx = axis == 0 ? i0 : i1;
          if (idx - st.radius < 0 || idx + st.radius >= c) continue;  // edge: left zero
          cplx* out = next.data() + ei * X;
          for (int o = -st.radius; o <= st.radius; ++o) {
            double w = st.w[o + 3];
            if (w == 0) continue;
            std::size_t src = (axis == 0)
                                  ? (static_cast<std::size_t>(i0 + o) * (g.n == 1 ? 1 : c) + i1) * X
                                  : (static_cast<std::size_t>(i0) * c + (i1 + o)) * X;
            if (g.n == 1) src = static_cast<std::size_t>(idx + o) * X;
            const cplx* in = cur.data() + src;
            for (std::size_t m = 0; m < X; ++m) out[m] += w * in[m];
          }
        }
        cur = std::move(next);
      };
      if (alpha[0] > 0) apply_axis(0, alpha[0]);
      if (g.n == 2 && alpha[1] > 0) apply_axis(1, alpha[1]);
      da = Symbol(g, a.order(), a.band(), std::move(cur));
    }
  }

  // Step 2: spectral x-derivative D^beta_x (multiply hat by xi^beta).
  if (btot > 0) {
    PartialFT h = partial_ft(da);
    const std::size_t X = g.points();
    for (std::size_t ei = 0; ei < da.band_points(); ++ei) {
      cplx* col = h.column(ei);
      for (std::size_t b = 0; b < X; ++b) {
        LatticePoint xi = g.freq_at(b);
        double w = 1;
        for (int i = 0; i < beta[0]; ++i) w *= xi[0];
        if (g.n == 2)
          for (int i = 0; i < beta[1]; ++i) w *= xi[1];
        col[b] *= w;
      }
    }
    da = inverse_partial_ft(h);
  }

  // Step 3: weighted sup.  Edge eta columns skipped by the stencil stay zero,
  // which cannot raise the sup.
  double expo = -(a.order() - atot + btot);
  double best = 0;
  const std::size_t X = g.points();
  for (std::size_t ei = 0; ei < da.band_points(); ++ei) {
    LatticePoint eta = da.eta_at(ei);
    double w = std::pow(1.0 + eu_norm(eta), expo);
    const cplx* col = da.column(ei);
    double colmax = 0;
    for (std::size_t m = 0; m < X; ++m) colmax = std::max(colmax, std::abs(col[m]));
    best = std::max(best, w * colmax);
  }
  return SeminormResult{best, atot == 0 ? "exact" : method};
}

Symbol eta_derivative(const Symbol& a, int order) {
  if (order == 0) return a;
  const TorusGrid& g = a.grid();
  if (g.n != 1) throw std::invalid_argument("eta_derivative: n = 1 only");
  if (order <= static_cast<int>(a.eta_derivs().size()) && a.has_form())
    return Symbol(g, a.order(), a.band(), a.eta_derivs()[order - 1]);
  const Stencil& st = stencil(order);
  int c = a.band().count1();
  if (c < 2 * st.radius + 1)
    throw std::invalid_argument("eta_derivative: eta band too narrow for the stencil");
  const std::size_t X = g.points();
  std::vector<cplx> out(a.values().size(), cplx(0.0));
  for (int i = 0; i < c; ++i) {
    if (i - st.radius < 0 || i + st.radius >= c) continue;
    cplx* dst = out.data() + static_cast<std::size_t>(i) * X;
    for (int o = -st.radius; o <= st.radius; ++o) {
      double w = st.w[o + 3];
      if (w == 0) continue;
      const cplx* src = a.values().data() + static_cast<std::size_t>(i + o) * X;
      for (std::size_t m = 0; m < X; ++m) dst[m] += w * src[m];
    }
  }
  return Symbol(g, a.order(), a.band(), std::move(out));
}

// --- filters ----------------------------------------------------------------

Symbol filtered(const Symbol& a, const RadialFilter& xf, const RadialFilter& ef) {
  PartialFT h = partial_ft(a);
  const TorusGrid& g = a.grid();
  const std::size_t X = g.points();
  // n = 1: cache the x-filter over integer radii.
  std::vector<double> xtab;
  if (xf && g.n == 1) {
    xtab.resize(g.M / 2 + 1);
    for (int t = 0; t <= g.M / 2; ++t) xtab[t] = xf(t);
  }
  for (std::size_t ei = 0; ei < a.band_points(); ++ei) {
    double ew = 1.0;
    if (ef) ew = ef(eu_norm(a.eta_at(ei)));
    cplx* col = h.column(ei);
    if (ew == 0.0) {
      std::fill(col, col + X, cplx(0.0));
      continue;
    }
    for (std::size_t b = 0; b < X; ++b) {
      double xw = 1.0;
      if (xf) {
        if (g.n == 1)
          xw = xtab[std::abs(g.freq_of_bin(static_cast<int>(b)))];
        else
          xw = xf(eu_norm(g.freq_at(b)));
      }
      col[b] *= xw * ew;
    }
  }
  Symbol out = inverse_partial_ft(h);
  out.tdc_B = a.tdc_B;  // radial filters only shrink the support
  return out;
}

Symbol xmod(const Symbol& a, const RadialFilter& profile) {
  return filtered(a, profile, {});
}

Symbol xmod(const Symbol& a, const RadialCutoff& psi, int k) {
  return filtered(a, dilated(psi, k), {});
}

Symbol xmod_corona(const Symbol& a, const RadialCutoff& psi, int k) {
  return filtered(a, corona_dilated(psi, k), {});
}

// --- twisted diagonal machinery ---------------------------------------------

Symbol twisted_localize(const Symbol& a, const TwistedCutoff& chi, double eps) {
  if (!(eps > 0.0 && eps <= 1.0))
    throw std::invalid_argument("twisted_localize: eps in (0,1]");
  PartialFT h = partial_ft(a);
  const TorusGrid& g = a.grid();
  const std::size_t X = g.points();
  for (std::size_t ei = 0; ei < a.band_points(); ++ei) {
    LatticePoint eta = a.eta_at(ei);
    double ae = eu_norm(eta);
    cplx* col = h.column(ei);
    for (std::size_t b = 0; b < X; ++b) {
      LatticePoint xi = g.freq_at(b);
      LatticePoint z{xi[0] + eta[0], xi[1] + eta[1]};
      col[b] *= chi.at(eu_norm(z), eps * ae);
    }
  }
  return inverse_partial_ft(h);
}

TwistedDecomposition twisted_decomposition(const Symbol& a, const TwistedCutoff& chi,
                                           int nu_max) {
  if (nu_max < 0) throw std::invalid_argument("twisted_decomposition: nu_max >= 0");
  TwistedDecomposition out;
  Symbol prev = twisted_localize(a, chi, 1.0);
  {
    std::vector<cplx> v(a.values().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] - prev.values()[i];
    out.head = Symbol(a.grid(), a.order(), a.band(), std::move(v));
    out.head.tdc_B = 1.0;
  }
  for (int nu = 0; nu <= nu_max; ++nu) {
    Symbol next = twisted_localize(a, chi, std::ldexp(1.0, -nu - 1));
    std::vector<cplx> v(a.values().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = prev.values()[i] - next.values()[i];
    Symbol e(a.grid(), a.order(), a.band(), std::move(v));
    e.tdc_B = std::ldexp(1.0, nu + 2);  // e_eps fulfils the TDC for B = 4/eps
    out.e.push_back(std::move(e));
    prev = std::move(next);
  }
  return out;
}

namespace {

// D^alpha_eta a_{chi,eps} sampled on grid x band; valid[ei] marks eta columns
// whose stencil stayed inside the band.
struct LocalizedDeriv {
  std::vector<cplx> values;
  std::vector<char> valid;
  std::string method;
};

LocalizedDeriv localized_eta_deriv(const Symbol& a, const TwistedCutoff& chi, double eps,
                                   int alpha) {
  const TorusGrid& g = a.grid();
  const std::size_t X = g.points();
  LocalizedDeriv out;
  out.valid.assign(a.band_points(), 1);
  if (alpha == 0) {
    out.values = twisted_localize(a, chi, eps).values();
    out.method = "exact";
    return out;
  }
  if (g.n != 1)
    throw std::invalid_argument("n_seminorm: eta-derivatives implemented for n = 1");
  if (alpha == 1 && !a.eta_derivs().empty()) {
    // Product rule on the partial-FT side with analytic chi partials:
    // D_eta[hat a * chi(xi+eta, eps eta)] =
    //   hat(D_eta a) * chi + hat a * (chi_1 + eps chi_2)(xi+eta, eps eta).
    Symbol da(g, a.order(), a.band(), a.eta_derivs()[0]);
    PartialFT h = partial_ft(a);
    PartialFT hd = partial_ft(da);
    for (std::size_t ei = 0; ei < a.band_points(); ++ei) {
      double eta = static_cast<double>(a.eta_at(ei)[0]);
      cplx* c = h.column(ei);
      cplx* cd = hd.column(ei);
      for (std::size_t b = 0; b < X; ++b) {
        double z = g.freq_of_bin(static_cast<int>(b)) + eta;
        double w = eps * eta;
        double chi_v = chi.at(std::fabs(z), std::fabs(w));
        double dchi = chi.d_xi(z, w) + eps * chi.d_eta(z, w);
        cd[b] = cd[b] * chi_v + c[b] * dchi;
      }
    }
    out.values = inverse_partial_ft(hd).values();
    out.method = "analytic";
    return out;
  }
  // Order-4 central differences of the localized symbol on the unit lattice.
  Symbol loc = twisted_localize(a, chi, eps);
  const Stencil& st = stencil(alpha);
  int c = a.band().count1();
  if (c < 2 * st.radius + 1)
    throw std::invalid_argument("n_seminorm: eta band too narrow for the stencil");
  out.values.assign(loc.values().size(), cplx(0.0));
  for (int i = 0; i < c; ++i) {
    if (i - st.radius < 0 || i + st.radius >= c) {
      out.valid[i] = 0;
      continue;
    }
    cplx* dst = out.values.data() + static_cast<std::size_t>(i) * X;
    for (int o = -st.radius; o <= st.radius; ++o) {
      double w = st.w[o + 3];
      if (w == 0) continue;
      const cplx* src = loc.values().data() + static_cast<std::size_t>(i + o) * X;
      for (std::size_t m = 0; m < X; ++m) dst[m] += w * src[m];
    }
  }
  out.method = "fd4";
  return out;
}

}  // namespace

NSeminormResult n_seminorm(const Symbol& a, const TwistedCutoff& chi, double eps,
                           int alpha) {
  const TorusGrid& g = a.grid();
  LocalizedDeriv d = localized_eta_deriv(a, chi, eps, alpha);
  NSeminormResult res;
  res.method = d.method;
  const std::size_t X = g.points();
  for (int R = 1; R <= g.M / 4; R *= 2) {
    std::vector<double> acc(X, 0.0);
    bool any = false;
    for (std::size_t ei = 0; ei < a.band_points(); ++ei) {
      if (!d.valid[ei]) continue;
      double ae = eu_norm(a.eta_at(ei));
      if (ae < R || ae > 2.0 * R) continue;
      any = true;
      const cplx* col = d.values.data() + ei * X;
      for (std::size_t m = 0; m < X; ++m) acc[m] += std::norm(col[m]);
    }
    if (!any) continue;  // empty corona: skip this R
    double mx = *std::max_element(acc.begin(), acc.end());
    double rn = (g.n == 1) ? R : static_cast<double>(R) * R;
    double val = std::pow(R, alpha - a.order()) * std::sqrt(mx / rn);
    res.per_R.emplace_back(static_cast<double>(R), val);
    res.value = std::max(res.value, val);
  }
  return res;
}

AdjointSymbol adjoint_symbol(const Symbol& a) {
  const TorusGrid& g = a.grid();
  PartialFT h = partial_ft(a);
  int X = x_bandwidth(h);
  EtaBand valid{a.band().lo + X, a.band().hi - X};
  if (valid.count1() <= 0)
    throw std::invalid_argument(
        "adjoint_symbol: insufficient eta headroom; need band padding >= " +
        std::to_string(X) + " on each side");
  PartialFT hb{g, a.order(), a.band(), {}};
  hb.values.assign(h.values.size(), cplx(0.0));
  const std::size_t Xp = g.points();
  for (std::size_t ei = 0; ei < a.band_points(); ++ei) {
    LatticePoint eta = a.eta_at(ei);
    cplx* col = hb.column(ei);
    for (std::size_t b = 0; b < Xp; ++b) {
      LatticePoint xi = g.freq_at(b);
      LatticePoint target{eta[0] + xi[0], eta[1] + xi[1]};
      if (!a.band().contains(target, g.n)) continue;  // alias-free: zero outside
      std::ptrdiff_t ti = a.band_index(target);
      std::size_t nb = g.flat(g.bin_of_freq(-xi[0]), g.n == 2 ? g.bin_of_freq(-xi[1]) : 0);
      col[b] = std::conj(h.column(ti)[nb]);
    }
  }
  AdjointSymbol out{inverse_partial_ft(hb), valid};
  return out;
}

TdcReport tdc_check(const Symbol& a, double B, double tau) {
  if (B < 1.0) throw std::invalid_argument("tdc_check: B >= 1 required");
  PartialFT h = partial_ft(a);
  const TorusGrid& g = a.grid();
  TdcReport rep;
  for (const auto& v : h.values) rep.max_abs = std::max(rep.max_abs, std::abs(v));
  const std::size_t X = g.points();
  double worst_depth = 0;  // |eta| / (1+|xi+eta|): magnitude ties broken by cone depth
  for (std::size_t ei = 0; ei < a.band_points(); ++ei) {
    LatticePoint eta = a.eta_at(ei);
    double ae = eu_norm(eta);
    const cplx* col = h.column(ei);
    for (std::size_t b = 0; b < X; ++b) {
      LatticePoint xi = g.freq_at(b);
      LatticePoint z{xi[0] + eta[0], xi[1] + eta[1]};
      if (B * (1.0 + eu_norm(z)) >= ae) continue;
      double m = std::abs(col[b]);
      double depth = ae / (1.0 + eu_norm(z));
      if (m > rep.worst_violation * (1.0 + 1e-12) ||
          (m > rep.worst_violation * (1.0 - 1e-12) && depth > worst_depth)) {
        rep.worst_violation = std::max(m, rep.worst_violation);
        worst_depth = depth;
        rep.worst_xi = xi;
        rep.worst_eta = eta;
      }
    }
  }
  rep.pass = rep.worst_violation <= tau * rep.max_abs;
  return rep;
}

int band_top_level(const TorusGrid& g, const RadialCutoff& psi) {
  double T = (g.M / 2.0) * std::sqrt(static_cast<double>(g.n));
  return static_cast<int>(std::floor(1.0 + std::log2(T / psi.r())));
}

int saturation_level(const TorusGrid& g, const RadialCutoff& psi) {
  double T = (g.M / 2.0) * std::sqrt(static_cast<double>(g.n));
  return static_cast<int>(std::ceil(std::log2(T / psi.r())));
}

SplitSymbols split_symbols(const Symbol& a, const RadialCutoff& psi, int h) {
  const double r = psi.r(), R = psi.R();
  if (!(2.0 * R < r * std::ldexp(1.0, h)))
    throw std::invalid_argument("split_symbols: need 2R < r 2^h");
  const TorusGrid& g = a.grid();
  const int Ktop = saturation_level(g, psi);
  PartialFT ha = partial_ft(a);

  // Per-level radial tables over integer radii (n = 1 fast path).
  std::vector<std::vector<double>> psi_tab, phi_tab;
  if (g.n == 1) {
    psi_tab.assign(Ktop + 1, std::vector<double>(g.M / 2 + 1));
    phi_tab.assign(Ktop + 1, std::vector<double>(g.M / 2 + 1));
    for (int k = 0; k <= Ktop; ++k)
      for (int t = 0; t <= g.M / 2; ++t) {
        psi_tab[k][t] = psi.at(std::ldexp(static_cast<double>(t), -k));
        phi_tab[k][t] = corona_at(psi, std::ldexp(static_cast<double>(t), -k));
      }
  }
  auto psi_at_level = [&](int k, double t) {
    if (!psi_tab.empty()) return psi_tab[k][static_cast<int>(t)];
    return psi.at(std::ldexp(t, -k));
  };
  auto phi_at_level = [&](int k, double t) {
    if (!phi_tab.empty()) return phi_tab[k][static_cast<int>(t)];
    return corona_at(psi, std::ldexp(t, -k));
  };

  auto weights = [&](double axi, double aeta) {
    double w1 = 0, w2 = 0, w3 = 0;
    for (int k = h; k <= Ktop; ++k) {
      w1 += psi_at_level(k - h, axi) * phi_at_level(k, aeta);
      w3 += phi_at_level(k, axi) * psi_at_level(k - h, aeta);
    }
    w2 += psi.at(axi) * psi.at(aeta);  // k = 0 term: a^0 psi(eta)
    for (int k = 1; k <= Ktop; ++k) {
      double t1 = psi_at_level(k, axi) - (k >= h ? psi_at_level(k - h, axi) : 0.0);
      double t2 = psi_at_level(k - 1, aeta) - (k >= h ? psi_at_level(k - h, aeta) : 0.0);
      w2 += t1 * phi_at_level(k, aeta) + phi_at_level(k, axi) * t2;
    }
    return std::array<double, 3>{w1, w2, w3};
  };

  PartialFT h1 = ha, h2 = ha, h3 = ha;
  const std::size_t X = g.points();
  if (g.n == 1) {
    // Tabulate weights over the (|xi|, |eta|) radius pair lazily per |eta|.
    std::vector<std::array<double, 3>> wtab(g.M / 2 + 1);
    for (std::size_t ei = 0; ei < a.band_points(); ++ei) {
      double aeta = std::fabs(static_cast<double>(a.eta_at(ei)[0]));
      for (int t = 0; t <= g.M / 2; ++t) wtab[t] = weights(t, aeta);
      cplx *c1 = h1.column(ei), *c2 = h2.column(ei), *c3 = h3.column(ei);
      const cplx* c0 = ha.column(ei);
      for (std::size_t b = 0; b < X; ++b) {
        int axi = std::abs(g.freq_of_bin(static_cast<int>(b)));
        c1[b] = c0[b] * wtab[axi][0];
        c2[b] = c0[b] * wtab[axi][1];
        c3[b] = c0[b] * wtab[axi][2];
      }
    }
  } else {
    for (std::size_t ei = 0; ei < a.band_points(); ++ei) {
      double aeta = eu_norm(a.eta_at(ei));
      cplx *c1 = h1.column(ei), *c2 = h2.column(ei), *c3 = h3.column(ei);
      const cplx* c0 = ha.column(ei);
      for (std::size_t b = 0; b < X; ++b) {
        auto w = weights(eu_norm(g.freq_at(b)), aeta);
        c1[b] = c0[b] * w[0];
        c2[b] = c0[b] * w[1];
        c3[b] = c0[b] * w[2];
      }
    }
  }
  SplitSymbols out{inverse_partial_ft(h1), inverse_partial_ft(h2), inverse_partial_ft(h3),
                   1.0 / (1.0 - 2.0 * R / (r * std::ldexp(1.0, h)))};
  out.a1.tdc_B = out.B1;
  out.a3.tdc_B = out.B1;
  return out;
}

}  // namespace pdo
