#include "pdo/paradiff.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "pdo/fitting.hpp"

namespace pdo {

namespace {

double eu_norm(const LatticePoint& k) {
  return std::hypot(static_cast<double>(k[0]), static_cast<double>(k[1]));
}

GridFunction band_filter(const GridFunction& u, const RadialFilter& f) {
  Spectrum s = transform(u);
  for (std::size_t b = 0; b < s.coef.size(); ++b) s.coef[b] *= f(eu_norm(s.grid.freq_at(b)));
  return inverse(s);
}

// Support radius window of a grid function's spectrum; (-1,-1) if empty.
std::pair<double, double> support_radii(const GridFunction& f, double tau) {
  SupportSet s = support_of(transform(f), tau);
  if (s.points.empty()) return {-1.0, -1.0};
  double lo = 1e300, hi = 0;
  for (const auto& p : s.points) {
    double r = eu_norm(p);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi};
}

void accumulate(GridFunction& acc, const GridFunction& t) {
  for (std::size_t i = 0; i < acc.values.size(); ++i) acc.values[i] += t.values[i];
}

}  // namespace

LPDecomposition lp_pieces(const GridFunction& u, const RadialCutoff& psi, int J) {
  if (J < 0) throw std::invalid_argument("lp_pieces: J >= 0");
  LPDecomposition d;
  d.pieces.reserve(J + 1);
  d.cumulative.reserve(J + 1);
  for (int j = 0; j <= J; ++j) {
    RadialFilter fj = (j == 0) ? dilated(psi, 0) : corona_dilated(psi, j);
    d.pieces.push_back(band_filter(u, fj));
    d.cumulative.push_back(band_filter(u, dilated(psi, j)));
  }
  return d;
}

SymbolPieces symbol_pieces(const Symbol& a, const RadialCutoff& psi, int J) {
  if (J < 0) throw std::invalid_argument("symbol_pieces: J >= 0");
  SymbolPieces p;
  for (int j = 0; j <= J; ++j) {
    p.corona.push_back(j == 0 ? xmod(a, psi, 0) : xmod_corona(a, psi, j));
    p.low.push_back(xmod(a, psi, j));
  }
  return p;
}

GridFunction series_term(const Symbol& a, const GridFunction& u, const RadialCutoff& psi,
                         int h, int series, int k) {
  auto psi_lv = [&psi](int lv) {
    return RadialFilter([&psi, lv](double t) { return psi.at(std::ldexp(t, -lv)); });
  };
  auto phi_lv = [&psi](int lv) {
    return RadialFilter([&psi, lv](double t) { return corona_at(psi, std::ldexp(t, -lv)); });
  };
  switch (series) {
    case 1: {
      if (k < h) return GridFunction(a.grid());  // a^{k-h} = 0 for k < h
      return quantize(filtered(a, psi_lv(k - h), phi_lv(k)), u);
    }
    case 2: {
      GridFunction out(a.grid());
      // (a^k - a^{k-h})(x,D) u_k
      RadialFilter xf1 = [&psi, k, h](double t) {
        double v = psi.at(std::ldexp(t, -k));
        if (k >= h) v -= psi.at(std::ldexp(t, -(k - h)));
        return v;
      };
      RadialFilter ef1 = (k == 0) ? dilated(psi, 0) : corona_dilated(psi, k);
      accumulate(out, quantize(filtered(a, xf1, ef1), u));
      // a_k(x,D)(u^{k-1} - u^{k-h})
      if (k >= 1) {
        RadialFilter xf2 = corona_dilated(psi, k);
        RadialFilter ef2 = [&psi, k, h](double t) {
          double v = psi.at(std::ldexp(t, -(k - 1)));
          if (k >= h) v -= psi.at(std::ldexp(t, -(k - h)));
          return v;
        };
        accumulate(out, quantize(filtered(a, xf2, ef2), u));
      }
      return out;
    }
    case 3: {
      if (k < h) return GridFunction(a.grid());  // u^{k-h} = 0 for k < h
      return quantize(filtered(a, phi_lv(k), psi_lv(k - h)), u);
    }
    default:
      throw std::invalid_argument("series_term: series must be 1, 2 or 3");
  }
}

std::array<SeriesDiagnostics, 3> series_terms(const Symbol& a, const GridFunction& u,
                                              const RadialCutoff& psi, int h, int K) {
  if (!(2.0 * psi.R() < psi.r() * std::ldexp(1.0, h)))
    throw std::invalid_argument("series_terms: need 2R < r 2^h");
  std::array<SeriesDiagnostics, 3> out;
  for (int s = 1; s <= 3; ++s) {
    SeriesDiagnostics& d = out[s - 1];
    d.total = GridFunction(a.grid());
    std::vector<double> ks, sups;
    for (int k = 0; k <= K; ++k) {
      GridFunction t = series_term(a, u, psi, h, s, k);
      SeriesTerm row;
      row.k = k;
      row.sup = sup_norm(t);
      row.l2 = l2_norm(t);
      auto [lo, hi] = support_radii(t, 1e-10);
      row.supp_min = lo;
      row.supp_max = hi;
      d.terms.push_back(row);
      accumulate(d.total, t);
      if (row.sup > 0) d.all_terms_null = false;
      ks.push_back(k);
      sups.push_back(row.sup);
    }
    if (!d.all_terms_null) {
      try {
        d.growth_exponent = fit_log2(ks, sups).slope;
      } catch (const std::invalid_argument&) {
        d.growth_exponent = 0;  // a single nonzero term: no fit
      }
    }
  }
  return out;
}

SupportCheckReport support_checks(const Symbol& a, const GridFunction& u,
                                  const RadialCutoff& psi, int h,
                                  std::optional<double> B, double tau) {
  const double r = psi.r(), R = psi.R();
  SupportCheckReport rep;
  rep.R_h = r / 2.0 - R * std::ldexp(1.0, -h);
  if (rep.R_h <= 0) throw std::invalid_argument("support_checks: need 2R < r 2^h");
  const int K = band_top_level(a.grid(), psi);
  for (int s = 1; s <= 3; ++s) {
    for (int k = 0; k <= K; ++k) {
      if ((s == 1 || s == 3) && k < h) continue;
      GridFunction t = series_term(a, u, psi, h, s, k);
      auto [lo, hi] = support_radii(t, tau);
      SupportVerdict v;
      v.series = s;
      v.k = k;
      v.supp_min = lo;
      v.supp_max = hi;
      double p2k = std::ldexp(1.0, k);
      if (s == 2) {
        v.lo = 0.0;
        if (B && k >= h + 1 + std::log2(*B / r)) v.lo = r * p2k / (std::ldexp(2.0, h) * *B);
        v.hi = 2.0 * R * p2k;
      } else {
        v.lo = rep.R_h * p2k;
        v.hi = 1.25 * R * p2k;
      }
      v.pass = (lo < 0) || (lo >= v.lo && hi <= v.hi);
      rep.all_pass = rep.all_pass && v.pass;
      rep.verdicts.push_back(v);
    }
  }
  return rep;
}

SpectralSupportReport spectral_support_check(const Symbol& a, const GridFunction& u,
                                             double tau) {
  const TorusGrid& g = a.grid();
  PartialFT h = partial_ft(a);
  Spectrum su = transform(u);

  double amax = 0;
  for (const auto& v : h.values) amax = std::max(amax, std::abs(v));
  double umax = 0;
  for (const auto& c : su.coef) umax = std::max(umax, std::abs(c));

  std::vector<char> u_supp(g.points(), 0);
  for (std::size_t b = 0; b < su.coef.size(); ++b)
    if (std::abs(su.coef[b]) > tau * umax) u_supp[b] = 1;

  std::vector<char> xi_allowed(g.points(), 0);
  const std::size_t X = g.points();
  for (std::size_t ei = 0; ei < a.band_points(); ++ei) {
    LatticePoint eta = a.eta_at(ei);
    std::size_t ub = g.flat(g.bin_of_freq(eta[0]), g.n == 2 ? g.bin_of_freq(eta[1]) : 0);
    if (!u_supp[ub]) continue;
    const cplx* col = h.column(ei);
    for (std::size_t b = 0; b < X; ++b) {
      if (std::abs(col[b]) <= tau * amax) continue;
      LatticePoint xi = g.freq_at(b);
      std::size_t ob = g.flat(g.bin_of_freq(xi[0] + eta[0]),
                              g.n == 2 ? g.bin_of_freq(xi[1] + eta[1]) : 0);
      xi_allowed[ob] = 1;
    }
  }

  SpectralSupportReport rep;
  for (std::size_t b = 0; b < X; ++b)
    if (xi_allowed[b]) rep.xi_set.push_back(g.freq_at(b));
  std::sort(rep.xi_set.begin(), rep.xi_set.end());

  SupportSet out = support_of(transform(quantize(a, u)), tau);
  for (const auto& p : out.points) {
    std::size_t ob = g.flat(g.bin_of_freq(p[0]), g.n == 2 ? g.bin_of_freq(p[1]) : 0);
    if (!xi_allowed[ob]) rep.violations.push_back(p);
  }
  rep.verdict = rep.violations.empty();
  return rep;
}

CoronaCriterionReport corona_criterion(const std::vector<GridFunction>& u_list, double A,
                                       double theta0, double theta1, double C, double N,
                                       const GridFunction& phi_test) {
  if (!(A > 1.0) || !(theta0 > 0) || !(theta1 >= theta0))
    throw std::invalid_argument("corona_criterion: need A > 1, theta1 >= theta0 > 0");
  CoronaCriterionReport rep;
  std::vector<double> js;
  for (std::size_t j = 0; j < u_list.size(); ++j) {
    const GridFunction& uj = u_list[j];
    auto [lo, hi] = support_radii(uj, 1e-10);
    if (lo >= 0) {
      if (j == 0) {
        if (hi > A) rep.dac_ok = false;
      } else {
        double jlo = std::pow(2.0, static_cast<double>(j) * theta0) / A;
        double jhi = A * std::pow(2.0, static_cast<double>(j) * theta1);
        if (lo < jlo || hi > jhi) rep.dac_ok = false;
      }
    }
    // |u_j(x)| <= C 2^{j N theta1} (1+|x|)^N with torus distance from 0.
    double bound_scale = C * std::pow(2.0, static_cast<double>(j) * N * theta1);
    for (std::size_t m = 0; m < uj.values.size(); ++m) {
      double w = std::pow(1.0 + torus_abs(uj.grid, m), N);
      if (std::abs(uj.values[m]) > bound_scale * w * (1.0 + 1e-12)) {
        rep.cm_ok = false;
        break;
      }
    }
    rep.pairings.push_back(std::abs(inner(uj, phi_test)));
    js.push_back(static_cast<double>(j));
  }
  rep.hypotheses_hold = rep.dac_ok && rep.cm_ok;
  try {
    rep.pairing_decay_exponent = -fit_log2(js, rep.pairings, 1e-250).slope;
  } catch (const std::invalid_argument&) {
    rep.pairing_decay_exponent = 0;
  }
  return rep;
}

RemainderReport remainder_terms(const Symbol& a, const GridFunction& u,
                                const RadialCutoff& psi, const RadialCutoff& Psi, int m,
                                int h) {
  if (m < h) throw std::invalid_argument("remainder_terms: need m >= h");
  const double r = psi.r(), R = psi.R();
  const double lam = Psi.r(), Lam = Psi.R();
  RemainderReport rep;
  rep.mu = static_cast<int>(std::floor(std::log2(lam / R)));
  rep.count_bound = 1.0 + std::log2(R * Lam / (r * lam));
  rep.r1 = GridFunction(a.grid());
  rep.r2 = GridFunction(a.grid());
  rep.r3 = GridFunction(a.grid());

  auto Psi_m = [&Psi, m](double t) { return Psi.at(std::ldexp(t, -m)); };

  for (int l = rep.mu + 1; l < 1.0 + std::log2(Lam / r); ++l) {
    ++rep.primed_term_count;
    const int kl = m + l;
    // R1 term: Psi_m(xi) psi(2^{h-l-m} xi) hat a . phi(2^{-m-l} eta) Psi_m(eta)
    RadialFilter xf1 = [&, kl](double t) {
      return Psi_m(t) * psi.at(std::ldexp(t, -(kl - h)));
    };
    RadialFilter ef1 = [&, kl](double t) {
      return corona_at(psi, std::ldexp(t, -kl)) * Psi_m(t);
    };
    accumulate(rep.r1, quantize(filtered(a, xf1, ef1), u));
    // R3 term: Psi_m(xi) phi(2^{-l-m} xi) hat a . psi(2^{h-m-l} eta) Psi_m(eta)
    RadialFilter xf3 = [&, kl](double t) {
      return Psi_m(t) * corona_at(psi, std::ldexp(t, -kl));
    };
    RadialFilter ef3 = [&, kl](double t) {
      return psi.at(std::ldexp(t, -(kl - h))) * Psi_m(t);
    };
    accumulate(rep.r3, quantize(filtered(a, xf3, ef3), u));
    // R2 terms: (a^{m+l} - a^{m+l-h}) against phi(2^{-m-l} eta), and
    // a_{m+l} against psi(2^{1-m-l}) - psi(2^{h-m-l}).
    RadialFilter xf2a = [&, kl](double t) {
      return Psi_m(t) * (psi.at(std::ldexp(t, -kl)) - psi.at(std::ldexp(t, -(kl - h))));
    };
    accumulate(rep.r2, quantize(filtered(a, xf2a, ef1), u));
    RadialFilter ef2b = [&, kl](double t) {
      return (psi.at(std::ldexp(t, -(kl - 1))) - psi.at(std::ldexp(t, -(kl - h)))) * Psi_m(t);
    };
    accumulate(rep.r2, quantize(filtered(a, xf3, ef2b), u));
  }
  return rep;
}

SelfadjointReport selfadjoint_splitting_diagnostic(const Symbol& a, const GridFunction& u,
                                                   double theta, const RadialCutoff& psi,
                                                   int h, const TwistedCutoff& chi,
                                                   double tau) {
  if (!(theta > 0 && theta < 1))
    throw std::invalid_argument("selfadjoint_splitting_diagnostic: theta in (0,1)");
  const double r = psi.r(), R = psi.R();
  SelfadjointReport rep;
  const int K = band_top_level(a.grid(), psi);
  std::vector<double> ks, locs;
  for (int k = h; k <= K; ++k) {
    SelfadjointRow row;
    row.k = k;
    row.eps = std::pow(2.0, -theta * k);
    Symbol ak = xmod_corona(a, psi, k);
    Symbol loc = twisted_localize(ak, chi, row.eps);
    Symbol bk(ak.grid(), ak.order(), ak.band(), std::vector<cplx>(ak.values().size()));
    for (std::size_t i = 0; i < bk.values().size(); ++i)
      bk.values()[i] = ak.values()[i] - loc.values()[i];
    RadialFilter vf = [&psi, k, h](double t) {
      return psi.at(std::ldexp(t, -(k - 1))) - psi.at(std::ldexp(t, -(k - h)));
    };
    GridFunction vk = band_filter(u, vf);
    GridFunction yloc = quantize(loc, vk);
    GridFunction yb = quantize(bk, vk);
    row.loc_sup = sup_norm(yloc);
    row.b_sup = sup_norm(yb);
    double growth = std::pow(2.0, k * (1.0 - theta));
    row.corona_applicable = growth > std::ldexp(1.0, h + 2) / r;
    if (row.corona_applicable) {
      auto [lo, hi] = support_radii(yb, tau);
      double blo = r * std::ldexp(1.0, -h - 2) * growth;
      double bhi = R * std::ldexp(1.0, k);
      row.corona_pass = (lo < 0) || (lo >= blo && hi <= bhi);
      rep.all_coronas_pass = rep.all_coronas_pass && row.corona_pass;
    }
    ks.push_back(k);
    locs.push_back(row.loc_sup);
    rep.rows.push_back(row);
  }
  try {
    rep.decay_exponent = -fit_log2(ks, locs).slope;
  } catch (const std::invalid_argument&) {
    rep.decay_exponent = 1e9;  // localized part identically zero: infinite decay
  }
  return rep;
}

}  // namespace pdo
