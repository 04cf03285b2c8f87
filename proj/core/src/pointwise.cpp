#include "pdo/pointwise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pdo/fitting.hpp"
#include "pdo/operators.hpp"

namespace pdo {

namespace {
constexpr int kBackward = +1;

double eu_norm(const LatticePoint& k) {
  return std::hypot(static_cast<double>(k[0]), static_cast<double>(k[1]));
}
}  // namespace

MaximalFunction maximal(const GridFunction& u, double N, double R) {
  if (!(N >= 0) || !(R > 0)) throw std::invalid_argument("maximal: need N >= 0, R > 0");
  const TorusGrid& g = u.grid;
  const std::size_t X = g.points();
  // Weight per offset o: (1 + R |y_o|)^{-N}, |y| the torus distance from 0.
  std::vector<double> w(X);
  for (std::size_t o = 0; o < X; ++o) w[o] = std::pow(1.0 + R * torus_abs(g, o), -N);
  std::vector<double> au(X);
  for (std::size_t i = 0; i < X; ++i) au[i] = std::abs(u.values[i]);

  MaximalFunction out{N, R, std::vector<double>(X, 0.0)};
  if (g.n == 1) {
    for (int x = 0; x < g.M; ++x) {
      double best = 0;
      for (int o = 0; o < g.M; ++o) {
        int src = x - o;
        if (src < 0) src += g.M;
        best = std::max(best, au[src] * w[o]);
      }
      out.values[x] = best;
    }
  } else {
    for (int x0 = 0; x0 < g.M; ++x0)
      for (int x1 = 0; x1 < g.M; ++x1) {
        double best = 0;
        for (int o0 = 0; o0 < g.M; ++o0)
          for (int o1 = 0; o1 < g.M; ++o1) {
            int s0 = x0 - o0;
            if (s0 < 0) s0 += g.M;
            int s1 = x1 - o1;
            if (s1 < 0) s1 += g.M;
            best = std::max(best, au[g.flat(s0, s1)] * w[g.flat(o0, o1)]);
          }
        out.values[g.flat(x0, x1)] = best;
      }
  }
  return out;
}

SymbolFactor symbol_factor(const Symbol& a, double N, double R,
                           const RadialFilter& chi_aux, std::optional<EtaBand> u_band) {
  if (!(R > 0)) throw std::invalid_argument("symbol_factor: R > 0");
  const TorusGrid& g = a.grid();
  if (u_band) {
    // chi_aux must equal 1 on the declared u-band.
    for (int k0 = u_band->lo; k0 <= u_band->hi; ++k0) {
      if (g.n == 1) {
        if (std::fabs(chi_aux(std::fabs(static_cast<double>(k0))) - 1.0) > 1e-12)
          throw std::invalid_argument("symbol_factor: chi_aux != 1 on the u-band");
      } else {
        for (int k1 = u_band->lo; k1 <= u_band->hi; ++k1)
          if (std::fabs(chi_aux(eu_norm({k0, k1})) - 1.0) > 1e-12)
            throw std::invalid_argument("symbol_factor: chi_aux != 1 on the u-band");
      }
    }
  }
  const std::size_t X = g.points();
  std::vector<double> weight(X);
  for (std::size_t y = 0; y < X; ++y) weight[y] = std::pow(1.0 + R * torus_abs(g, y), N);
  // Per eta: chi weight (radial).
  std::vector<double> cw(a.band_points());
  for (std::size_t ei = 0; ei < a.band_points(); ++ei)
    cw[ei] = chi_aux(eu_norm(a.eta_at(ei)));

  SymbolFactor out{N, R, std::vector<double>(X, 0.0)};
  std::vector<cplx> spec(X), slice(X);
  const double inv2pin = (g.n == 1) ? 1.0 / two_pi : 1.0 / (two_pi * two_pi);
  for (std::size_t x = 0; x < X; ++x) {
    std::fill(spec.begin(), spec.end(), cplx(0.0));
    for (std::size_t ei = 0; ei < a.band_points(); ++ei) {
      if (cw[ei] == 0.0) continue;
      LatticePoint eta = a.eta_at(ei);
      spec[g.flat(g.bin_of_freq(eta[0]), g.n == 2 ? g.bin_of_freq(eta[1]) : 0)] =
          a.column(ei)[x] * cw[ei];
    }
    dft(g, spec.data(), slice.data(), kBackward);
    double acc = 0;
    for (std::size_t y = 0; y < X; ++y) acc += weight[y] * std::abs(slice[y]);
    out.values[x] = acc * inv2pin * g.cell();
  }
  return out;
}

double factorization_check(const Symbol& a, const GridFunction& u, double N, double R,
                           const RadialFilter& chi_aux) {
  // Project hat u onto its thresholded support so that the input is exactly
  // band-limited; the inequality is then exact on the lattice.
  Spectrum su = transform(u);
  double umax = 0;
  for (const auto& c : su.coef) umax = std::max(umax, std::abs(c));
  for (auto& c : su.coef)
    if (std::abs(c) <= 1e-13 * umax) c = 0.0;
  SupportSet us = support_of(su, 1e-14);
  int kb = 0;
  for (const auto& p : us.points) kb = std::max({kb, std::abs(p[0]), std::abs(p[1])});
  for (const auto& p : us.points)
    if (eu_norm(p) > R)
      throw std::invalid_argument("factorization_check: supp hat u outside the R-ball");
  GridFunction uc = inverse(su);
  SymbolFactor fa = symbol_factor(a, N, R, chi_aux, EtaBand{-kb, kb});
  MaximalFunction us_max = maximal(uc, N, R);
  GridFunction out = quantize(a, su);
  double worst = 0;
  for (std::size_t x = 0; x < out.values.size(); ++x) {
    double num = std::abs(out.values[x]);
    double den = fa.values[x] * us_max.values[x];
    if (num == 0.0) continue;
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, num / den);
  }
  return worst;
}

RadialProfile corona_aux_profile() { return RadialProfile(0.5, 0.75, 1.5, 2.0); }
RadialProfile ball_aux_profile() { return RadialProfile(0.0, 0.0, 1.0, 2.0); }

ScalingResult scaling_mh(const Symbol& a, double N, const RadialProfile& aux,
                         const std::vector<double>& Rs) {
  if (Rs.size() < 4) throw std::invalid_argument("scaling_mh: need >= 4 points");
  const TorusGrid& g = a.grid();
  const int A = static_cast<int>(std::floor(N + g.n / 2.0)) + 1;
  std::vector<Symbol> derivs;
  for (int o = 0; o <= A; ++o) derivs.push_back(eta_derivative(a, o));

  ScalingResult res{ScalingVariant::mh_bound, {}, 0, ""};
  const std::size_t X = g.points();
  for (double R : Rs) {
    RadialFilter chi = [&aux, R](double t) { return aux.at(t / R); };
    SymbolFactor fa = symbol_factor(a, N, R, chi);
    // RHS(x) = sum_alpha ( sum_{|eta|/R in supp aux} |R^alpha D^alpha a|^2 / R^n )^{1/2}
    std::vector<double> rhs(X, 0.0);
    double rn = std::pow(R, g.n);
    for (int o = 0; o <= A; ++o) {
      std::vector<double> acc(X, 0.0);
      for (std::size_t ei = 0; ei < a.band_points(); ++ei) {
        double t = eu_norm(a.eta_at(ei)) / R;
        if (t < aux.support_lo() || t > aux.support_hi()) continue;
        const cplx* col = derivs[o].column(ei);
        double r2a = std::pow(R, 2.0 * o);
        for (std::size_t x = 0; x < X; ++x) acc[x] += r2a * std::norm(col[x]);
      }
      for (std::size_t x = 0; x < X; ++x) rhs[x] += std::sqrt(acc[x] / rn);
    }
    double worst = 0;
    for (std::size_t x = 0; x < X; ++x) {
      if (rhs[x] == 0.0) continue;
      worst = std::max(worst, fa.values[x] / rhs[x]);
    }
    res.rows.push_back({R, worst});
  }
  std::vector<double> lx, vals;
  for (const auto& r : res.rows) {
    lx.push_back(std::log2(r.parameter));
    vals.push_back(r.value);
  }
  res.fitted_slope = fit_log2(lx, vals).slope;
  return res;
}

ScalingResult scaling_r(const Symbol& a, double N, const RadialProfile& aux,
                        const std::vector<double>& Rs) {
  if (Rs.size() < 4) throw std::invalid_argument("scaling_r: need >= 4 points");
  ScalingResult res{ScalingVariant::r_scaling, {}, 0, ""};
  for (double R : Rs) {
    RadialFilter chi = [&aux, R](double t) { return aux.at(t / R); };
    SymbolFactor fa = symbol_factor(a, N, R, chi);
    res.rows.push_back({R, *std::max_element(fa.values.begin(), fa.values.end())});
  }
  std::vector<double> lx, vals;
  for (const auto& r : res.rows) {
    lx.push_back(std::log2(r.parameter));
    vals.push_back(r.value);
  }
  res.fitted_slope = fit_log2(lx, vals).slope;
  return res;
}

ScalingResult scaling_q(const Symbol& a, double N, const RadialProfile& aux,
                        const RadialCutoff& psi, const std::vector<double>& Qs, double R) {
  if (Qs.size() < 4) throw std::invalid_argument("scaling_q: need >= 4 points");
  ScalingResult res{ScalingVariant::q_scaling, {}, 0, ""};
  RadialFilter chi = [&aux, R](double t) { return aux.at(t / R); };
  for (double Q : Qs) {
    RadialFilter highpass = [&psi, Q](double t) { return corona_at(psi, t / Q); };
    Symbol aq = filtered(a, highpass, {});
    SymbolFactor fa = symbol_factor(aq, N, R, chi);
    res.rows.push_back({Q, *std::max_element(fa.values.begin(), fa.values.end())});
  }
  std::vector<double> lx, vals;
  for (const auto& r : res.rows) {
    lx.push_back(std::log2(r.parameter));
    vals.push_back(r.value);
  }
  res.fitted_slope = fit_log2(lx, vals).slope;
  res.note = "high-pass in x; decay is super-polynomial until the x-band is exhausted";
  return res;
}

ScalingResult scaling_ck(const Symbol& a, const RadialCutoff& psi, bool corona_Psi,
                         const std::vector<int>& ks) {
  if (ks.size() < 4) throw std::invalid_argument("scaling_ck: need >= 4 points");
  const TorusGrid& g = a.grid();
  // Lacunary probe v = sum_j e^{i 2^j x}: unit coefficients, temperate order 0.
  Spectrum sv(g);
  for (int j = 0; (1 << j) <= g.M / 2 - 1; ++j) sv.at(1 << j) = two_pi;
  GridFunction v = inverse(sv);

  ScalingResult res{ScalingVariant::ck_growth, {}, 0, ""};
  std::vector<double> kk, vals;
  for (int k : ks) {
    Symbol mod = filtered(a, dilated(psi, k),
                          corona_Psi ? corona_dilated(psi, k) : dilated(psi, k));
    GridFunction y = quantize(mod, v);
    double s = sup_norm(y);
    res.rows.push_back({static_cast<double>(k), s});
    kk.push_back(k);
    vals.push_back(s);
  }
  res.fitted_slope = fit_log2(kk, vals).slope;
  res.note = corona_Psi ? "0 not in supp Psi" : "ball Psi";
  return res;
}

}  // namespace pdo
