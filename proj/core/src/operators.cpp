#include "pdo/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace pdo {

namespace {
constexpr int kForward = -1;
constexpr int kBackward = +1;

double eu_norm(const LatticePoint& k) {
  return std::hypot(static_cast<double>(k[0]), static_cast<double>(k[1]));
}

double inv_two_pi_n(const TorusGrid& g) {
  return g.n == 1 ? 1.0 / two_pi : 1.0 / (two_pi * two_pi);
}

// Exact unit roots: root[l] = e^{2 pi i l / M}.
const std::vector<cplx>& unit_roots(int M) {
  static std::map<int, std::vector<cplx>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(M);
  if (it != cache.end()) return it->second;
  std::vector<cplx> r(M);
  for (int l = 0; l < M; ++l) r[l] = std::polar(1.0, two_pi * l / M);
  return cache.emplace(M, std::move(r)).first->second;
}

void check_band_limited(const Symbol& a, const Spectrum& su) {
  if (!(su.grid == a.grid())) throw std::invalid_argument("quantize: grid mismatch");
  double mx = 0;
  for (const auto& c : su.coef) mx = std::max(mx, std::abs(c));
  if (mx == 0) return;
  for (std::size_t b = 0; b < su.coef.size(); ++b) {
    if (std::abs(su.coef[b]) <= 1e-13 * mx) continue;
    if (!a.band().contains(su.grid.freq_at(b), su.grid.n))
      throw std::invalid_argument("quantize: input has spectral mass outside the symbol band");
  }
}
}  // namespace

GridFunction quantize(const Symbol& a, const Spectrum& su) {
  check_band_limited(a, su);
  const TorusGrid& g = a.grid();
  const std::size_t X = g.points();
  const auto& roots = unit_roots(g.M);
  GridFunction out(g);
  const double w = inv_two_pi_n(g);
  for (std::size_t ei = 0; ei < a.band_points(); ++ei) {
    LatticePoint eta = a.eta_at(ei);
    cplx c = su.coef[g.flat(g.bin_of_freq(eta[0]), g.n == 2 ? g.bin_of_freq(eta[1]) : 0)];
    if (c == cplx(0.0)) continue;
    c *= w;
    const cplx* col = a.column(ei);
    if (g.n == 1) {
      // e^{i x_m eta} = root[(m eta) mod M]
      long long step = ((eta[0] % g.M) + g.M) % g.M;
      long long idx = 0;
      for (std::size_t m = 0; m < X; ++m) {
        out.values[m] += c * col[m] * roots[idx];
        idx += step;
        if (idx >= g.M) idx -= g.M;
      }
    } else {
      for (std::size_t m = 0; m < X; ++m) {
        LatticePoint p = g.coords(m);
        long long ph = (static_cast<long long>(p[0]) * eta[0] +
                        static_cast<long long>(p[1]) * eta[1]) % g.M;
        if (ph < 0) ph += g.M;
        out.values[m] += c * col[m] * roots[ph];
      }
    }
  }
  return out;
}

GridFunction quantize(const Symbol& a, const GridFunction& u) {
  return quantize(a, transform(u));
}

GridFunction quantize_freq(const Symbol& a, const GridFunction& u) {
  Spectrum su = transform(u);
  check_band_limited(a, su);
  const TorusGrid& g = a.grid();
  PartialFT h = partial_ft(a);
  Spectrum sout(g);
  const double w = inv_two_pi_n(g);
  const std::size_t X = g.points();
  for (std::size_t ei = 0; ei < a.band_points(); ++ei) {
    LatticePoint eta = a.eta_at(ei);
    cplx c = su.coef[g.flat(g.bin_of_freq(eta[0]), g.n == 2 ? g.bin_of_freq(eta[1]) : 0)];
    if (c == cplx(0.0)) continue;
    c *= w;
    const cplx* col = h.column(ei);
    if (g.n == 1) {
      int shift = ((eta[0] % g.M) + g.M) % g.M;
      for (std::size_t zb = 0; zb < X; ++zb) {
        std::size_t xb = (zb + g.M - shift) % g.M;  // bin of zeta - eta
        sout.coef[zb] += c * col[xb];
      }
    } else {
      int s0 = ((eta[0] % g.M) + g.M) % g.M, s1 = ((eta[1] % g.M) + g.M) % g.M;
      for (std::size_t zb = 0; zb < X; ++zb) {
        LatticePoint p = g.coords(zb);
        std::size_t xb = g.flat((p[0] + g.M - s0) % g.M, (p[1] + g.M - s1) % g.M);
        sout.coef[zb] += c * col[xb];
      }
    }
  }
  return inverse(sout);
}

Symbol compose_multiplier(const Symbol& a, std::function<cplx(const LatticePoint&)> b,
                          double b_order) {
  std::vector<cplx> v(a.values());
  const std::size_t X = a.x_points();
  for (std::size_t ei = 0; ei < a.band_points(); ++ei) {
    cplx w = b(a.eta_at(ei));
    cplx* col = v.data() + ei * X;
    for (std::size_t m = 0; m < X; ++m) col[m] *= w;
  }
  Symbol c(a.grid(), a.order() + b_order, a.band(), std::move(v));
  c.tdc_B = a.tdc_B;
  return c;
}

GridFunction multiplier_apply(std::function<cplx(const LatticePoint&)> b,
                              const GridFunction& u) {
  Spectrum s = transform(u);
  for (std::size_t bb = 0; bb < s.coef.size(); ++bb) s.coef[bb] *= b(s.grid.freq_at(bb));
  return inverse(s);
}

Symbol modulated_symbol(const Symbol& a, const RadialCutoff& psi, int m) {
  if (m < 0) throw std::invalid_argument("modulated_symbol: m >= 0");
  return filtered(a, dilated(psi, m), dilated(psi, m));
}

GridFunction modulated_op(const Symbol& a, const RadialCutoff& psi, int m,
                          const GridFunction& u) {
  return quantize(modulated_symbol(a, psi, m), u);
}

LimitProbeReport modulation_limit_probe(const Symbol& a, const GridFunction& u,
                                        const std::vector<RadialCutoff>& psi_list,
                                        int m_max) {
  if (psi_list.size() < 2)
    throw std::invalid_argument("modulation_limit_probe: need >= 2 modulation functions");
  const double u_l2 = l2_norm(u);
  LimitProbeReport rep;

  // Stabilization bound from the content of hat a and hat u.
  int xb = x_bandwidth(a);
  Spectrum su = transform(u);
  SupportSet us = support_of(su, 1e-13);
  double ub = 0;
  for (const auto& p : us.points) ub = std::max(ub, eu_norm(p));
  double r_min = psi_list[0].r();
  for (const auto& p : psi_list) r_min = std::min(r_min, p.r());
  double content = std::max({static_cast<double>(xb), ub, 1.0});
  rep.stabilization_bound = static_cast<int>(std::ceil(std::log2(content / r_min)));

  for (const auto& psi : psi_list) {
    GridFunction prev = modulated_op(a, psi, 0, u);
    std::vector<double> diffs;
    int m0 = -1;
    for (int m = 0; m < m_max; ++m) {
      GridFunction next = modulated_op(a, psi, m + 1, u);
      GridFunction d(next.grid);
      for (std::size_t i = 0; i < d.values.size(); ++i)
        d.values[i] = next.values[i] - prev.values[i];
      double nd = l2_norm(d);
      diffs.push_back(nd);
      if (m0 < 0 && nd <= 1e-12 * u_l2) m0 = m;
      prev = std::move(next);
    }
    rep.cauchy.push_back(std::move(diffs));
    rep.m0.push_back(m0);
    rep.limits.push_back(std::move(prev));
  }
  for (std::size_t i = 0; i < rep.limits.size(); ++i)
    for (std::size_t j = i + 1; j < rep.limits.size(); ++j) {
      GridFunction d(rep.limits[i].grid);
      for (std::size_t k = 0; k < d.values.size(); ++k)
        d.values[k] = rep.limits[i].values[k] - rep.limits[j].values[k];
      rep.cross_psi_discrepancy = std::max(rep.cross_psi_discrepancy, l2_norm(d));
    }
  return rep;
}

Kernel kernel(const Symbol& a) {
  const TorusGrid& g = a.grid();
  if (g.n != 1) throw std::invalid_argument("kernel: n = 1 only");
  const int M = g.M;
  Kernel K{g, std::vector<cplx>(static_cast<std::size_t>(M) * M)};
  std::vector<cplx> spec(M), slice(M);
  for (int mx = 0; mx < M; ++mx) {
    std::fill(spec.begin(), spec.end(), cplx(0.0));
    for (std::size_t ei = 0; ei < a.band_points(); ++ei) {
      int eta = a.eta_at(ei)[0];
      spec[g.bin_of_freq(eta)] = a.column(ei)[mx];
    }
    dft(g, spec.data(), slice.data(), kBackward);
    for (int my = 0; my < M; ++my) {
      int z = ((mx - my) % M + M) % M;
      K.values[static_cast<std::size_t>(mx) * M + my] = slice[z] / two_pi;
    }
  }
  return K;
}

Kernel kernel_m_symbol_route(const Symbol& a, const RadialCutoff& psi, int m) {
  return kernel(modulated_symbol(a, psi, m));
}

Kernel kernel_m_convolution_route(const Symbol& a, const RadialCutoff& psi, int m) {
  const TorusGrid& g = a.grid();
  if (g.n != 1) throw std::invalid_argument("kernel_m: n = 1 only");
  const int M = g.M;
  Kernel K0 = kernel(a);
  // KM(x,z) = K(x, x - z); smooth by psi(2^-m xi) psi(2^-m zeta) in 2-d
  // Fourier space; then K_m(x,y) = KM_m(x, x - y).
  TorusGrid g2 = TorusGrid::make(2, M);
  std::vector<cplx> km(g2.points()), buf(g2.points());
  for (int x = 0; x < M; ++x)
    for (int z = 0; z < M; ++z) {
      int y = ((x - z) % M + M) % M;
      km[g2.flat(x, z)] = K0.values[static_cast<std::size_t>(x) * M + y];
    }
  dft(g2, km.data(), buf.data(), kForward);
  const double scale = std::ldexp(1.0, -m);
  for (std::size_t b = 0; b < g2.points(); ++b) {
    LatticePoint f = g2.freq_at(b);
    buf[b] *= psi.at(std::fabs(f[0]) * scale) * psi.at(std::fabs(f[1]) * scale);
  }
  dft(g2, buf.data(), km.data(), kBackward);
  const double inv = 1.0 / (static_cast<double>(M) * M);
  Kernel K{g, std::vector<cplx>(static_cast<std::size_t>(M) * M)};
  for (int x = 0; x < M; ++x)
    for (int y = 0; y < M; ++y) {
      int z = ((x - y) % M + M) % M;
      K.values[static_cast<std::size_t>(x) * M + y] = km[g2.flat(x, z)] * inv;
    }
  return K;
}

// --- dense matrices ---------------------------------------------------------

namespace {
std::size_t box_count(const EtaBand& b, int n) {
  std::size_t c = b.count1();
  return n == 1 ? c : c * c;
}
LatticePoint box_at(const EtaBand& b, int n, std::size_t i) {
  int c = b.count1();
  if (n == 1) return {b.lo + static_cast<int>(i), 0};
  return {b.lo + static_cast<int>(i) / c, b.lo + static_cast<int>(i) % c};
}
}  // namespace

std::size_t OperatorMatrix::nrows() const { return box_count(rows, grid.n); }
std::size_t OperatorMatrix::ncols() const { return box_count(cols, grid.n); }
LatticePoint OperatorMatrix::row_at(std::size_t i) const { return box_at(rows, grid.n, i); }
LatticePoint OperatorMatrix::col_at(std::size_t j) const { return box_at(cols, grid.n, j); }

OperatorMatrix operator_matrix(const Symbol& a, EtaBand eta_band, EtaBand zeta_band) {
  const TorusGrid& g = a.grid();
  if (!a.band().contains1(eta_band.lo) || !a.band().contains1(eta_band.hi))
    throw std::invalid_argument("operator_matrix: eta band outside symbol band");
  if (std::max(std::abs(zeta_band.lo), std::abs(zeta_band.hi)) > 2048 && g.n == 1)
    throw std::invalid_argument("operator_matrix: dense bands capped at |k| <= 2048");
  PartialFT h = partial_ft(a);
  OperatorMatrix M{g, zeta_band, eta_band, {}};
  M.m.assign(M.nrows() * M.ncols(), cplx(0.0));
  const double w = inv_two_pi_n(g);
  for (std::size_t j = 0; j < M.ncols(); ++j) {
    LatticePoint eta = M.col_at(j);
    std::ptrdiff_t ei = a.band_index(eta);
    if (ei < 0) continue;
    const cplx* col = h.column(ei);
    for (std::size_t i = 0; i < M.nrows(); ++i) {
      LatticePoint zeta = M.row_at(i);
      std::size_t xb = g.flat(g.bin_of_freq(zeta[0] - eta[0]),
                              g.n == 2 ? g.bin_of_freq(zeta[1] - eta[1]) : 0);
      M.at(i, j) = w * col[xb];
    }
  }
  return M;
}

std::vector<cplx> matrix_apply(const OperatorMatrix& m, const std::vector<cplx>& xhat) {
  if (xhat.size() != m.ncols()) throw std::invalid_argument("matrix_apply: size mismatch");
  std::vector<cplx> y(m.nrows(), cplx(0.0));
  for (std::size_t i = 0; i < m.nrows(); ++i) {
    const cplx* row = m.m.data() + i * m.ncols();
    cplx acc = 0;
    for (std::size_t j = 0; j < m.ncols(); ++j) acc += row[j] * xhat[j];
    y[i] = acc;
  }
  return y;
}

OperatorMatrix hermitian_transpose(const OperatorMatrix& m) {
  OperatorMatrix t{m.grid, m.cols, m.rows, std::vector<cplx>(m.m.size())};
  for (std::size_t i = 0; i < m.nrows(); ++i)
    for (std::size_t j = 0; j < m.ncols(); ++j)
      t.m[j * m.nrows() + i] = std::conj(m.at(i, j));
  return t;
}

double frobenius_norm(const OperatorMatrix& m) {
  double acc = 0;
  for (const auto& v : m.m) acc += std::norm(v);
  return std::sqrt(acc);
}

double frobenius_distance(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.m.size() != b.m.size())
    throw std::invalid_argument("frobenius_distance: shape mismatch");
  double acc = 0;
  for (std::size_t i = 0; i < a.m.size(); ++i) acc += std::norm(a.m[i] - b.m[i]);
  return std::sqrt(acc);
}

NormEstimate operator_norm(const OperatorMatrix& m, double s_in, double s_out,
                           double tol, int max_iter) {
  const std::size_t nr = m.nrows(), nc = m.ncols();
  std::vector<double> w_out(nr), w_in_inv(nc);
  for (std::size_t i = 0; i < nr; ++i) {
    double k2 = std::pow(eu_norm(m.row_at(i)), 2);
    w_out[i] = std::pow(1.0 + k2, s_out / 2.0);
  }
  for (std::size_t j = 0; j < nc; ++j) {
    double k2 = std::pow(eu_norm(m.col_at(j)), 2);
    w_in_inv[j] = std::pow(1.0 + k2, -s_in / 2.0);
  }
  auto apply_B = [&](const std::vector<cplx>& x, std::vector<cplx>& y) {
    for (std::size_t i = 0; i < nr; ++i) {
      const cplx* row = m.m.data() + i * nc;
      cplx acc = 0;
      for (std::size_t j = 0; j < nc; ++j) acc += row[j] * (w_in_inv[j] * x[j]);
      y[i] = w_out[i] * acc;
    }
  };
  auto apply_BH = [&](const std::vector<cplx>& y, std::vector<cplx>& x) {
    std::fill(x.begin(), x.end(), cplx(0.0));
    for (std::size_t i = 0; i < nr; ++i) {
      const cplx* row = m.m.data() + i * nc;
      cplx yi = w_out[i] * y[i];
      for (std::size_t j = 0; j < nc; ++j) x[j] += std::conj(row[j]) * yi * w_in_inv[j];
    }
  };

  std::vector<cplx> v(nc), Bv(nr), BHBv(nc);
  for (std::size_t j = 0; j < nc; ++j)
    v[j] = cplx(std::cos(0.7 * j + 0.3), std::sin(1.3 * j + 0.1));
  double nv = 0;
  for (const auto& c : v) nv += std::norm(c);
  nv = std::sqrt(nv);
  for (auto& c : v) c /= nv;

  NormEstimate est;
  double prev = -1;
  for (int it = 0; it < max_iter; ++it) {
    apply_B(v, Bv);
    double s = 0;
    for (const auto& c : Bv) s += std::norm(c);
    s = std::sqrt(s);
    est.value = s;
    est.iterations = it + 1;
    if (s == 0.0) {
      est.converged = true;
      est.residual = 0;
      return est;
    }
    if (prev >= 0) {
      est.residual = std::fabs(s - prev) / s;
      if (est.residual <= tol) {
        est.converged = true;
        return est;
      }
    }
    prev = s;
    apply_BH(Bv, BHBv);
    double nx = 0;
    for (const auto& c : BHBv) nx += std::norm(c);
    nx = std::sqrt(nx);
    if (nx == 0.0) {
      est.converged = true;
      return est;
    }
    for (std::size_t j = 0; j < nc; ++j) v[j] = BHBv[j] / nx;
  }
  est.converged = false;
  return est;
}

double commutator_defect(const Symbol& a, const GridFunction& u, int axis) {
  const TorusGrid& g = a.grid();
  if (axis < 0 || axis >= g.n) throw std::invalid_argument("commutator_defect: bad axis");
  // Headroom: every output frequency xi + eta must stay inside the lattice.
  int xb = x_bandwidth(a);
  Spectrum su = transform(u);
  SupportSet us = support_of(su, 1e-13);
  int ub = 0;
  for (const auto& p : us.points) ub = std::max({ub, std::abs(p[0]), std::abs(p[1])});
  if (xb + ub > g.M / 2 - 1)
    throw std::invalid_argument("commutator_defect: insufficient band headroom");

  auto D = [&](const GridFunction& f) {
    Spectrum s = transform(f);
    for (std::size_t b = 0; b < s.coef.size(); ++b)
      s.coef[b] *= static_cast<double>(s.grid.freq_at(b)[axis]);
    return inverse(s);
  };
  // OP(D_x a): multiply hat a by xi_axis.
  PartialFT h = partial_ft(a);
  for (std::size_t ei = 0; ei < a.band_points(); ++ei) {
    cplx* col = h.column(ei);
    for (std::size_t b = 0; b < g.points(); ++b)
      col[b] *= static_cast<double>(g.freq_at(b)[axis]);
  }
  Symbol dxa = inverse_partial_ft(h);

  GridFunction lhs = D(quantize(a, u));
  GridFunction t2 = quantize(a, D(u));
  GridFunction t3 = quantize(dxa, u);
  GridFunction defect(g);
  for (std::size_t i = 0; i < defect.values.size(); ++i)
    defect.values[i] = lhs.values[i] - t2.values[i] - t3.values[i];
  double un = l2_norm(u);
  return un == 0 ? 0.0 : l2_norm(defect) / un;
}

cplx inner(const GridFunction& u, const GridFunction& v) {
  if (!(u.grid == v.grid)) throw std::invalid_argument("inner: grid mismatch");
  cplx acc = 0;
  for (std::size_t i = 0; i < u.values.size(); ++i)
    acc += u.values[i] * std::conj(v.values[i]);
  return acc * u.grid.cell();
}

}  // namespace pdo
