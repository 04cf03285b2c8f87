#include "pdo/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace pdo {

TorusGrid TorusGrid::make(int n, int M) {
  if (n != 1 && n != 2) throw std::invalid_argument("TorusGrid: n must be 1 or 2");
  if (M < 16 || (M & (M - 1)) != 0)
    throw std::invalid_argument("TorusGrid: M must be a power of two >= 16");
  return TorusGrid{n, M};
}

std::size_t TorusGrid::points() const {
  return n == 1 ? static_cast<std::size_t>(M) : static_cast<std::size_t>(M) * M;
}

double TorusGrid::cell() const { return n == 1 ? dx() : dx() * dx(); }

static double axis_dist(double t) {
  t = std::fabs(t);
  while (t >= two_pi) t -= two_pi;
  return std::min(t, two_pi - t);
}

double torus_dist(const TorusGrid& g, std::size_t m0, std::size_t m1) {
  auto a = g.node(m0), b = g.node(m1);
  double d0 = axis_dist(a[0] - b[0]);
  if (g.n == 1) return d0;
  double d1 = axis_dist(a[1] - b[1]);
  return std::hypot(d0, d1);
}

double torus_abs(const TorusGrid& g, std::size_t m) { return torus_dist(g, m, 0); }

// ---------------------------------------------------------------------------
// FFTW plan cache.  Plans are created once per (n, M, sign) with
// FFTW_ESTIMATE | FFTW_UNALIGNED and executed on caller buffers via the
// new-array interface; the planner is serialized behind a mutex.
// ---------------------------------------------------------------------------
namespace {

struct PlanKey {
  int n, M, sign;
  bool operator<(const PlanKey& o) const {
    return std::tie(n, M, sign) < std::tie(o.n, o.M, o.sign);
  }
};

fftw_plan get_plan(const TorusGrid& g, int sign) {
  static std::map<PlanKey, fftw_plan> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  PlanKey key{g.n, g.M, sign};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::size_t np = g.points();
  fftw_complex* a = fftw_alloc_complex(np);
  fftw_complex* b = fftw_alloc_complex(np);
  fftw_plan p = (g.n == 1)
                    ? fftw_plan_dft_1d(g.M, a, b, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
                    : fftw_plan_dft_2d(g.M, g.M, a, b, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(a);
  fftw_free(b);
  cache.emplace(key, p);
  return p;
}

}  // namespace

void dft(const TorusGrid& g, const cplx* in, cplx* out, int sign) {
  if (in == out) throw std::invalid_argument("dft: in-place transform not supported");
  fftw_plan p = get_plan(g, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

Spectrum transform(const GridFunction& u) {
  Spectrum s(u.grid);
  dft(u.grid, u.values.data(), s.coef.data(), FFTW_FORWARD);
  const double w = u.grid.cell();
  for (auto& c : s.coef) c *= w;
  return s;
}

GridFunction inverse(const Spectrum& s) {
  GridFunction u(s.grid);
  dft(s.grid, s.coef.data(), u.values.data(), FFTW_BACKWARD);
  const double w = (s.grid.n == 1) ? 1.0 / two_pi : 1.0 / (two_pi * two_pi);
  for (auto& c : u.values) c *= w;
  return u;
}

bool SupportSet::contains(const LatticePoint& p) const {
  return std::binary_search(points.begin(), points.end(), p);
}

SupportSet support_of(const Spectrum& s, double tau) {
  if (!(tau > 0.0 && tau < 1.0))
    throw std::invalid_argument("support_of: tau must lie in (0,1)");
  SupportSet out;
  out.tau = tau;
  for (const auto& c : s.coef) out.max_abs = std::max(out.max_abs, std::abs(c));
  if (out.max_abs == 0.0) return out;
  const double thr = tau * out.max_abs;
  for (std::size_t b = 0; b < s.coef.size(); ++b)
    if (std::abs(s.coef[b]) > thr) out.points.push_back(s.grid.freq_at(b));
  std::sort(out.points.begin(), out.points.end());
  return out;
}

double sup_norm(const GridFunction& u) {
  double m = 0;
  for (const auto& v : u.values) m = std::max(m, std::abs(v));
  return m;
}

double l2_norm(const Spectrum& s) {
  double acc = 0;
  for (const auto& c : s.coef) acc += std::norm(c);
  const double w = (s.grid.n == 1) ? 1.0 / two_pi : 1.0 / (two_pi * two_pi);
  return std::sqrt(acc * w);
}

double l2_norm(const GridFunction& u) { return l2_norm(transform(u)); }

double sobolev_norm(const Spectrum& sp, double s) {
  double acc = 0;
  for (std::size_t b = 0; b < sp.coef.size(); ++b) {
    LatticePoint k = sp.grid.freq_at(b);
    double k2 = static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1];
    acc += std::pow(1.0 + k2, s) * std::norm(sp.coef[b]);
  }
  const double w = (sp.grid.n == 1) ? 1.0 / two_pi : 1.0 / (two_pi * two_pi);
  return std::sqrt(acc * w);
}

double sobolev_norm(const GridFunction& u, double s) {
  return sobolev_norm(transform(u), s);
}

Norms norms(const GridFunction& u, double s_weight) {
  Spectrum sp = transform(u);
  return Norms{l2_norm(sp), sup_norm(u), sobolev_norm(sp, s_weight)};
}

std::uint64_t Rng::next_u64() {
  // splitmix64
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  double u1 = uniform(), u2 = uniform();
  while (u1 <= 0) u1 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

cplx Rng::normal_cplx() {
  double u1 = uniform(), u2 = uniform();
  while (u1 <= 0) u1 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  return cplx(r * std::cos(two_pi * u2), r * std::sin(two_pi * u2));
}

GridFunction random_band_limited(const TorusGrid& g, int kmax, std::uint64_t seed) {
  if (kmax < 0 || kmax > g.M / 2 - 1)
    throw std::invalid_argument("random_band_limited: kmax out of lattice");
  Rng rng(seed);
  Spectrum s(g);
  // Ascending lattice order for determinism.
  if (g.n == 1) {
    for (int k = -kmax; k <= kmax; ++k) s.at(k) = rng.normal_cplx();
  } else {
    for (int k0 = -kmax; k0 <= kmax; ++k0)
      for (int k1 = -kmax; k1 <= kmax; ++k1) s.at(k0, k1) = rng.normal_cplx();
  }
  return inverse(s);
}

}  // namespace pdo
