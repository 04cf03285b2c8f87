#pragma once

// Periodic torus [0,2pi)^n sampled on M points per axis, with the discrete
// Fourier transform pair
//
//   hat u(k) = sum_x u(x) e^{-ik.x} dx^n,
//   u(x)     = (2pi)^{-n} sum_k hat u(k) e^{ik.x},
//
// over the integer frequency lattice Lambda = {-M/2,...,M/2-1}^n.  With this
// normalization e^{ik.x} is exactly periodic for every k in Lambda and the
// discrete Parseval identity  sum_x |u|^2 dx^n = (2pi)^{-n} sum_k |hat u|^2
// holds to rounding error.

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace pdo {

using cplx = std::complex<double>;

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Lattice point / frequency vector; for n=1 the second component is 0.
using LatticePoint = std::array<int, 2>;

struct TorusGrid {
  int n = 1;  // spatial dimension, 1 or 2
  int M = 0;  // points per axis, power of two, >= 16

  static TorusGrid make(int n, int M);

  std::size_t points() const;  // M^n
  double dx() const { return two_pi / M; }
  double cell() const;  // dx^n

  // FFT bin <-> signed integer frequency on one axis.
  int freq_of_bin(int b) const { return b < M / 2 ? b : b - M; }
  int bin_of_freq(int k) const { return ((k % M) + M) % M; }

  // Row-major flat index <-> per-axis coordinates.
  std::size_t flat(int i0, int i1 = 0) const {
    return n == 1 ? static_cast<std::size_t>(i0)
                  : static_cast<std::size_t>(i0) * M + i1;
  }
  LatticePoint coords(std::size_t m) const {
    if (n == 1) return {static_cast<int>(m), 0};
    return {static_cast<int>(m / M), static_cast<int>(m % M)};
  }
  LatticePoint freq_at(std::size_t b) const {
    LatticePoint c = coords(b);
    return {freq_of_bin(c[0]), n == 2 ? freq_of_bin(c[1]) : 0};
  }
  std::array<double, 2> node(std::size_t m) const {
    LatticePoint c = coords(m);
    return {dx() * c[0], n == 2 ? dx() * c[1] : 0.0};
  }

  bool operator==(const TorusGrid&) const = default;
};

// Torus metric: per axis min(|t|, 2pi-|t|), combined in Euclidean norm.
double torus_dist(const TorusGrid& g, std::size_t m0, std::size_t m1);
// Distance of node m from the origin.
double torus_abs(const TorusGrid& g, std::size_t m);

struct GridFunction {
  TorusGrid grid;
  std::vector<cplx> values;  // one per node, row-major

  GridFunction() = default;
  explicit GridFunction(const TorusGrid& g) : grid(g), values(g.points()) {}
  cplx& at(std::size_t m) { return values[m]; }
  const cplx& at(std::size_t m) const { return values[m]; }
};

struct Spectrum {
  TorusGrid grid;
  std::vector<cplx> coef;  // FFT bin layout, row-major

  Spectrum() = default;
  explicit Spectrum(const TorusGrid& g) : grid(g), coef(g.points()) {}
  // Coefficient at signed lattice frequency k.
  cplx& at(int k0, int k1 = 0) {
    return coef[grid.flat(grid.bin_of_freq(k0), grid.n == 2 ? grid.bin_of_freq(k1) : 0)];
  }
  const cplx& at(int k0, int k1 = 0) const {
    return coef[grid.flat(grid.bin_of_freq(k0), grid.n == 2 ? grid.bin_of_freq(k1) : 0)];
  }
};

Spectrum transform(const GridFunction& u);
GridFunction inverse(const Spectrum& s);

// Low-level DFT used throughout: out may not alias in.
void dft(const TorusGrid& g, const cplx* in, cplx* out, int sign);

struct SupportSet {
  double tau = 1e-10;
  double max_abs = 0.0;
  std::vector<LatticePoint> points;  // ascending lexicographic order

  bool contains(const LatticePoint& p) const;
};

// Thresholded lattice support: all k with |hat u(k)| > tau * max |hat u|.
SupportSet support_of(const Spectrum& s, double tau = 1e-10);

double sup_norm(const GridFunction& u);
double l2_norm(const GridFunction& u);            // via Parseval
double l2_norm(const Spectrum& s);
double sobolev_norm(const GridFunction& u, double s);
double sobolev_norm(const Spectrum& sp, double s);

struct Norms {
  double l2 = 0, sup = 0, hs = 0;
};
Norms norms(const GridFunction& u, double s_weight = 0.0);

// Deterministic cross-platform generator (splitmix64 + Box-Muller).
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next_u64();
  double uniform();        // [0,1)
  double normal();
  cplx normal_cplx();
};

// Fixed-seed pseudo-random function, band-limited to |k|_inf <= kmax.
GridFunction random_band_limited(const TorusGrid& g, int kmax, std::uint64_t seed);

}  // namespace pdo
