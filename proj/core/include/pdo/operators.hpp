#pragma once

// Kohn-Nirenberg quantization on the torus,
//   OP(a)u(x) = (2pi)^{-n} sum_eta e^{ix.eta} a(x,eta) hat u(eta),
// with two independent evaluation routes (direct x-space accumulation and
// the frequency-side contraction hat(OP(a)u)(zeta) =
// (2pi)^{-n} sum_eta hat a(zeta-eta,eta) hat u(eta)), frequency-modulated
// operators and the vanishing-modulation limit probe, distribution kernels,
// dense operator matrices and weighted operator norms by power iteration.

#include <vector>

#include "pdo/cutoffs.hpp"
#include "pdo/grid.hpp"
#include "pdo/symbols.hpp"

namespace pdo {

// Direct x-space accumulation.  Rejects u with spectral mass outside the
// symbol's eta-band (relative threshold 1e-13).
GridFunction quantize(const Symbol& a, const GridFunction& u);
GridFunction quantize(const Symbol& a, const Spectrum& su);
// Frequency-side contraction via the kernel relation.
GridFunction quantize_freq(const Symbol& a, const GridFunction& u);

// c(x,eta) = a(x,eta) b(eta); OP(c)u = OP(a) b(D) u.
Symbol compose_multiplier(const Symbol& a, std::function<cplx(const LatticePoint&)> b,
                          double b_order = 0.0);

// Apply a constant-coefficient multiplier b(D).
GridFunction multiplier_apply(std::function<cplx(const LatticePoint&)> b,
                              const GridFunction& u);

// A_m u = OP(psi(2^-m D_x) a psi(2^-m eta)) u.
Symbol modulated_symbol(const Symbol& a, const RadialCutoff& psi, int m);
GridFunction modulated_op(const Symbol& a, const RadialCutoff& psi, int m,
                          const GridFunction& u);

struct LimitProbeReport {
  std::vector<std::vector<double>> cauchy;  // per psi: ||A_{m+1}u - A_m u||_L2
  std::vector<int> m0;                      // per psi: first m with cauchy <= 1e-12 ||u||
  std::vector<GridFunction> limits;         // per psi: A_{m_max} u
  double cross_psi_discrepancy = 0;         // max over psi pairs, L2
  int stabilization_bound = 0;              // ceil(log2(max(xband, uband)/r_min))
};

LimitProbeReport modulation_limit_probe(const Symbol& a, const GridFunction& u,
                                        const std::vector<RadialCutoff>& psi_list,
                                        int m_max);

// Distribution kernel K(x,y) = F^{-1}_{eta->z} a(x,eta)|_{z=x-y} (n = 1).
struct Kernel {
  TorusGrid grid;
  std::vector<cplx> values;  // K[mx * M + my]
  cplx at(std::size_t mx, std::size_t my) const { return values[mx * grid.M + my]; }
};
Kernel kernel(const Symbol& a);
// Modulated kernel, two routes: "symbol" filters the symbol and takes its
// kernel; "convolution" smooths K(x,x-z) by the 2-d Fourier multiplier
// psi(2^-m xi) psi(2^-m zeta) and re-indexes.
Kernel kernel_m_symbol_route(const Symbol& a, const RadialCutoff& psi, int m);
Kernel kernel_m_convolution_route(const Symbol& a, const RadialCutoff& psi, int m);

// Dense operator matrix over declared bands: M(zeta,eta) = (2pi)^{-n}
// hat a(zeta-eta mod M, eta).
struct OperatorMatrix {
  TorusGrid grid;
  EtaBand rows;  // zeta band
  EtaBand cols;  // eta band
  std::vector<cplx> m;  // row-major

  std::size_t nrows() const;
  std::size_t ncols() const;
  LatticePoint row_at(std::size_t i) const;
  LatticePoint col_at(std::size_t j) const;
  cplx& at(std::size_t i, std::size_t j) { return m[i * ncols() + j]; }
  const cplx& at(std::size_t i, std::size_t j) const { return m[i * ncols() + j]; }
};

OperatorMatrix operator_matrix(const Symbol& a, EtaBand eta_band, EtaBand zeta_band);

// hat(OP(a)u) restricted to the row band, from hat u on the column band.
std::vector<cplx> matrix_apply(const OperatorMatrix& m, const std::vector<cplx>& xhat);

OperatorMatrix hermitian_transpose(const OperatorMatrix& m);
double frobenius_norm(const OperatorMatrix& m);
double frobenius_distance(const OperatorMatrix& a, const OperatorMatrix& b);

struct NormEstimate {
  double value = 0;
  int iterations = 0;
  bool converged = false;
  double residual = 0;  // last relative change
};

// Largest singular value of diag((1+|zeta|^2)^{s_out/2}) M diag((1+|eta|^2)^{-s_in/2})
// by power iteration on B^H B with a fixed deterministic start vector.
NormEstimate operator_norm(const OperatorMatrix& m, double s_in, double s_out,
                           double tol = 1e-8, int max_iter = 10000);

// || D_j OP(a)u - OP(a) D_j u - OP(D_{x_j} a) u ||_L2 / ||u||_L2.
// Rejects inputs whose output frequencies would wrap around the lattice.
double commutator_defect(const Symbol& a, const GridFunction& u, int axis = 0);

// <u,v> = sum u conj(v) dx^n.
cplx inner(const GridFunction& u, const GridFunction& v);

}  // namespace pdo
