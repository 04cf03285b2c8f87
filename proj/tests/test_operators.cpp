#include <doctest.h>

#include <cmath>
#include <complex>
#include <string>

#ifdef PDO_HAVE_EIGEN
#include <Eigen/Dense>
#include <Eigen/SVD>
#endif

#include "pdo/cutoffs.hpp"
#include "pdo/operators.hpp"

using namespace pdo;

namespace {
GridFunction mode(const TorusGrid& g, int k) {
  GridFunction u(g);
  for (std::size_t m = 0; m < g.points(); ++m)
    u.values[m] = std::polar(1.0, k * g.node(m)[0]);
  return u;
}
Symbol one_symbol(const TorusGrid& g) {
  return multiplier_symbol(g, 0.0, full_band(g),
                           [](const LatticePoint&) { return cplx(1.0); });
}
Symbol eta_symbol(const TorusGrid& g) {
  return multiplier_symbol(g, 1.0, full_band(g), [](const LatticePoint& k) {
    return cplx(static_cast<double>(k[0]));
  });
}
Symbol eix(const TorusGrid& g) {
  return Symbol(g, 0.0, full_band(g),
                [](const std::array<double, 2>& x, const LatticePoint&) {
                  return std::polar(1.0, -x[0]);
                });
}
double gf_dist(const GridFunction& a, const GridFunction& b) {
  double e = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    e = std::max(e, std::abs(a.values[i] - b.values[i]));
  return e;
}
}  // namespace

TEST_CASE("quantization basics") {
  TorusGrid g = TorusGrid::make(1, 256);
  GridFunction u = random_band_limited(g, 100, 5);
  SUBCASE("identity symbol") { CHECK(gf_dist(quantize(one_symbol(g), u), u) < 1e-12); }
  SUBCASE("OP(eta) differentiates a single mode") {
    GridFunction y = quantize(eta_symbol(g), mode(g, 3));
    GridFunction expect(g);
    for (std::size_t m = 0; m < g.points(); ++m)
      expect.values[m] = 3.0 * mode(g, 3).values[m];
    CHECK(gf_dist(y, expect) < 1e-11);
  }
  SUBCASE("symbol recovery: OP(e^{-ix}) e^{i3x} = e^{i2x}") {
    GridFunction y = quantize(eix(g), mode(g, 3));
    CHECK(gf_dist(y, mode(g, 2)) < 1e-12);
  }
  SUBCASE("two quantization routes agree") {
    Symbol a = ching(0.0, 0, 1, 5, g);
    GridFunction y1 = quantize(a, u);
    GridFunction y2 = quantize_freq(a, u);
    CHECK(gf_dist(y1, y2) <= 1e-10 * sup_norm(y1));
  }
  SUBCASE("linearity in u") {
    Symbol a = ching(0.0, 0, 1, 5, g);
    GridFunction v = random_band_limited(g, 100, 6);
    cplx al(0.3, 1.2), be(-2.0, 0.1);
    GridFunction w(g);
    for (std::size_t i = 0; i < w.values.size(); ++i)
      w.values[i] = al * u.values[i] + be * v.values[i];
    GridFunction lhs = quantize(a, w);
    GridFunction yu = quantize(a, u), yv = quantize(a, v);
    GridFunction rhs(g);
    for (std::size_t i = 0; i < rhs.values.size(); ++i)
      rhs.values[i] = al * yu.values[i] + be * yv.values[i];
    CHECK(gf_dist(lhs, rhs) <= 1e-12 * sup_norm(lhs));
  }
}

TEST_CASE("composition with constant-coefficient multipliers") {
  TorusGrid g = TorusGrid::make(1, 256);
  RadialCutoff psi = make_modulation();
  SUBCASE("a = e^{-ix}, b = eta on e^{i3x}") {
    Symbol c = compose_multiplier(eix(g), [](const LatticePoint& k) {
      return cplx(static_cast<double>(k[0]));
    }, 1.0);
    GridFunction lhs = quantize(c, mode(g, 3));
    GridFunction rhs = quantize(eix(g), multiplier_apply([](const LatticePoint& k) {
      return cplx(static_cast<double>(k[0]));
    }, mode(g, 3)));
    CHECK(gf_dist(lhs, rhs) < 1e-11);
    GridFunction expect(g);
    for (std::size_t m = 0; m < g.points(); ++m)
      expect.values[m] = 3.0 * mode(g, 2).values[m];
    CHECK(gf_dist(lhs, expect) < 1e-11);
  }
  SUBCASE("b = 1 collapses to a") {
    Symbol a = ching(0.0, 0, 1, 4, g);
    Symbol c = compose_multiplier(a, [](const LatticePoint&) { return cplx(1.0); });
    GridFunction u = random_band_limited(g, 80, 3);
    CHECK(gf_dist(quantize(c, u), quantize(a, u)) < 1e-12);
  }
  SUBCASE("a_j(x,D)u_k = OP(a_j phi(2^-k eta)) u") {
    Symbol a = ching(0.0, 0, 1, 5, g);
    GridFunction u = random_band_limited(g, 100, 9);
    const int j = 4, k = 3;
    Symbol aj = xmod_corona(a, psi, j);
    GridFunction uk = multiplier_apply([&psi, k](const LatticePoint& p) {
      return cplx(corona_at(psi, std::ldexp(std::abs(static_cast<double>(p[0])), -k)));
    }, u);
    GridFunction lhs = quantize(aj, uk);
    Symbol c = compose_multiplier(aj, [&psi, k](const LatticePoint& p) {
      return cplx(corona_at(psi, std::ldexp(std::abs(static_cast<double>(p[0])), -k)));
    });
    GridFunction rhs = quantize(c, u);
    CHECK(gf_dist(lhs, rhs) <= 1e-10 * std::max(1.0, sup_norm(lhs)));
  }
}

TEST_CASE("frequency-modulated operators") {
  TorusGrid g = TorusGrid::make(1, 256);
  RadialCutoff psi = make_modulation();
  Symbol a = ching(0.0, 0, 1, 5, g);
  GridFunction u = random_band_limited(g, 100, 4);
  SUBCASE("saturation: A_m = OP(a) once 2^m r covers the band") {
    int m = 8;  // 2^8 = 256 >= M/2 = 128
    CHECK(gf_dist(modulated_op(a, psi, m, u), quantize(a, u)) <= 1e-12 * sup_norm(u));
  }
  SUBCASE("m = 0 annihilates e^{i3x} (psi(3) = 0)") {
    CHECK(sup_norm(modulated_op(a, psi, 0, mode(g, 3))) < 1e-12);
  }
  SUBCASE("exact stabilization invariant") {
    GridFunction a8 = modulated_op(a, psi, 8, u);
    GridFunction a9 = modulated_op(a, psi, 9, u);
    CHECK(gf_dist(a8, a9) == 0.0);  // identical weights: bit-identical results
  }
}

TEST_CASE("modulation limit probe") {
  TorusGrid g = TorusGrid::make(1, 256);
  std::vector<RadialCutoff> psis = {make_modulation(1.0, 2.0), make_modulation(1.5, 3.0)};
  SUBCASE("stabilization within the bound, cross-psi agreement") {
    Symbol a = ching(0.0, 0, 1, 5, g);
    GridFunction u = random_band_limited(g, 64, 12);
    LimitProbeReport rep = modulation_limit_probe(a, u, psis, 10);
    for (int m0 : rep.m0) {
      CHECK(m0 >= 0);
      CHECK(m0 <= rep.stabilization_bound);
    }
    CHECK(rep.cross_psi_discrepancy <= 1e-12 * l2_norm(u));
  }
  SUBCASE("constant-coefficient: limit equals OP(a)u for every psi") {
    Symbol a = multiplier_symbol(g, 0.0, full_band(g), [](const LatticePoint& k) {
      return cplx(std::cos(0.1 * k[0]));
    });
    GridFunction u = random_band_limited(g, 64, 13);
    LimitProbeReport rep = modulation_limit_probe(a, u, psis, 10);
    GridFunction ref = quantize(a, u);
    for (const auto& lim : rep.limits) CHECK(gf_dist(lim, ref) <= 1e-12 * sup_norm(ref));
  }
  SUBCASE("rejects fewer than two modulation functions") {
    Symbol a = one_symbol(g);
    GridFunction u = mode(g, 1);
    std::vector<RadialCutoff> single = {make_modulation()};
    CHECK_THROWS_AS(modulation_limit_probe(a, u, single, 4), std::invalid_argument);
  }
}

TEST_CASE("kernels") {
  TorusGrid g = TorusGrid::make(1, 64);
  RadialCutoff psi = make_modulation();
  SUBCASE("identity symbol gives the lattice delta") {
    Kernel K = kernel(one_symbol(g));
    for (int x = 0; x < g.M; ++x)
      for (int y = 0; y < g.M; ++y) {
        cplx expect = (x == y) ? cplx(g.M / two_pi) : cplx(0.0);
        CHECK(std::abs(K.at(x, y) - expect) <= 1e-10 * (g.M / two_pi));
      }
  }
  SUBCASE("multiplication by e^{-ix}") {
    Kernel K = kernel(eix(g));
    for (int x = 0; x < g.M; ++x) {
      cplx diag = std::polar(1.0, -g.node(x)[0]) * cplx(g.M / two_pi);
      CHECK(std::abs(K.at(x, x) - diag) <= 1e-10 * (g.M / two_pi));
    }
  }
  SUBCASE("two routes to the modulated kernel agree (m = 3)") {
    Symbol a = ching(0.0, 0, 1, 3, g);
    Kernel A = kernel_m_symbol_route(a, psi, 3);
    Kernel B = kernel_m_convolution_route(a, psi, 3);
    double mx = 0, err = 0;
    for (std::size_t i = 0; i < A.values.size(); ++i) {
      mx = std::max(mx, std::abs(A.values[i]));
      err = std::max(err, std::abs(A.values[i] - B.values[i]));
    }
    CHECK(err <= 1e-10 * mx);
  }
}

TEST_CASE("operator matrices and norms") {
  TorusGrid g = TorusGrid::make(1, 256);
  SUBCASE("identity symbol: unit L2 norm") {
    OperatorMatrix m = operator_matrix(one_symbol(g), EtaBand{-32, 32}, EtaBand{-32, 32});
    NormEstimate ne = operator_norm(m, 0.0, 0.0);
    CHECK(ne.converged);
    CHECK(ne.value == doctest::Approx(1.0).epsilon(1e-7));
  }
  SUBCASE("frequency shift: unitary on L2") {
    OperatorMatrix m = operator_matrix(eix(g), EtaBand{-32, 32}, EtaBand{-33, 32});
    NormEstimate ne = operator_norm(m, 0.0, 0.0);
    CHECK(ne.value == doctest::Approx(1.0).epsilon(1e-7));
  }
  SUBCASE("matrix route matches quantization") {
    Symbol a = ching(0.0, 0, 1, 4, g);
    EtaBand eb{-24, 24}, zb{-56, 32};
    OperatorMatrix m = operator_matrix(a, eb, zb);
    GridFunction u = random_band_limited(g, 24, 21);
    Spectrum su = transform(u);
    std::vector<cplx> xhat(m.ncols());
    for (std::size_t j = 0; j < m.ncols(); ++j) xhat[j] = su.at(m.col_at(j)[0]);
    std::vector<cplx> yhat = matrix_apply(m, xhat);
    Spectrum sy = transform(quantize(a, u));
    double err = 0, mx = 0;
    for (std::size_t i = 0; i < m.nrows(); ++i) {
      mx = std::max(mx, std::abs(yhat[i]));
      err = std::max(err, std::abs(yhat[i] - sy.at(m.row_at(i)[0])));
    }
    CHECK(err <= 1e-10 * mx);
  }
  SUBCASE("Ching truncation norms equal sqrt(J+1) exactly") {
    // Each input bin feeds a single output bin; the preimage of zeta = 0
    // collects one unit weight per dyadic level, so the top singular value
    // is sqrt(J+1).  This is the independent oracle for the power iteration.
    for (int J : {3, 4, 5}) {
      Symbol a = ching(0.0, 0, 1, J, g);
      int B = 5 * (1 << J) / 4;
      OperatorMatrix m = operator_matrix(a, EtaBand{-B, B}, EtaBand{-B - (1 << J), B});
      NormEstimate ne = operator_norm(m, 0.0, 0.0);
      CHECK(ne.converged);
      CHECK(ne.value == doctest::Approx(std::sqrt(J + 1.0)).epsilon(1e-6));
    }
  }
#ifdef PDO_HAVE_EIGEN
  SUBCASE("power iteration matches a dense SVD oracle") {
    TorusGrid gs = TorusGrid::make(1, 64);
    Symbol a = random_symbol(gs, 0.0, full_band(gs), 8, 99);
    OperatorMatrix m = operator_matrix(a, EtaBand{-16, 16}, EtaBand{-24, 24});
    NormEstimate ne = operator_norm(m, 1.0, -0.5);
    Eigen::MatrixXcd E(m.nrows(), m.ncols());
    for (std::size_t i = 0; i < m.nrows(); ++i) {
      double wo = std::pow(1.0 + std::pow(m.row_at(i)[0], 2), -0.25);
      for (std::size_t j = 0; j < m.ncols(); ++j) {
        double wi = std::pow(1.0 + std::pow(m.col_at(j)[0], 2), -0.5);
        E(i, j) = m.at(i, j) * wo * wi;
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(E);
    CHECK(ne.value == doctest::Approx(svd.singularValues()(0)).epsilon(1e-6));
  }
#endif
}

TEST_CASE("adjoint pairing identity") {
  TorusGrid g = TorusGrid::make(1, 256);
  Symbol a = ching(0.0, 0, 1, 4, g);  // x-band 16
  AdjointSymbol adj = adjoint_symbol(a);
  GridFunction u = random_band_limited(g, 48, 31);
  GridFunction v = random_band_limited(g, 48, 32);
  cplx lhs = inner(quantize(a, u), v);
  cplx rhs = inner(u, quantize(adj.symbol, v));
  CHECK(std::abs(lhs - rhs) <= 1e-10 * l2_norm(u) * l2_norm(v));
}

TEST_CASE("commutator identity") {
  TorusGrid g = TorusGrid::make(1, 256);
  RadialCutoff psi = make_modulation();
  SUBCASE("constant coefficients commute") {
    Symbol a = multiplier_symbol(g, 0.0, full_band(g), [](const LatticePoint& k) {
      return cplx(1.0 / (1.0 + std::abs(k[0])));
    });
    CHECK(commutator_defect(a, random_band_limited(g, 60, 41)) < 1e-12);
  }
  SUBCASE("a = e^{-ix} on e^{i3x}") {
    CHECK(commutator_defect(eix(g), mode(g, 3)) < 1e-12);
  }
  SUBCASE("modulated Ching") {
    Symbol am = modulated_symbol(ching(0.0, 0, 1, 5, g), psi, 3);
    CHECK(commutator_defect(am, random_band_limited(g, 64, 42)) < 1e-10);
  }
  SUBCASE("rejects inputs without headroom") {
    CHECK_THROWS_AS(commutator_defect(eix(g), mode(g, g.M / 2 - 1)),
                    std::invalid_argument);
  }
}
