#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "pscat/soperator.hpp"

using namespace pscat;

TEST_CASE("quadrature invariants") {
  for (std::size_t m : {8u, 16u, 64u, 129u}) {
    const auto q = build_quadrature(2, m);
    double sum = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      sum += q.weights[i];
      CHECK(std::abs(norm(q.nodes[i]) - 1.0) < 1e-14);
    }
    CHECK(std::abs(sum - 2.0 * kPi) < 1e-12);
  }
  const auto q16 = build_quadrature(2, 16);
  CHECK(q16.nodes[3][0] == doctest::Approx(std::cos(2.0 * kPi * 3 / 16)));
  CHECK(q16.weights[5] == doctest::Approx(2.0 * kPi / 16));

  const auto q1 = build_quadrature(1, 99);
  REQUIRE(q1.size() == 2);
  CHECK(q1.nodes[0][0] == 1.0);
  CHECK(q1.nodes[1][0] == -1.0);
  CHECK(q1.weights[0] + q1.weights[1] == 2.0);

  const auto q3 = build_quadrature_3d(12, 24);
  double area = 0.0;
  double second = 0.0;
  double degree10 = 0.0;
  for (std::size_t i = 0; i < q3.size(); ++i) {
    CHECK(std::abs(norm(q3.nodes[i]) - 1.0) < 1e-14);
    area += q3.weights[i];
    second += q3.weights[i] * q3.nodes[i][2] * q3.nodes[i][2];
    degree10 += q3.weights[i] * std::pow(q3.nodes[i][0] * q3.nodes[i][1], 4) * q3.nodes[i][2] * q3.nodes[i][2];
  }
  CHECK(std::abs(area - 4.0 * kPi) < 1e-12);
  CHECK(std::abs(second - 4.0 * kPi / 3.0) < 1e-12);
  // integral of x^4 y^4 z^2 over the unit sphere
  const double exact = 2.0 * std::pow(std::tgamma(2.5), 2) * std::tgamma(1.5) / std::tgamma(6.5);
  CHECK(std::abs(degree10 - exact) < 1e-14);

  CHECK(build_quadrature(3, 288).size() == 288);
  CHECK_THROWS_AS(build_quadrature(2, 7), PreconditionError);
  CHECK_THROWS_AS(build_quadrature(3, 100), PreconditionError);

  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(5, x, w);
  CHECK(x[0] == doctest::Approx(-0.906179845938664).epsilon(1e-14));
  CHECK(w[2] == doctest::Approx(128.0 / 225.0).epsilon(1e-14));
}

TEST_CASE("empty potential gives the identity") {
  for (int d = 1; d <= 3; ++d) {
    const auto quad = build_quadrature(d, d == 3 ? 32 : 16);
    const auto s = build_soperator(MultipointPotential::empty(d), 1.0, quad);
    CHECK(linalg::max_abs(s - linalg::CMatrix::identity(quad.size())) == 0.0);
    const auto report = singular_spectrum(s, 0);
    for (double sv : report.sigma) CHECK(sv == 0.0);
    CHECK(report.rank_estimate == 0);
    CHECK(unitarity_defect(s) == 0.0);
    const auto kb = kernel_basis(MultipointPotential::empty(d), 1.0, quad);
    CHECK(kb.basis.cols() == quad.size());
  }
}

TEST_CASE("d = 1 reproduces the delta-scatterer transmission and reflection") {
  for (double alpha : {-0.7, 0.3, 2.0}) {
    for (double y : {0.0, 0.45}) {
      const double k = 1.3;
      const MultipointPotential pot(1, {{Vec{y, 0, 0}, alpha}});
      const auto s = build_soperator(pot, k * k, build_quadrature(1, 2));
      // v = c delta(x - y) with c = -1/alpha: t = 2ik/(2ik - c), r = c e^{2iky}/(2ik - c).
      const double c = -1.0 / alpha;
      const Complex t = 2.0 * kI * k / (2.0 * kI * k - c);
      const Complex r = c * std::exp(2.0 * kI * (k * y)) / (2.0 * kI * k - c);
      CHECK(std::abs(s(0, 0) - t) < 1e-14);
      CHECK(std::abs(s(1, 1) - t) < 1e-14);
      CHECK(std::abs(s(1, 0) - r) < 1e-14);
      CHECK(std::abs(std::abs(s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0)) - 1.0) < 1e-14);
      CHECK(unitarity_defect(s) < 1e-14);
    }
  }
}

TEST_CASE("a single scatterer has rank one") {
  const MultipointPotential pot(2, {{Vec{0.3, -0.2, 0}, 0.4}});
  const auto report = singular_spectrum(build_soperator(pot, 1.0, build_quadrature(2, 64)), 1);
  CHECK(report.rank_estimate == 1);
  CHECK(report.sigma[1] < 1e-14 * report.sigma[0]);
}

TEST_CASE("property: rank law and kernel completeness") {
  std::mt19937_64 rng(41);
  for (int d = 1; d <= 3; ++d) {
    const auto quad = build_quadrature(d, d == 2 ? 48 : 72);
    for (double energy : {0.3, 1.0, 6.0}) {
      for (std::size_t n : {1u, 2u, 4u}) {
        const auto pot = gen::random_potential(rng, d, n);
        const auto s = build_soperator(pot, energy, quad);
        const auto report = singular_spectrum(s, n);
        CHECK(report.rank_law_holds());
        const auto kb = kernel_basis(pot, energy, quad);
        CHECK(kb.basis.cols() + report.rank_estimate == quad.size());
        CHECK(kb.rank_q == std::min(n, quad.size()));
        CHECK(kb.residual < 1e-10);
        CHECK(unitarity_defect(s) < (d == 3 ? 1e-4 : 1e-8));
      }
    }
  }
}

TEST_CASE("n = 2, d = 2, E = 1, M = 64") {
  const MultipointPotential pot(2, {{Vec{0.5, 0, 0}, 0.2}, {Vec{-0.3, 0.4, 0}, -0.5}});
  const auto report = singular_spectrum(build_soperator(pot, 1.0, build_quadrature(2, 64)), 2);
  CHECK(report.rank_estimate == 2);
  CHECK(report.tail_ratio() < 1e-10);
}

TEST_CASE("refinement stability") {
  std::mt19937_64 rng(43);
  const auto pot = gen::random_potential(rng, 2, 3);
  const auto a = singular_spectrum(build_soperator(pot, 2.0, build_quadrature(2, 64)), 3);
  const auto b = singular_spectrum(build_soperator(pot, 2.0, build_quadrature(2, 128)), 3);
  CHECK(a.rank_estimate == b.rank_estimate);
  CHECK(std::abs(a.sigma[0] - b.sigma[0]) < 1e-6 * a.sigma[0]);
  const auto k64 = kernel_basis(pot, 2.0, build_quadrature(2, 64));
  const auto k128 = kernel_basis(pot, 2.0, build_quadrature(2, 128));
  CHECK(k128.basis.cols() - k64.basis.cols() == 64);
}

TEST_CASE("complex alpha breaks unitarity") {
  PotentialOptions opts;
  opts.allow_complex_alpha = true;
  const auto quad = build_quadrature(2, 32);
  const MultipointPotential real(2, {{Vec{}, Complex(0.2, 0.0)}}, opts);
  const MultipointPotential lossy(2, {{Vec{}, Complex(0.2, 0.3)}}, opts);
  CHECK(unitarity_defect(build_soperator(real, 1.0, quad)) < 1e-12);
  CHECK(unitarity_defect(build_soperator(lossy, 1.0, quad)) > 1e-2);
}
