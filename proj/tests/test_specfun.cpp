#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle_bessel.hpp"
#include "pscat/specfun.hpp"

using namespace pscat;
using namespace pscat::specfun;

TEST_CASE("J0 and Y0 at reference points") {
  CHECK(bessel_j0(0.0) == 1.0);
  // 100-digit series oracle: J0(1) = 0.765197686557967, Y0(1) = 0.088256964215677
  const auto [j, y] = bessel_j0_y0(1.0);
  CHECK(j == doctest::Approx(0.765197686557967).epsilon(1e-13));
  CHECK(y == doctest::Approx(0.088256964215677).epsilon(1e-13));
  CHECK(std::abs(j - 0.7651976866) < 1e-10);
  CHECK(std::abs(y - 0.0882569642) < 1e-10);
}

TEST_CASE("Y0 logarithmic behaviour near zero") {
  const double x = 1e-4;
  const double lead = (2.0 / kPi) * (std::log(0.5 * x) + kEulerGamma);
  CHECK(std::abs(bessel_j0_y0(x).second - lead) < 1e-7);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(bessel_j0_y0(0.0), DomainError);
  CHECK_THROWS_AS(bessel_j0_y0(-1.0), DomainError);
  CHECK_THROWS_AS(hankel1_0(0.0), DomainError);
  CHECK_THROWS_AS(bessel_j0(-0.5), DomainError);
}

TEST_CASE("agreement with the high-precision oracle") {
  double worst = 0.0;
  for (int i = 0; i < 300; ++i) {
    const double x = 1e-3 * std::pow(5e4, i / 299.0);
    const auto got = bessel_j0_y0(x);
    const auto want = oracle::bessel_j0_y0(x);
    worst = std::max({worst, std::abs(got.first - want.first), std::abs(got.second - want.second)});
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("branches agree across both switch points") {
  for (double x = kSeriesMax - 0.5; x <= kSeriesMax + 0.5; x += 0.05) {
    const auto a = detail::j0_y0_series(x);
    const auto b = detail::j0_y0_miller(x);
    CHECK(std::abs(a.first - b.first) < 1e-9);
    CHECK(std::abs(a.second - b.second) < 1e-9);
  }
  for (double x = kAsymptoticMin - 1.0; x <= kAsymptoticMin + 1.0; x += 0.1) {
    const auto a = detail::j0_y0_miller(x);
    const auto b = detail::j0_y0_asymptotic(x);
    CHECK(std::abs(a.first - b.first) < 1e-9);
    CHECK(std::abs(a.second - b.second) < 1e-9);
  }
}

TEST_CASE("Wronskian J0 Y0' - J0' Y0 = 2/(pi x)") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(0.1, 40.0);
  for (int i = 0; i < 50; ++i) {
    const double x = dist(rng);
    const double h = 1e-5;
    const auto p = bessel_j0_y0(x + h);
    const auto m = bessel_j0_y0(x - h);
    const auto c = bessel_j0_y0(x);
    const double dj = (p.first - m.first) / (2 * h);
    const double dy = (p.second - m.second) / (2 * h);
    CHECK(std::abs(c.first * dy - dj * c.second - 2.0 / (kPi * x)) < 1e-6);
  }
}

TEST_CASE("Hankel function") {
  const Complex h = hankel1_0(1.0);
  CHECK(std::abs(h - Complex(0.765197686557967, 0.088256964215677)) < 1e-13);
  // modulus ~ sqrt(2/(pi x)) at x = 100
  CHECK(std::abs(std::abs(hankel1_0(100.0)) / std::sqrt(2.0 / (kPi * 100.0)) - 1.0) < 1e-2);
  CHECK(hankel1_0(1e-3).imag() < 0.0);
  // The first correction of the far-field form is -i/(8x) relative, so the
  // relative deviation is 1/(8x) + O(x^-2).
  for (double x : {20.0, 35.0, 60.0, 200.0, 1e4}) {
    const Complex far = std::sqrt(2.0 / (kPi * x)) * std::exp(kI * (x - kPi / 4.0));
    const double rel = std::abs(hankel1_0(x) - far) / std::abs(far);
    CHECK(rel <= 0.13 / x);
    CHECK(rel * 8.0 * x == doctest::Approx(1.0).epsilon(0.05));
  }
}
