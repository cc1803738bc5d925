#include <cmath>
#include <vector>

#include "doctest.h"
#include "pscat/greens.hpp"
#include "pscat/specfun.hpp"

using namespace pscat;
using namespace pscat::greens;

TEST_CASE("closed forms") {
  const Complex g3 = green_plus(3, 1.0, 1.0);
  CHECK(std::abs(g3 - (-std::exp(kI) / (4.0 * kPi))) < 1e-15);
  CHECK(g3.real() == doctest::Approx(-0.04299).epsilon(1e-3));
  CHECK(g3.imag() == doctest::Approx(-0.06696).epsilon(1e-3));

  const Complex g1 = green_plus(1, 2.0, 1.0);
  CHECK(std::abs(g1 - Complex(std::sin(2.0) / 2.0, -std::cos(2.0) / 2.0)) < 1e-15);

  // J0(1), Y0(1) from the 100-digit series oracle
  const Complex g2 = green_plus(2, 1.0, 1.0);
  CHECK(std::abs(g2 - (-0.25 * kI) * Complex(0.765197686557967, 0.088256964215677)) < 1e-14);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(green_plus(3, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(green_plus(2, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(green_plus(1, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(green_plus(4, 1.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(green_local_expansion(2, -1.0), DomainError);
  CHECK_THROWS_AS(green_farfield_coeff(3, 0.0), DomainError);
  CHECK_THROWS_AS(helmholtz_residual(3, Vec{1e-3, 0, 0}, 1.0, 1e-3), PreconditionError);
}

TEST_CASE("local expansion coefficients") {
  const auto e3 = green_local_expansion(3, 1.0);
  CHECK(std::abs(e3.singular_coeff + 1.0 / (4.0 * kPi)) < 1e-16);
  CHECK(std::abs(e3.regular_coeff - (-kI / (4.0 * kPi))) < 1e-16);

  const auto e2a = green_local_expansion(2, 1.0);
  const auto e2b = green_local_expansion(2, 4.0);
  CHECK(std::abs(e2a.singular_coeff - 1.0 / (2.0 * kPi)) < 1e-16);
  CHECK(std::abs(e2b.singular_coeff - 1.0 / (2.0 * kPi)) < 1e-16);
  CHECK(std::abs((e2b.regular_coeff - e2a.regular_coeff) - std::log(2.0) / (2.0 * kPi)) < 1e-15);
  CHECK(std::abs(e2a.regular_coeff - (-0.25 * kI + (specfun::kEulerGamma - std::log(2.0)) / (2.0 * kPi))) < 1e-15);

  const auto e1 = green_local_expansion(1, 4.0);
  CHECK(std::abs(e1.regular_coeff - 1.0 / (2.0 * kI * 2.0)) < 1e-16);
  // dG/dr at 0+ is 1/2, so the jump of dG/dx across 0 is 1.
  const double h = 1e-7;
  const Complex slope = (green_plus(1, 2 * h, 4.0) - green_plus(1, h, 4.0)) / h;
  CHECK(std::abs(2.0 * slope - e1.singular_coeff) < 1e-6);
}

TEST_CASE("local expansion matches the Green function near the origin") {
  for (double energy : {0.5, 1.0, 3.0}) {
    const auto e3 = green_local_expansion(3, energy);
    auto err3 = [&](double r) { return std::abs(green_plus(3, r, energy) - (e3.singular_coeff / r + e3.regular_coeff)); };
    // O(r): halving r halves the error
    CHECK(err3(1e-3) / err3(2e-3) == doctest::Approx(0.5).epsilon(0.01));

    const auto e2 = green_local_expansion(2, energy);
    auto err2 = [&](double r) {
      return std::abs(green_plus(2, r, energy) - (e2.singular_coeff * std::log(r) + e2.regular_coeff));
    };
    for (double r : {1e-2, 1e-3}) CHECK(err2(r) < r * r * (1.0 + std::abs(std::log(r))) * energy);
    CHECK(err2(1e-3) < err2(1e-2) / 50.0);
  }
}

TEST_CASE("far-field coefficient and amplitude normalization") {
  CHECK(std::abs(green_farfield_coeff(3, 0.3) + 1.0 / (4.0 * kPi)) < 1e-17);
  CHECK(std::abs(green_farfield_coeff(3, 7.0) + 1.0 / (4.0 * kPi)) < 1e-17);
  const Complex a2 = -0.25 * kI * std::sqrt(2.0 / kPi) * std::exp(Complex(0.0, -kPi / 4.0));
  CHECK(std::abs(green_farfield_coeff(2, 1.0) - a2) < 1e-16);

  CHECK(std::abs(amplitude_normalization(3, 0.7) + 2.0 * kPi * kPi) < 1e-13);
  CHECK(std::abs(amplitude_normalization(1, 2.0) - (-kPi * kI / 2.0)) < 1e-15);
  CHECK(std::abs(amplitude_normalization(2, 4.0)) == doctest::Approx(kPi * std::sqrt(2.0 * kPi) / 2.0));

  for (int d = 1; d <= 3; ++d)
    for (double kappa : {0.1, 0.5, 1.0, 2.0, 10.0})
      CHECK(std::abs(green_farfield_coeff(d, kappa) * std::pow(2.0 * kPi, d) / amplitude_normalization(d, kappa) - 1.0) < 1e-14);
}

TEST_CASE("Sommerfeld outgoing phase") {
  for (int d : {1, 3}) {
    const double kappa = 1.3;
    const Complex ref = green_plus(d, 1.0, kappa * kappa) * std::exp(-kI * kappa);
    for (double r : {2.0, 7.5, 40.0}) {
      const Complex z = green_plus(d, r, kappa * kappa) * std::exp(-kI * (kappa * r));
      CHECK(std::abs(std::arg(z) - std::arg(ref)) < 1e-12);
    }
  }
  // d = 2: phase tends to that of -(i/4) sqrt(2/(pi kappa r)) e^{-i pi/4}
  const Complex z = green_plus(2, 100.0, 1.0) * std::exp(-kI * 100.0);
  CHECK(std::abs(std::arg(z) - std::arg(green_farfield_coeff(2, 1.0))) < 1e-3 * 2 * kPi);
}

TEST_CASE("far-field remainder decays one power faster") {
  const double kappa = 1.0;
  for (int d : {1, 3}) {
    const Complex a = green_farfield_coeff(d, kappa);
    for (double r : {10.0, 100.0, 1000.0}) {
      const Complex main = a * std::exp(kI * (kappa * r)) * std::pow(r, -0.5 * (d - 1));
      CHECK(std::abs(green_plus(d, r, 1.0) - main) <= 1e-15 * std::abs(main));
    }
  }
  // d = 2: remainder ~ r^{-3/2}; fit the slope of log(remainder / main) against log r.
  const Complex a = green_farfield_coeff(2, kappa);
  std::vector<double> xs;
  std::vector<double> ys;
  for (double r = 50.0; r <= 5000.0; r *= 1.5) {
    const Complex main = a * std::exp(kI * (kappa * r)) / std::sqrt(r);
    xs.push_back(std::log(r));
    ys.push_back(std::log(std::abs(green_plus(2, r, 1.0) - main) / std::abs(main)));
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(-1.0).epsilon(0.3));
}

TEST_CASE("Helmholtz residual of the Green function") {
  const double r3 = helmholtz_residual(3, Vec{2.0, 0.0, 0.0}, 1.0, 1e-3);
  CHECK(r3 < 1e-4);
  const Vec x{1.2, -0.9, 0.7};
  const double coarse = helmholtz_residual(3, x, 1.0, 2e-2);
  const double fine = helmholtz_residual(3, x, 1.0, 1e-2);
  CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.2));
  CHECK(helmholtz_residual(1, Vec{1.5, 0.0, 0.0}, 1.0, 1e-3) < 1e-6);
  CHECK(helmholtz_residual(2, Vec{1.5, 0.4, 0.0}, 2.0, 1e-3) < 1e-4);
  const double c2 = helmholtz_residual(2, Vec{1.5, 0.4, 0.0}, 2.0, 4e-2);
  const double f2 = helmholtz_residual(2, Vec{1.5, 0.4, 0.0}, 2.0, 2e-2);
  CHECK(c2 / f2 == doctest::Approx(4.0).epsilon(0.2));
}
