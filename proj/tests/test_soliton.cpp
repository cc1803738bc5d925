#include <algorithm>
#include <random>

#include "doctest.h"
#include "pscat/multipoint.hpp"
#include "pscat/scattering.hpp"
#include "pscat/soliton1d.hpp"

using namespace pscat;
using namespace pscat::soliton;

namespace {

std::vector<double> random_kappas(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.1, 5.0);
  std::vector<double> k;
  while (k.size() < n) {
    const double c = u(rng);
    if (std::all_of(k.begin(), k.end(), [&](double x) { return std::abs(x - c) > 1e-3; })) k.push_back(c);
  }
  return k;
}

double sech2(double x) { return 1.0 / (std::cosh(x) * std::cosh(x)); }

// ln det(I + C(x)) by Gaussian elimination in long double.
long double log_det(const SolitonSpectrum& spec, long double x) {
  const auto& k = spec.kappas();
  const auto& c = spec.normings();
  const std::size_t n = k.size();
  std::vector<long double> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a[i * n + j] = (i == j ? 1.0L : 0.0L) + c[i] * c[j] * std::exp(-(k[i] + k[j]) * x) / (k[i] + k[j]);
  long double ld = 0.0L;
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t piv = p;
    for (std::size_t i = p + 1; i < n; ++i)
      if (std::abs(a[i * n + p]) > std::abs(a[piv * n + p])) piv = i;
    for (std::size_t j = 0; j < n; ++j) std::swap(a[p * n + j], a[piv * n + j]);
    ld += std::log(std::abs(a[p * n + p]));
    for (std::size_t i = p + 1; i < n; ++i) {
      const long double f = a[i * n + p] / a[p * n + p];
      for (std::size_t j = p; j < n; ++j) a[i * n + j] -= f * a[p * n + j];
    }
  }
  return ld;
}

}  // namespace

TEST_CASE("transmission coefficient") {
  CHECK(std::abs(transmission_T(SolitonSpectrum({1.0}), 1.0) - kI) < 1e-15);
  CHECK_THROWS_AS(transmission_T(SolitonSpectrum({1.0}), 0.0), DomainError);
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> kk(0.01, 20.0);
  for (int t = 0; t < 100; ++t) {
    const SolitonSpectrum spec(random_kappas(rng, 1 + t % 9));
    const double k = kk(rng);
    const Complex tk = transmission_T(spec, k);
    CHECK(std::abs(std::abs(tk) - 1.0) < 1e-14);
    CHECK(std::abs(std::polar(1.0, transmission_phase(spec, k)) - tk) < 1e-12);
  }
}

TEST_CASE("spectrum validation") {
  CHECK_THROWS_AS(SolitonSpectrum({}), PreconditionError);
  CHECK_THROWS_AS(SolitonSpectrum({1.0, 1.0}), PreconditionError);
  CHECK_THROWS_AS(SolitonSpectrum({1.0, -2.0}), PreconditionError);
  CHECK_THROWS_AS(SolitonSpectrum({1.0, 2.0}, {1.0}), PreconditionError);
  const SolitonSpectrum s({1.0, 3.0, 2.0});
  CHECK(s.kappas() == std::vector<double>{3.0, 2.0, 1.0});
}

TEST_CASE("property: transparency count law") {
  std::mt19937_64 rng(62);
  for (std::size_t n = 1; n <= 12; ++n) {
    for (int t = 0; t < 50; ++t) {
      const SolitonSpectrum spec(random_kappas(rng, n));
      const auto energies = transparency_energies(spec);
      CHECK(energies.size() == (n - 1) / 2);
      for (std::size_t m = 0; m < energies.size(); ++m) {
        if (m > 0) CHECK(energies[m] > energies[m - 1]);
        CHECK(std::abs(transmission_T(spec, std::sqrt(energies[m])) - 1.0) < 1e-12);
      }
    }
  }
}

TEST_CASE("transparency goldens") {
  CHECK(transparency_energies(SolitonSpectrum({2.0})).empty());
  CHECK(transparency_energies(SolitonSpectrum({2.0, 0.5})).empty());
  const double eps = 1e-6;
  const auto triple = transparency_energies(SolitonSpectrum({1.0, 1.0 + eps, 1.0 - eps}));
  REQUIRE(triple.size() == 1);
  CHECK(std::abs(triple[0] - 1.0 / 3.0) < 1e-5);
  const auto five = transparency_energies(SolitonSpectrum({1, 2, 3, 4, 5}));
  REQUIRE(five.size() == 2);
  CHECK(five[0] == doctest::Approx(0.553778005275095).epsilon(1e-12));
  CHECK(five[1] == doctest::Approx(14.4462219947248).epsilon(1e-12));
}

TEST_CASE("reflectionless potentials") {
  const SolitonSpectrum one({1.0});
  const SolitonSpectrum two({1.0, 2.0});
  const SolitonSpectrum three({1.0, 2.0, 3.0});
  for (double x : {-30.0, -3.0, -0.4, 0.0, 0.7, 2.5, 30.0}) {
    CHECK(std::abs(nsoliton_potential(one, x) + 2.0 * sech2(x)) < 1e-14);
    CHECK(std::abs(nsoliton_potential(two, x) + 6.0 * sech2(x)) < 1e-13);
    CHECK(std::abs(nsoliton_potential(three, x) + 12.0 * sech2(x)) < 1e-12);
  }
  double lowest = 0.0;
  for (double x = -3.0; x <= 3.0; x += 1e-3) lowest = std::min(lowest, nsoliton_potential(two, x));
  CHECK(lowest == doctest::Approx(-6.0).epsilon(1e-12));
  CHECK(nsoliton_potential(SolitonSpectrum({1.0}, {2.0}), 0.0) < 0.0);

  std::mt19937_64 rng(63);
  std::uniform_real_distribution<double> c(0.3, 3.0);
  std::uniform_real_distribution<double> xs(-4.0, 4.0);
  for (int t = 0; t < 20; ++t) {
    const auto kap = random_kappas(rng, 1 + t % 4);
    std::vector<double> norms;
    for (std::size_t i = 0; i < kap.size(); ++i) norms.push_back(c(rng));
    const SolitonSpectrum spec(kap, norms);
    const double x = xs(rng);
    const long double h = 1e-4L;
    const long double fd = -2.0L * (log_det(spec, x + h) - 2.0L * log_det(spec, x) + log_det(spec, x - h)) / (h * h);
    CHECK(std::abs(nsoliton_potential(spec, x) - static_cast<double>(fd)) < 1e-5 * (1.0 + std::abs(static_cast<double>(fd))));
    if (kap.size() == 1) CHECK(nsoliton_potential(spec, x) < 0.0);
  }
  const auto sampled = sample_nsoliton(SolitonSpectrum({0.4, 1.5}), 0.01);
  CHECK(std::abs(sampled.values.front()) < 1e-12);
  CHECK(std::abs(sampled.values.back()) < 1e-12);
}

TEST_CASE("ODE solver") {
  SUBCASE("free propagation is exact") {
    SampledPotential1D zero;
    zero.x0 = -5.0;
    zero.h = 0.01;
    zero.values.assign(1001, 0.0);
    for (double k : {0.1, 1.0, 7.0}) {
      const auto s = scatter1d_numeric(zero, k);
      CHECK(s.transmission == Complex(1.0));
      CHECK(s.reflection == Complex(0.0));
    }
  }
  SUBCASE("square well against the closed form") {
    const double depth = 3.0;
    const double b = 0.75;
    const auto well = square_well(depth, b, 3.0, 1e-4);
    for (double k : {0.5, 1.0, 2.5}) {
      const double q = std::sqrt(k * k + depth);
      const Complex t = std::exp(-2.0 * kI * (k * b)) /
                        (std::cos(2.0 * q * b) - kI * ((k * k + q * q) / (2.0 * k * q)) * std::sin(2.0 * q * b));
      const auto s = scatter1d_numeric(well, k);
      CHECK(std::abs(s.transmission - t) < 1e-6);
      CHECK(std::abs(std::norm(s.transmission) + std::norm(s.reflection) - 1.0) < 1e-6);
    }
  }
  SUBCASE("under-resolved grid") {
    const auto well = square_well(1.0, 0.5, 2.0, 0.1);
    CHECK_THROWS_AS(scatter1d_numeric(well, 10.0), PreconditionError);
  }
  SUBCASE("two-soliton potential is reflectionless") {
    const SolitonSpectrum spec({1.0, 2.0});
    const auto v = sample_nsoliton(spec, 0.005);
    for (double k = 0.2; k <= 10.0; k *= 1.25) {
      const auto s = scatter1d_numeric(v, k);
      CHECK(std::abs(s.reflection) < 1e-4);
      CHECK(std::abs(s.transmission - transmission_T(spec, k)) < 1e-3);
    }
  }
}

TEST_CASE("point transmission and the delta limit") {
  for (double alpha : {-1.0, 0.5, 3.0}) {
    for (double k : {0.4, 1.0}) {
      const Complex t = point_transmission(alpha, k);
      CHECK(std::abs(t - 2.0 * kI * k * alpha / (2.0 * kI * k * alpha + 1.0)) < 1e-15);
      // forward amplitude of the one-point model
      const MultipointPotential pot(1, {{Vec{}, alpha}});
      const Complex fwd = amplitude_fplus(pot, Vec{k, 0, 0}, Vec{k, 0, 0}).fplus;
      CHECK(std::abs(t - (1.0 + fwd)) < 1e-14);
    }
  }
  for (double alpha : {0.5, 1.0, 2.0}) {
    const double ratio = delta_limit_error(alpha, 200) / delta_limit_error(alpha, 100);
    CHECK(ratio >= 0.4);
    CHECK(ratio <= 0.62);
  }
  CHECK(delta_limit_error(1e8, 50) < 1e-6);
  CHECK(std::abs(point_transmission(1e12, 1.0) - 1.0) < 1e-11);
  CHECK_THROWS_AS(delta_limit_error(0.0, 100), PreconditionError);
  CHECK_THROWS_AS(delta_limit_error(1.0, 5), PreconditionError);
}
