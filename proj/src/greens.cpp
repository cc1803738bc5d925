#include "pscat/greens.hpp"

#include <string>

#include "pscat/specfun.hpp"

namespace pscat::greens {

namespace {

void check_energy(double energy) {
  if (!(energy > 0.0)) throw DomainError("energy must be positive, got " + std::to_string(energy));
}

// sqrt(-2 pi i) on the documented branch.
Complex sqrt_minus_two_pi_i() { return std::sqrt(2.0 * kPi) * std::exp(Complex(0.0, -kPi / 4.0)); }

}  // namespace

Complex green_plus(int d, double r, double energy) {
  check_dimension(d);
  if (!(r > 0.0)) throw DomainError("green_plus: distance must be positive, got " + std::to_string(r));
  check_energy(energy);
  const double kappa = std::sqrt(energy);
  switch (d) {
    case 1:
      return std::exp(kI * (kappa * r)) / (2.0 * kI * kappa);
    case 2:
      return -0.25 * kI * specfun::hankel1_0(kappa * r);
    default:
      return -std::exp(kI * (kappa * r)) / (4.0 * kPi * r);
  }
}

GreenLocalExpansion green_local_expansion(int d, double energy) {
  check_dimension(d);
  check_energy(energy);
  const double kappa = std::sqrt(energy);
  switch (d) {
    case 1:
      return {Complex(1.0, 0.0), 1.0 / (2.0 * kI * kappa)};
    case 2:
      return {Complex(1.0 / (2.0 * kPi), 0.0),
              -0.25 * kI + (std::log(0.5 * kappa) + specfun::kEulerGamma) / (2.0 * kPi)};
    default:
      return {Complex(-1.0 / (4.0 * kPi), 0.0), -kI * kappa / (4.0 * kPi)};
  }
}

Complex green_farfield_coeff(int d, double kappa) {
  check_dimension(d);
  if (!(kappa > 0.0)) throw DomainError("green_farfield_coeff: kappa must be positive");
  switch (d) {
    case 1:
      return 1.0 / (2.0 * kI * kappa);
    case 2:
      return -0.25 * kI * std::sqrt(2.0 / (kPi * kappa)) * std::exp(Complex(0.0, -kPi / 4.0));
    default:
      return Complex(-1.0 / (4.0 * kPi), 0.0);
  }
}

Complex amplitude_normalization(int d, double kappa) {
  check_dimension(d);
  if (!(kappa > 0.0)) throw DomainError("amplitude_normalization: kappa must be positive");
  const Complex lead = -kPi * kI;
  switch (d) {
    case 1:
      return lead / kappa;
    case 2:
      return lead * sqrt_minus_two_pi_i() / std::sqrt(kappa);
    default:
      return lead * Complex(0.0, -2.0 * kPi);
  }
}

double helmholtz_residual(int d, const Vec& x, double energy, double h) {
  check_dimension(d);
  check_energy(energy);
  if (!(h > 0.0)) throw PreconditionError("helmholtz_residual: step must be positive");
  if (!(norm(x) > 10.0 * h)) throw PreconditionError("helmholtz_residual: |x| must exceed 10 h");
  const auto g = [&](const Vec& p) { return green_plus(d, norm(p), energy); };
  const Complex center = g(x);
  Complex laplacian = 0.0;
  for (int axis = 0; axis < d; ++axis) {
    Vec plus = x;
    Vec minus = x;
    plus[axis] += h;
    minus[axis] -= h;
    laplacian += (g(plus) - 2.0 * center + g(minus)) / (h * h);
  }
  return std::abs(laplacian + energy * center);
}

}  // namespace pscat::greens
