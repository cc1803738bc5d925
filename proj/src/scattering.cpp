#include "pscat/scattering.hpp"

#include <algorithm>
#include <string>

#include "pscat/greens.hpp"

namespace pscat {

void check_on_shell(const Vec& k, const Vec& l) {
  const double nk = norm(k);
  const double nl = norm(l);
  if (!(nk > 0.0)) throw DomainError("amplitude: |k| must be positive");
  if (std::abs(nk - nl) > 1e-12 * nk) throw DomainError("amplitude: off-shell momenta, |k| != |l|");
}

Complex psi_plus(const MultipointPotential& pot, const ChargeSolution& sol, const Vec& x) {
  const double energy = sol.kappa * sol.kappa;
  Complex psi = std::exp(kI * dot(sol.k, x));
  for (std::size_t j = 0; j < pot.size(); ++j) {
    const double r = norm(x - pot[j].position);
    if (r == 0.0) throw DomainError("psi_plus: evaluation point coincides with scatterer " + std::to_string(j));
    psi += sol.q[j] * greens::green_plus(pot.dimension(), r, energy);
  }
  return psi;
}

Complex psi_plus(const MultipointPotential& pot, const Vec& k, const Vec& x) {
  return psi_plus(pot, solve_charges(pot, k), x);
}

Complex amplitude_f(const MultipointPotential& pot, const ChargeSolution& sol, const Vec& l) {
  check_on_shell(sol.k, l);
  Complex sum = 0.0;
  for (std::size_t j = 0; j < pot.size(); ++j) sum += sol.q[j] * std::exp(-kI * dot(l, pot[j].position));
  return sum / std::pow(2.0 * kPi, pot.dimension());
}

Complex amplitude_f(const MultipointPotential& pot, const Vec& k, const Vec& l) {
  check_on_shell(k, l);
  if (pot.size() == 0) return 0.0;
  return amplitude_f(pot, solve_charges(pot, k), l);
}

AmplitudeSample amplitude_fplus(const MultipointPotential& pot, const Vec& k, const Vec& l) {
  AmplitudeSample s;
  s.k = k;
  s.l = l;
  s.f = amplitude_f(pot, k, l);
  s.fplus = greens::amplitude_normalization(pot.dimension(), norm(k)) * s.f;
  return s;
}

FarfieldExtraction farfield_extract(const MultipointPotential& pot, const Vec& k, const Vec& theta, double radius) {
  const double kappa = norm(k);
  if (!(kappa > 0.0)) throw DomainError("farfield_extract: |k| must be positive");
  if (std::abs(norm(theta) - 1.0) > 1e-12) throw PreconditionError("farfield_extract: theta must be a unit vector");
  if (!(radius >= 100.0 * pot.radius()) || !(radius >= 100.0 / kappa))
    throw PreconditionError("farfield_extract: radius must be at least 100 max|y_j| and 100/kappa");
  const int d = pot.dimension();
  if (pot.size() == 0) return {};
  const ChargeSolution sol = solve_charges(pot, k);
  auto extract = [&](double r) {
    const Vec x = r * theta;
    // psi+ - e^{ik.x}, summed directly to avoid cancelling against the plane wave
    Complex scattered = 0.0;
    for (std::size_t j = 0; j < pot.size(); ++j)
      scattered += sol.q[j] * greens::green_plus(d, norm(x - pot[j].position), kappa * kappa);
    return scattered * std::pow(r, 0.5 * (d - 1)) * std::exp(-kI * (kappa * r));
  };
  FarfieldExtraction out;
  out.value = extract(radius);
  out.richardson_constant = 2.0 * radius * std::abs(out.value - extract(2.0 * radius));
  return out;
}

}  // namespace pscat
