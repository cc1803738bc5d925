#pragma once

#include "pscat/multipoint.hpp"

namespace pscat {

struct AmplitudeSample {
  Vec k{};
  Vec l{};
  Complex f;
  Complex fplus;  // c(d, |k|) f
};

/// psi+(x, k) = e^{ik.x} + sum_j q_j G+(x - y_j, |k|^2). DomainError at a scatterer.
Complex psi_plus(const MultipointPotential& pot, const ChargeSolution& sol, const Vec& x);
Complex psi_plus(const MultipointPotential& pot, const Vec& k, const Vec& x);

/// f(k, l) = (2 pi)^{-d} sum_j q_j(k) e^{-i l.y_j}; requires |k| = |l| to 1e-12 relative.
Complex amplitude_f(const MultipointPotential& pot, const ChargeSolution& sol, const Vec& l);
Complex amplitude_f(const MultipointPotential& pot, const Vec& k, const Vec& l);

AmplitudeSample amplitude_fplus(const MultipointPotential& pot, const Vec& k, const Vec& l);

struct FarfieldExtraction {
  Complex value;
  /// C in |value - f+| <= C / R, from the values at R and 2R.
  double richardson_constant = 0.0;
};

/// (psi+(R theta) - e^{ik.R theta}) R^{(d-1)/2} e^{-i kappa R}. Requires R >= 100 max|y_j|
/// and R >= 100 / kappa.
FarfieldExtraction farfield_extract(const MultipointPotential& pot, const Vec& k, const Vec& theta, double radius);

/// Throws DomainError unless |k| and |l| agree to 1e-12 relative.
void check_on_shell(const Vec& k, const Vec& l);

}  // namespace pscat
