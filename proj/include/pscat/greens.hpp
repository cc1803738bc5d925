#pragma once

#include "pscat/core.hpp"

namespace pscat::greens {

/// Coefficients of G+(r, E) near r = 0.
///
/// d = 3: G+ = singular/r + regular + O(r)
/// d = 2: G+ = singular*ln r + regular + O(r^2 ln r)
/// d = 1: singular is the jump of dG+/dr across the origin, regular is G+(0).
struct GreenLocalExpansion {
  Complex singular_coeff;
  Complex regular_coeff;
};

/// Outgoing Green function of the Helmholtz operator, (Delta + E) G+ = delta,
/// as a function of the distance r.
///   d=1: e^{i kappa r} / (2 i kappa)
///   d=2: -(i/4) H0^(1)(kappa r)
///   d=3: -e^{i kappa r} / (4 pi r)
Complex green_plus(int d, double r, double energy);

GreenLocalExpansion green_local_expansion(int d, double energy);

/// a_d(kappa) in G+(x - y) ~ a_d e^{i kappa |x|} |x|^{-(d-1)/2} e^{-i kappa xhat.y}.
Complex green_farfield_coeff(int d, double kappa);

/// Normalization c(d, kappa) relating the two amplitude conventions, f+ = c f.
/// c = -pi i (-2 pi i)^{(d-1)/2} kappa^{(d-3)/2} with sqrt(-2 pi i) = sqrt(2 pi) e^{-i pi/4}.
Complex amplitude_normalization(int d, double kappa);

/// |(Delta_h + E) G+(|x|, E)| with the centered second-difference Laplacian.
/// Requires |x| > 10 h.
double helmholtz_residual(int d, const Vec& x, double energy, double h);

}  // namespace pscat::greens
