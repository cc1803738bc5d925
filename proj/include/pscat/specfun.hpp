#pragma once

#include <utility>

#include "pscat/core.hpp"

namespace pscat::specfun {

/// Euler–Mascheroni constant.
inline constexpr double kEulerGamma = 0.5772156649015329;

/// Upper end of the power-series branch.
inline constexpr double kSeriesMax = 8.0;
/// Lower end of the Hankel asymptotic branch. Between the two, Miller backward
/// recurrence with the Neumann series for Y0 is used.
inline constexpr double kAsymptoticMin = 25.0;

/// J0(x) for x >= 0.
double bessel_j0(double x);

/// (J0(x), Y0(x)) for x > 0. Absolute error below 1e-10 on (0, 50].
std::pair<double, double> bessel_j0_y0(double x);

/// H0^(1)(x) = J0(x) + i Y0(x), x > 0.
Complex hankel1_0(double x);

/// Branch-specific evaluators, exposed for continuity checks at the switch points.
namespace detail {
std::pair<double, double> j0_y0_series(double x);
std::pair<double, double> j0_y0_miller(double x);
std::pair<double, double> j0_y0_asymptotic(double x);
}  // namespace detail

}  // namespace pscat::specfun
