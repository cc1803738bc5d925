#include "pscat/specfun.hpp"

#include <cmath>
#include <string>

namespace pscat::specfun {

namespace detail {

// Ascending series. Terms grow like I0(x) before cancelling, so this branch is
// confined to x <= kSeriesMax where the cancellation costs under three digits.
std::pair<double, double> j0_y0_series(double x) {
  const double z = 0.25 * x * x;
  double term = 1.0;
  double j0 = 1.0;
  double harmonic = 0.0;
  double tail = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= -z / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    j0 += term;
    tail -= harmonic * term;
    if (std::abs(term) * (1.0 + harmonic) < 1e-18 * std::abs(j0) && k > 2) break;
  }
  if (x == 0.0) return {1.0, -HUGE_VAL};
  const double y0 = (2.0 / kPi) * ((std::log(0.5 * x) + kEulerGamma) * j0 + tail);
  return {j0, y0};
}

// Miller backward recurrence, normalized by J0 + 2 sum J_2k = 1. Y0 follows from
// the Neumann expansion Y0 = (2/pi)(ln(x/2)+gamma) J0 - (4/pi) sum (-1)^k J_2k / k.
std::pair<double, double> j0_y0_miller(double x) {
  int start = static_cast<int>(x + 15.0 * std::cbrt(x) + 20.0);
  start += start % 2;
  double next = 0.0;
  double cur = 1e-30;
  double norm_sum = 0.0;
  double neumann = 0.0;
  for (int k = start; k >= 1; --k) {
    const double prev = (2.0 * k / x) * cur - next;
    next = cur;
    cur = prev;  // J_{k-1}
    const int order = k - 1;
    if (order > 0 && order % 2 == 0) {
      norm_sum += 2.0 * cur;
      const int half = order / 2;
      neumann += ((half % 2 == 0) ? cur : -cur) / half;
    }
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm_sum *= 1e-250;
      neumann *= 1e-250;
    }
  }
  norm_sum += cur;
  const double j0 = cur / norm_sum;
  const double y0 = (2.0 / kPi) * (std::log(0.5 * x) + kEulerGamma) * j0 - (4.0 / kPi) * neumann / norm_sum;
  return {j0, y0};
}

// Hankel asymptotic expansion, truncated at the smallest term. For x >= 25 the
// truncation error is of order exp(-2x).
std::pair<double, double> j0_y0_asymptotic(double x) {
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(odd * odd) / (8.0 * k * x);
    if (std::abs(term) > last) break;
    last = std::abs(term);
    // P collects even k with sign (-1)^(k/2); Q collects odd k with sign (-1)^((k-1)/2).
    if (k % 2 == 0) {
      p += ((k / 2) % 2 == 0) ? term : -term;
    } else {
      q += (((k - 1) / 2) % 2 == 0) ? term : -term;
    }
    if (last < 1e-18) break;
  }
  const double s = std::sin(x);
  const double c = std::cos(x);
  const double cos_chi = (c + s) / std::numbers::sqrt2;
  const double sin_chi = (s - c) / std::numbers::sqrt2;
  const double amp = std::sqrt(2.0 / (kPi * x));
  return {amp * (p * cos_chi - q * sin_chi), amp * (p * sin_chi + q * cos_chi)};
}

}  // namespace detail

std::pair<double, double> bessel_j0_y0(double x) {
  if (!(x > 0.0)) throw DomainError("bessel_j0_y0: x must be positive, got " + std::to_string(x));
  if (x <= kSeriesMax) return detail::j0_y0_series(x);
  if (x < kAsymptoticMin) return detail::j0_y0_miller(x);
  return detail::j0_y0_asymptotic(x);
}

double bessel_j0(double x) {
  if (x < 0.0) throw DomainError("bessel_j0: x must be non-negative, got " + std::to_string(x));
  if (x == 0.0) return 1.0;
  return bessel_j0_y0(x).first;
}

Complex hankel1_0(double x) {
  if (!(x > 0.0)) throw DomainError("hankel1_0: x must be positive, got " + std::to_string(x));
  const auto [j0, y0] = bessel_j0_y0(x);
  return {j0, y0};
}

}  // namespace pscat::specfun
