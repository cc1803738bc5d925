#pragma once

// High-precision ascending-series oracle for J0 and Y0. Independent of the
// library branches: 100 decimal digits absorb the cancellation of the series
// up to x = 50 and beyond.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/math/constants/constants.hpp>
#include <utility>

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_100;

inline std::pair<double, double> bessel_j0_y0(double xd) {
  const Big x = xd;
  const Big z = x * x / 4;
  Big term = 1;
  Big j0 = 1;
  Big harmonic = 0;
  Big tail = 0;
  const Big eps = Big("1e-60");
  for (int k = 1; k < 2000; ++k) {
    term *= -z / (Big(k) * k);
    harmonic += Big(1) / k;
    j0 += term;
    tail -= harmonic * term;
    if (k > 4 && abs(term) * (1 + harmonic) < eps) break;
  }
  const Big pi = boost::math::constants::pi<Big>();
  const Big gamma = boost::math::constants::euler<Big>();
  const Big y0 = (2 / pi) * ((log(x / 2) + gamma) * j0 + tail);
  return {static_cast<double>(j0), static_cast<double>(y0)};
}

}  // namespace oracle
