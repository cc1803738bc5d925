#pragma once

#include <cstddef>
#include <vector>

#include "pscat/core.hpp"

namespace pscat::soliton {

/// Bound-state parameters of a reflectionless potential: E_j = -kappa_j^2.
/// Kappas are stored strictly decreasing; normings follow their kappas.
class SolitonSpectrum {
 public:
  /// Empty `normings` selects symmetric_normings(kappas).
  explicit SolitonSpectrum(std::vector<double> kappas, std::vector<double> normings = {});

  std::size_t size() const { return kappas_.size(); }
  const std::vector<double>& kappas() const { return kappas_; }
  const std::vector<double>& normings() const { return normings_; }

 private:
  std::vector<double> kappas_;
  std::vector<double> normings_;
};

/// Norming constants c_j^2 = 2 kappa_j prod_{l != j} (kappa_j + kappa_l) / |kappa_j - kappa_l|,
/// which make the potential even in x. For kappa = (1, ..., N) this is -N(N+1) sech^2 x.
std::vector<double> symmetric_normings(const std::vector<double>& kappas);

/// T(k) = prod_j (k + i kappa_j) / (k - i kappa_j), k > 0.
Complex transmission_T(const SolitonSpectrum& spec, double k);

/// Continuous phase of T: 2 sum_j atan(kappa_j / k), decreasing from N pi to 0.
double transmission_phase(const SolitonSpectrum& spec, double k);

/// Positive energies k_m^2 with T(k_m) = 1, ascending; exactly floor((N-1)/2) of them.
/// Throws NumericalError if the phase fails a monotonicity or bracketing check.
std::vector<double> transparency_energies(const SolitonSpectrum& spec);

/// v(x) = -2 d^2/dx^2 ln det(I + C(x)), C_ml = c_m c_l e^{-(kappa_m + kappa_l) x} / (kappa_m + kappa_l).
double nsoliton_potential(const SolitonSpectrum& spec, double x);

/// Potential samples on the uniform grid x_i = x0 + i h.
struct SampledPotential1D {
  double x0 = 0.0;
  double h = 0.0;
  std::vector<double> values;
  /// |x| beyond which the potential is treated as zero.
  double cutoff = 0.0;

  double x(std::size_t i) const { return x0 + h * static_cast<double>(i); }
  std::size_t size() const { return values.size(); }
};

/// Samples of the N-soliton potential on [-L, L], L chosen so |v| < 1e-12 at the ends.
SampledPotential1D sample_nsoliton(const SolitonSpectrum& spec, double h);

/// v = -depth on [-half_width, half_width], zero elsewhere, on [-extent, extent].
/// Grid nodes land on the edges; the edge samples carry the mean of both sides.
SampledPotential1D square_well(double depth, double half_width, double extent, double h);

struct Scattering1D {
  Complex transmission;
  Complex reflection;
};

/// Numerov integration of -psi'' + v psi = k^2 psi from right to left, starting from
/// the transmitted wave and matching e^{ikx} + R e^{-ikx} at the two leftmost nodes.
/// Plane waves use the scheme's own discrete wavenumber, so v = 0 gives T = 1, R = 0.
/// Requires at least 20 grid points per wavelength.
Scattering1D scatter1d_numeric(const SampledPotential1D& v, double k);

/// Exact transmission of a single point scatterer at the origin with parameter alpha.
Complex point_transmission(double alpha, double k);

/// |T_num(v_N, k) - T_point(alpha, k)| for the well v_N = -(N / (2 alpha)) on [-1/N, 1/N],
/// whose integral -1/alpha is the point coupling in the jump condition.
double delta_limit_error(double alpha, int n, double k = 1.0, int steps_per_half_width = 400);

}  // namespace pscat::soliton
