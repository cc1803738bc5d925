#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "pscat/linalg.hpp"
#include "pscat/multipoint.hpp"

namespace pscat::interior {

/// Plane waves exp(i zeta_m . x), zeta_m = sqrt(E) theta_m, sharing one (possibly
/// complex) energy, and an orthonormal basis of superpositions vanishing at `points`.
struct PlaneWaveFamily {
  int dimension = 2;
  Complex energy;
  Complex root;  // principal sqrt(E)
  std::vector<Vec> directions;
  std::vector<Vec> points;
  linalg::CMatrix basis;  // M x witness_dimension()
  std::size_t rank = 0;   // rank of the point-evaluation matrix

  std::size_t witness_dimension() const { return basis.cols(); }
};

/// M unit directions: uniform angles for d = 2, a spherical Fibonacci set for d = 3,
/// {+1, -1} for d = 1 (M must be 2).
std::vector<Vec> plane_wave_directions(int d, std::size_t m);

/// Null space of V_jm = exp(i sqrt(E) theta_m . y_j), threshold 1e-10 sigma_1.
PlaneWaveFamily vanishing_herglotz_basis(int d, const std::vector<Vec>& points, Complex energy, std::size_t m);

/// phi(x) for the superposition with the given coefficients.
Complex evaluate(const PlaneWaveFamily& family, std::span<const Complex> coeffs, const Vec& x);
/// grad phi(x)
std::array<Complex, 3> gradient(const PlaneWaveFamily& family, std::span<const Complex> coeffs, const Vec& x);

/// Radius of the ball D (centered at the origin) used for Cauchy-data checks:
/// max(1, max_j |y_j| + 0.1).
double domain_radius(const std::vector<Vec>& points);

/// Boundary point with its outward unit normal.
struct BoundarySample {
  Vec x{};
  Vec normal{};
};

std::vector<BoundarySample> boundary_samples(int d, double radius, std::size_t count);
/// Deterministic interior points of the ball, at least `clearance` away from every scatterer.
std::vector<Vec> interior_samples(int d, double radius, std::size_t count, const std::vector<Vec>& points,
                                  double clearance);

struct IteResiduals {
  double helmholtz = 0.0;  // max |Delta_h phi + E phi| over interior samples
  double point = 0.0;      // max point-condition residual of psi at the scatterers
  double cauchy = 0.0;     // max |psi - phi|, |d_n psi - d_n phi| over boundary samples
};

/// Checks the pair (psi, phi) built from basis column `column`: phi is the free
/// superposition, psi = phi + sum_j q_j G+(x - y_j) with q = 0 (the singular parts
/// vanish, so each point condition reduces to phi(y_j) = 0).
IteResiduals verify_ite_pair(const MultipointPotential& pot, const PlaneWaveFamily& family, std::size_t column,
                             const std::vector<Vec>& interior, const std::vector<BoundarySample>& boundary,
                             double h = 1e-3);

/// Dirichlet eigenvalue E = p^2 + q^2 of the square (0, pi)^2.
struct BoxSpectrumEntry {
  long long energy = 0;
  std::vector<std::pair<int, int>> pairs;  // p, q >= 1

  std::size_t multiplicity() const { return pairs.size(); }
};

BoxSpectrumEntry box_eigenspace(long long energy);

/// Dimension of the eigenfunctions sum c_pq sin(px) sin(qy) vanishing at every point:
/// null space of U_{j,(p,q)} = sin(p x_j) sin(q y_j), threshold 1e-10 sigma_1.
/// Requires n < m and points strictly inside the square.
std::size_t multiplicity_lower_bound(const BoxSpectrumEntry& entry, const std::vector<Vec>& points);

}  // namespace pscat::interior
