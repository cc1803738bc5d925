#pragma once

#include <cstddef>
#include <vector>

#include "pscat/linalg.hpp"
#include "pscat/multipoint.hpp"

namespace pscat {

/// Nodes and positive weights on S^{d-1}. For d = 1 the "sphere" is {+1, -1}
/// with counting measure.
struct SphereQuadrature {
  int dimension = 2;
  std::vector<Vec> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// d=1: M ignored. d=2: uniform rule, M >= 8. d=3: M must equal 2 p^2 and gives
/// p Gauss-Legendre polar cosines times 2p uniform azimuths.
SphereQuadrature build_quadrature(int d, std::size_t m);
SphereQuadrature build_quadrature_3d(std::size_t polar, std::size_t azimuth);

/// Charges q_m(kappa theta_j) for every node: an n x M matrix.
linalg::CMatrix charge_matrix(const MultipointPotential& pot, double energy, const SphereQuadrature& quad);

/// W S W^{-1} with S_ij = delta_ij - i pi kappa^{d-2} w_j f(kappa theta_j, kappa theta_i)
/// and W = diag(sqrt w_i): the discrete scattering operator in an orthonormal frame.
linalg::CMatrix build_soperator(const MultipointPotential& pot, double energy, const SphereQuadrature& quad);

inline constexpr double kRankThreshold = 1e-8;

struct SingularSpectrumReport {
  std::vector<double> sigma;  // descending
  std::size_t rank_estimate = 0;
  double threshold = kRankThreshold;
  std::size_t n_scatterers = 0;

  /// sigma_{n+1} / sigma_1, zero when there are at most n singular values or sigma_1 = 0.
  double tail_ratio() const;
  bool rank_law_holds() const { return rank_estimate <= n_scatterers; }
};

/// Singular values of S~ - I (one-sided Jacobi) and the numerical rank
/// #{sigma_i > threshold sigma_1}.
SingularSpectrumReport singular_spectrum(const linalg::CMatrix& s_tilde, std::size_t n_scatterers,
                                         double threshold = kRankThreshold);

struct KernelBasis {
  linalg::CMatrix basis;   // M x (M - rank_q), orthonormal columns
  std::size_t rank_q = 0;  // rank of the charge constraints
  double residual = 0.0;   // max ||(S~ - I) u|| / ||u|| over basis columns
};

/// Kernel of S~ - I built from the constraints sum_i w_i q_j(kappa theta_i) u(theta_i) = 0.
KernelBasis kernel_basis(const MultipointPotential& pot, double energy, const SphereQuadrature& quad);

/// ||S~^* S~ - I||_2
double unitarity_defect(const linalg::CMatrix& s_tilde);

}  // namespace pscat
