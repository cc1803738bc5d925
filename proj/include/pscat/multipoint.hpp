#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "pscat/core.hpp"
#include "pscat/linalg.hpp"

namespace pscat {

/// Zero-range scatterer at `position` with parameter alpha; 1/alpha is its strength.
/// alpha = infinity (no scatterer) is represented by leaving the scatterer out.
struct PointScatterer {
  Vec position{};
  Complex alpha{};
};

struct PotentialOptions {
  std::size_t max_points = 64;
  double min_separation = 1e-6;
  /// Non-real alpha gives a non-self-adjoint model; off unless asked for.
  bool allow_complex_alpha = false;
};

/// v(x) = sum_j delta_{alpha_j}(x - y_j) in R^d. Immutable once built.
class MultipointPotential {
 public:
  /// Throws PreconditionError on empty lists, too many points, coincident points,
  /// non-finite or (unless allowed) complex alpha, or stray components beyond d.
  MultipointPotential(int dimension, std::vector<PointScatterer> scatterers, PotentialOptions options = {});

  /// The free case, n = 0.
  static MultipointPotential empty(int dimension);

  int dimension() const { return dimension_; }
  std::size_t size() const { return scatterers_.size(); }
  const std::vector<PointScatterer>& scatterers() const { return scatterers_; }
  const PointScatterer& operator[](std::size_t j) const { return scatterers_[j]; }
  double min_separation() const { return min_separation_; }
  /// max_j |y_j|
  double radius() const;
  bool self_adjoint() const;

  /// Copy with every position shifted by `offset`.
  MultipointPotential translated(const Vec& offset) const;

 private:
  MultipointPotential() = default;

  int dimension_ = 3;
  std::vector<PointScatterer> scatterers_;
  double min_separation_ = 0.0;
  PotentialOptions options_{};
};

/// The linear system became too ill-conditioned to trust (cond_1(A) > 1e12).
class ResonanceError : public NumericalError {
 public:
  explicit ResonanceError(double cond);
  double condition() const { return cond_; }

 private:
  double cond_;
};

inline constexpr double kResonanceCondition = 1e12;

struct ChargeSolution {
  linalg::CVector q;
  double kappa = 0.0;
  Vec k{};
  double cond = 1.0;
  double residual = 0.0;  // ||A q - b||_inf at solve time
};

/// A(kappa) with A_jj from the point conditions and A_jl = G+(y_j - y_l, kappa^2).
linalg::CMatrix assemble_matrix(const MultipointPotential& pot, double kappa);

/// b_j = -exp(i k.y_j)
linalg::CVector assemble_rhs(const MultipointPotential& pot, const Vec& k);

/// Factors A(kappa) once and solves A q = b(k) for any k with |k| = kappa.
class ChargeSolver {
 public:
  /// Throws ResonanceError when cond_1(A) exceeds kResonanceCondition.
  ChargeSolver(const MultipointPotential& pot, double kappa);

  ChargeSolution solve(const Vec& k) const;
  double kappa() const { return kappa_; }
  double condition() const { return cond_; }

 private:
  MultipointPotential pot_;
  double kappa_;
  linalg::CMatrix matrix_;
  std::optional<linalg::LuFactorization> lu_;
  double cond_ = 1.0;
};

ChargeSolution solve_charges(const MultipointPotential& pot, const Vec& k);

/// Coefficients (psi_{j,-1}, psi_{j,0}) of psi+ at y_j, from the analytic
/// expansion of the Green functions. For d = 1 the pair is
/// (jump of psi' across y_j, psi(y_j)).
std::pair<Complex, Complex> local_expansion(const MultipointPotential& pot, const ChargeSolution& sol, std::size_t j);

/// max_j |lhs - rhs| of the point condition at y_j:
///   d=1: -alpha psi_jump = psi(y_j)
///   d=2: (-2 pi alpha - ln 2 + gamma) psi_{j,-1} = psi_{j,0}
///   d=3: 4 pi alpha psi_{j,-1} = psi_{j,0}
double boundary_residual(const MultipointPotential& pot, const ChargeSolution& sol);

}  // namespace pscat
