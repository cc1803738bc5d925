#include "pscat/multipoint.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "pscat/greens.hpp"
#include "pscat/specfun.hpp"

namespace pscat {

MultipointPotential::MultipointPotential(int dimension, std::vector<PointScatterer> scatterers, PotentialOptions options)
    : dimension_(dimension), scatterers_(std::move(scatterers)), options_(options) {
  check_dimension(dimension_);
  if (scatterers_.empty()) throw PreconditionError("potential needs at least one scatterer (use empty() for n = 0)");
  if (scatterers_.size() > options_.max_points)
    throw PreconditionError("potential has " + std::to_string(scatterers_.size()) + " scatterers, limit is " +
                            std::to_string(options_.max_points));
  for (std::size_t j = 0; j < scatterers_.size(); ++j) {
    const auto& s = scatterers_[j];
    if (!std::isfinite(s.alpha.real()) || !std::isfinite(s.alpha.imag()))
      throw PreconditionError("scatterer " + std::to_string(j) + ": alpha must be finite");
    if (s.alpha.imag() != 0.0 && !options_.allow_complex_alpha)
      throw PreconditionError("scatterer " + std::to_string(j) + ": complex alpha requires allow_complex_alpha");
    for (int c = 0; c < 3; ++c) {
      if (!std::isfinite(s.position[c])) throw PreconditionError("scatterer " + std::to_string(j) + ": non-finite position");
      if (c >= dimension_ && s.position[c] != 0.0)
        throw PreconditionError("scatterer " + std::to_string(j) + ": position has components beyond dimension");
    }
  }
  min_separation_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scatterers_.size(); ++i)
    for (std::size_t j = i + 1; j < scatterers_.size(); ++j)
      min_separation_ = std::min(min_separation_, norm(scatterers_[i].position - scatterers_[j].position));
  if (min_separation_ < options_.min_separation)
    throw PreconditionError("scatterers closer than minimal separation " + std::to_string(options_.min_separation));
}

MultipointPotential MultipointPotential::empty(int dimension) {
  check_dimension(dimension);
  MultipointPotential pot;
  pot.dimension_ = dimension;
  pot.min_separation_ = std::numeric_limits<double>::infinity();
  return pot;
}

double MultipointPotential::radius() const {
  double r = 0.0;
  for (const auto& s : scatterers_) r = std::max(r, norm(s.position));
  return r;
}

bool MultipointPotential::self_adjoint() const {
  return std::all_of(scatterers_.begin(), scatterers_.end(), [](const auto& s) { return s.alpha.imag() == 0.0; });
}

MultipointPotential MultipointPotential::translated(const Vec& offset) const {
  for (int c = dimension_; c < 3; ++c)
    if (offset[c] != 0.0) throw PreconditionError("translation has components beyond dimension");
  MultipointPotential out = *this;
  for (auto& s : out.scatterers_) s.position = s.position + offset;
  return out;
}

ResonanceError::ResonanceError(double cond)
    : NumericalError("resonant configuration: cond_1(A) = " + std::to_string(cond) + " exceeds 1e12"), cond_(cond) {}

namespace {

Complex diagonal_entry(int d, Complex alpha, double kappa) {
  switch (d) {
    case 1:
      return alpha + 1.0 / (2.0 * kI * kappa);
    case 2:
      return alpha - (kPi * kI - 2.0 * std::log(kappa)) / (4.0 * kPi);
    default:
      return alpha - kI * kappa / (4.0 * kPi);
  }
}

}  // namespace

linalg::CMatrix assemble_matrix(const MultipointPotential& pot, double kappa) {
  if (!(kappa > 0.0)) throw DomainError("assemble_matrix: kappa must be positive");
  const std::size_t n = pot.size();
  const int d = pot.dimension();
  const double energy = kappa * kappa;
  linalg::CMatrix a(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    a(j, j) = diagonal_entry(d, pot[j].alpha, kappa);
    for (std::size_t l = j + 1; l < n; ++l) {
      const Complex g = greens::green_plus(d, norm(pot[j].position - pot[l].position), energy);
      a(j, l) = g;
      a(l, j) = g;
    }
  }
  return a;
}

linalg::CVector assemble_rhs(const MultipointPotential& pot, const Vec& k) {
  linalg::CVector b(pot.size());
  for (std::size_t j = 0; j < pot.size(); ++j) b[j] = -std::exp(kI * dot(k, pot[j].position));
  return b;
}

ChargeSolver::ChargeSolver(const MultipointPotential& pot, double kappa)
    : pot_(pot), kappa_(kappa), matrix_(assemble_matrix(pot, kappa)) {
  if (pot.size() == 0) return;
  lu_.emplace(matrix_);
  cond_ = lu_->condition_1norm();
  if (!(cond_ <= kResonanceCondition)) throw ResonanceError(cond_);
}

ChargeSolution ChargeSolver::solve(const Vec& k) const {
  if (std::abs(norm(k) - kappa_) > 1e-12 * kappa_)
    throw DomainError("ChargeSolver: |k| does not match the factored kappa");
  ChargeSolution sol;
  sol.kappa = kappa_;
  sol.k = k;
  sol.cond = cond_;
  if (pot_.size() == 0) return sol;
  const linalg::CVector b = assemble_rhs(pot_, k);
  sol.q = lu_->solve(b);
  const double bound = 1e-12 * (1.0 + linalg::norm_inf(b));
  auto residual_of = [&](const linalg::CVector& q) {
    linalg::CVector r = matrix_ * q;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
  };
  linalg::CVector r = residual_of(sol.q);
  sol.residual = linalg::norm_inf(r);
  if (sol.residual > bound) {
    // one step of iterative refinement
    const linalg::CVector dq = lu_->solve(r);
    for (std::size_t i = 0; i < dq.size(); ++i) sol.q[i] -= dq[i];
    sol.residual = linalg::norm_inf(residual_of(sol.q));
    if (sol.residual > bound)
      throw NumericalError("solve_charges: residual " + std::to_string(sol.residual) + " above bound");
  }
  return sol;
}

ChargeSolution solve_charges(const MultipointPotential& pot, const Vec& k) {
  const double kappa = norm(k);
  if (!(kappa > 0.0)) throw DomainError("solve_charges: |k| must be positive");
  return ChargeSolver(pot, kappa).solve(k);
}

std::pair<Complex, Complex> local_expansion(const MultipointPotential& pot, const ChargeSolution& sol, std::size_t j) {
  if (j >= pot.size()) throw PreconditionError("local_expansion: index " + std::to_string(j) + " out of range");
  if (sol.q.size() != pot.size()) throw PreconditionError("local_expansion: charge vector does not match potential");
  const int d = pot.dimension();
  const double energy = sol.kappa * sol.kappa;
  const auto local = greens::green_local_expansion(d, energy);
  const Vec& y = pot[j].position;
  Complex regular = std::exp(kI * dot(sol.k, y)) + sol.q[j] * local.regular_coeff;
  for (std::size_t m = 0; m < pot.size(); ++m) {
    if (m == j) continue;
    regular += sol.q[m] * greens::green_plus(d, norm(y - pot[m].position), energy);
  }
  return {sol.q[j] * local.singular_coeff, regular};
}

double boundary_residual(const MultipointPotential& pot, const ChargeSolution& sol) {
  const int d = pot.dimension();
  double worst = 0.0;
  for (std::size_t j = 0; j < pot.size(); ++j) {
    const auto [singular, regular] = local_expansion(pot, sol, j);
    const Complex alpha = pot[j].alpha;
    Complex lhs;
    switch (d) {
      case 1:
        lhs = -alpha * singular;
        break;
      case 2:
        lhs = (-2.0 * kPi * alpha - std::log(2.0) + specfun::kEulerGamma) * singular;
        break;
      default:
        lhs = 4.0 * kPi * alpha * singular;
        break;
    }
    worst = std::max(worst, std::abs(lhs - regular));
  }
  return worst;
}

}  // namespace pscat
