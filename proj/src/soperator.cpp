#include "pscat/soperator.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace pscat {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw PreconditionError("gauss_legendre: need at least one node");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

SphereQuadrature build_quadrature_3d(std::size_t polar, std::size_t azimuth) {
  if (polar < 2 || azimuth < 4) throw PreconditionError("build_quadrature: d=3 needs polar >= 2, azimuth >= 4");
  std::vector<double> t;
  std::vector<double> wt;
  gauss_legendre(static_cast<int>(polar), t, wt);
  SphereQuadrature quad;
  quad.dimension = 3;
  const double dphi = 2.0 * kPi / static_cast<double>(azimuth);
  for (std::size_t i = 0; i < polar; ++i) {
    const double s = std::sqrt(std::max(0.0, 1.0 - t[i] * t[i]));
    for (std::size_t j = 0; j < azimuth; ++j) {
      const double phi = dphi * static_cast<double>(j);
      quad.nodes.push_back({s * std::cos(phi), s * std::sin(phi), t[i]});
      quad.weights.push_back(wt[i] * dphi);
    }
  }
  return quad;
}

SphereQuadrature build_quadrature(int d, std::size_t m) {
  check_dimension(d);
  SphereQuadrature quad;
  quad.dimension = d;
  if (d == 1) {
    quad.nodes = {Vec{1.0, 0.0, 0.0}, Vec{-1.0, 0.0, 0.0}};
    quad.weights = {1.0, 1.0};
    return quad;
  }
  if (d == 2) {
    if (m < 8) throw PreconditionError("build_quadrature: d=2 needs M >= 8, got " + std::to_string(m));
    const double dphi = 2.0 * kPi / static_cast<double>(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double phi = dphi * static_cast<double>(j);
      quad.nodes.push_back({std::cos(phi), std::sin(phi), 0.0});
      quad.weights.push_back(dphi);
    }
    return quad;
  }
  const auto polar = static_cast<std::size_t>(std::llround(std::sqrt(0.5 * static_cast<double>(m))));
  if (polar < 2 || 2 * polar * polar != m)
    throw PreconditionError("build_quadrature: d=3 needs M = 2 p^2 with p >= 2, got " + std::to_string(m));
  return build_quadrature_3d(polar, 2 * polar);
}

linalg::CMatrix charge_matrix(const MultipointPotential& pot, double energy, const SphereQuadrature& quad) {
  if (!(energy > 0.0)) throw DomainError("charge_matrix: energy must be positive");
  if (quad.dimension != pot.dimension()) throw PreconditionError("quadrature and potential dimensions differ");
  const double kappa = std::sqrt(energy);
  const std::size_t m = quad.size();
  linalg::CMatrix q(pot.size(), m);
  if (pot.size() == 0) return q;
  const ChargeSolver solver(pot, kappa);
  for (std::size_t j = 0; j < m; ++j) {
    const ChargeSolution sol = solver.solve(kappa * quad.nodes[j]);
    std::copy(sol.q.begin(), sol.q.end(), q.col(j).begin());
  }
  return q;
}

linalg::CMatrix build_soperator(const MultipointPotential& pot, double energy, const SphereQuadrature& quad) {
  const std::size_t m = quad.size();
  linalg::CMatrix s = linalg::CMatrix::identity(m);
  const linalg::CMatrix q = charge_matrix(pot, energy, quad);
  if (pot.size() == 0) return s;
  const int d = pot.dimension();
  const double kappa = std::sqrt(energy);
  const Complex prefactor = -kI * kPi * std::pow(kappa, d - 2) / std::pow(2.0 * kPi, d);

  // S~ = I + prefactor * (W E) (Q W), E_im = exp(-i kappa theta_i . y_m)
  linalg::CMatrix left(m, pot.size());
  for (std::size_t i = 0; i < m; ++i) {
    const double sw = std::sqrt(quad.weights[i]);
    for (std::size_t a = 0; a < pot.size(); ++a)
      left(i, a) = sw * std::exp(-kI * (kappa * dot(quad.nodes[i], pot[a].position)));
  }
  linalg::CMatrix right(pot.size(), m);
  for (std::size_t j = 0; j < m; ++j) {
    const double sw = std::sqrt(quad.weights[j]);
    for (std::size_t a = 0; a < pot.size(); ++a) right(a, j) = prefactor * sw * q(a, j);
  }
  const linalg::CMatrix update = left * right;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) s(i, j) += update(i, j);
  return s;
}

double SingularSpectrumReport::tail_ratio() const {
  if (sigma.size() <= n_scatterers || sigma.empty() || sigma.front() == 0.0) return 0.0;
  return sigma[n_scatterers] / sigma.front();
}

SingularSpectrumReport singular_spectrum(const linalg::CMatrix& s_tilde, std::size_t n_scatterers, double threshold) {
  if (s_tilde.rows() != s_tilde.cols()) throw PreconditionError("singular_spectrum: matrix must be square");
  linalg::CMatrix diff = s_tilde;
  for (std::size_t i = 0; i < diff.rows(); ++i) diff(i, i) -= 1.0;
  SingularSpectrumReport report;
  report.sigma = linalg::jacobi_svd(std::move(diff)).sigma;
  report.threshold = threshold;
  report.n_scatterers = n_scatterers;
  const double s1 = report.sigma.empty() ? 0.0 : report.sigma.front();
  report.rank_estimate = static_cast<std::size_t>(
      std::count_if(report.sigma.begin(), report.sigma.end(), [&](double s) { return s1 > 0.0 && s > threshold * s1; }));
  return report;
}

KernelBasis kernel_basis(const MultipointPotential& pot, double energy, const SphereQuadrature& quad) {
  const std::size_t m = quad.size();
  const linalg::CMatrix q = charge_matrix(pot, energy, quad);
  // Constraints in the orthonormal frame u~ = W u: sum_i sqrt(w_i) q_j(theta_i) u~_i = 0.
  linalg::CMatrix constraints(pot.size(), m);
  for (std::size_t i = 0; i < m; ++i) {
    const double sw = std::sqrt(quad.weights[i]);
    for (std::size_t j = 0; j < pot.size(); ++j) constraints(j, i) = sw * q(j, i);
  }
  const auto ns = linalg::null_space(constraints, 1e-10);
  KernelBasis out;
  out.basis = ns.basis;
  out.rank_q = ns.rank;

  linalg::CMatrix diff = build_soperator(pot, energy, quad);
  for (std::size_t i = 0; i < m; ++i) diff(i, i) -= 1.0;
  for (std::size_t c = 0; c < out.basis.cols(); ++c) {
    const auto u = out.basis.col(c);
    const linalg::CVector r = diff * u;
    out.residual = std::max(out.residual, linalg::norm2(r) / linalg::norm2(u));
  }
  return out;
}

double unitarity_defect(const linalg::CMatrix& s_tilde) {
  linalg::CMatrix gram = s_tilde.adjoint() * s_tilde;
  for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) -= 1.0;
  const auto sigma = linalg::jacobi_svd(std::move(gram)).sigma;
  return sigma.empty() ? 0.0 : sigma.front();
}

}  // namespace pscat
