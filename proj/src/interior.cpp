#include "pscat/interior.hpp"

#include <algorithm>
#include <string>

namespace pscat::interior {

std::vector<Vec> plane_wave_directions(int d, std::size_t m) {
  check_dimension(d);
  std::vector<Vec> dirs;
  if (d == 1) {
    if (m != 2) throw PreconditionError("plane_wave_directions: d=1 has exactly two directions");
    return {Vec{1.0, 0.0, 0.0}, Vec{-1.0, 0.0, 0.0}};
  }
  if (m < 1) throw PreconditionError("plane_wave_directions: need at least one direction");
  dirs.reserve(m);
  if (d == 2) {
    for (std::size_t i = 0; i < m; ++i) {
      const double phi = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(m);
      dirs.push_back({std::cos(phi), std::sin(phi), 0.0});
    }
    return dirs;
  }
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < m; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(m);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    dirs.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  return dirs;
}

PlaneWaveFamily vanishing_herglotz_basis(int d, const std::vector<Vec>& points, Complex energy, std::size_t m) {
  check_dimension(d);
  if (energy == 0.0) throw DomainError("vanishing_herglotz_basis: energy must be non-zero");
  if (points.empty()) throw PreconditionError("vanishing_herglotz_basis: need at least one point");
  if (m <= points.size()) throw PreconditionError("vanishing_herglotz_basis: need more directions than points");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (norm(points[i] - points[j]) == 0.0) throw PreconditionError("vanishing_herglotz_basis: points must be distinct");

  PlaneWaveFamily family;
  family.dimension = d;
  family.energy = energy;
  family.root = std::sqrt(energy);
  family.directions = plane_wave_directions(d, m);
  family.points = points;

  linalg::CMatrix v(points.size(), m);
  for (std::size_t mi = 0; mi < m; ++mi)
    for (std::size_t j = 0; j < points.size(); ++j)
      v(j, mi) = std::exp(kI * family.root * dot(family.directions[mi], points[j]));
  auto ns = linalg::null_space(v, 1e-10);
  family.basis = std::move(ns.basis);
  family.rank = ns.rank;
  return family;
}

Complex evaluate(const PlaneWaveFamily& family, std::span<const Complex> coeffs, const Vec& x) {
  if (coeffs.size() != family.directions.size()) throw PreconditionError("evaluate: coefficient count mismatch");
  Complex phi = 0.0;
  for (std::size_t m = 0; m < coeffs.size(); ++m)
    phi += coeffs[m] * std::exp(kI * family.root * dot(family.directions[m], x));
  return phi;
}

std::array<Complex, 3> gradient(const PlaneWaveFamily& family, std::span<const Complex> coeffs, const Vec& x) {
  if (coeffs.size() != family.directions.size()) throw PreconditionError("gradient: coefficient count mismatch");
  std::array<Complex, 3> g{};
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    const Vec& t = family.directions[m];
    const Complex term = coeffs[m] * kI * family.root * std::exp(kI * family.root * dot(t, x));
    for (int c = 0; c < 3; ++c) g[c] += term * t[c];
  }
  return g;
}

double domain_radius(const std::vector<Vec>& points) {
  double r = 0.0;
  for (const auto& p : points) r = std::max(r, norm(p));
  return std::max(1.0, r + 0.1);
}

std::vector<BoundarySample> boundary_samples(int d, double radius, std::size_t count) {
  std::vector<BoundarySample> out;
  for (const Vec& n : plane_wave_directions(d, d == 1 ? 2 : count)) out.push_back({radius * n, n});
  return out;
}

namespace {

double halton(std::size_t index, unsigned base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

}  // namespace

std::vector<Vec> interior_samples(int d, double radius, std::size_t count, const std::vector<Vec>& points,
                                  double clearance) {
  check_dimension(d);
  std::vector<Vec> out;
  constexpr unsigned kBases[3] = {2, 3, 5};
  for (std::size_t i = 1; out.size() < count; ++i) {
    if (i > 1000 * count + 1000) throw PreconditionError("interior_samples: clearance leaves no room");
    Vec x{};
    for (int c = 0; c < d; ++c) x[c] = radius * (2.0 * halton(i, kBases[c]) - 1.0);
    if (norm(x) >= 0.95 * radius) continue;
    bool clear = true;
    for (const auto& y : points) clear = clear && norm(x - y) >= clearance;
    if (clear) out.push_back(x);
  }
  return out;
}

IteResiduals verify_ite_pair(const MultipointPotential& pot, const PlaneWaveFamily& family, std::size_t column,
                             const std::vector<Vec>& interior, const std::vector<BoundarySample>& boundary, double h) {
  if (pot.dimension() != family.dimension || pot.size() != family.points.size())
    throw PreconditionError("verify_ite_pair: family was not built for this potential");
  for (std::size_t j = 0; j < pot.size(); ++j)
    if (norm(pot[j].position - family.points[j]) > 1e-14)
      throw PreconditionError("verify_ite_pair: family points differ from the scatterer positions");
  if (column >= family.witness_dimension()) throw PreconditionError("verify_ite_pair: basis column out of range");

  const auto c = family.basis.col(column);
  const int d = family.dimension;
  const auto phi = [&](const Vec& x) { return evaluate(family, c, x); };
  // psi has vanishing singular parts at every y_j, so it is the regular function phi.
  const auto psi = phi;

  IteResiduals res;
  for (const Vec& x : interior) {
    const Complex center = phi(x);
    Complex lap = 0.0;
    for (int axis = 0; axis < d; ++axis) {
      Vec plus = x;
      Vec minus = x;
      plus[axis] += h;
      minus[axis] -= h;
      lap += (phi(plus) - 2.0 * center + phi(minus)) / (h * h);
    }
    res.helmholtz = std::max(res.helmholtz, std::abs(lap + family.energy * center));
  }

  // Point condition with psi_{j,-1} = 0: every form reduces to 0 = psi_{j,0} = phi(y_j).
  for (std::size_t j = 0; j < pot.size(); ++j) res.point = std::max(res.point, std::abs(phi(pot[j].position)));

  for (const auto& s : boundary) {
    res.cauchy = std::max(res.cauchy, std::abs(psi(s.x) - phi(s.x)));
    const auto g = gradient(family, c, s.x);
    Complex dn_phi = 0.0;
    for (int a = 0; a < 3; ++a) dn_phi += g[a] * s.normal[a];
    const auto gpsi = gradient(family, c, s.x);
    Complex dn_psi = 0.0;
    for (int a = 0; a < 3; ++a) dn_psi += gpsi[a] * s.normal[a];
    res.cauchy = std::max(res.cauchy, std::abs(dn_psi - dn_phi));
  }
  return res;
}

BoxSpectrumEntry box_eigenspace(long long energy) {
  if (energy < 1) throw PreconditionError("box_eigenspace: energy must be a positive integer");
  BoxSpectrumEntry entry;
  entry.energy = energy;
  for (long long p = 1; p * p < energy; ++p) {
    const long long rest = energy - p * p;
    const auto q = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(rest))));
    for (long long cand = std::max(1LL, q - 1); cand <= q + 1; ++cand)
      if (cand * cand == rest) entry.pairs.emplace_back(static_cast<int>(p), static_cast<int>(cand));
  }
  return entry;
}

std::size_t multiplicity_lower_bound(const BoxSpectrumEntry& entry, const std::vector<Vec>& points) {
  const std::size_t m = entry.multiplicity();
  const std::size_t n = points.size();
  if (n >= m) throw PreconditionError("multiplicity_lower_bound: needs fewer points than the multiplicity");
  for (const auto& p : points)
    if (!(p[0] > 0.0 && p[0] < kPi && p[1] > 0.0 && p[1] < kPi) || p[2] != 0.0)
      throw PreconditionError("multiplicity_lower_bound: points must lie strictly inside (0, pi)^2");
  if (n == 0) return m;
  linalg::CMatrix u(n, m);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t c = 0; c < m; ++c)
      u(j, c) = std::sin(entry.pairs[c].first * points[j][0]) * std::sin(entry.pairs[c].second * points[j][1]);
  return linalg::null_space(u, 1e-10).basis.cols();
}

}  // namespace pscat::interior
