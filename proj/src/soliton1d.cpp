#include "pscat/soliton1d.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "pscat/multipoint.hpp"
#include "pscat/scattering.hpp"

namespace pscat::soliton {

namespace {

using RealMatrix = std::vector<std::vector<double>>;

// Solves A X = B in place (B overwritten by X); A is destroyed.
void gauss_solve(RealMatrix a, RealMatrix& b) {
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    if (a[p][k] == 0.0) throw NumericalError("nsoliton_potential: singular determinant matrix");
    std::swap(a[k], a[p]);
    std::swap(b[k], b[p]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      for (std::size_t j = 0; j < b[i].size(); ++j) b[i][j] -= f * b[k][j];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t j = 0; j < b[k].size(); ++j) {
      double s = b[k][j];
      for (std::size_t i = k + 1; i < n; ++i) s -= a[k][i] * b[i][j];
      b[k][j] = s / a[k][k];
    }
  }
}

// d^2/dx^2 ln det M given M, M', M'': tr(M^-1 M'') - tr((M^-1 M')^2).
double log_det_second_derivative(const RealMatrix& m, const RealMatrix& d1, const RealMatrix& d2) {
  const std::size_t n = m.size();
  RealMatrix x1 = d1;
  RealMatrix x2 = d2;
  gauss_solve(m, x1);
  gauss_solve(m, x2);
  double tr2 = 0.0;
  double trsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tr2 += x2[i][i];
    for (std::size_t j = 0; j < n; ++j) trsq += x1[i][j] * x1[j][i];
  }
  return tr2 - trsq;
}

}  // namespace

SolitonSpectrum::SolitonSpectrum(std::vector<double> kappas, std::vector<double> normings) {
  if (kappas.empty()) throw PreconditionError("SolitonSpectrum: need at least one kappa");
  for (double k : kappas)
    if (!(k > 0.0) || !std::isfinite(k)) throw PreconditionError("SolitonSpectrum: kappas must be positive and finite");
  if (normings.empty()) {
    std::vector<double> sorted = kappas;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw PreconditionError("SolitonSpectrum: kappas must be pairwise distinct (perturb equal values by a small epsilon)");
    normings = symmetric_normings(kappas);
  }
  if (normings.size() != kappas.size()) throw PreconditionError("SolitonSpectrum: one norming constant per kappa");
  for (double c : normings)
    if (!(c > 0.0) || !std::isfinite(c)) throw PreconditionError("SolitonSpectrum: normings must be positive and finite");

  std::vector<std::size_t> order(kappas.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return kappas[a] > kappas[b]; });
  for (std::size_t i = 0; i < order.size(); ++i) {
    kappas_.push_back(kappas[order[i]]);
    normings_.push_back(normings[order[i]]);
  }
  for (std::size_t i = 1; i < kappas_.size(); ++i)
    if (!(kappas_[i] < kappas_[i - 1]))
      throw PreconditionError("SolitonSpectrum: kappas must be pairwise distinct (perturb equal values by a small epsilon)");
}

std::vector<double> symmetric_normings(const std::vector<double>& kappas) {
  std::vector<double> c(kappas.size());
  for (std::size_t j = 0; j < kappas.size(); ++j) {
    double c2 = 2.0 * kappas[j];
    for (std::size_t l = 0; l < kappas.size(); ++l) {
      if (l == j) continue;
      const double gap = std::abs(kappas[j] - kappas[l]);
      if (gap == 0.0) throw PreconditionError("symmetric_normings: kappas must be pairwise distinct");
      c2 *= (kappas[j] + kappas[l]) / gap;
    }
    c[j] = std::sqrt(c2);
  }
  return c;
}

Complex transmission_T(const SolitonSpectrum& spec, double k) {
  if (!(k > 0.0)) throw DomainError("transmission_T: k must be positive");
  Complex t = 1.0;
  for (double kappa : spec.kappas()) t *= Complex(k, kappa) / Complex(k, -kappa);
  return t;
}

double transmission_phase(const SolitonSpectrum& spec, double k) {
  if (!(k > 0.0)) throw DomainError("transmission_phase: k must be positive");
  double phase = 0.0;
  for (double kappa : spec.kappas()) phase += 2.0 * std::atan(kappa / k);
  return phase;
}

std::vector<double> transparency_energies(const SolitonSpectrum& spec) {
  const std::size_t n = spec.size();
  const std::size_t count = (n - 1) / 2;
  std::vector<double> energies;
  if (count == 0) return energies;

  const auto& kappas = spec.kappas();
  const double kappa_sum = std::accumulate(kappas.begin(), kappas.end(), 0.0);
  const double kappa_min = kappas.back();

  // Monotonicity on a logarithmic grid spanning every scale of the spectrum.
  {
    const double lo = 1e-4 * kappa_min;
    const double hi = 1e4 * kappa_sum;
    double prev = transmission_phase(spec, lo);
    for (int i = 1; i <= 4000; ++i) {
      const double k = lo * std::pow(hi / lo, i / 4000.0);
      const double cur = transmission_phase(spec, k);
      if (!(cur <= prev)) throw NumericalError("transparency_energies: transmission phase not monotone near k = " + std::to_string(k));
      prev = cur;
    }
  }

  for (std::size_t m = 1; m <= count; ++m) {
    const double target = 2.0 * kPi * static_cast<double>(m);
    // phase(k) <= 2 sum kappa / k, so the root lies below sum kappa / (pi m).
    double hi = 1.01 * kappa_sum / (kPi * static_cast<double>(m));
    double lo = hi;
    int guard = 0;
    while (transmission_phase(spec, lo) <= target) {
      lo *= 0.5;
      if (++guard > 2000) throw NumericalError("transparency_energies: could not bracket root " + std::to_string(m));
    }
    if (!(transmission_phase(spec, hi) < target))
      throw NumericalError("transparency_energies: bracket anomaly for root " + std::to_string(m));
    while (hi - lo > 1e-14 * hi) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (transmission_phase(spec, mid) > target)
        lo = mid;
      else
        hi = mid;
    }
    const double k = 0.5 * (lo + hi);
    energies.push_back(k * k);
  }
  std::sort(energies.begin(), energies.end());
  return energies;
}

double nsoliton_potential(const SolitonSpectrum& spec, double x) {
  const auto& kappa = spec.kappas();
  const auto& c = spec.normings();
  const std::size_t n = spec.size();
  RealMatrix m(n, std::vector<double>(n));
  RealMatrix d1(n, std::vector<double>(n));
  RealMatrix d2(n, std::vector<double>(n));
  if (x >= 0.0) {
    // det(I + C), C decays for x > 0.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double s = kappa[i] + kappa[j];
        const double cij = c[i] * c[j] / s * std::exp(-s * x);
        m[i][j] = (i == j ? 1.0 : 0.0) + cij;
        d1[i][j] = -s * cij;
        d2[i][j] = s * s * cij;
      }
    }
  } else {
    // I + C = D (D^-2 + K) D with D = diag(c e^{-kappa x}); ln det D is linear in x,
    // so only D^-2 + K contributes to the second derivative.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m[i][j] = 1.0 / (kappa[i] + kappa[j]);
      const double e = std::exp(2.0 * kappa[i] * x) / (c[i] * c[i]);
      m[i][i] += e;
      d1[i][i] = 2.0 * kappa[i] * e;
      d2[i][i] = 4.0 * kappa[i] * kappa[i] * e;
    }
  }
  const double v = -2.0 * log_det_second_derivative(m, d1, d2);
  return std::abs(v) < 1e-300 ? 0.0 : v;
}

SampledPotential1D sample_nsoliton(const SolitonSpectrum& spec, double h) {
  if (!(h > 0.0)) throw PreconditionError("sample_nsoliton: step must be positive");
  double extent = 1.0;
  while (std::abs(nsoliton_potential(spec, extent)) >= 1e-12 || std::abs(nsoliton_potential(spec, -extent)) >= 1e-12) {
    extent += 0.5;
    if (extent > 1e4) throw NumericalError("sample_nsoliton: potential does not decay");
  }
  const auto steps = static_cast<std::size_t>(std::ceil(2.0 * extent / h));
  SampledPotential1D v;
  v.x0 = -extent;
  v.h = 2.0 * extent / static_cast<double>(steps);
  v.cutoff = extent;
  v.values.resize(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) v.values[i] = nsoliton_potential(spec, v.x(i));
  return v;
}

SampledPotential1D square_well(double depth, double half_width, double extent, double h) {
  if (!(half_width > 0.0) || !(h > 0.0) || !(extent > half_width))
    throw PreconditionError("square_well: need 0 < half_width < extent and h > 0");
  const auto inner = static_cast<std::size_t>(std::llround(half_width / h));
  if (inner < 1 || std::abs(static_cast<double>(inner) * h - half_width) > 1e-9 * half_width)
    throw PreconditionError("square_well: half_width must be a multiple of h");
  const auto outer = static_cast<std::size_t>(std::ceil(extent / h));
  SampledPotential1D v;
  v.h = h;
  v.x0 = -static_cast<double>(outer) * h;
  v.cutoff = static_cast<double>(outer) * h;
  v.values.assign(2 * outer + 1, 0.0);
  for (std::size_t i = 0; i <= 2 * outer; ++i) {
    const auto offset = static_cast<long long>(i) - static_cast<long long>(outer);
    const auto a = static_cast<std::size_t>(std::llabs(offset));
    if (a < inner)
      v.values[i] = -depth;
    else if (a == inner)
      v.values[i] = -0.5 * depth;
  }
  return v;
}

Scattering1D scatter1d_numeric(const SampledPotential1D& v, double k) {
  if (!(k > 0.0)) throw DomainError("scatter1d_numeric: k must be positive");
  const std::size_t n = v.size();
  if (n < 4) throw PreconditionError("scatter1d_numeric: grid needs at least 4 nodes");
  const double h = v.h;
  if (!(k * h <= 2.0 * kPi / 20.0)) throw PreconditionError("scatter1d_numeric: grid under-resolves the wavelength");

  const double f = h * h / 12.0;
  const double k2 = k * k;
  // Discrete wavenumber of the free Numerov recurrence.
  const double kd = std::acos((1.0 - 5.0 * f * k2) / (1.0 + f * k2)) / h;
  auto wave = [&](double sign, double x) { return std::exp(Complex(0.0, sign * kd * x)); };

  // Free stretches at either end carry plane waves exactly; integrate only across the support.
  const auto nonzero = [](double x) { return x != 0.0; };
  const auto first = std::find_if(v.values.begin(), v.values.end(), nonzero);
  if (first == v.values.end()) return {1.0, 0.0};
  const auto lo = static_cast<std::size_t>(first - v.values.begin());
  const auto hi = static_cast<std::size_t>(std::find_if(v.values.rbegin(), v.values.rend(), nonzero).base() - v.values.begin()) - 1;
  const std::size_t top = std::min(n - 1, hi + 2);
  const std::size_t bottom = lo >= 2 ? lo - 2 : 0;

  Complex next = wave(1.0, v.x(top));
  Complex cur = wave(1.0, v.x(top - 1));
  for (std::size_t i = top - 1; i > bottom; --i) {
    const double g_next = v.values[i + 1] - k2;
    const double g_cur = v.values[i] - k2;
    const double g_prev = v.values[i - 1] - k2;
    const Complex prev = (2.0 * (1.0 + 5.0 * f * g_cur) * cur - (1.0 - f * g_next) * next) / (1.0 - f * g_prev);
    next = cur;
    cur = prev;
  }
  // cur = psi at bottom, next = psi one node up; psi = A e^{ik x} + B e^{-ik x} there.
  const Complex p0 = wave(1.0, v.x(bottom));
  const Complex m0 = wave(-1.0, v.x(bottom));
  const Complex p1 = wave(1.0, v.x(bottom + 1));
  const Complex m1 = wave(-1.0, v.x(bottom + 1));
  const Complex det = p0 * m1 - p1 * m0;
  const Complex a = (cur * m1 - next * m0) / det;
  const Complex b = (p0 * next - p1 * cur) / det;
  return {1.0 / a, b / a};
}

Complex point_transmission(double alpha, double k) {
  const MultipointPotential pot(1, {PointScatterer{Vec{0.0, 0.0, 0.0}, alpha}});
  const Vec kv{k, 0.0, 0.0};
  return 1.0 + amplitude_fplus(pot, kv, kv).fplus;
}

double delta_limit_error(double alpha, int n, double k, int steps_per_half_width) {
  if (alpha == 0.0 || !std::isfinite(alpha)) throw PreconditionError("delta_limit_error: alpha must be finite and non-zero");
  if (n < 10) throw PreconditionError("delta_limit_error: N must be at least 10");
  const double half_width = 1.0 / n;
  const double h = half_width / steps_per_half_width;
  const SampledPotential1D well = square_well(n / (2.0 * alpha), half_width, 2.0 * half_width, h);
  return std::abs(scatter1d_numeric(well, k).transmission - point_transmission(alpha, k));
}

}  // namespace pscat::soliton
