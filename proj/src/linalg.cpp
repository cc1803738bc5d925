#include "pscat/linalg.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace pscat::linalg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Plain real arithmetic keeps the hot loops free of the Annex G complex-multiply fallback.
struct DotResult {
  double re;
  double im;
};

// sum conj(x_i) y_i
DotResult cdot(const Complex* x, const Complex* y, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    const double yr = y[i].real();
    const double yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

double norm_sq(const Complex* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

// [x, y] <- [c x - s e^{-i phi} y, s x + c e^{-i phi} y]
void rotate(Complex* x, Complex* y, std::size_t n, double c, double s, double ph_re, double ph_im) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    const double yr = y[i].real() * ph_re - y[i].imag() * ph_im;
    const double yi = y[i].real() * ph_im + y[i].imag() * ph_re;
    x[i] = Complex(c * xr - s * yr, c * xi - s * yi);
    y[i] = Complex(s * xr + c * yr, s * xi + c * yi);
  }
}

}  // namespace

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::transpose() const {
  CMatrix t(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
  return t;
}

CMatrix CMatrix::adjoint() const {
  CMatrix t(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) t(j, i) = std::conj((*this)(i, j));
  return t;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw PreconditionError("matrix product: inner dimensions differ");
  CMatrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto cj = c.col(j);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex bkj = b(k, j);
      if (bkj == 0.0) continue;
      auto ak = a.col(k);
      for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bkj;
    }
  }
  return c;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw PreconditionError("matrix difference: shapes differ");
  CMatrix c(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) = a(i, j) - b(i, j);
  return c;
}

CVector operator*(const CMatrix& a, std::span<const Complex> x) {
  if (a.cols() != x.size()) throw PreconditionError("matrix-vector product: sizes differ");
  CVector y(a.rows());
  for (std::size_t k = 0; k < a.cols(); ++k) {
    auto ak = a.col(k);
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] += ak[i] * x[k];
  }
  return y;
}

double norm1(const CMatrix& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (const auto& z : a.col(j)) s += std::abs(z);
    best = std::max(best, s);
  }
  return best;
}

double norm_inf(std::span<const Complex> x) {
  double best = 0.0;
  for (const auto& z : x) best = std::max(best, std::abs(z));
  return best;
}

double norm2(std::span<const Complex> x) { return std::sqrt(norm_sq(x.data(), x.size())); }

double max_abs(const CMatrix& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) best = std::max(best, norm_inf(a.col(j)));
  return best;
}

LuFactorization::LuFactorization(CMatrix a) : lu_(std::move(a)) {
  const std::size_t n = lu_.rows();
  if (lu_.cols() != n) throw PreconditionError("LU: matrix must be square");
  anorm_ = norm1(lu_);
  pivot_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        p = i;
      }
    }
    pivot_[k] = p;
    if (best == 0.0) {
      singular_ = true;
      continue;
    }
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
    const Complex inv = 1.0 / lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) lu_(i, k) *= inv;
    for (std::size_t j = k + 1; j < n; ++j) {
      const Complex ukj = lu_(k, j);
      if (ukj == 0.0) continue;
      for (std::size_t i = k + 1; i < n; ++i) lu_(i, j) -= lu_(i, k) * ukj;
    }
  }
}

CVector LuFactorization::solve(std::span<const Complex> b) const {
  const std::size_t n = lu_.rows();
  if (b.size() != n) throw PreconditionError("LU solve: right-hand side has wrong length");
  if (singular_) throw NumericalError("LU solve: matrix is exactly singular");
  CVector x(b.begin(), b.end());
  for (std::size_t k = 0; k < n; ++k) std::swap(x[k], x[pivot_[k]]);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = k + 1; i < n; ++i) x[i] -= lu_(i, k) * x[k];
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t j = k + 1; j < n; ++j) x[k] -= lu_(k, j) * x[j];
    x[k] /= lu_(k, k);
  }
  return x;
}

double LuFactorization::condition_1norm() const {
  if (singular_) return std::numeric_limits<double>::infinity();
  const std::size_t n = lu_.rows();
  double inv_norm = 0.0;
  CVector e(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), Complex{});
    e[j] = 1.0;
    const CVector col = solve(e);
    double s = 0.0;
    for (const auto& z : col) s += std::abs(z);
    inv_norm = std::max(inv_norm, s);
  }
  return anorm_ * inv_norm;
}

Svd jacobi_svd(CMatrix a, bool want_u, bool want_v, int max_sweeps) {
  if (a.rows() < a.cols()) {
    Svd t = jacobi_svd(a.adjoint(), want_v, want_u, max_sweeps);
    std::swap(t.u, t.v);
    return t;
  }
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Svd out;
  CMatrix v;
  if (want_v) v = CMatrix::identity(n);
  const double tol = std::sqrt(static_cast<double>(std::max<std::size_t>(m, 1))) * kEps;

  std::vector<double> sq(n);
  for (std::size_t j = 0; j < n; ++j) sq[j] = norm_sq(a.col(j).data(), m);
  // Columns below this are pure rounding noise relative to the whole matrix.
  const double total = std::accumulate(sq.begin(), sq.end(), 0.0);
  const double negligible = total * tol * tol;

  bool converged = (n < 2);
  int sweep = 0;
  while (!converged) {
    if (sweep == max_sweeps) throw NumericalError("jacobi_svd: no convergence after " + std::to_string(max_sweeps) + " sweeps");
    ++sweep;
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = sq[p];
        const double beta = sq[q];
        if (alpha <= negligible && beta <= negligible) continue;
        const DotResult g = cdot(a.col(p).data(), a.col(q).data(), m);
        const double gabs = std::hypot(g.re, g.im);
        if (gabs <= tol * std::sqrt(alpha * beta) || gabs == 0.0) continue;
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gabs);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        // e^{-i phi}, gamma = |gamma| e^{i phi}
        const double ph_re = g.re / gabs;
        const double ph_im = -g.im / gabs;
        rotate(a.col(p).data(), a.col(q).data(), m, c, s, ph_re, ph_im);
        if (want_v) rotate(v.col(p).data(), v.col(q).data(), n, c, s, ph_re, ph_im);
        sq[p] = norm_sq(a.col(p).data(), m);
        sq[q] = norm_sq(a.col(q).data(), m);
      }
    }
  }
  out.sweeps = sweep;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(norm_sq(a.col(j).data(), m));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  const std::size_t k = std::min(m, n);
  out.sigma.resize(k);
  for (std::size_t i = 0; i < k; ++i) out.sigma[i] = sigma[order[i]];
  if (want_u) {
    out.u = CMatrix(m, k);
    for (std::size_t i = 0; i < k; ++i) {
      const double sv = sigma[order[i]];
      if (sv == 0.0) continue;
      auto src = a.col(order[i]);
      auto dst = out.u.col(i);
      for (std::size_t r = 0; r < m; ++r) dst[r] = src[r] / sv;
    }
  }
  if (want_v) {
    out.v = CMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      auto src = v.col(order[i]);
      std::copy(src.begin(), src.end(), out.v.col(i).begin());
    }
  }
  return out;
}

CMatrix householder_q(const CMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (n > m) throw PreconditionError("householder_q: needs rows >= cols");
  CMatrix r = a;
  std::vector<CVector> reflectors;
  reflectors.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    CVector v(m - k);
    for (std::size_t i = k; i < m; ++i) v[i - k] = r(i, k);
    const double xnorm = norm2(v);
    if (xnorm == 0.0) {
      reflectors.emplace_back();
      continue;
    }
    const Complex phase = (std::abs(v[0]) == 0.0) ? Complex(1.0) : v[0] / std::abs(v[0]);
    v[0] += phase * xnorm;
    const double vnorm = norm2(v);
    for (auto& z : v) z /= vnorm;
    for (std::size_t j = k; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += std::conj(v[i - k]) * r(i, j);
      for (std::size_t i = k; i < m; ++i) r(i, j) -= 2.0 * v[i - k] * s;
    }
    reflectors.push_back(std::move(v));
  }
  CMatrix q = CMatrix::identity(m);
  for (std::size_t k = n; k-- > 0;) {
    const CVector& v = reflectors[k];
    if (v.empty()) continue;
    for (std::size_t j = 0; j < m; ++j) {
      Complex s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += std::conj(v[i - k]) * q(i, j);
      if (s == 0.0) continue;
      for (std::size_t i = k; i < m; ++i) q(i, j) -= 2.0 * v[i - k] * s;
    }
  }
  return q;
}

NullSpace null_space(const CMatrix& a, double rel_threshold) {
  const std::size_t cols = a.cols();
  NullSpace out;
  if (a.rows() == 0 || cols == 0) {
    out.basis = CMatrix::identity(cols);
    return out;
  }
  // Range of a^H is the orthogonal complement of the null space of a.
  const Svd svd = jacobi_svd(a.adjoint(), /*want_u=*/true);
  const double s1 = svd.sigma.empty() ? 0.0 : svd.sigma.front();
  std::size_t rank = 0;
  for (double s : svd.sigma)
    if (s1 > 0.0 && s > rel_threshold * s1) ++rank;
  out.rank = rank;
  if (rank == 0) {
    out.basis = CMatrix::identity(cols);
    return out;
  }
  CMatrix range(cols, rank);
  for (std::size_t j = 0; j < rank; ++j) {
    auto src = svd.u.col(j);
    std::copy(src.begin(), src.end(), range.col(j).begin());
  }
  const CMatrix q = householder_q(range);
  out.basis = CMatrix(cols, cols - rank);
  for (std::size_t j = rank; j < cols; ++j) {
    auto src = q.col(j);
    std::copy(src.begin(), src.end(), out.basis.col(j - rank).begin());
  }
  return out;
}

}  // namespace pscat::linalg
