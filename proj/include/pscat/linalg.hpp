#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pscat/core.hpp"

namespace pscat::linalg {

using CVector = std::vector<Complex>;

/// Dense complex matrix, column-major.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i + j * rows_]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i + j * rows_]; }

  std::span<Complex> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const Complex> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

  CMatrix transpose() const;
  CMatrix adjoint() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator-(const CMatrix& a, const CMatrix& b);
CVector operator*(const CMatrix& a, std::span<const Complex> x);

double norm1(const CMatrix& a);
double norm_inf(std::span<const Complex> x);
double norm2(std::span<const Complex> x);
double max_abs(const CMatrix& a);

/// LU factorization with partial pivoting.
class LuFactorization {
 public:
  explicit LuFactorization(CMatrix a);

  CVector solve(std::span<const Complex> b) const;
  /// Exact 1-norm condition number ||A||_1 ||A^-1||_1 (inf when singular).
  double condition_1norm() const;
  bool singular() const { return singular_; }

 private:
  CMatrix lu_;
  std::vector<std::size_t> pivot_;
  double anorm_ = 0.0;
  bool singular_ = false;
};

struct Svd {
  std::vector<double> sigma;  // descending
  CMatrix u;                  // rows x min(rows, cols), empty unless requested
  CMatrix v;                  // cols x cols (cols x rows when wide), empty unless requested
  int sweeps = 0;
};

/// One-sided (Hestenes) Jacobi SVD. Column rotations are applied until every pair
/// is orthogonal to sqrt(rows) * eps relative; throws NumericalError past max_sweeps.
Svd jacobi_svd(CMatrix a, bool want_u = false, bool want_v = false, int max_sweeps = 80);

/// Orthonormal basis (as columns) of the null space of a, rank decided by
/// sigma_i > rel_threshold * sigma_1. Returns the basis and the detected rank.
struct NullSpace {
  CMatrix basis;
  std::size_t rank = 0;
};
NullSpace null_space(const CMatrix& a, double rel_threshold);

/// Full unitary Q (rows x rows) of the Householder QR of a (rows >= cols).
CMatrix householder_q(const CMatrix& a);

}  // namespace pscat::linalg
