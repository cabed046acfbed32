#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mteq {

/// Square dense matrix, row-major, 0-based element access.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> d);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  [[nodiscard]] std::size_t dim() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  [[nodiscard]] std::span<const double> data() const { return data_; }
  [[nodiscard]] std::span<double> data() { return data_; }

  [[nodiscard]] std::vector<double> multiply(std::span<const double> v) const;
  [[nodiscard]] double max_abs() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Solves M d = rhs by LU with partial pivoting.
/// Throws SingularSystemError when a pivot magnitude drops below
/// 1e-14 * max|M| (or M is all zeros).
std::vector<double> lu_solve(const DenseMatrix& M, std::span<const double> rhs);

/// Solves M d = rhs through diag(r) M diag(c) z = diag(r) rhs, d = c∘z, where
/// c > 0 is given and r equilibrates the rows. Same singularity test as
/// lu_solve, applied to the scaled matrix.
std::vector<double> lu_solve_scaled(const DenseMatrix& M, std::span<const double> rhs,
                                    std::span<const double> col_scale);

/// Off-diagonal entries all <= 0 (exact sign test).
bool is_z_matrix(const DenseMatrix& M);

/// Sufficient test for a nonsingular M-matrix: M is a Z-matrix and M v > 0
/// for the supplied v > 0. Throws std::invalid_argument if v is not positive.
bool m_matrix_certificate(const DenseMatrix& M, std::span<const double> v);

double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);

}  // namespace mteq
