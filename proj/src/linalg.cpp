#include "mteq/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mteq/errors.hpp"

namespace mteq {

namespace {
constexpr double kPivotThreshold = 1e-14;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> d) {
  DenseMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  DenseMatrix m(rows.size());
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != rows.size()) throw DimensionError("from_rows: matrix must be square");
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

std::vector<double> DenseMatrix::multiply(std::span<const double> v) const {
  if (v.size() != n_) throw DimensionError("DenseMatrix::multiply: length mismatch");
  std::vector<double> out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const double* row = data_.data() + i * n_;
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += row[j] * v[j];
    out[i] = s;
  }
  return out;
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> lu_solve(const DenseMatrix& M, std::span<const double> rhs) {
  const auto n = static_cast<Eigen::Index>(M.dim());
  if (rhs.size() != M.dim()) throw DimensionError("lu_solve: rhs length mismatch");
  if (n == 0) return {};

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> A(M.data().data(), n, n);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);

  const double scale = M.max_abs();
  const auto& packed = lu.matrixLU();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(std::abs(packed(k, k)) >= kPivotThreshold * scale) || scale == 0.0) {
      throw SingularSystemError("lu_solve: pivot " + std::to_string(k + 1) +
                                " below threshold");
    }
  }

  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), n);
  Eigen::VectorXd d = lu.solve(b);
  return {d.data(), d.data() + n};
}

std::vector<double> lu_solve_scaled(const DenseMatrix& M, std::span<const double> rhs,
                                    std::span<const double> col_scale) {
  const std::size_t n = M.dim();
  if (rhs.size() != n || col_scale.size() != n)
    throw DimensionError("lu_solve_scaled: length mismatch");
  DenseMatrix S = M;
  std::vector<double> r(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    double row_max = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      S(i, j) *= col_scale[j];
      row_max = std::max(row_max, std::abs(S(i, j)));
    }
    if (row_max == 0.0) throw SingularSystemError("lu_solve: row " + std::to_string(i + 1) + " is zero");
    for (std::size_t j = 0; j < n; ++j) S(i, j) /= row_max;
    r[i] /= row_max;
  }
  auto z = lu_solve(S, r);
  for (std::size_t j = 0; j < n; ++j) z[j] *= col_scale[j];
  return z;
}

bool is_z_matrix(const DenseMatrix& M) {
  const std::size_t n = M.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && M(i, j) > 0.0) return false;
  return true;
}

bool m_matrix_certificate(const DenseMatrix& M, std::span<const double> v) {
  if (v.size() != M.dim()) throw DimensionError("m_matrix_certificate: length mismatch");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0))
      throw std::invalid_argument("m_matrix_certificate: v must be strictly positive (component " +
                                  std::to_string(i + 1) + ")");
  }
  if (!is_z_matrix(M)) return false;
  const auto Mv = M.multiply(v);
  return std::all_of(Mv.begin(), Mv.end(), [](double x) { return x > 0.0; });
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double norm_inf(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace mteq
