#include "mteq/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mteq/errors.hpp"

namespace mteq {

std::size_t checked_power(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (n != 0 && r > kMaxTensorEntries / n)
      throw DimensionError("tensor size n^m exceeds " + std::to_string(kMaxTensorEntries) +
                           " entries");
    r *= n;
  }
  return r;
}

namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i]))
      throw std::invalid_argument(std::string(what) + ": non-finite entry at offset " +
                                  std::to_string(i));
}

void check_shape(int order, int dim) {
  if (order < 2) throw DimensionError("tensor order must be >= 2");
  if (dim < 1) throw DimensionError("tensor dimension must be >= 1");
}

/// Products x_{j1} x_{j2} ... x_{jk} for all (j1..jk) in lexicographic order.
std::vector<double> outer_powers(std::span<const double> x, int k) {
  std::vector<double> w{1.0};
  const std::size_t n = x.size();
  for (int f = 0; f < k; ++f) {
    std::vector<double> next(w.size() * n);
    for (std::size_t j = 0; j < w.size(); ++j)
      for (std::size_t c = 0; c < n; ++c) next[j * n + c] = w[j] * x[c];
    w = std::move(next);
  }
  return w;
}

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

/// Shared kernel for (semi-)symmetrization: averages each entry over the
/// orbit of index positions [first, m).
DenseTensor average_over_permutations(const DenseTensor& A, int first, Symmetry tag) {
  const int m = A.order();
  const std::size_t total = A.size();
  std::vector<double> sums(total, 0.0);
  std::vector<std::size_t> canon(total);
  std::vector<int> idx(m);
  const auto src = A.data();

  for (std::size_t off = 0; off < total; ++off) {
    A.multi_index(off, idx);
    std::sort(idx.begin() + first, idx.end());
    canon[off] = A.offset(idx);
    sums[canon[off]] += src[off];
  }

  std::vector<double> out(total, 0.0);
  const int k = m - first;
  const double kfact = factorial(k);
  for (std::size_t off = 0; off < total; ++off) {
    A.multi_index(canon[off], idx);
    // Orbit size = k! / prod(multiplicity!) over the sorted tail.
    double denom = 1.0;
    int run = 1;
    for (int p = first + 1; p <= m; ++p) {
      if (p < m && idx[p] == idx[p - 1]) {
        ++run;
      } else {
        denom *= factorial(run);
        run = 1;
      }
    }
    out[off] = sums[canon[off]] / (kfact / denom);
  }
  return DenseTensor(m, A.dim(), std::move(out), tag);
}

bool invariant_under(const DenseTensor& A, int first, double tol) {
  const int m = A.order();
  std::vector<int> idx(m);
  const auto src = A.data();
  for (std::size_t off = 0; off < A.size(); ++off) {
    A.multi_index(off, idx);
    std::sort(idx.begin() + first, idx.end());
    if (std::abs(src[off] - src[A.offset(idx)]) > tol) return false;
  }
  return true;
}

}  // namespace

DenseTensor::DenseTensor(int order, int dim, Symmetry tag)
    : order_(order), dim_(dim), tag_(tag) {
  check_shape(order, dim);
  data_.assign(checked_power(static_cast<std::size_t>(dim), static_cast<std::size_t>(order)), 0.0);
}

DenseTensor::DenseTensor(int order, int dim, std::vector<double> entries, Symmetry tag)
    : order_(order), dim_(dim), data_(std::move(entries)), tag_(tag) {
  check_shape(order, dim);
  const auto expected =
      checked_power(static_cast<std::size_t>(dim), static_cast<std::size_t>(order));
  if (data_.size() != expected)
    throw DimensionError("tensor entries: expected " + std::to_string(expected) + ", got " +
                         std::to_string(data_.size()));
  require_finite(data_, "DenseTensor");
}

std::size_t DenseTensor::offset(std::span<const int> index) const {
  if (index.size() != static_cast<std::size_t>(order_))
    throw DimensionError("multi-index has " + std::to_string(index.size()) +
                         " components, tensor order is " + std::to_string(order_));
  std::size_t off = 0;
  for (int i : index) {
    if (i < 1 || i > dim_)
      throw DimensionError("index " + std::to_string(i) + " out of range 1.." +
                           std::to_string(dim_));
    off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i - 1);
  }
  return off;
}

void DenseTensor::multi_index(std::size_t off, std::span<int> index) const {
  const auto n = static_cast<std::size_t>(dim_);
  for (int p = order_ - 1; p >= 0; --p) {
    index[static_cast<std::size_t>(p)] = static_cast<int>(off % n) + 1;
    off /= n;
  }
}

double DenseTensor::value(std::span<const int> index) const { return data_[offset(index)]; }

void DenseTensor::set(std::span<const int> index, double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("DenseTensor::set: non-finite value");
  data_[offset(index)] = v;
  tag_ = Symmetry::none;
}

void DenseTensor::scale(double factor) {
  for (double& v : data_) v *= factor;
}

DenseTensor identity_tensor(int order, int dim) {
  DenseTensor I(order, dim, Symmetry::symmetric);
  // Stride between consecutive diagonal entries: 1 + n + ... + n^{m-1}.
  std::size_t stride = 0;
  for (int p = 0; p < order; ++p)
    stride = stride * static_cast<std::size_t>(dim) + 1;
  auto d = I.mutable_data();
  for (int i = 0; i < dim; ++i) d[static_cast<std::size_t>(i) * stride] = 1.0;
  return I;
}

std::vector<double> apply_vec(const DenseTensor& A, std::span<const double> x) {
  const auto n = static_cast<std::size_t>(A.dim());
  if (x.size() != n)
    throw DimensionError("apply_vec: vector length " + std::to_string(x.size()) +
                         " != tensor dimension " + std::to_string(n));
  const auto w = outer_powers(x, A.order() - 1);
  const std::size_t len = w.size();
  const double* a = A.data().data();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = a + i * len;
    double s = 0.0;
    for (std::size_t j = 0; j < len; ++j) s += row[j] * w[j];
    out[i] = s;
  }
  return out;
}

DenseMatrix apply_mat(const DenseTensor& A, std::span<const double> x) {
  const auto n = static_cast<std::size_t>(A.dim());
  if (x.size() != n)
    throw DimensionError("apply_mat: vector length " + std::to_string(x.size()) +
                         " != tensor dimension " + std::to_string(n));
  const auto w = outer_powers(x, A.order() - 2);
  const std::size_t len = w.size();
  const double* a = A.data().data();
  DenseMatrix M(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double* fiber = a + (i * n + j) * len;
      double s = 0.0;
      for (std::size_t k = 0; k < len; ++k) s += fiber[k] * w[k];
      M(i, j) = s;
    }
  }
  return M;
}

DenseTensor semi_symmetrize(const DenseTensor& A, int max_order) {
  if (A.order() > max_order)
    throw DimensionError("semi_symmetrize: order " + std::to_string(A.order()) +
                         " exceeds limit " + std::to_string(max_order));
  return average_over_permutations(A, 1, Symmetry::semi_symmetric);
}

DenseTensor symmetrize(const DenseTensor& A) {
  return average_over_permutations(A, 0, Symmetry::symmetric);
}

bool is_semi_symmetric(const DenseTensor& A, double tol) { return invariant_under(A, 1, tol); }

bool is_symmetric(const DenseTensor& A, double tol) { return invariant_under(A, 0, tol); }

double row_sum_bound(const DenseTensor& B) {
  for (double v : B.data())
    if (v < 0.0) throw std::invalid_argument("row_sum_bound: tensor has a negative entry");
  const std::vector<double> e(static_cast<std::size_t>(B.dim()), 1.0);
  const auto rows = apply_vec(B, e);
  return *std::max_element(rows.begin(), rows.end());
}

DenseTensor principal_subtensor(const DenseTensor& A, std::span<const std::size_t> keep) {
  const int m = A.order();
  const auto k = keep.size();
  if (k == 0) throw DimensionError("principal_subtensor: empty index set");
  for (auto i : keep)
    if (i >= static_cast<std::size_t>(A.dim()))
      throw DimensionError("principal_subtensor: index out of range");

  DenseTensor sub(m, static_cast<int>(k), A.symmetry());
  auto dst = sub.mutable_data();
  const auto src = A.data();
  const auto n = static_cast<std::size_t>(A.dim());
  std::vector<std::size_t> pos(static_cast<std::size_t>(m), 0);
  for (std::size_t off = 0; off < sub.size(); ++off) {
    std::size_t src_off = 0;
    for (int p = 0; p < m; ++p) src_off = src_off * n + keep[pos[static_cast<std::size_t>(p)]];
    dst[off] = src[src_off];
    for (int p = m - 1; p >= 0; --p) {
      if (++pos[static_cast<std::size_t>(p)] < k) break;
      pos[static_cast<std::size_t>(p)] = 0;
    }
  }
  return sub;
}

}  // namespace mteq
