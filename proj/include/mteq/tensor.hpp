#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mteq/linalg.hpp"

namespace mteq {

enum class Symmetry { none, semi_symmetric, symmetric };

/// Largest number of entries a DenseTensor may hold (n^m).
inline constexpr std::size_t kMaxTensorEntries = 100'000'000;

/// n^k with overflow and kMaxTensorEntries guard; throws DimensionError.
std::size_t checked_power(std::size_t n, std::size_t k);

/// Order-m, dimension-n real tensor in flat row-major storage.
///
/// The entry a_{i1...im} lives at linear offset
/// (i1-1) n^{m-1} + (i2-1) n^{m-2} + ... + (im-1). Multi-indices passed to
/// value()/set() are 1-based; data() exposes the raw 0-based storage.
/// The symmetry tag is advisory; set() clears it.
class DenseTensor {
 public:
  DenseTensor(int order, int dim, Symmetry tag = Symmetry::none);
  DenseTensor(int order, int dim, std::vector<double> entries, Symmetry tag = Symmetry::none);

  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] std::size_t size() const { return data_.size(); }
  [[nodiscard]] Symmetry symmetry() const { return tag_; }
  void set_symmetry(Symmetry tag) { tag_ = tag; }

  [[nodiscard]] std::span<const double> data() const { return data_; }
  /// Raw mutable storage. Callers are responsible for keeping entries finite
  /// and the symmetry tag truthful.
  [[nodiscard]] std::span<double> mutable_data() { return data_; }

  [[nodiscard]] double value(std::span<const int> index) const;
  void set(std::span<const int> index, double v);
  double value(std::initializer_list<int> index) const {
    return value(std::span<const int>(index.begin(), index.size()));
  }
  void set(std::initializer_list<int> index, double v) {
    set(std::span<const int>(index.begin(), index.size()), v);
  }

  /// 0-based linear offset of a 1-based multi-index.
  [[nodiscard]] std::size_t offset(std::span<const int> index) const;
  /// Inverse of offset(): fills `index` (size m) with 1-based indices.
  void multi_index(std::size_t offset, std::span<int> index) const;

  /// Scales every entry in place.
  void scale(double factor);

 private:
  int order_;
  int dim_;
  std::vector<double> data_;
  Symmetry tag_;
};

DenseTensor identity_tensor(int order, int dim);

/// (A x^{m-1})_i = sum over (i2..im) of a_{i i2..im} x_{i2}...x_{im}, summed
/// in lexicographic order of (i2..im).
std::vector<double> apply_vec(const DenseTensor& A, std::span<const double> x);

/// (A x^{m-2})_{ij} = sum over (i3..im) of a_{i j i3..im} x_{i3}...x_{im}.
DenseMatrix apply_mat(const DenseTensor& A, std::span<const double> x);

/// Averages every entry over all permutations of its trailing m-1 indices.
/// Throws DimensionError if the order exceeds max_order.
DenseTensor semi_symmetrize(const DenseTensor& A, int max_order = 6);

/// Averages every entry over all permutations of its m indices.
DenseTensor symmetrize(const DenseTensor& A);

bool is_semi_symmetric(const DenseTensor& A, double tol = 0.0);
bool is_symmetric(const DenseTensor& A, double tol = 0.0);

/// max_i (B e^{m-1})_i; an upper bound on the spectral radius of B >= 0.
/// Throws std::invalid_argument on a negative entry.
double row_sum_bound(const DenseTensor& B);

/// Entries whose indices all lie in `keep` (0-based, in the given order).
DenseTensor principal_subtensor(const DenseTensor& A, std::span<const std::size_t> keep);

}  // namespace mteq
