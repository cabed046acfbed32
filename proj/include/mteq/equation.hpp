#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mteq/linalg.hpp"
#include "mteq/tensor.hpp"

namespace mteq {

enum class RhsClass { strictly_positive, nonnegative_with_zeros, invalid };

std::string_view to_string(RhsClass c);
RhsClass rhs_class_from_string(std::string_view s);
RhsClass classify_rhs(std::span<const double> b);

/// A scaled M-tensor equation  Â x^{m-1} = b̂  with Â = A/ω, b̂ = b/ω.
struct MTensorEquation {
  DenseTensor tensor;        // Â
  std::vector<double> rhs;   // b̂
  double omega = 1.0;        // max(|A|_max, |b|_max) of the unscaled data
  RhsClass rhs_class = RhsClass::invalid;

  [[nodiscard]] int order() const { return tensor.order(); }
  [[nodiscard]] int dim() const { return tensor.dim(); }
};

/// Optionally semi-symmetrizes A, then scales both A and b by ω.
/// Negative components in b are classified, not rejected.
MTensorEquation make_equation(DenseTensor A, std::vector<double> b, bool symmetrize);

/// F̂(x) = Â x^{m-1} - b̂.
std::vector<double> residual_F(const MTensorEquation& eq, std::span<const double> x);

/// x = y^[1/(m-1)]; throws DomainError unless every y_i >= 1e-300.
std::vector<double> root_transform(std::span<const double> y, int order);
/// y = x^[m-1].
std::vector<double> power_transform(std::span<const double> x, int order);

/// f(y) = F̂(y^[1/(m-1)]).
std::vector<double> map_f(const MTensorEquation& eq, std::span<const double> y);
/// f'(y) = Â x^{m-2} diag(x/y) with x = y^[1/(m-1)].
DenseMatrix jac_f(const MTensorEquation& eq, std::span<const double> y);
/// E(y) = f(y) / y componentwise.
std::vector<double> map_E(const MTensorEquation& eq, std::span<const double> y);
/// E'(y) = diag(1/y) [f'(y) - diag(f(y)/y)].
DenseMatrix jac_E(const MTensorEquation& eq, std::span<const double> y);
/// Newton matrix f'(y) - diag(f(y)/y). Satisfies M(y) y = b̂.
DenseMatrix newton_matrix(const MTensorEquation& eq, std::span<const double> y);

namespace detail {
/// newton_matrix with x = y^[1/(m-1)] and f = f(y) already evaluated.
DenseMatrix newton_matrix_from(const MTensorEquation& eq, std::span<const double> y,
                               std::span<const double> x, std::span<const double> f);
}  // namespace detail

/// min { b_i / f_i : f_i > 0 }, +inf if no f_i is positive.
double max_step(std::span<const double> rhs, std::span<const double> f);
double max_step(const MTensorEquation& eq, std::span<const double> y);

/// E(t,y) = (t, E(y) + t y), length n+1.
std::vector<double> reg_map_E(const MTensorEquation& eq, double t, std::span<const double> y);
/// Lower-right block E'(y) + tI of the regularized Jacobian.
DenseMatrix reg_jacobian_block(const MTensorEquation& eq, double t, std::span<const double> y);
/// Full (n+1)x(n+1) Jacobian [[1, 0], [y, E'(y) + tI]].
DenseMatrix reg_jacobian(const MTensorEquation& eq, double t, std::span<const double> y);

/// Result of removing forced-zero coordinates. Index lists are 0-based.
struct ReductionResult {
  std::size_t dim = 0;
  std::vector<std::size_t> zero_set;    // I
  std::vector<std::size_t> complement;  // I_c, also the embedding map
  std::optional<MTensorEquation> reduced;  // absent when I_c is empty
};

/// a_{i i2..im} = 0 for all i in I whenever every trailing index lies outside I.
bool is_reducible_wrt(const DenseTensor& A, std::span<const std::size_t> index_set);

/// Largest I inside the zero set of b̂ for which Â is reducible w.r.t. I,
/// with the principal-subtensor equation on the complement (rescaled).
ReductionResult reduce_zero_pattern(const MTensorEquation& eq);

/// x_I = 0, x_{I_c} = x_reduced.
std::vector<double> embed_solution(const ReductionResult& red, std::span<const double> x_reduced);

/// Writes <stem>.mtns, <stem>.vec and <stem>.hdr (ω, m, n, b_class).
/// The stored tensor and vector are the scaled Â and b̂.
void write_equation_files(const std::filesystem::path& stem, const MTensorEquation& eq);

struct EquationHeader {
  double omega = 1.0;
  int order = 0;
  int dim = 0;
  RhsClass rhs_class = RhsClass::invalid;
};
EquationHeader read_equation_header(const std::filesystem::path& path);

}  // namespace mteq
