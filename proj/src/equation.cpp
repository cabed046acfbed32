#include "mteq/equation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mteq/errors.hpp"
#include "mteq/tensor_io.hpp"

namespace mteq {

namespace {

constexpr double kMinPositive = 1e-300;

void check_len(const MTensorEquation& eq, std::span<const double> v, const char* what) {
  if (v.size() != static_cast<std::size_t>(eq.dim()))
    throw DimensionError(std::string(what) + ": vector length " + std::to_string(v.size()) +
                         " != dimension " + std::to_string(eq.dim()));
}

/// Evaluates f(y) and x = y^[1/(m-1)] together.
std::vector<double> eval_f(const MTensorEquation& eq, std::span<const double> y,
                           std::vector<double>& x) {
  x = root_transform(y, eq.order());
  auto f = apply_vec(eq.tensor, x);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] -= eq.rhs[i];
  return f;
}

}  // namespace

std::string_view to_string(RhsClass c) {
  switch (c) {
    case RhsClass::strictly_positive: return "strictly-positive";
    case RhsClass::nonnegative_with_zeros: return "nonnegative-with-zeros";
    case RhsClass::invalid: return "invalid";
  }
  return "invalid";
}

RhsClass rhs_class_from_string(std::string_view s) {
  if (s == "strictly-positive") return RhsClass::strictly_positive;
  if (s == "nonnegative-with-zeros") return RhsClass::nonnegative_with_zeros;
  if (s == "invalid") return RhsClass::invalid;
  throw ConfigError("unknown b_class '" + std::string(s) + "'");
}

RhsClass classify_rhs(std::span<const double> b) {
  bool zeros = false;
  for (double v : b) {
    if (v < 0.0) return RhsClass::invalid;
    if (v == 0.0) zeros = true;
  }
  return zeros ? RhsClass::nonnegative_with_zeros : RhsClass::strictly_positive;
}

MTensorEquation make_equation(DenseTensor A, std::vector<double> b, bool symmetrize) {
  if (b.size() != static_cast<std::size_t>(A.dim()))
    throw DimensionError("make_equation: rhs length " + std::to_string(b.size()) +
                         " != tensor dimension " + std::to_string(A.dim()));
  for (double v : b)
    if (!std::isfinite(v)) throw std::invalid_argument("make_equation: non-finite rhs");
  if (symmetrize) A = semi_symmetrize(A);

  double omega = std::max(norm_inf(A.data()), norm_inf(b));
  if (omega == 0.0) omega = 1.0;
  A.scale(1.0 / omega);
  for (double& v : b) v /= omega;

  MTensorEquation eq{std::move(A), std::move(b), omega, RhsClass::invalid};
  eq.rhs_class = classify_rhs(eq.rhs);
  return eq;
}

std::vector<double> residual_F(const MTensorEquation& eq, std::span<const double> x) {
  check_len(eq, x, "residual_F");
  auto r = apply_vec(eq.tensor, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= eq.rhs[i];
  return r;
}

std::vector<double> root_transform(std::span<const double> y, int order) {
  const double inv = 1.0 / static_cast<double>(order - 1);
  std::vector<double> x(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] >= kMinPositive))
      throw DomainError("y_" + std::to_string(i + 1) + " = " + std::to_string(y[i]) +
                        " is not positive");
    x[i] = order == 2 ? y[i] : std::exp(std::log(y[i]) * inv);
  }
  return x;
}

std::vector<double> power_transform(std::span<const double> x, int order) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::pow(x[i], order - 1);
  return y;
}

std::vector<double> map_f(const MTensorEquation& eq, std::span<const double> y) {
  check_len(eq, y, "map_f");
  std::vector<double> x;
  return eval_f(eq, y, x);
}

DenseMatrix jac_f(const MTensorEquation& eq, std::span<const double> y) {
  check_len(eq, y, "jac_f");
  const auto x = root_transform(y, eq.order());
  DenseMatrix J = apply_mat(eq.tensor, x);
  const std::size_t n = J.dim();
  for (std::size_t j = 0; j < n; ++j) {
    const double s = x[j] / y[j];
    for (std::size_t i = 0; i < n; ++i) J(i, j) *= s;
  }
  return J;
}

std::vector<double> map_E(const MTensorEquation& eq, std::span<const double> y) {
  auto f = map_f(eq, y);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] /= y[i];
  return f;
}

DenseMatrix newton_matrix(const MTensorEquation& eq, std::span<const double> y) {
  check_len(eq, y, "newton_matrix");
  std::vector<double> x;
  const auto f = eval_f(eq, y, x);
  return detail::newton_matrix_from(eq, y, x, f);
}

DenseMatrix detail::newton_matrix_from(const MTensorEquation& eq, std::span<const double> y,
                                       std::span<const double> x, std::span<const double> f) {
  DenseMatrix M = apply_mat(eq.tensor, x);
  const std::size_t n = M.dim();
  for (std::size_t j = 0; j < n; ++j) {
    const double s = x[j] / y[j];
    for (std::size_t i = 0; i < n; ++i) M(i, j) *= s;
  }
  for (std::size_t i = 0; i < n; ++i) M(i, i) -= f[i] / y[i];
  return M;
}

DenseMatrix jac_E(const MTensorEquation& eq, std::span<const double> y) {
  DenseMatrix M = newton_matrix(eq, y);
  const std::size_t n = M.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M(i, j) /= y[i];
  return M;
}

double max_step(std::span<const double> rhs, std::span<const double> f) {
  if (rhs.size() != f.size()) throw DimensionError("max_step: length mismatch");
  double a = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] > 0.0) a = std::min(a, rhs[i] / f[i]);
  return a;
}

double max_step(const MTensorEquation& eq, std::span<const double> y) {
  const auto f = map_f(eq, y);
  return max_step(eq.rhs, f);
}

std::vector<double> reg_map_E(const MTensorEquation& eq, double t, std::span<const double> y) {
  if (!(t > 0.0)) throw DomainError("reg_map_E: t must be positive");
  const auto E = map_E(eq, y);
  std::vector<double> out(E.size() + 1);
  out[0] = t;
  for (std::size_t i = 0; i < E.size(); ++i) out[i + 1] = E[i] + t * y[i];
  return out;
}

DenseMatrix reg_jacobian_block(const MTensorEquation& eq, double t, std::span<const double> y) {
  if (!(t > 0.0)) throw DomainError("reg_jacobian: t must be positive");
  DenseMatrix J = jac_E(eq, y);
  for (std::size_t i = 0; i < J.dim(); ++i) J(i, i) += t;
  return J;
}

DenseMatrix reg_jacobian(const MTensorEquation& eq, double t, std::span<const double> y) {
  const DenseMatrix block = reg_jacobian_block(eq, t, y);
  const std::size_t n = block.dim();
  DenseMatrix J(n + 1);
  J(0, 0) = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    J(i + 1, 0) = y[i];
    for (std::size_t j = 0; j < n; ++j) J(i + 1, j + 1) = block(i, j);
  }
  return J;
}

bool is_reducible_wrt(const DenseTensor& A, std::span<const std::size_t> index_set) {
  const auto n = static_cast<std::size_t>(A.dim());
  std::vector<char> in_set(n, 0);
  for (auto i : index_set) {
    if (i >= n) throw DimensionError("is_reducible_wrt: index out of range");
    in_set[i] = 1;
  }
  const int m = A.order();
  const std::size_t row_len = A.size() / n;
  const auto data = A.data();
  std::vector<int> idx(static_cast<std::size_t>(m));
  for (auto i : index_set) {
    for (std::size_t k = 0; k < row_len; ++k) {
      const std::size_t off = i * row_len + k;
      if (data[off] == 0.0) continue;
      A.multi_index(off, idx);
      bool all_outside = true;
      for (int p = 1; p < m && all_outside; ++p)
        all_outside = !in_set[static_cast<std::size_t>(idx[static_cast<std::size_t>(p)] - 1)];
      if (all_outside) return false;
    }
  }
  return true;
}

ReductionResult reduce_zero_pattern(const MTensorEquation& eq) {
  if (eq.rhs_class == RhsClass::invalid)
    throw std::invalid_argument("reduce_zero_pattern: rhs has negative components");
  const auto n = static_cast<std::size_t>(eq.dim());
  const int m = eq.order();
  std::vector<char> in_set(n, 0);
  for (std::size_t i = 0; i < n; ++i) in_set[i] = eq.rhs[i] == 0.0;

  // Deleting an index only shrinks I, so the rule is monotone and the
  // fixed point does not depend on sweep order.
  const std::size_t row_len = eq.tensor.size() / n;
  const auto data = eq.tensor.data();
  std::vector<int> idx(static_cast<std::size_t>(m));
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_set[i]) continue;
      for (std::size_t k = 0; k < row_len; ++k) {
        const std::size_t off = i * row_len + k;
        if (data[off] == 0.0) continue;
        eq.tensor.multi_index(off, idx);
        bool all_outside = true;
        for (int p = 1; p < m && all_outside; ++p)
          all_outside = !in_set[static_cast<std::size_t>(idx[static_cast<std::size_t>(p)] - 1)];
        if (all_outside) {
          in_set[i] = 0;
          changed = true;
          break;
        }
      }
    }
  }

  ReductionResult red;
  red.dim = n;
  for (std::size_t i = 0; i < n; ++i) (in_set[i] ? red.zero_set : red.complement).push_back(i);
  if (red.complement.empty()) return red;
  if (red.zero_set.empty()) {
    red.reduced = eq;
    return red;
  }
  DenseTensor sub = principal_subtensor(eq.tensor, red.complement);
  std::vector<double> b(red.complement.size());
  for (std::size_t k = 0; k < b.size(); ++k) b[k] = eq.rhs[red.complement[k]];
  red.reduced = make_equation(std::move(sub), std::move(b), false);
  return red;
}

std::vector<double> embed_solution(const ReductionResult& red, std::span<const double> x_reduced) {
  if (x_reduced.size() != red.complement.size())
    throw DimensionError("embed_solution: expected " + std::to_string(red.complement.size()) +
                         " reduced components, got " + std::to_string(x_reduced.size()));
  std::vector<double> x(red.dim, 0.0);
  for (std::size_t k = 0; k < x_reduced.size(); ++k) x[red.complement[k]] = x_reduced[k];
  return x;
}

void write_equation_files(const std::filesystem::path& stem, const MTensorEquation& eq) {
  auto with_ext = [&](const char* ext) {
    auto p = stem;
    p += ext;
    return p;
  };
  write_tensor_file(with_ext(".mtns"), eq.tensor);
  write_vector_file(with_ext(".vec"), eq.rhs);
  std::ofstream hdr(with_ext(".hdr"));
  if (!hdr) throw ConfigError("cannot write " + with_ext(".hdr").string());
  hdr << std::setprecision(17);
  hdr << "omega=" << eq.omega << '\n'
      << "m=" << eq.order() << '\n'
      << "n=" << eq.dim() << '\n'
      << "b_class=" << to_string(eq.rhs_class) << '\n';
}

EquationHeader read_equation_header(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  EquationHeader h;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const auto key = line.substr(0, eq);
    const auto val = line.substr(eq + 1);
    try {
      if (key == "omega") h.omega = std::stod(val);
      else if (key == "m") h.order = std::stoi(val);
      else if (key == "n") h.dim = std::stoi(val);
      else if (key == "b_class") h.rhs_class = rhs_class_from_string(val);
    } catch (const std::logic_error&) {
      throw ConfigError("bad header value for '" + key + "'");
    }
  }
  return h;
}

}  // namespace mteq
