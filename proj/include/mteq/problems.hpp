#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "mteq/equation.hpp"

namespace mteq {

/// Seeded uniform stream. Backed by std::mt19937_64 seeded through
/// std::seed_seq from (seed, stream), so every (seed, stream) pair yields an
/// independent, reproducible sequence. uniform01() maps the top 53 bits of a
/// draw to the open interval (0, 1).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  double uniform01();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::uint64_t stream() const { return stream_; }
  static constexpr std::string_view algorithm() { return "mt19937_64/seed_seq"; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

enum class RhsMode { positive, zeros };
std::string_view to_string(RhsMode m);
RhsMode rhs_mode_from_string(std::string_view s);

/// Threshold applied to b0 ~ U(0,1) when generating right-hand sides with zeros.
inline constexpr double kZeroThreshold = 0.6;

/// b_i = b0_i if b0_i <= 0.6, else 0.
std::vector<double> threshold_rhs(std::vector<double> b0);
/// b0 ~ U(0,1)^n followed by threshold_rhs.
std::vector<double> gen_b_with_zeros(int n, RngStream& rng);
std::vector<double> gen_b_uniform(int n, RngStream& rng);

/// A = s I - B with s = factor * row_sum_bound(B).
DenseTensor shifted_identity_minus(const DenseTensor& B, double factor);

/// Problem 1 from an explicit symmetric B and b (no rng).
MTensorEquation problem1_from_parts(const DenseTensor& B, std::vector<double> b);

/// Symmetric B ~ U(0,1) (averaged over index permutations), s = 1.01 max row sum.
MTensorEquation gen_problem1(int m, int n, RngStream& rng, RhsMode mode = RhsMode::positive);
/// B_{i1..im} = |sin(i1 + ... + im)|, s = n^{m-1}.
MTensorEquation gen_problem2(int m, int n, RngStream& rng, RhsMode mode = RhsMode::positive);
/// Tensor B of Problem 2 on its own.
DenseTensor problem2_tensor(int m, int n);
/// Fourth-order discretization of x'' = -GM/x^2 with x(0)=c0, x(1)=c1.
MTensorEquation gen_problem3(int n, double c0 = 1.0, double c1 = 1.0);
/// Non-symmetric B ~ U(0,1), s = 1.01 max row sum, then semi-symmetrized.
MTensorEquation gen_problem4(int m, int n, RngStream& rng, RhsMode mode = RhsMode::positive);
/// Strictly lower triangular B ~ U(0,1), s = 0.5 max row sum, then
/// semi-symmetrized. In zeros mode b_1 is forced to 0.1.
MTensorEquation gen_problem5(int m, int n, RngStream& rng, RhsMode mode = RhsMode::positive);

/// Newton's constant times the earth mass, as used by Problem 3.
inline constexpr double kGravityTimesMass = 6.67e-11 * 5.98e24;

struct ProblemSpec {
  int problem = 1;
  int order = 3;
  int dim = 10;
  RhsMode rhs_mode = RhsMode::positive;
  double c0 = 1.0;
  double c1 = 1.0;
};

/// Dispatches to gen_problemK. Throws ConfigError on an unknown problem or
/// a Problem 3 order other than 4.
MTensorEquation generate_problem(const ProblemSpec& spec, RngStream& rng);

/// Instance whose tensor is reducible w.r.t. a planted subset of the zero
/// set of b, built for exercising the zero-pattern reduction.
struct ReducibleInstance {
  MTensorEquation equation;
  std::vector<std::size_t> planted;  // 0-based, sorted
};

/// m-th order, n-dimensional strong M-tensor with a random sparse B; b has
/// `zeros` zero components, of which a random nonempty subset is planted as
/// a reducible set.
ReducibleInstance gen_reducible_instance(int m, int n, int zeros, RngStream& rng);

}  // namespace mteq
