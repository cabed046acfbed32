#include "mteq/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mteq/errors.hpp"

namespace mteq {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double RngStream::uniform01() {
  // Top 53 bits, offset by half a unit so 0 is never returned.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t RngStream::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("RngStream::below: bound must be positive");
  // Rejection sampling keeps the result unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v = 0;
  do {
    v = engine_();
  } while (v >= limit);
  return v % bound;
}

std::string_view to_string(RhsMode m) { return m == RhsMode::positive ? "positive" : "zeros"; }

RhsMode rhs_mode_from_string(std::string_view s) {
  if (s == "positive") return RhsMode::positive;
  if (s == "zeros") return RhsMode::zeros;
  throw ConfigError("unknown b mode '" + std::string(s) + "' (expected positive|zeros)");
}

std::vector<double> threshold_rhs(std::vector<double> b0) {
  for (double& v : b0)
    if (v > kZeroThreshold) v = 0.0;
  return b0;
}

std::vector<double> gen_b_uniform(int n, RngStream& rng) {
  std::vector<double> b(static_cast<std::size_t>(n));
  for (double& v : b) v = rng.uniform01();
  return b;
}

std::vector<double> gen_b_with_zeros(int n, RngStream& rng) {
  return threshold_rhs(gen_b_uniform(n, rng));
}

DenseTensor shifted_identity_minus(const DenseTensor& B, double factor) {
  const double s = factor * row_sum_bound(B);
  DenseTensor A(B.order(), B.dim(), std::vector<double>(B.data().begin(), B.data().end()),
                B.symmetry());
  auto a = A.mutable_data();
  for (double& v : a) v = -v;
  std::size_t stride = 0;
  for (int p = 0; p < B.order(); ++p) stride = stride * static_cast<std::size_t>(B.dim()) + 1;
  for (int i = 0; i < B.dim(); ++i) a[static_cast<std::size_t>(i) * stride] += s;
  return A;
}

namespace {

std::vector<double> make_rhs(int n, RngStream& rng, RhsMode mode) {
  return mode == RhsMode::positive ? gen_b_uniform(n, rng) : gen_b_with_zeros(n, rng);
}

DenseTensor uniform_tensor(int m, int n, RngStream& rng) {
  DenseTensor B(m, n);
  for (double& v : B.mutable_data()) v = rng.uniform01();
  return B;
}

}  // namespace

MTensorEquation problem1_from_parts(const DenseTensor& B, std::vector<double> b) {
  return make_equation(shifted_identity_minus(B, 1.01), std::move(b), false);
}

MTensorEquation gen_problem1(int m, int n, RngStream& rng, RhsMode mode) {
  const DenseTensor B = symmetrize(uniform_tensor(m, n, rng));
  return problem1_from_parts(B, make_rhs(n, rng, mode));
}

DenseTensor problem2_tensor(int m, int n) {
  DenseTensor B(m, n, Symmetry::symmetric);
  std::vector<int> idx(static_cast<std::size_t>(m));
  auto data = B.mutable_data();
  for (std::size_t off = 0; off < data.size(); ++off) {
    B.multi_index(off, idx);
    data[off] = std::abs(std::sin(static_cast<double>(std::accumulate(idx.begin(), idx.end(), 0))));
  }
  return B;
}

MTensorEquation gen_problem2(int m, int n, RngStream& rng, RhsMode mode) {
  DenseTensor A = problem2_tensor(m, n);
  const double s = static_cast<double>(checked_power(static_cast<std::size_t>(n),
                                                     static_cast<std::size_t>(m - 1)));
  auto a = A.mutable_data();
  for (double& v : a) v = -v;
  std::size_t stride = 0;
  for (int p = 0; p < m; ++p) stride = stride * static_cast<std::size_t>(n) + 1;
  for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i) * stride] += s;
  return make_equation(std::move(A), make_rhs(n, rng, mode), false);
}

MTensorEquation gen_problem3(int n, double c0, double c1) {
  if (n < 3) throw DimensionError("Problem 3 needs n >= 3");
  DenseTensor A(4, n);
  auto a = A.mutable_data();
  const auto N = static_cast<std::size_t>(n);
  auto at = [&](int i, int j, int k, int l) -> double& {
    return a[((static_cast<std::size_t>(i - 1) * N + static_cast<std::size_t>(j - 1)) * N +
              static_cast<std::size_t>(k - 1)) * N +
             static_cast<std::size_t>(l - 1)];
  };
  at(1, 1, 1, 1) = 1.0;
  at(n, n, n, n) = 1.0;
  for (int i = 2; i <= n - 1; ++i) {
    at(i, i, i, i) = 2.0;
    for (int j : {i - 1, i + 1}) {
      at(i, j, i, i) = -1.0 / 3.0;
      at(i, i, j, i) = -1.0 / 3.0;
      at(i, i, i, j) = -1.0 / 3.0;
    }
  }
  A.set_symmetry(Symmetry::semi_symmetric);

  const double h2 = static_cast<double>(n - 1) * static_cast<double>(n - 1);
  std::vector<double> b(N, kGravityTimesMass / h2);
  b.front() = c0 * c0 * c0;
  b.back() = c1 * c1 * c1;
  return make_equation(std::move(A), std::move(b), false);
}

MTensorEquation gen_problem4(int m, int n, RngStream& rng, RhsMode mode) {
  const DenseTensor B = uniform_tensor(m, n, rng);
  return make_equation(shifted_identity_minus(B, 1.01), make_rhs(n, rng, mode), true);
}

MTensorEquation gen_problem5(int m, int n, RngStream& rng, RhsMode mode) {
  DenseTensor B(m, n);
  std::vector<int> idx(static_cast<std::size_t>(m));
  auto data = B.mutable_data();
  for (std::size_t off = 0; off < data.size(); ++off) {
    B.multi_index(off, idx);
    const bool below = std::all_of(idx.begin() + 1, idx.end(), [&](int j) { return j < idx[0]; });
    if (below) data[off] = rng.uniform01();
  }
  auto b = make_rhs(n, rng, mode);
  if (mode == RhsMode::zeros) b.front() = 0.1;
  return make_equation(shifted_identity_minus(B, 0.5), std::move(b), true);
}

MTensorEquation generate_problem(const ProblemSpec& spec, RngStream& rng) {
  switch (spec.problem) {
    case 1: return gen_problem1(spec.order, spec.dim, rng, spec.rhs_mode);
    case 2: return gen_problem2(spec.order, spec.dim, rng, spec.rhs_mode);
    case 3:
      if (spec.order != 4) throw ConfigError("Problem 3 is fourth order (--order 4)");
      return gen_problem3(spec.dim, spec.c0, spec.c1);
    case 4: return gen_problem4(spec.order, spec.dim, rng, spec.rhs_mode);
    case 5: return gen_problem5(spec.order, spec.dim, rng, spec.rhs_mode);
    default: throw ConfigError("problem must be 1..5, got " + std::to_string(spec.problem));
  }
}

ReducibleInstance gen_reducible_instance(int m, int n, int zeros, RngStream& rng) {
  if (zeros < 1 || zeros > n) throw DimensionError("gen_reducible_instance: need 1 <= zeros <= n");
  const auto N = static_cast<std::size_t>(n);

  std::vector<std::size_t> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = N - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  std::vector<std::size_t> zero_set(perm.begin(), perm.begin() + zeros);
  const auto planted_count = 1 + rng.below(static_cast<std::uint64_t>(zeros));
  std::vector<std::size_t> planted(zero_set.begin(),
                                   zero_set.begin() + static_cast<std::ptrdiff_t>(planted_count));
  std::sort(planted.begin(), planted.end());

  std::vector<char> in_planted(N, 0);
  for (auto i : planted) in_planted[i] = 1;

  DenseTensor B(m, n);
  std::vector<int> idx(static_cast<std::size_t>(m));
  auto data = B.mutable_data();
  for (std::size_t off = 0; off < data.size(); ++off) {
    const double keep = rng.uniform01();
    const double v = rng.uniform01();
    if (keep < 0.5) continue;
    B.multi_index(off, idx);
    const auto row = static_cast<std::size_t>(idx[0] - 1);
    const bool trailing_outside = std::all_of(idx.begin() + 1, idx.end(), [&](int j) {
      return !in_planted[static_cast<std::size_t>(j - 1)];
    });
    if (in_planted[row] && trailing_outside) continue;
    data[off] = v;
  }

  std::vector<double> b(N);
  for (double& v : b) v = 0.1 + 0.9 * rng.uniform01();
  for (auto i : zero_set) b[i] = 0.0;

  return {make_equation(shifted_identity_minus(B, 1.01), std::move(b), true), planted};
}

}  // namespace mteq
