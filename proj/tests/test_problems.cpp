#include <cmath>
#include <set>

#include "doctest.h"
#include "mteq/errors.hpp"
#include "mteq/problems.hpp"
#include "oracles.hpp"

using namespace mteq;

TEST_CASE("rng streams are reproducible and distinct") {
  RngStream a(7, 3), b(7, 3), c(7, 4);
  std::vector<double> va, vb, vc;
  for (int i = 0; i < 10; ++i) {
    va.push_back(a.uniform01());
    vb.push_back(b.uniform01());
    vc.push_back(c.uniform01());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  for (double v : va) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
  RngStream d(1, 0);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 200; ++i) {
    const auto k = d.below(5);
    CHECK(k < 5);
    seen.insert(k);
  }
  CHECK(seen.size() == 5);
}

TEST_CASE("thresholded b zeroes the large components") {
  const auto b = threshold_rhs({0.2, 0.7, 0.6, 0.95});
  CHECK(b == std::vector<double>{0.2, 0.0, 0.6, 0.0});
}

TEST_CASE("shift is 1.01 times the largest row sum") {
  DenseTensor B(3, 2, std::vector<double>(8, 1.0));
  const auto A = shifted_identity_minus(B, 1.01);
  CHECK(A.value({1, 1, 1}) == doctest::Approx(1.01 * 4.0 - 1.0));
  CHECK(A.value({1, 2, 1}) == -1.0);
  // A e^{m-1} = (s - rowsum) e > 0
  const auto r = apply_vec(A, std::vector<double>{1.0, 1.0});
  CHECK(r[0] == doctest::Approx(0.04));
}

TEST_CASE("Problem 1 and 4 are strong M-tensors with positive b") {
  RngStream rng(51, 0);
  for (int m : {3, 4}) {
    const auto e1 = gen_problem1(m, 5, rng);
    CHECK(is_symmetric(e1.tensor, 1e-15));
    const auto e4 = gen_problem4(m, 5, rng);
    CHECK(is_semi_symmetric(e4.tensor, 1e-15));
    for (const auto* eq : {&e1, &e4}) {
      CHECK(eq->rhs_class == RhsClass::strictly_positive);
      // A e^{m-1} > 0 certifies s > rho(B)
      for (double v : apply_vec(eq->tensor, std::vector<double>(5, 1.0))) CHECK(v > 0.0);
      double mx = 0.0;
      for (double v : eq->tensor.data()) mx = std::max(mx, std::abs(v));
      for (double v : eq->rhs) mx = std::max(mx, std::abs(v));
      CHECK(mx == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("Problem 2 tensor entries") {
  const auto B = problem2_tensor(3, 3);
  CHECK(B.value({1, 2, 3}) == doctest::Approx(std::abs(std::sin(6.0))));
  CHECK(B.value({3, 3, 3}) == doctest::Approx(std::abs(std::sin(9.0))));
  RngStream rng(52, 0);
  const auto eq = gen_problem2(3, 3, rng);
  // diagonal: (n^{m-1} - |sin(3i)|) / omega
  CHECK(eq.tensor.value({1, 1, 1}) * eq.omega == doctest::Approx(9.0 - std::abs(std::sin(3.0))));
  CHECK(eq.tensor.value({1, 2, 3}) * eq.omega == doctest::Approx(-std::abs(std::sin(6.0))));
}

TEST_CASE("Problem 3 discretization") {
  const auto eq = gen_problem3(3);
  const auto& A = eq.tensor;
  const double w = eq.omega;
  CHECK(A.value({2, 2, 2, 2}) * w == doctest::Approx(2.0));
  for (auto idx : {std::vector<int>{2, 1, 2, 2}, {2, 2, 1, 2}, {2, 2, 2, 1}, {2, 3, 2, 2},
                   {2, 2, 3, 2}, {2, 2, 2, 3}})
    CHECK(A.value(idx) * w == doctest::Approx(-1.0 / 3.0));
  CHECK(A.value({1, 1, 1, 1}) * w == doctest::Approx(1.0));
  CHECK(A.value({3, 3, 3, 3}) * w == doctest::Approx(1.0));
  // A e^3 = (1, 0, 1)
  const auto r = apply_vec(A, std::vector<double>(3, 1.0));
  CHECK(r[0] * w == doctest::Approx(1.0));
  CHECK(std::abs(r[1] * w) < 1e-15);
  CHECK(r[2] * w == doctest::Approx(1.0));
  CHECK(eq.rhs[1] * w == doctest::Approx(6.67e-11 * 5.98e24 / 4.0));
  CHECK(eq.rhs[0] * w == doctest::Approx(1.0));
  const auto e2 = gen_problem3(5, 2.0, 3.0);
  CHECK(e2.rhs[0] * e2.omega == doctest::Approx(8.0));
  CHECK(e2.rhs[4] * e2.omega == doctest::Approx(27.0));
  CHECK_THROWS_AS(gen_problem3(2), DimensionError);
}

TEST_CASE("Problem 5 is lower triangular") {
  RngStream rng(53, 0);
  const auto eq = gen_problem5(3, 4, rng, RhsMode::zeros);
  CHECK(eq.rhs[0] * eq.omega == doctest::Approx(0.1));
  std::vector<int> idx(3);
  for (std::size_t off = 0; off < eq.tensor.size(); ++off) {
    eq.tensor.multi_index(off, idx);
    const bool diag = idx[1] == idx[0] && idx[2] == idx[0];
    const bool lower = idx[1] < idx[0] && idx[2] < idx[0];
    if (!diag && !lower) CHECK(eq.tensor.data()[off] == 0.0);
  }
}

TEST_CASE("generate_problem dispatch and guards") {
  RngStream rng(54, 0);
  ProblemSpec spec;
  spec.problem = 3;
  spec.order = 3;
  CHECK_THROWS_AS(generate_problem(spec, rng), ConfigError);
  spec.problem = 6;
  CHECK_THROWS_AS(generate_problem(spec, rng), ConfigError);
  spec.problem = 2;
  spec.order = 4;
  spec.dim = 4;
  CHECK(generate_problem(spec, rng).order() == 4);
  CHECK(rhs_mode_from_string("zeros") == RhsMode::zeros);
  CHECK_THROWS_AS(rhs_mode_from_string("none"), ConfigError);
}

TEST_CASE("planted reducible instances") {
  RngStream rng(55, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 4;
    const int z = 1 + trial % 3;
    const auto inst = gen_reducible_instance(3, n, z, rng);
    CHECK_FALSE(inst.planted.empty());
    CHECK(oracle::reducible(inst.equation.tensor, inst.planted));
    int zeros = 0;
    for (double v : inst.equation.rhs) zeros += v == 0.0;
    CHECK(zeros == z);
    for (auto i : inst.planted) CHECK(inst.equation.rhs[i] == 0.0);
  }
}
