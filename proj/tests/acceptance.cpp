// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mteq/bench.hpp"
#include "mteq/equation.hpp"
#include "mteq/problems.hpp"
#include "mteq/solvers.hpp"
#include "oracles.hpp"

using namespace mteq;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Every solver run made by the suite, for the trace-invariant criterion.
std::vector<TrialRecord> g_runs;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<double> random_positive(std::size_t n, RngStream& rng) {
  std::vector<double> y(n);
  for (double& v : y) v = std::exp(4.0 * rng.uniform01() - 2.0);
  return y;
}

BenchResult bench(int problem, int m, int n, SolverSelection s, RhsMode mode, int trials,
                  std::uint64_t seed) {
  BenchConfig cfg;
  cfg.problem.problem = problem;
  cfg.problem.order = m;
  cfg.problem.dim = n;
  cfg.problem.rhs_mode = mode;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.solvers = s;
  auto res = run_bench(cfg);
  g_runs.insert(g_runs.end(), res.records.begin(), res.records.end());
  return res;
}

struct Stats {
  int trials = 0;
  int converged = 0;
  double mean_iters = 0.0;
  double max_residual = 0.0;
};

Stats stats(const BenchResult& r, SolverKind kind) {
  Stats s;
  for (const auto& t : r.records) {
    if (t.solver != kind) continue;
    ++s.trials;
    if (t.status != SolverStatus::converged) continue;
    ++s.converged;
    s.mean_iters += t.iterations;
    s.max_residual = std::max(s.max_residual, t.residual);
  }
  if (s.converged > 0) s.mean_iters /= s.converged;
  return s;
}

std::string describe(const char* label, const Stats& s) {
  std::ostringstream os;
  os << label << ": " << s.converged << "/" << s.trials << " converged, mean iters "
     << fmt("%.2f", s.mean_iters) << ", max residual " << format_residual(s.max_residual);
  return os.str();
}

bool all_converged(const Stats& s, double tol = 1e-10) {
  return s.converged == s.trials && s.max_residual <= tol;
}

// Sampled equations for the Jacobian / identity / certificate criteria.
struct Sample {
  MTensorEquation eq;
  std::vector<double> y;
};

std::vector<Sample> jacobian_sample() {
  std::vector<Sample> out;
  const std::pair<int, int> sizes[] = {{3, 10}, {4, 10}, {5, 5}};
  for (auto [m, n] : sizes) {
    for (int k = 0; k < 50; ++k) {
      RngStream rng(2000 + static_cast<std::uint64_t>(m * 100 + n), static_cast<std::uint64_t>(k));
      auto eq = k % 2 == 0 ? gen_problem1(m, n, rng) : gen_problem4(m, n, rng);
      auto y = random_positive(static_cast<std::size_t>(n), rng);
      out.push_back({std::move(eq), std::move(y)});
    }
  }
  return out;
}

Outcome ac1_contraction() {
  const auto t0 = std::chrono::steady_clock::now();
  int checked = 0, failed = 0;
  double worst = 0.0;
  for (int m = 2; m <= 5; ++m) {
    for (int n = 1; n <= 4; ++n) {
      for (int k = 0; k < 100; ++k) {
        RngStream rng(1000 + static_cast<std::uint64_t>(10 * m + n), static_cast<std::uint64_t>(k));
        const auto A = oracle::random_tensor(m, n, rng);
        const auto x = oracle::random_vector(static_cast<std::size_t>(n), rng, -2.0, 2.0);
        const double e = oracle::rel_diff(apply_vec(A, x), oracle::contract(A, x));
        worst = std::max(worst, e);
        ++checked;
        failed += e > 1e-13;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {failed == 0 && secs < 5.0,
          std::to_string(checked) + " tensors, worst rel error " + fmt("%.1e", worst) + ", " +
              fmt("%.2f", secs) + " s"};
}

Outcome ac2_jacobians(const std::vector<Sample>& sample) {
  const auto t0 = std::chrono::steady_clock::now();
  int failed = 0;
  double worst = 0.0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const auto& [eq, y] = sample[k];
    const auto Jfd = oracle::fd_jacobian([&](const std::vector<double>& p) { return map_f(eq, p); }, y);
    const double e1 = oracle::rel_diff(jac_f(eq, y), Jfd);
    const double t = 0.01 * (0.05 + 0.95 * static_cast<double>(k % 20) / 19.0);
    std::vector<double> ty{t};
    ty.insert(ty.end(), y.begin(), y.end());
    const auto Rfd = oracle::fd_jacobian(
        [&](const std::vector<double>& p) {
          return reg_map_E(eq, p[0], std::span<const double>(p).subspan(1));
        },
        ty);
    const double e2 = oracle::rel_diff(reg_jacobian(eq, t, y), Rfd);
    worst = std::max({worst, e1, e2});
    failed += (e1 > 1e-6) + (e2 > 1e-6);
  }
  const double secs = seconds_since(t0);
  return {failed == 0 && secs < 30.0, std::to_string(sample.size()) + " points, worst rel error " +
                                          fmt("%.1e", worst) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome ac3_identities(const std::vector<Sample>& sample) {
  int failed = 0;
  double worst = 0.0;
  for (const auto& [eq, y] : sample) {
    auto fb = map_f(eq, y);
    for (std::size_t i = 0; i < fb.size(); ++i) fb[i] += eq.rhs[i];
    const double e1 = oracle::identity_error(jac_f(eq, y).multiply(y), fb, eq.rhs);
    const double e2 = oracle::identity_error(newton_matrix(eq, y).multiply(y), eq.rhs, eq.rhs);
    worst = std::max({worst, e1, e2});
    failed += (e1 > 1e-12) + (e2 > 1e-12);
  }
  return {failed == 0, std::to_string(sample.size()) + " points, worst error / (1+||b||) " +
                           fmt("%.1e", worst)};
}

Outcome ac4_certificates() {
  int passed = 0;
  const int points = 300;
  const double t_bar = SolverConfig::regularized_defaults().t_bar;
  for (int k = 0; k < points; ++k) {
    RngStream rng(4000, static_cast<std::uint64_t>(k));
    const int m = 3 + k % 3;
    const int n = m == 5 ? 5 : 8;
    const auto pos = (k % 3 == 0)   ? gen_problem1(m, n, rng)
                     : (k % 3 == 1) ? gen_problem4(m, n, rng)
                                    : gen_problem5(m, n, rng);
    const auto zer = k % 2 ? gen_problem1(m, n, rng, RhsMode::zeros)
                           : gen_problem5(m, n, rng, RhsMode::zeros);
    const auto y = random_positive(static_cast<std::size_t>(n), rng);
    const double t = t_bar * (1e-3 + (1.0 - 1e-3) * rng.uniform01());
    const bool ok = m_matrix_certificate(newton_matrix(pos, y), y) &&
                    m_matrix_certificate(reg_jacobian_block(zer, t, y), y);
    passed += ok;
  }
  return {passed == points, std::to_string(passed) + "/" + std::to_string(points) +
                                " points certified (Newton matrix and regularized block)"};
}

BenchResult g_p1_3_100;

Outcome ac5_table_in1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto small = stats(bench(1, 3, 10, SolverSelection::inexact, RhsMode::positive, 100, 5),
                           SolverKind::inexact);
  g_p1_3_100 = bench(1, 3, 100, SolverSelection::inexact, RhsMode::positive, 100, 5);
  const auto large = stats(g_p1_3_100, SolverKind::inexact);
  const double secs = seconds_since(t0);
  const bool ok = all_converged(small) && all_converged(large) && small.mean_iters >= 5.0 &&
                  small.mean_iters <= 9.0 && large.mean_iters >= 7.0 && large.mean_iters <= 13.0 &&
                  secs < 60.0;
  return {ok, describe("(3,10)", small) + " [5,9]; " + describe("(3,100)", large) + " [7,13]; " +
                  fmt("%.1f", secs) + " s"};
}

Outcome ac6_table_in2() {
  const auto s = stats(bench(2, 4, 10, SolverSelection::inexact, RhsMode::positive, 100, 6),
                       SolverKind::inexact);
  return {all_converged(s) && s.mean_iters >= 5.0 && s.mean_iters <= 10.0,
          describe("(4,10)", s) + " [5,10]"};
}

Outcome ac7_problem3() {
  bool ok = true;
  std::ostringstream os;
  os << "inexact";
  for (int n : {10, 50, 100}) {
    const auto s = stats(bench(3, 4, n, SolverSelection::inexact, RhsMode::positive, 1, 7),
                         SolverKind::inexact);
    ok = ok && all_converged(s) && s.mean_iters <= 10.0;
    os << " n=" << n << ": " << (s.converged ? "converged" : "not converged") << " in "
       << s.mean_iters << " iters, residual " << format_residual(s.max_residual) << ";";
  }
  const auto r = stats(bench(3, 4, 10, SolverSelection::regularized, RhsMode::positive, 1, 7),
                       SolverKind::regularized);
  ok = ok && all_converged(r) && r.mean_iters >= 10.0 && r.mean_iters <= 22.0;
  os << " (accept <= 10); regularized (4,10): " << r.mean_iters << " iters (accept [10,22])";
  return {ok, os.str()};
}

Outcome ac8_zeros() {
  const auto p1 = stats(bench(1, 3, 100, SolverSelection::regularized, RhsMode::zeros, 100, 8),
                        SolverKind::regularized);
  const auto p5 = stats(bench(5, 3, 100, SolverSelection::regularized, RhsMode::zeros, 100, 8),
                        SolverKind::regularized);
  const bool ok = all_converged(p1) && all_converged(p5) && p1.mean_iters >= 2.3 &&
                  p1.mean_iters <= 6.9 && p5.mean_iters >= 5.95 && p5.mean_iters <= 17.85;
  return {ok, describe("P1 (3,100)", p1) + " [2.3,6.9]; " + describe("P5 (3,100)", p5) +
                  " [5.95,17.85]"};
}

Outcome ac9_order() {
  int good = 0, total = 0;
  double lo = INFINITY;
  for (const auto& r : g_p1_3_100.records) {
    ++total;
    if (r.order_estimate) lo = std::min(lo, *r.order_estimate);
    good += r.order_estimate && *r.order_estimate >= 1.7;
  }
  return {total == 100 && good >= 90, std::to_string(good) + "/" + std::to_string(total) +
                                          " trials with order >= 1.7 (min " + fmt("%.2f", lo) +
                                          ")"};
}

Outcome ac10_reduction() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg = SolverConfig::regularized_defaults();
  int set_mismatch = 0, bad_residual = 0;
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    RngStream rng(10000, static_cast<std::uint64_t>(k));
    const int n = 2 + k % 5;
    const int zeros = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(n, 4))));
    const auto inst = gen_reducible_instance(3, n, zeros, rng);
    const auto& eq = inst.equation;
    std::vector<std::size_t> I0;
    for (std::size_t i = 0; i < eq.rhs.size(); ++i)
      if (eq.rhs[i] == 0.0) I0.push_back(i);
    const auto red = reduce_zero_pattern(eq);
    set_mismatch += red.zero_set != oracle::maximal_reducible_subset(eq.tensor, I0);

    const auto rep = solve_regularized_newton(eq, cfg);
    ProblemSpec spec;
    spec.order = 3;
    spec.dim = n;
    g_runs.push_back(make_trial_record(spec, k, SolverKind::regularized, rep, eq, cfg));
    const double res = norm2(residual_F(eq, rep.x));
    worst = std::max(worst, res);
    bad_residual += !(rep.status == SolverStatus::converged && res <= 1e-10);
  }
  const double secs = seconds_since(t0);
  return {set_mismatch == 0 && bad_residual == 0 && secs < 30.0,
          "200 instances, " + std::to_string(set_mismatch) + " set mismatches, " +
              std::to_string(bad_residual) + " residual failures (worst " +
              format_residual(worst) + "), " + fmt("%.2f", secs) + " s"};
}

Outcome ac12_monotonicity() {
  const auto cfg = SolverConfig::inexact_defaults();
  int violations = 0, failures = 0;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    RngStream rng(12000, static_cast<std::uint64_t>(k));
    const auto B = symmetrize(oracle::random_tensor(3, 10, rng, 0.0, 1.0));
    std::vector<double> b1(10), b2(10);
    for (std::size_t i = 0; i < 10; ++i) {
      b1[i] = 0.01 + 0.99 * rng.uniform01();
      b2[i] = b1[i] + (rng.uniform01() < 0.5 ? 0.0 : rng.uniform01());
    }
    const auto e1 = problem1_from_parts(B, b1);
    const auto e2 = problem1_from_parts(B, b2);
    const auto r1 = solve_inexact_newton(e1, cfg);
    const auto r2 = solve_inexact_newton(e2, cfg);
    ProblemSpec spec;
    spec.dim = 10;
    g_runs.push_back(make_trial_record(spec, 2 * k, SolverKind::inexact, r1, e1, cfg));
    g_runs.push_back(make_trial_record(spec, 2 * k + 1, SolverKind::inexact, r2, e2, cfg));
    if (r1.status != SolverStatus::converged || r2.status != SolverStatus::converged) {
      ++failures;
      continue;
    }
    for (std::size_t i = 0; i < 10; ++i) {
      worst = std::min(worst, r2.x[i] - r1.x[i]);
      violations += r2.x[i] < r1.x[i] - 1e-8;
    }
  }
  return {violations == 0 && failures == 0,
          "20 pairs, " + std::to_string(failures) + " solver failures, " +
              std::to_string(violations) + " violating components (min x2-x1 " +
              fmt("%.2e", worst) + ")"};
}

Outcome ac11_invariants() {
  std::size_t violations = 0;
  std::string first;
  for (const auto& r : g_runs) {
    violations += r.violations.size();
    if (first.empty() && !r.violations.empty()) first = r.violations.front();
  }
  return {violations == 0, std::to_string(g_runs.size()) + " runs, " +
                               std::to_string(violations) + " violations" +
                               (first.empty() ? "" : " (first: " + first + ")")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const auto sample = jacobian_sample();
  const std::vector<Criterion> criteria = {
      {1, "contraction matches nested-loop oracle", ac1_contraction},
      {2, "Jacobians match central differences", [&] { return ac2_jacobians(sample); }},
      {3, "Euler identities f'(y)y=f+b, M(y)y=b", [&] { return ac3_identities(sample); }},
      {4, "M-matrix certificates", ac4_certificates},
      {5, "Problem 1 inexact iteration counts", ac5_table_in1},
      {6, "Problem 2 inexact iteration counts", ac6_table_in2},
      {7, "Problem 3 (boundary value problem)", ac7_problem3},
      {8, "regularized solver with zeros in b", ac8_zeros},
      {9, "quadratic convergence rate", ac9_order},
      {10, "zero-pattern reduction vs subset enumeration", ac10_reduction},
      {12, "solution monotonic in b", ac12_monotonicity},
      {11, "trace invariants on every run", ac11_invariants},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] AC%02d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
