// Command-line front end: generate, solve, bench, verify.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mteq/bench.hpp"
#include "mteq/errors.hpp"
#include "mteq/tensor_io.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct CommonOptions {
  int problem = 1;
  int order = 3;
  int dim = 10;
  int trials = 100;
  std::uint64_t seed = 0;
  std::string solver = "inexact";
  double tol = 1e-10;
  int max_iter = 300;
  std::string b_mode = "positive";
  double c0 = 1.0;
  double c1 = 1.0;
  std::string out;
  int jobs = 1;
};

void add_problem_options(CLI::App& cmd, CommonOptions& o, CLI::Option*& order_opt) {
  cmd.add_option("--problem", o.problem, "Test problem 1-5")->check(CLI::Range(1, 5));
  order_opt = cmd.add_option("--order", o.order, "Tensor order m (Problem 3 uses 4)");
  cmd.add_option("--dim", o.dim, "Dimension n");
  cmd.add_option("--seed", o.seed, "Base RNG seed; trial j uses stream j");
  cmd.add_option("--b-mode", o.b_mode, "Right-hand side: positive | zeros")
      ->check(CLI::IsMember({"positive", "zeros"}));
  cmd.add_option("--c0", o.c0, "Problem 3 boundary value x(0)");
  cmd.add_option("--c1", o.c1, "Problem 3 boundary value x(1)");
}

void add_solver_options(CLI::App& cmd, CommonOptions& o) {
  cmd.add_option("--solver", o.solver, "inexact | regularized | both")
      ->check(CLI::IsMember({"inexact", "regularized", "both"}));
  cmd.add_option("--tol", o.tol, "Stopping tolerance on ||F(x)||");
  cmd.add_option("--max-iter", o.max_iter, "Iteration limit");
}

mteq::BenchConfig to_bench_config(const CommonOptions& o, const CLI::Option* order_opt) {
  mteq::BenchConfig cfg;
  cfg.problem.problem = o.problem;
  cfg.problem.order = (o.problem == 3 && order_opt->count() == 0) ? 4 : o.order;
  cfg.problem.dim = o.dim;
  cfg.problem.rhs_mode = mteq::rhs_mode_from_string(o.b_mode);
  cfg.problem.c0 = o.c0;
  cfg.problem.c1 = o.c1;
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.solvers = mteq::solver_selection_from_string(o.solver);
  cfg.set_stopping(o.tol, o.max_iter);
  cfg.jobs = o.jobs;
  cfg.validate();
  return cfg;
}

void print_report(const mteq::SolverReport& r, std::string_view solver) {
  std::printf("%-12s status=%s iters=%d ls_iters=%d time_ms=%s residual=%s", solver.data(),
              std::string(mteq::to_string(r.status)).c_str(), r.iterations,
              r.line_search_backtracks, mteq::format_time(r.time_ms).c_str(),
              mteq::format_residual(r.residual).c_str());
  if (r.order_estimate) std::printf(" order=%.2f", *r.order_estimate);
  if (!r.zero_set.empty()) std::printf(" zeros=%zu", r.zero_set.size());
  std::printf("\n");
  if (!r.message.empty()) std::printf("  %s\n", r.message.c_str());
}

int cmd_generate(const CommonOptions& o, const CLI::Option* order_opt) {
  if (o.out.empty()) throw mteq::ConfigError("generate needs --out <stem>");
  auto cfg = to_bench_config(o, order_opt);
  mteq::RngStream rng(cfg.seed, 0);
  const auto eq = mteq::generate_problem(cfg.problem, rng);
  mteq::write_equation_files(o.out, eq);
  std::printf("wrote %s.{mtns,vec,hdr}  m=%d n=%d omega=%.6g b_class=%s\n", o.out.c_str(),
              eq.order(), eq.dim(), eq.omega, std::string(mteq::to_string(eq.rhs_class)).c_str());
  return 0;
}

int cmd_solve(const CommonOptions& o, const std::string& tensor_path, const std::string& rhs_path,
              bool symmetrize) {
  auto A = mteq::read_tensor_file(tensor_path);
  auto b = mteq::read_vector_file(rhs_path);
  const auto eq = mteq::make_equation(std::move(A), std::move(b), symmetrize);
  const auto selection = mteq::solver_selection_from_string(o.solver);
  auto in_cfg = mteq::SolverConfig::inexact_defaults();
  auto reg_cfg = mteq::SolverConfig::regularized_defaults();
  in_cfg.tol = reg_cfg.tol = o.tol;
  in_cfg.max_iter = reg_cfg.max_iter = o.max_iter;
  in_cfg.validate();
  reg_cfg.validate();

  std::printf("m=%d n=%d omega=%.6g b_class=%s\n", eq.order(), eq.dim(), eq.omega,
              std::string(mteq::to_string(eq.rhs_class)).c_str());
  nlohmann::json doc;
  doc["schema"] = std::string(mteq::kReportSchema);
  doc["omega"] = eq.omega;
  auto run = [&](mteq::SolverKind kind) {
    const auto rep = kind == mteq::SolverKind::inexact ? mteq::solve_inexact_newton(eq, in_cfg)
                                                       : mteq::solve_regularized_newton(eq, reg_cfg);
    print_report(rep, mteq::to_string(kind));
    doc[std::string(mteq::to_string(kind))] = {
        {"status", std::string(mteq::to_string(rep.status))},
        {"iters", rep.iterations},
        {"ls_iters", rep.line_search_backtracks},
        {"time_ms", rep.time_ms},
        {"residual", rep.residual},
        {"x", rep.x},
        {"residual_history", rep.residual_history}};
  };
  if (selection != mteq::SolverSelection::regularized) run(mteq::SolverKind::inexact);
  if (selection != mteq::SolverSelection::inexact) run(mteq::SolverKind::regularized);
  if (!o.out.empty()) {
    std::ofstream out(o.out);
    if (!out) throw mteq::ConfigError("cannot write " + o.out);
    out << doc.dump(2) << '\n';
  }
  return 0;
}

int cmd_bench(const CommonOptions& o, const CLI::Option* order_opt) {
  const auto cfg = to_bench_config(o, order_opt);
  const auto result = mteq::run_bench(cfg);
  mteq::write_summary_csv(std::cout, result.summaries);
  if (result.ratios) {
    std::printf("# IR (inexact/regularized iterations) = %.1f%%, TR (inexact/regularized time) = %.1f%%\n",
                100.0 * result.ratios->iteration_ratio, 100.0 * result.ratios->time_ratio);
  }
  std::size_t violations = 0;
  for (const auto& r : result.records) violations += r.violations.size();
  if (violations > 0) std::printf("# trace invariant violations: %zu\n", violations);
  if (!o.out.empty()) {
    const std::filesystem::path stem(o.out);
    auto path = [&](const char* suffix) {
      auto p = stem;
      p += suffix;
      return p;
    };
    mteq::write_trials_csv(path("_trials.csv"), result.records);
    mteq::write_summary_csv(path("_summary.csv"), result.summaries);
    mteq::write_json_report(path(".json"), result);
    std::printf("# wrote %s_trials.csv, %s_summary.csv, %s.json\n", o.out.c_str(), o.out.c_str(),
                o.out.c_str());
  }
  return 0;
}

int cmd_verify(const CommonOptions& o, const CLI::Option* order_opt) {
  const auto cfg = to_bench_config(o, order_opt);
  bool ok = true;
  for (const auto& c : mteq::run_verify(cfg)) {
    const bool pass = c.failed == 0;
    ok = ok && pass;
    std::printf("[%s] %-24s %d/%d", pass ? "PASS" : "FAIL", c.name.c_str(), c.checked - c.failed,
                c.checked);
    if (!pass) std::printf("  first failure: %s", c.first_failure.c_str());
    std::printf("\n");
  }
  return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solvers and benchmarks for M-tensor equations A x^(m-1) = b"};
  app.require_subcommand(1);

  CommonOptions o;
  CLI::Option* order_gen = nullptr;
  CLI::Option* order_bench = nullptr;
  CLI::Option* order_verify = nullptr;

  auto* gen = app.add_subcommand("generate", "Write a generated instance as .mtns/.vec/.hdr");
  add_problem_options(*gen, o, order_gen);
  gen->add_option("--out", o.out, "Output path stem")->required();

  std::string tensor_path, rhs_path;
  bool symmetrize = false;
  auto* solve = app.add_subcommand("solve", "Solve one instance read from files");
  solve->add_option("--tensor", tensor_path, ".mtns tensor file")->required();
  solve->add_option("--rhs", rhs_path, ".vec right-hand side file")->required();
  solve->add_flag("--symmetrize", symmetrize, "Semi-symmetrize the tensor first");
  add_solver_options(*solve, o);
  solve->add_option("--out", o.out, "Write a JSON result here");

  auto* bench = app.add_subcommand("bench", "Run seeded trials and aggregate");
  add_problem_options(*bench, o, order_bench);
  add_solver_options(*bench, o);
  bench->add_option("--trials", o.trials, "Number of trials")->check(CLI::PositiveNumber);
  bench->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  bench->add_option("--out", o.out, "Write <out>_trials.csv, <out>_summary.csv, <out>.json");

  auto* verify = app.add_subcommand("verify", "Run invariant suites on seeded instances");
  add_problem_options(*verify, o, order_verify);
  add_solver_options(*verify, o);
  verify->add_option("--trials", o.trials, "Number of instances")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*gen) return cmd_generate(o, order_gen);
    if (*solve) return cmd_solve(o, tensor_path, rhs_path, symmetrize);
    if (*bench) return cmd_bench(o, order_bench);
    if (*verify) return cmd_verify(o, order_verify);
  } catch (const mteq::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const mteq::DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
