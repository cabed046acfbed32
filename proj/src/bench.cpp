#include "mteq/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "mteq/errors.hpp"

namespace mteq {

std::string_view to_string(SolverSelection s) {
  switch (s) {
    case SolverSelection::inexact: return "inexact";
    case SolverSelection::regularized: return "regularized";
    case SolverSelection::both: return "both";
  }
  return "inexact";
}

SolverSelection solver_selection_from_string(std::string_view s) {
  if (s == "inexact") return SolverSelection::inexact;
  if (s == "regularized") return SolverSelection::regularized;
  if (s == "both") return SolverSelection::both;
  throw ConfigError("unknown solver '" + std::string(s) + "' (expected inexact|regularized|both)");
}

void BenchConfig::set_stopping(double tol, int max_iter) {
  inexact.tol = regularized.tol = tol;
  inexact.max_iter = regularized.max_iter = max_iter;
}

void BenchConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (problem.problem < 1 || problem.problem > 5) throw ConfigError("problem must be 1..5");
  if (problem.problem == 3 && problem.order != 4)
    throw ConfigError("Problem 3 is fourth order (--order 4)");
  if (problem.order < 2) throw ConfigError("order must be >= 2");
  if (problem.dim < (problem.problem == 3 ? 3 : 1)) throw ConfigError("dimension too small");
  // Reject sizes the dense storage cannot hold before any trial starts.
  try {
    checked_power(static_cast<std::size_t>(problem.dim), static_cast<std::size_t>(problem.order));
  } catch (const DimensionError& e) {
    throw ConfigError(e.what());
  }
  inexact.validate();
  regularized.validate();
}

TrialRecord make_trial_record(const ProblemSpec& spec, int trial, SolverKind kind,
                              const SolverReport& report, const MTensorEquation& eq,
                              const SolverConfig& cfg) {
  TrialRecord r;
  r.problem = spec.problem;
  r.m = eq.order();
  r.n = eq.dim();
  r.trial = trial;
  r.solver = kind;
  r.status = report.status;
  r.iterations = report.iterations;
  r.ls_iters = report.line_search_backtracks;
  r.time_ms = report.time_ms;
  r.residual = report.residual;
  r.residual_history = report.residual_history;
  r.merit_history = report.merit_history;
  r.t_history = report.t_history;
  r.order_estimate = report.order_estimate;
  if (report.status == SolverStatus::converged) r.certified = certify_solution(eq, report.x).certified;
  if (report.status != SolverStatus::invalid_rhs)
    r.violations = check_trace_invariants(report, cfg, kind);
  return r;
}

namespace {

std::vector<TrialRecord> run_trial(const BenchConfig& cfg, int trial) {
  RngStream rng(cfg.seed, static_cast<std::uint64_t>(trial));
  const MTensorEquation eq = generate_problem(cfg.problem, rng);
  std::vector<TrialRecord> out;
  if (cfg.solvers != SolverSelection::regularized) {
    const auto rep = solve_inexact_newton(eq, cfg.inexact);
    out.push_back(make_trial_record(cfg.problem, trial, SolverKind::inexact, rep, eq, cfg.inexact));
  }
  if (cfg.solvers != SolverSelection::inexact) {
    const auto rep = solve_regularized_newton(eq, cfg.regularized);
    out.push_back(
        make_trial_record(cfg.problem, trial, SolverKind::regularized, rep, eq, cfg.regularized));
  }
  return out;
}

}  // namespace

BenchResult run_bench(const BenchConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<TrialRecord>> per_trial(static_cast<std::size_t>(cfg.trials));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (int t = next++; t < cfg.trials; t = next++) {
      try {
        per_trial[static_cast<std::size_t>(t)] = run_trial(cfg, t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int workers = std::min(cfg.jobs, cfg.trials);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  BenchResult result;
  result.config = cfg;
  for (auto& recs : per_trial)
    for (auto& r : recs) result.records.push_back(std::move(r));
  result.summaries = summarize(result.records);
  result.ratios = solver_ratios(result.summaries);
  return result;
}

std::vector<BenchSummary> summarize(const std::vector<TrialRecord>& records) {
  std::vector<BenchSummary> out;
  for (auto kind : {SolverKind::inexact, SolverKind::regularized}) {
    BenchSummary s;
    s.solver = kind;
    for (const auto& r : records) {
      if (r.solver != kind) continue;
      s.problem = r.problem;
      s.m = r.m;
      s.n = r.n;
      ++s.trials;
      if (r.status != SolverStatus::converged) continue;
      ++s.successes;
      s.mean_iters += r.iterations;
      s.mean_time_ms += r.time_ms;
      s.mean_residual += r.residual;
      s.mean_ls_iters += r.ls_iters;
    }
    if (s.trials == 0) continue;
    if (s.successes > 0) {
      const double k = s.successes;
      s.mean_iters /= k;
      s.mean_time_ms /= k;
      s.mean_residual /= k;
      s.mean_ls_iters /= k;
    }
    out.push_back(s);
  }
  return out;
}

std::optional<SolverRatios> solver_ratios(const std::vector<BenchSummary>& summaries) {
  const BenchSummary* in = nullptr;
  const BenchSummary* reg = nullptr;
  for (const auto& s : summaries) (s.solver == SolverKind::inexact ? in : reg) = &s;
  if (!in || !reg || in->successes == 0 || reg->successes == 0) return std::nullopt;
  if (reg->mean_iters == 0.0 || reg->mean_time_ms == 0.0) return std::nullopt;
  return SolverRatios{in->mean_iters / reg->mean_iters, in->mean_time_ms / reg->mean_time_ms};
}

std::string format_residual(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2E", r);
  return buf;
}

std::string format_time(double ms) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.5f", ms);
  return buf;
}

namespace {
std::string format_mean(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

template <class Writer>
void with_file(const std::filesystem::path& path, Writer&& w) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  w(out);
}
}  // namespace

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "problem,m,n,trial,solver,status,iters,ls_iters,time_ms,residual\n";
  for (const auto& r : records) {
    out << r.problem << ',' << r.m << ',' << r.n << ',' << r.trial << ',' << to_string(r.solver)
        << ',' << to_string(r.status) << ',' << r.iterations << ',' << r.ls_iters << ','
        << format_time(r.time_ms) << ',' << format_residual(r.residual) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<BenchSummary>& summaries) {
  out << "problem,m,n,solver,trials,successes,mean_iters,mean_time_ms,mean_residual,mean_ls_iters\n";
  for (const auto& s : summaries) {
    out << s.problem << ',' << s.m << ',' << s.n << ',' << to_string(s.solver) << ',' << s.trials
        << ',' << s.successes << ',' << format_mean(s.mean_iters) << ','
        << format_time(s.mean_time_ms) << ',' << format_residual(s.mean_residual) << ','
        << format_mean(s.mean_ls_iters) << '\n';
  }
}

void write_trials_csv(const std::filesystem::path& path, const std::vector<TrialRecord>& records) {
  with_file(path, [&](std::ostream& o) { write_trials_csv(o, records); });
}

void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<BenchSummary>& summaries) {
  with_file(path, [&](std::ostream& o) { write_summary_csv(o, summaries); });
}

}  // namespace mteq
