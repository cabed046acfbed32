#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mteq/problems.hpp"
#include "mteq/solvers.hpp"

namespace mteq {

enum class SolverSelection { inexact, regularized, both };
std::string_view to_string(SolverSelection s);
SolverSelection solver_selection_from_string(std::string_view s);

struct BenchConfig {
  ProblemSpec problem;
  int trials = 100;
  std::uint64_t seed = 0;
  SolverSelection solvers = SolverSelection::inexact;
  SolverConfig inexact = SolverConfig::inexact_defaults();
  SolverConfig regularized = SolverConfig::regularized_defaults();
  int jobs = 1;

  /// Sets tol and max_iter on both solver configurations.
  void set_stopping(double tol, int max_iter);
  /// Throws ConfigError on invalid settings.
  void validate() const;
};

/// One solver run on one generated instance, as serialized in reports.
struct TrialRecord {
  int problem = 0;
  int m = 0;
  int n = 0;
  int trial = 0;
  SolverKind solver = SolverKind::inexact;
  SolverStatus status = SolverStatus::converged;
  int iterations = 0;
  int ls_iters = 0;
  double time_ms = 0.0;
  double residual = 0.0;
  std::vector<double> residual_history;
  std::vector<double> merit_history;
  std::vector<double> t_history;
  std::optional<double> order_estimate;
  bool certified = false;
  std::vector<std::string> violations;

  bool operator==(const TrialRecord&) const = default;
};

/// Aggregates over the successful (Converged) trials of one solver.
struct BenchSummary {
  int problem = 0;
  int m = 0;
  int n = 0;
  SolverKind solver = SolverKind::inexact;
  int trials = 0;
  int successes = 0;
  double mean_iters = 0.0;
  double mean_time_ms = 0.0;
  double mean_residual = 0.0;
  double mean_ls_iters = 0.0;
};

/// Inexact-over-regularized ratios of mean iterations (IR) and time (TR).
struct SolverRatios {
  double iteration_ratio = 0.0;
  double time_ratio = 0.0;
};

struct BenchResult {
  BenchConfig config;
  std::vector<TrialRecord> records;  // ordered by (trial, solver)
  std::vector<BenchSummary> summaries;
  std::optional<SolverRatios> ratios;
};

TrialRecord make_trial_record(const ProblemSpec& spec, int trial, SolverKind kind,
                              const SolverReport& report, const MTensorEquation& eq,
                              const SolverConfig& cfg);

/// Runs every trial (trial j uses RngStream(seed, j)) and aggregates.
BenchResult run_bench(const BenchConfig& cfg);

std::vector<BenchSummary> summarize(const std::vector<TrialRecord>& records);
std::optional<SolverRatios> solver_ratios(const std::vector<BenchSummary>& summaries);

/// "8.50E-12" style: scientific, three significant digits.
std::string format_residual(double r);
/// Fixed, five decimals.
std::string format_time(double ms);

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);
void write_summary_csv(std::ostream& out, const std::vector<BenchSummary>& summaries);
void write_trials_csv(const std::filesystem::path& path, const std::vector<TrialRecord>& records);
void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<BenchSummary>& summaries);

inline constexpr std::string_view kReportSchema = "mteq-report/1";

/// JSON document with schema tag, config echo, summaries and per-trial records.
std::string to_json_report(const BenchResult& result);
void write_json_report(const std::filesystem::path& path, const BenchResult& result);
/// Parses the records of a report produced by to_json_report.
std::vector<TrialRecord> parse_json_records(const std::string& text);

/// Outcome of the invariant suites run by `verify`.
struct VerifyCheck {
  std::string name;
  int checked = 0;
  int failed = 0;
  std::string first_failure;
};

/// Runs identity, certificate, trace-invariant and cross-solver checks on
/// `cfg.trials` seeded instances of `cfg.problem`.
std::vector<VerifyCheck> run_verify(const BenchConfig& cfg);

}  // namespace mteq
