#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mteq/equation.hpp"

namespace mteq {

enum class SolverStatus { converged, max_iterations, line_search_failed, singular_system, invalid_rhs };

std::string_view to_string(SolverStatus s);
SolverStatus solver_status_from_string(std::string_view s);

/// x0 = eps * e; eps is halved until f(y0) < b̂.
struct EpsilonE {
  double eps = 1.0;
};
/// x0 = c * e.
struct ConstantE {
  double c = 0.1;
};
/// x0 given explicitly (original variables).
struct ExplicitPoint {
  std::vector<double> x;
};
using InitialPoint = std::variant<EpsilonE, ConstantE, ExplicitPoint>;

struct SolverConfig {
  double sigma = 0.1;
  double rho = 0.5;
  double gamma = 0.9;   // regularized only
  double t_bar = 0.01;  // regularized only
  double tol = 1e-10;   // on ||F̂(x_k)||
  int max_iter = 300;
  InitialPoint initial = EpsilonE{};
  bool reduce_zeros = true;  // regularized only

  /// Throws ConfigError on out-of-range parameters (including gamma*t_bar >= 1).
  void validate() const;

  static SolverConfig inexact_defaults();
  static SolverConfig regularized_defaults();
};

struct StepInfo {
  double alpha = 0.0;
  int backtracks = 0;
  double alpha_max = 0.0;  // max_step at y_k (inexact only)
  double descent = 0.0;    // grad(theta)^T d_k (regularized only)
};

/// State at iterate k plus the step that left it (absent at the last iterate).
struct IterateTrace {
  int k = 0;
  double norm_E = 0.0;          // ||E(y_k)|| or ||E(t_k, y_k)||
  double norm_F = 0.0;          // ||F̂(x_k)|| on the working equation
  double min_y = 0.0;
  double max_feasibility = 0.0; // max_i (f_i(y_k) - b̂_i); < 0 inside the band
  std::optional<double> t;      // regularized only
  std::optional<double> beta;   // regularized only
  std::optional<StepInfo> step;
};

struct SolverReport {
  SolverStatus status = SolverStatus::invalid_rhs;
  std::vector<double> x;  // full dimension, original variables
  int iterations = 0;
  int line_search_backtracks = 0;
  double time_ms = 0.0;
  double residual = 0.0;  // ||F̂(x)|| on the full scaled equation
  std::vector<double> residual_history;  // ||F̂(x_k)||, length iterations+1
  std::vector<double> merit_history;     // ||E||, length iterations+1
  std::vector<double> t_history;         // regularized only
  std::vector<IterateTrace> trace;
  std::optional<double> order_estimate;
  std::vector<std::size_t> zero_set;  // coordinates forced to zero by reduction
  std::string message;
};

/// Newton iteration on E(y) = y^[-1] f(y) for b̂ > 0.
SolverReport solve_inexact_newton(const MTensorEquation& eq, const SolverConfig& cfg);

/// Regularized Newton iteration on E(t, y) for b̂ >= 0; zero-pattern reduction
/// runs first when b̂ has zeros and cfg.reduce_zeros is set.
SolverReport solve_regularized_newton(const MTensorEquation& eq, const SolverConfig& cfg);

/// Empirical convergence order from the last three usable residuals.
std::optional<double> estimate_order(std::span<const double> residuals);

struct Certificate {
  bool certified = false;
  double residual = 0.0;
  std::string reason;
};

/// Checks that F'(x) = (m-1) Â x^{m-2} is a Z-matrix with F'(x) x > 0.
Certificate certify_solution(const MTensorEquation& eq, std::span<const double> x);

enum class SolverKind { inexact, regularized };
std::string_view to_string(SolverKind k);

/// Invariant checks over a report's trace; returns one message per violation.
std::vector<std::string> check_trace_invariants(const SolverReport& report,
                                                const SolverConfig& cfg, SolverKind kind);

}  // namespace mteq
