#include <algorithm>
#include <cmath>
#include <string>

#include "mteq/errors.hpp"
#include "mteq/solvers.hpp"
#include "solver_common.hpp"

namespace mteq {

namespace {

constexpr int kMaxInitialHalvings = 60;

bool below_rhs(const std::vector<double>& f, const std::vector<double>& b) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!(f[i] < b[i])) return false;
  return true;
}

double max_gap(const std::vector<double>& f, const std::vector<double>& b) {
  double g = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.size(); ++i) g = std::max(g, f[i] - b[i]);
  return g;
}

double sum_sq_ratio(const std::vector<double>& f, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double e = f[i] / y[i];
    s += e * e;
  }
  return s;
}

}  // namespace

SolverReport solve_inexact_newton(const MTensorEquation& eq, const SolverConfig& cfg) {
  cfg.validate();
  const detail::Stopwatch clock;
  SolverReport rep;
  const auto n = static_cast<std::size_t>(eq.dim());
  const int m = eq.order();

  if (eq.rhs_class != RhsClass::strictly_positive) {
    rep.status = SolverStatus::invalid_rhs;
    rep.message = "inexact Newton requires a strictly positive right-hand side (b is " +
                  std::string(to_string(eq.rhs_class)) + ")";
    rep.time_ms = clock.elapsed_ms();
    return rep;
  }

  // Shrink x0 until f(y0) < b̂; A x^{m-1} is homogeneous, so f(y0) -> -b̂.
  auto x0 = detail::initial_point(cfg.initial, n);
  auto y = power_transform(x0, m);
  std::vector<double> x = root_transform(y, m);
  std::vector<double> f = residual_F(eq, x);
  for (int h = 0; h < kMaxInitialHalvings && !below_rhs(f, eq.rhs); ++h) {
    for (double& v : x0) v *= 0.5;
    y = power_transform(x0, m);
    x = root_transform(y, m);
    f = residual_F(eq, x);
  }

  double merit_sq = sum_sq_ratio(f, y);
  rep.status = SolverStatus::max_iterations;
  for (int k = 0;; ++k) {
    const double norm_f = norm2(f);
    rep.residual_history.push_back(norm_f);
    rep.merit_history.push_back(std::sqrt(merit_sq));
    IterateTrace tr;
    tr.k = k;
    tr.norm_E = std::sqrt(merit_sq);
    tr.norm_F = norm_f;
    tr.min_y = *std::min_element(y.begin(), y.end());
    tr.max_feasibility = max_gap(f, eq.rhs);
    rep.trace.push_back(tr);
    rep.iterations = k;

    if (norm_f <= cfg.tol) {
      rep.status = SolverStatus::converged;
      break;
    }
    if (k >= cfg.max_iter) {
      rep.status = SolverStatus::max_iterations;
      break;
    }

    const DenseMatrix M = detail::newton_matrix_from(eq, y, x, f);
    std::vector<double> neg_f(n);
    for (std::size_t i = 0; i < n; ++i) neg_f[i] = -f[i];
    std::vector<double> d;
    try {
      d = lu_solve_scaled(M, neg_f, y);
    } catch (const SingularSystemError& e) {
      rep.status = SolverStatus::singular_system;
      rep.message = e.what();
      break;
    }

    StepInfo step;
    step.alpha_max = max_step(eq.rhs, f);
    double alpha = 1.0;
    bool accepted = false;
    std::vector<double> y_new(n), x_new, f_new;
    while (alpha >= detail::kMinStep) {
      for (std::size_t i = 0; i < n; ++i) y_new[i] = y[i] + alpha * d[i];
      if (detail::strictly_positive(y_new)) {
        x_new = root_transform(y_new, m);
        f_new = residual_F(eq, x_new);
        const double new_sq = sum_sq_ratio(f_new, y_new);
        // Sufficient decrease on ||E||^2, plus keeping f(y) < b̂ so the next
        // Newton matrix stays an M-matrix certified by y.
        if (new_sq <= (1.0 - 2.0 * cfg.sigma * alpha) * merit_sq && below_rhs(f_new, eq.rhs)) {
          accepted = true;
          merit_sq = new_sq;
          break;
        }
      }
      alpha *= cfg.rho;
      ++step.backtracks;
    }
    rep.line_search_backtracks += step.backtracks;
    if (!accepted) {
      rep.status = SolverStatus::line_search_failed;
      rep.message = "step length fell below 1e-16 at iteration " + std::to_string(k);
      break;
    }
    step.alpha = alpha;
    rep.trace.back().step = step;
    y.swap(y_new);
    x.swap(x_new);
    f.swap(f_new);
  }

  rep.x = x;
  rep.residual = norm2(residual_F(eq, rep.x));
  rep.order_estimate = estimate_order(rep.residual_history);
  rep.time_ms = clock.elapsed_ms();
  return rep;
}

}  // namespace mteq
