#include <algorithm>
#include <cmath>
#include <string>

#include "mteq/errors.hpp"
#include "mteq/solvers.hpp"
#include "solver_common.hpp"

namespace mteq {

namespace {

/// Ē(t,y) = f(y)/y + t y.
std::vector<double> reg_residual(const std::vector<double>& f, const std::vector<double>& y,
                                 double t) {
  std::vector<double> e(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) e[i] = f[i] / y[i] + t * y[i];
  return e;
}

/// theta(t,y) = 0.5 (t^2 + ||Ē||^2).
double merit(double t, const std::vector<double>& ebar) {
  double s = t * t;
  for (double v : ebar) s += v * v;
  return 0.5 * s;
}

struct Iterate {
  double t = 0.0;
  std::vector<double> y, x, f;
};

SolverReport run(const MTensorEquation& eq, const SolverConfig& cfg, std::vector<double> x0) {
  SolverReport rep;
  const auto n = static_cast<std::size_t>(eq.dim());
  const int m = eq.order();

  Iterate cur;
  cur.t = cfg.t_bar;
  cur.y = power_transform(x0, m);
  cur.x = root_transform(cur.y, m);
  cur.f = residual_F(eq, cur.x);
  auto ebar = reg_residual(cur.f, cur.y, cur.t);
  double theta = merit(cur.t, ebar);

  const double decrease = 2.0 * cfg.sigma * (1.0 - cfg.gamma * cfg.t_bar);
  rep.status = SolverStatus::max_iterations;
  for (int k = 0;; ++k) {
    const double norm_E = std::sqrt(2.0 * theta);
    const double norm_f = norm2(cur.f);
    const double beta = cfg.gamma * std::min(1.0, norm_E * norm_E);
    rep.residual_history.push_back(norm_f);
    rep.merit_history.push_back(norm_E);
    rep.t_history.push_back(cur.t);
    IterateTrace tr;
    tr.k = k;
    tr.norm_E = norm_E;
    tr.norm_F = norm_f;
    tr.min_y = *std::min_element(cur.y.begin(), cur.y.end());
    double gap = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) gap = std::max(gap, cur.f[i] - eq.rhs[i]);
    tr.max_feasibility = gap;
    tr.t = cur.t;
    tr.beta = beta;
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

    // Block elimination of E'(t,y) d = -E(t,y) + beta t̄ e1:
    //   d_t = beta t̄ - t,   (E'(y) + tI) d_y = -Ē - d_t y.
    DenseMatrix block = detail::newton_matrix_from(eq, cur.y, cur.x, cur.f);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) block(i, j) /= cur.y[i];
      block(i, i) += cur.t;
    }
    const double dt = beta * cfg.t_bar - cur.t;
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -ebar[i] - dt * cur.y[i];
    std::vector<double> dy;
    try {
      dy = lu_solve_scaled(block, rhs, cur.y);
    } catch (const SingularSystemError& e) {
      rep.status = SolverStatus::singular_system;
      rep.message = e.what();
      break;
    }

    StepInfo step;
    {
      // grad(theta)^T d = E^T (E' d), evaluated with the assembled Jacobian.
      const auto Jdy = block.multiply(dy);
      double g = cur.t * dt;
      for (std::size_t i = 0; i < n; ++i) g += ebar[i] * (cur.y[i] * dt + Jdy[i]);
      step.descent = g;
    }

    double alpha = 1.0;
    bool accepted = false;
    Iterate next;
    next.y.resize(n);
    std::vector<double> ebar_new;
    double theta_new = 0.0;
    while (alpha >= detail::kMinStep) {
      for (std::size_t i = 0; i < n; ++i) next.y[i] = cur.y[i] + alpha * dy[i];
      next.t = cur.t + alpha * dt;
      if (detail::strictly_positive(next.y) && next.t > 0.0) {
        next.x = root_transform(next.y, m);
        next.f = residual_F(eq, next.x);
        ebar_new = reg_residual(next.f, next.y, next.t);
        theta_new = merit(next.t, ebar_new);
        if (theta_new <= (1.0 - decrease * alpha) * theta) {
          accepted = true;
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
    cur = std::move(next);
    ebar = std::move(ebar_new);
    theta = theta_new;
  }
  rep.x = cur.x;
  return rep;
}

}  // namespace

SolverReport solve_regularized_newton(const MTensorEquation& eq, const SolverConfig& cfg) {
  cfg.validate();
  const detail::Stopwatch clock;

  if (eq.rhs_class == RhsClass::invalid) {
    SolverReport rep;
    rep.status = SolverStatus::invalid_rhs;
    rep.message = "right-hand side has negative components";
    rep.time_ms = clock.elapsed_ms();
    return rep;
  }

  SolverReport rep;
  if (eq.rhs_class == RhsClass::nonnegative_with_zeros && cfg.reduce_zeros) {
    const ReductionResult red = reduce_zero_pattern(eq);
    if (!red.reduced) {
      // b̂ = 0 with every coordinate forced: x = 0 solves the equation.
      rep.status = SolverStatus::converged;
      rep.residual_history = {0.0};
      rep.merit_history = {0.0};
      rep.t_history = {cfg.t_bar};
    } else {
      rep = run(*red.reduced, cfg,
                detail::initial_point(cfg.initial, red.complement.size(), &red.complement));
    }
    rep.x = red.reduced ? embed_solution(red, rep.x)
                        : std::vector<double>(static_cast<std::size_t>(eq.dim()), 0.0);
    rep.zero_set = red.zero_set;
  } else {
    rep = run(eq, cfg, detail::initial_point(cfg.initial, static_cast<std::size_t>(eq.dim())));
  }

  rep.residual = norm2(residual_F(eq, rep.x));
  rep.order_estimate = estimate_order(rep.residual_history);
  rep.time_ms = clock.elapsed_ms();
  return rep;
}

}  // namespace mteq
