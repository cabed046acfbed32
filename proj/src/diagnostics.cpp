#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "mteq/errors.hpp"
#include "mteq/solvers.hpp"
#include "solver_common.hpp"

namespace mteq {

std::string_view to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::converged: return "Converged";
    case SolverStatus::max_iterations: return "MaxIterations";
    case SolverStatus::line_search_failed: return "LineSearchFailed";
    case SolverStatus::singular_system: return "SingularSystem";
    case SolverStatus::invalid_rhs: return "InvalidB";
  }
  return "InvalidB";
}

SolverStatus solver_status_from_string(std::string_view s) {
  for (auto st : {SolverStatus::converged, SolverStatus::max_iterations,
                  SolverStatus::line_search_failed, SolverStatus::singular_system,
                  SolverStatus::invalid_rhs})
    if (to_string(st) == s) return st;
  throw ConfigError("unknown solver status '" + std::string(s) + "'");
}

std::string_view to_string(SolverKind k) {
  return k == SolverKind::inexact ? "inexact" : "regularized";
}

void SolverConfig::validate() const {
  auto open_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!open_unit(sigma)) throw ConfigError("sigma must lie in (0,1)");
  if (!open_unit(rho)) throw ConfigError("rho must lie in (0,1)");
  if (!open_unit(gamma)) throw ConfigError("gamma must lie in (0,1)");
  if (!(t_bar > 0.0)) throw ConfigError("t_bar must be positive");
  if (!(gamma * t_bar < 1.0)) throw ConfigError("gamma * t_bar must be < 1");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (max_iter < 0) throw ConfigError("max_iter must be >= 0");
  if (const auto* e = std::get_if<EpsilonE>(&initial); e && !(e->eps > 0.0))
    throw ConfigError("initial epsilon must be positive");
  if (const auto* c = std::get_if<ConstantE>(&initial); c && !(c->c > 0.0))
    throw ConfigError("initial constant must be positive");
  if (const auto* p = std::get_if<ExplicitPoint>(&initial)) {
    for (double v : p->x)
      if (!(v > 0.0)) throw ConfigError("explicit initial point must be strictly positive");
  }
}

SolverConfig SolverConfig::inexact_defaults() {
  SolverConfig c;
  c.sigma = 0.1;
  c.rho = 0.5;
  c.initial = EpsilonE{1.0};
  return c;
}

SolverConfig SolverConfig::regularized_defaults() {
  SolverConfig c;
  c.sigma = 0.1;
  c.rho = 0.8;
  c.gamma = 0.9;
  c.t_bar = 0.01;
  c.initial = ConstantE{0.1};
  return c;
}

namespace detail {

std::vector<double> initial_point(const InitialPoint& policy, std::size_t n,
                                  const std::vector<std::size_t>* complement) {
  if (const auto* e = std::get_if<EpsilonE>(&policy)) return std::vector<double>(n, e->eps);
  if (const auto* c = std::get_if<ConstantE>(&policy)) return std::vector<double>(n, c->c);
  const auto& x = std::get<ExplicitPoint>(policy).x;
  if (x.size() == n) return x;
  if (complement && complement->size() == n) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
      if ((*complement)[k] >= x.size()) throw DimensionError("initial point too short");
      out[k] = x[(*complement)[k]];
    }
    return out;
  }
  throw DimensionError("initial point has length " + std::to_string(x.size()) + ", expected " +
                       std::to_string(n));
}

bool strictly_positive(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x >= 1e-300; });
}

}  // namespace detail

std::optional<double> estimate_order(std::span<const double> residuals) {
  const double floor = 1e2 * std::numeric_limits<double>::epsilon();
  std::vector<double> usable;
  for (double r : residuals)
    if (std::isfinite(r) && r > floor) usable.push_back(r);
  if (usable.size() < 3) return std::nullopt;
  const double r0 = usable[usable.size() - 3];
  const double r1 = usable[usable.size() - 2];
  const double r2 = usable[usable.size() - 1];
  if (!(r0 > r1 && r1 > r2)) return std::nullopt;
  return std::log(r2 / r1) / std::log(r1 / r0);
}

Certificate certify_solution(const MTensorEquation& eq, std::span<const double> x) {
  Certificate c;
  c.residual = norm2(residual_F(eq, x));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) {
      c.reason = "x_" + std::to_string(i + 1) + " is not positive; certificate needs x > 0";
      return c;
    }
  }
  DenseMatrix J = apply_mat(eq.tensor, x);
  const double factor = eq.order() - 1;
  for (double& v : J.data()) v *= factor;
  if (!is_z_matrix(J)) {
    c.reason = "F'(x) has a positive off-diagonal entry";
    return c;
  }
  if (!m_matrix_certificate(J, x)) {
    c.reason = "F'(x) x has a non-positive component";
    return c;
  }
  c.certified = true;
  return c;
}

std::vector<std::string> check_trace_invariants(const SolverReport& report,
                                                const SolverConfig& cfg, SolverKind kind) {
  std::vector<std::string> out;
  auto fail = [&](int k, const std::string& what) {
    std::ostringstream os;
    os << to_string(kind) << " k=" << k << ": " << what;
    out.push_back(os.str());
  };
  constexpr double kRel = 1e-12;
  const auto& tr = report.trace;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const auto& cur = tr[k];
    const int kk = cur.k;
    if (!(cur.min_y > 0.0)) fail(kk, "iterate not strictly positive");
    if (kind == SolverKind::inexact && !(cur.max_feasibility < 0.0))
      fail(kk, "f(y_k) < b violated");
    if (kind == SolverKind::regularized) {
      if (!cur.t || !cur.beta) {
        fail(kk, "missing t/beta");
        continue;
      }
      if (!(*cur.t > 0.0) || *cur.t > cfg.t_bar) fail(kk, "t_k outside (0, t_bar]");
      if (*cur.t < cfg.t_bar * *cur.beta * (1.0 - kRel)) fail(kk, "t_k < t_bar * beta_k");
    }
    if (!cur.step || k + 1 >= tr.size()) continue;
    const auto& nxt = tr[k + 1];
    const double a = cur.step->alpha;
    const double e0 = cur.norm_E * cur.norm_E;
    const double e1 = nxt.norm_E * nxt.norm_E;
    if (kind == SolverKind::inexact) {
      if (e1 > (1.0 - 2.0 * cfg.sigma * a) * e0 * (1.0 + kRel))
        fail(kk, "||E|| sufficient decrease violated");
    } else {
      const double factor = 1.0 - 2.0 * cfg.sigma * (1.0 - cfg.gamma * cfg.t_bar) * a;
      if (e1 > factor * e0 * (1.0 + kRel)) fail(kk, "theta sufficient decrease violated");
      if (e1 > e0 * (1.0 + kRel)) fail(kk, "theta increased");
      if (*nxt.t > *cur.t) fail(kk, "t increased");
      const double bound = -(1.0 - cfg.gamma * cfg.t_bar) * e0;
      if (cur.step->descent > bound + 1e-10 * std::max(1.0, e0))
        fail(kk, "descent bound violated");
    }
  }
  if (report.residual_history.size() != static_cast<std::size_t>(report.iterations) + 1)
    out.push_back(std::string(to_string(kind)) + ": residual history length != iterations+1");
  if (report.status == SolverStatus::converged && !(report.residual <= cfg.tol))
    out.push_back(std::string(to_string(kind)) + ": converged with residual above tol");
  return out;
}

}  // namespace mteq
