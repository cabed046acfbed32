#include <cmath>
#include <sstream>

#include "mteq/bench.hpp"

namespace mteq {

namespace {

constexpr std::uint64_t kPointStreamOffset = 0x9e3779b97f4a7c15ULL;

class Tally {
 public:
  explicit Tally(std::string name) { c_.name = std::move(name); }
  void record(bool ok, int trial, const std::string& detail) {
    ++c_.checked;
    if (ok) return;
    ++c_.failed;
    if (c_.first_failure.empty()) {
      std::ostringstream os;
      os << "trial " << trial << ": " << detail;
      c_.first_failure = os.str();
    }
  }
  [[nodiscard]] VerifyCheck result() const { return c_; }

 private:
  VerifyCheck c_;
};

// ||a - b|| / (1 + ||rhs||)
double identity_error(std::span<const double> a, std::span<const double> b,
                      std::span<const double> rhs) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return norm2(d) / (1.0 + norm2(rhs));
}

double rel_error(std::span<const double> a, std::span<const double> b) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    scale = std::max(scale, std::abs(b[i]));
  }
  return diff / std::max(scale, 1e-300);
}

}  // namespace

std::vector<VerifyCheck> run_verify(const BenchConfig& cfg) {
  cfg.validate();
  Tally jac("f'(y)y = f(y)+b"), newton("M(y)y = b"), cert("M-matrix certificate"),
      invariants("trace invariants"), converged("solver converged"),
      agree("cross-solver agreement"), certified("solution certificate");

  for (int t = 0; t < cfg.trials; ++t) {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(t));
    const MTensorEquation eq = generate_problem(cfg.problem, rng);
    const auto n = static_cast<std::size_t>(eq.dim());

    RngStream point_rng(cfg.seed ^ kPointStreamOffset, static_cast<std::uint64_t>(t));
    std::vector<double> y(n);
    for (double& v : y) v = std::exp(4.0 * point_rng.uniform01() - 2.0);

    const auto f = map_f(eq, y);
    const auto Jy = jac_f(eq, y).multiply(y);
    std::vector<double> fb(n);
    for (std::size_t i = 0; i < n; ++i) fb[i] = f[i] + eq.rhs[i];
    const double e1 = identity_error(Jy, fb, eq.rhs);
    jac.record(e1 <= 1e-12, t, "error " + std::to_string(e1));

    const auto My = newton_matrix(eq, y).multiply(y);
    const double e2 = identity_error(My, eq.rhs, eq.rhs);
    newton.record(e2 <= 1e-12, t, "error " + std::to_string(e2));

    if (eq.rhs_class == RhsClass::strictly_positive) {
      cert.record(m_matrix_certificate(newton_matrix(eq, y), y), t, "newton matrix");
    }
    if (eq.rhs_class != RhsClass::invalid) {
      const double tt = cfg.regularized.t_bar * point_rng.uniform01();
      cert.record(m_matrix_certificate(reg_jacobian_block(eq, tt, y), y), t,
                  "regularized block");
    }

    std::optional<SolverReport> in_rep, reg_rep;
    if (cfg.solvers != SolverSelection::regularized) in_rep = solve_inexact_newton(eq, cfg.inexact);
    if (cfg.solvers != SolverSelection::inexact)
      reg_rep = solve_regularized_newton(eq, cfg.regularized);

    auto check_run = [&](const std::optional<SolverReport>& rep, const SolverConfig& sc,
                         SolverKind kind) {
      if (!rep || rep->status == SolverStatus::invalid_rhs) return;
      const auto v = check_trace_invariants(*rep, sc, kind);
      invariants.record(v.empty(), t, v.empty() ? "" : v.front());
      converged.record(rep->status == SolverStatus::converged, t,
                       std::string(to_string(kind)) + " ended " +
                           std::string(to_string(rep->status)));
      if (rep->status == SolverStatus::converged && eq.rhs_class == RhsClass::strictly_positive) {
        const auto c = certify_solution(eq, rep->x);
        certified.record(c.certified, t, c.reason);
      }
    };
    check_run(in_rep, cfg.inexact, SolverKind::inexact);
    check_run(reg_rep, cfg.regularized, SolverKind::regularized);

    if (in_rep && reg_rep && in_rep->status == SolverStatus::converged &&
        reg_rep->status == SolverStatus::converged) {
      const double e = rel_error(in_rep->x, reg_rep->x);
      agree.record(e <= 1e-6, t, "relative difference " + std::to_string(e));
    }
  }
  return {jac.result(),        newton.result(),    cert.result(),     invariants.result(),
          converged.result(),  agree.result(),     certified.result()};
}

}  // namespace mteq
