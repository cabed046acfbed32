#include <fstream>
#include <string>

#include "json.hpp"
#include "mteq/bench.hpp"
#include "mteq/errors.hpp"

namespace mteq {

using nlohmann::json;

namespace {

json solver_config_json(const SolverConfig& c) {
  json j{{"sigma", c.sigma}, {"rho", c.rho},           {"gamma", c.gamma},
         {"t_bar", c.t_bar}, {"tol", c.tol},           {"max_iter", c.max_iter},
         {"reduce_zeros", c.reduce_zeros}};
  if (const auto* e = std::get_if<EpsilonE>(&c.initial))
    j["initial"] = {{"policy", "epsilon-e"}, {"value", e->eps}};
  else if (const auto* k = std::get_if<ConstantE>(&c.initial))
    j["initial"] = {{"policy", "constant-e"}, {"value", k->c}};
  else
    j["initial"] = {{"policy", "explicit"}, {"x", std::get<ExplicitPoint>(c.initial).x}};
  return j;
}

json record_json(const TrialRecord& r) {
  json j{{"problem", r.problem},
         {"m", r.m},
         {"n", r.n},
         {"trial", r.trial},
         {"solver", std::string(to_string(r.solver))},
         {"status", std::string(to_string(r.status))},
         {"iters", r.iterations},
         {"ls_iters", r.ls_iters},
         {"time_ms", r.time_ms},
         {"residual", r.residual},
         {"residual_history", r.residual_history},
         {"merit_history", r.merit_history},
         {"t_history", r.t_history},
         {"certified", r.certified},
         {"violations", r.violations}};
  j["order_estimate"] = r.order_estimate ? json(*r.order_estimate) : json(nullptr);
  return j;
}

TrialRecord record_from_json(const json& j) {
  TrialRecord r;
  r.problem = j.at("problem").get<int>();
  r.m = j.at("m").get<int>();
  r.n = j.at("n").get<int>();
  r.trial = j.at("trial").get<int>();
  const auto solver = j.at("solver").get<std::string>();
  if (solver == "inexact") r.solver = SolverKind::inexact;
  else if (solver == "regularized") r.solver = SolverKind::regularized;
  else throw ConfigError("unknown solver in report: " + solver);
  r.status = solver_status_from_string(j.at("status").get<std::string>());
  r.iterations = j.at("iters").get<int>();
  r.ls_iters = j.at("ls_iters").get<int>();
  r.time_ms = j.at("time_ms").get<double>();
  r.residual = j.at("residual").get<double>();
  r.residual_history = j.at("residual_history").get<std::vector<double>>();
  r.merit_history = j.at("merit_history").get<std::vector<double>>();
  r.t_history = j.at("t_history").get<std::vector<double>>();
  r.certified = j.at("certified").get<bool>();
  r.violations = j.at("violations").get<std::vector<std::string>>();
  if (!j.at("order_estimate").is_null()) r.order_estimate = j.at("order_estimate").get<double>();
  return r;
}

}  // namespace

std::string to_json_report(const BenchResult& result) {
  const auto& c = result.config;
  json doc;
  doc["schema"] = std::string(kReportSchema);
  doc["config"] = {{"problem", c.problem.problem},
                   {"m", c.problem.order},
                   {"n", c.problem.dim},
                   {"b_mode", std::string(to_string(c.problem.rhs_mode))},
                   {"c0", c.problem.c0},
                   {"c1", c.problem.c1},
                   {"trials", c.trials},
                   {"seed", c.seed},
                   {"solver", std::string(to_string(c.solvers))},
                   {"rng", std::string(RngStream::algorithm())},
                   {"inexact", solver_config_json(c.inexact)},
                   {"regularized", solver_config_json(c.regularized)}};
  json summaries = json::array();
  for (const auto& s : result.summaries) {
    summaries.push_back({{"solver", std::string(to_string(s.solver))},
                         {"trials", s.trials},
                         {"successes", s.successes},
                         {"mean_iters", s.mean_iters},
                         {"mean_time_ms", s.mean_time_ms},
                         {"mean_residual", s.mean_residual},
                         {"mean_ls_iters", s.mean_ls_iters}});
  }
  doc["summaries"] = summaries;
  if (result.ratios) {
    doc["ratios"] = {{"label", "inexact / regularized"},
                     {"IR", result.ratios->iteration_ratio},
                     {"TR", result.ratios->time_ratio}};
  }
  json trials = json::array();
  for (const auto& r : result.records) trials.push_back(record_json(r));
  doc["trials"] = trials;
  return doc.dump(2);
}

void write_json_report(const std::filesystem::path& path, const BenchResult& result) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << to_json_report(result) << '\n';
}

std::vector<TrialRecord> parse_json_records(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("report is not valid JSON: ") + e.what());
  }
  if (doc.value("schema", "") != kReportSchema)
    throw ConfigError("report schema is not " + std::string(kReportSchema));
  std::vector<TrialRecord> out;
  for (const auto& j : doc.at("trials")) out.push_back(record_from_json(j));
  return out;
}

}  // namespace mteq
