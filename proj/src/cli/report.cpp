#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "cqr/cli.hpp"
#include "cqr/random.hpp"

namespace cqr::cli {
namespace {

using json = nlohmann::ordered_json;

json vec(const Vector& v) { return json(v); }

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Flattens a JSON object into aligned "key  value" lines.
void render(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  for (const auto& [k, v] : j.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object()) {
      render(v, key, rows);
    } else if (v.is_array()) {
      std::string s;
      for (const auto& x : v) s += (s.empty() ? "" : " ") + (x.is_number() ? num(x.get<double>()) : x.dump());
      rows.emplace_back(key, s);
    } else if (v.is_number_float()) {
      rows.emplace_back(key, num(v.get<double>()));
    } else if (v.is_string()) {
      rows.emplace_back(key, v.get<std::string>());
    } else {
      rows.emplace_back(key, v.dump());
    }
  }
}

std::string as_text(const json& j) {
  std::vector<std::pair<std::string, std::string>> rows;
  render(j, "", rows);
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  std::ostringstream o;
  for (const auto& [k, v] : rows) o << k << std::string(width + 2 - k.size(), ' ') << v << "\n";
  return o.str();
}

}  // namespace

std::string solve_report(const ReportInput& in, bool machine) {
  const extract::PipelineResult& r = *in.result;
  const extract::Extraction& e = r.extraction;
  const extract::TightnessReport& t = e.report;
  const extract::MinimizerSet& set = e.set;
  const sdp::SolveStats& st = r.sdp.stats;

  json j;
  j["tool"] = {{"name", std::string(kToolName)}, {"version", std::string(kToolVersion)}};
  j["input"] = {{"path", in.path},
                {"id", in.file ? in.file->id : ""},
                {"digest", in.file ? in.file->digest : ""}};
  j["gamma_star"] = t.gamma_star;
  j["theta_star"] = t.theta_star;
  j["mu_upper"] = t.mu_upper;
  j["err_abs"] = t.err_abs;
  j["err_rel"] = t.err_rel;
  j["tight"] = t.tight;
  j["reason"] = extract::to_string(t.reason);
  j["condition_value"] = opt(t.condition_value);
  j["best_point"] = vec(t.best_point);

  json m;
  m["contains_zero"] = set.contains_zero;
  m["z_star"] = opt(set.z_star);
  m["particular"] = set.particular ? vec(set.back(*set.particular)) : json(nullptr);
  m["nullspace_dim"] = set.nullspace_dim();
  m["radius"] = set.radius;
  const auto rep = set.representative();
  m["representative"] = rep ? vec(set.back(*rep)) : json(nullptr);
  m["weighted_coordinates"] = set.back.linear.has_value();
  j["minimizers"] = m;

  j["certificate"] = {{"rank_x0", e.certificate.rank_x0},
                      {"rank_x1", e.certificate.rank_x1},
                      {"rank_x2", e.certificate.rank_x2},
                      {"anomalies", e.certificate.anomalies}};
  j["solver"] = {{"status", sdp::to_string(st.status)},
                 {"mode", sdp::to_string(st.mode)},
                 {"iterations", st.iterations},
                 {"rel_gap", st.rel_gap},
                 {"primal_infeas", st.primal_infeas},
                 {"dual_infeas", st.dual_infeas},
                 {"radius_scale", st.scale},
                 {"wall_seconds", st.wall_seconds}};
  if (in.descent) {
    j["local_descent"] = {{"value", in.descent->value},
                          {"iterations", in.descent->iterations},
                          {"converged", in.descent->converged},
                          {"point", vec(in.descent->s)}};
  }
  return machine ? j.dump(2) + "\n" : as_text(j);
}

std::string bench_report(const BenchConfig& cfg, const std::vector<BenchRow>& rows,
                         bool machine) {
  if (machine) {
    json j;
    j["tool"] = {{"name", std::string(kToolName)}, {"version", std::string(kToolVersion)}};
    j["generator"] = std::string(CounterRng::kName);
    j["seed"] = cfg.seed;
    j["instances"] = cfg.instances;
    json arr = json::array();
    for (const BenchRow& r : rows)
      arr.push_back({{"n", r.n},
                     {"beta", r.beta},
                     {"instances", r.instances},
                     {"mean_seconds", r.mean_seconds},
                     {"max_err_abs", r.max_err_abs},
                     {"max_oracle_err", r.max_oracle_err},
                     {"oracle_used", r.oracle_used},
                     {"tight", r.tight},
                     {"not_tight", r.not_tight},
                     {"failures", r.failures}});
    j["rows"] = arr;
    return j.dump(2) + "\n";
  }
  std::ostringstream o;
  o << "# generator " << std::string(CounterRng::kName) << " seed " << cfg.seed << " instances "
    << cfg.instances << "\n";
  char buf[200];
  std::snprintf(buf, sizeof buf, "%6s %8s %12s %12s %12s %7s %6s %9s %8s\n", "n", "beta",
                "mean_s", "max_err_abs", "oracle_err", "oracle", "tight", "not_tight",
                "failures");
  o << buf;
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%6zu %8g %12.4e %12.4e %12.4e %7s %6zu %9zu %8zu\n", r.n,
                  r.beta, r.mean_seconds, r.max_err_abs, r.max_oracle_err,
                  r.oracle_used ? "1d" : "samples", r.tight, r.not_tight, r.failures);
    o << buf;
  }
  return o.str();
}

}  // namespace cqr::cli
