#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqr/cli.hpp"

namespace cqr::cli {
namespace {

using json = nlohmann::ordered_json;

struct Common {
  std::string format = "text";
  std::string out_path;
  bool machine() const { return format == "machine"; }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"text", "machine"}));
  cmd->add_option("--out", c.out_path, "Write the report to this file instead of stdout");
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw InputError("cannot write " + c.out_path);
  f << text;
}

void add_solver_flags(CLI::App* cmd, extract::PipelineConfig& cfg, std::string& mode) {
  cmd->add_option("--tol-gap", cfg.ipm.tol_gap, "Relative duality gap tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol-rank", cfg.extract.tol_rank, "Relative eigenvalue cutoff for ranks")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--mode", mode, "Interior-point linear algebra")
      ->check(CLI::IsMember({"dense", "eigen"}));
}

sdp::Mode parse_mode(const std::string& m) { return m == "eigen" ? sdp::Mode::eigen : sdp::Mode::dense; }

std::string check_report(const std::string& path, const Vector& s, const oracle::GlobalCheck& c,
                         bool machine) {
  auto word = [](oracle::Applicability a) {
    return a == oracle::Applicability::holds   ? "holds"
           : a == oracle::Applicability::fails ? "fails"
                                               : "not-applicable";
  };
  json j;
  j["input"] = path;
  j["point"] = s;
  j["stationarity_residual"] = c.stationarity;
  j["stationary"] = c.stationary;
  j["min_eig"] = c.min_eig;
  j["psd"] = c.psd;
  j["curvature"] = c.curvature;
  j["curvature_condition"] = word(c.curvature_condition);
  j["sufficient"] = c.sufficient;
  j["unique"] = c.unique;
  if (machine) return j.dump(2) + "\n";
  std::ostringstream o;
  char buf[160];
  std::snprintf(buf, sizeof buf, "condition 1 (stationarity)   residual %.6e  %s\n",
                c.stationarity, c.stationary ? "pass" : "fail");
  o << buf;
  std::snprintf(buf, sizeof buf, "condition 2 (B(|s|) PSD)     min eig  %.6e  %s\n", c.min_eig,
                c.psd ? "pass" : "fail");
  o << buf;
  std::snprintf(buf, sizeof buf, "condition 3 (curvature)      value    %.6e  %s\n", c.curvature,
                word(c.curvature_condition));
  o << buf;
  o << "global minimizer certified: " << (c.sufficient ? "yes" : "no")
    << (c.unique ? " (unique)" : "") << "\n";
  return o.str();
}

std::string oracle_report(const std::string& path, const CqrProblem& p, bool machine) {
  const oracle::OracleResult r = oracle::solve_1d(p);
  json j;
  j["input"] = path;
  j["mu_star"] = r.mu_star;
  j["r_star"] = r.r_star;
  j["radii"] = r.radii;
  j["hard_case"] = r.hard_case;
  j["minimizers"] = r.minimizers;
  if (p.n() <= 3 && !p.W()) j["grid_mu_star"] = oracle::grid_oracle(p).mu_star;
  if (machine) return j.dump(2) + "\n";
  std::ostringstream o;
  char buf[120];
  std::snprintf(buf, sizeof buf, "mu_star    %.17g\nr_star     %.17g\n", r.mu_star, r.r_star);
  o << buf << "hard_case  " << (r.hard_case ? "true" : "false") << "\n";
  if (j.contains("grid_mu_star")) {
    std::snprintf(buf, sizeof buf, "grid       %.17g\n", j["grid_mu_star"].get<double>());
    o << buf;
  }
  for (const Vector& s : r.minimizers) {
    o << "minimizer ";
    for (double v : s) {
      std::snprintf(buf, sizeof buf, " %.17g", v);
      o << buf;
    }
    o << "\n";
  }
  return o.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Global solver for cubic-quartic regularized quadratic models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  Common common;
  extract::PipelineConfig pcfg;
  std::string mode = "dense";
  std::string problem_path, point_path, descent_path;

  CLI::App* solve = app.add_subcommand("solve", "Solve a problem file and extract all minimizers");
  solve->add_option("problem", problem_path, "Problem file")->required();
  solve->add_option("--local-descent", descent_path,
                    "Also run the gradient-descent baseline from the point in this file");
  add_solver_flags(solve, pcfg, mode);
  add_common(solve, common);

  CLI::App* check = app.add_subcommand("check", "Test the global optimality conditions at a point");
  check->add_option("problem", problem_path, "Problem file")->required();
  check->add_option("point", point_path, "Point file")->required();
  add_common(check, common);

  BenchConfig bcfg;
  std::size_t threads = 1;
  CLI::App* bench = app.add_subcommand("bench", "Time the solver on seeded random instances");
  bench->add_option("--n", bcfg.sizes, "Problem sizes")->required()->delimiter(',');
  bench->add_option("--beta", bcfg.betas, "Cubic coefficients")->delimiter(',');
  bench->add_option("--instances", bcfg.instances, "Instances per (n, beta) cell");
  bench->add_option("--seed", bcfg.seed, "Generator seed");
  bench->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  add_solver_flags(bench, pcfg, mode);
  add_common(bench, common);

  CLI::App* orc = app.add_subcommand("oracle", "Run the one-dimensional reference solver");
  orc->add_option("problem", problem_path, "Problem file")->required();
  add_common(orc, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, eo;
    const int code = app.exit(e, o, eo);
    out << o.str();
    err << eo.str();
    return code == 0 ? 0 : kInputError;
  }
  pcfg.ipm.mode = parse_mode(mode);

  try {
    if (*solve) {
      const ProblemFile file = load_problem(problem_path);
      const extract::PipelineResult r = extract::solve(file.problem, pcfg);
      std::optional<oracle::DescentResult> descent;
      if (!descent_path.empty()) {
        Vector start = load_point(descent_path);
        if (start.size() != file.problem.n())
          throw InputError("start point has dimension " + std::to_string(start.size()));
        descent = oracle::local_descent(file.problem, std::move(start));
      }
      ReportInput in{&file, problem_path, &r, descent ? &*descent : nullptr};
      emit(common, solve_report(in, common.machine()), out);
      return r.extraction.report.tight ? kTight : kNotTight;
    }
    if (*check) {
      const ProblemFile file = load_problem(problem_path);
      const Vector s = load_point(point_path);
      if (s.size() != file.problem.n())
        throw InputError("point has dimension " + std::to_string(s.size()) + ", problem has " +
                         std::to_string(file.problem.n()));
      emit(common, check_report(problem_path, s, oracle::verify_global(file.problem, s),
                                common.machine()),
           out);
      return 0;
    }
    if (*bench) {
      bcfg.threads = threads;
      bcfg.pipeline = pcfg;
      for (std::size_t n : bcfg.sizes)
        if (n == 0) throw InputError("bench sizes must be positive");
      emit(common, bench_report(bcfg, run_bench(bcfg), common.machine()), out);
      return 0;
    }
    if (*orc) {
      const ProblemFile file = load_problem(problem_path);
      if (file.problem.n() > kOracleLimit) {
        err << "oracle: n = " << file.problem.n() << " exceeds the limit " << kOracleLimit << "\n";
        return kOracleLimitExceeded;
      }
      emit(common, oracle_report(problem_path, file.problem, common.machine()), out);
      return 0;
    }
  } catch (const UnboundedError& e) {
    err << "unbounded: " << e.what() << "\n";
    return kUnbounded;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const extract::SolverFailure& e) {
    err << "solver failure: " << e.what() << " (rel gap " << e.stats.rel_gap << ", iterations "
        << e.stats.iterations << ")\n";
    return kSolverFailure;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  }
  return kInputError;
}

}  // namespace cqr::cli
