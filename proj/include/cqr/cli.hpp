#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cqr/error.hpp"
#include "cqr/extract.hpp"
#include "cqr/oracle.hpp"
#include "cqr/problem.hpp"

// json.hpp is heavy; reports are exchanged as serialized text.
namespace cqr::cli {

inline constexpr std::string_view kToolName = "cqr";
inline constexpr std::string_view kToolVersion = "0.1.0";
/// Largest n accepted by the `oracle` subcommand.
inline constexpr std::size_t kOracleLimit = 50;

enum ExitCode : int {
  kTight = 0,
  kSolverFailure = 1,
  kNotTight = 2,
  kInputError = 3,
  kUnbounded = 4,
  kOracleLimitExceeded = 5,
};

/// Malformed problem or point file; line and column are 1-based.
class ParseError : public InputError {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column,
             const std::string& message);
  std::size_t line, column;
};

struct ProblemFile {
  CqrProblem problem;
  std::string id;
  std::string comment;
  std::string digest;  // "fnv1a64:" + 16 hex digits of the raw bytes
};

/// Line-oriented `key = values` document. Lines starting with whitespace
/// continue the previous key; '#' starts a comment. Numbers are anything
/// strtod accepts in full, including hex floats, and must be finite.
///
/// Keys: n, f0 (default 0), beta, sigma, g, H, H_layout (dense | upper),
/// W, W_layout, id, comment.
ProblemFile parse_problem(std::string_view text, const std::string& source = "<input>");
ProblemFile load_problem(const std::string& path);

/// Whitespace or comma separated numbers, '#' comments allowed.
Vector parse_point(std::string_view text, const std::string& source = "<input>");
Vector load_point(const std::string& path);

/// Inverse of parse_problem up to formatting; values are written exactly.
std::string format_problem(const CqrProblem& p, const std::string& id = {},
                           const std::string& comment = {});

std::uint64_t fnv1a64(std::string_view bytes);
std::string digest(std::string_view bytes);

/// g standard normal, H = (A + A')/2 with A standard normal, f0 = 0; all
/// drawn from CounterRng(key).
CqrProblem random_problem(std::uint64_t key, std::size_t n, double beta, double sigma = 4.0);

/// Serialized solve report (JSON when machine, aligned text otherwise).
struct ReportInput {
  const ProblemFile* file = nullptr;
  std::string path;
  const extract::PipelineResult* result = nullptr;
  const oracle::DescentResult* descent = nullptr;  // optional baseline
};
std::string solve_report(const ReportInput& in, bool machine);

struct BenchConfig {
  std::vector<std::size_t> sizes;
  std::vector<double> betas{10, 1, 0, -1, -10, -100};
  std::size_t instances = 5;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  extract::PipelineConfig pipeline;
};

struct BenchRow {
  std::size_t n = 0;
  double beta = 0.0;
  std::size_t instances = 0;
  double mean_seconds = 0.0;
  double max_err_abs = 0.0;     // |mu_upper - gamma_star|
  double max_oracle_err = 0.0;  // |gamma_star - mu_oracle| over tight instances, or
                                // the largest weak-duality violation without an oracle
  bool oracle_used = false;
  std::size_t tight = 0;
  std::size_t not_tight = 0;
  std::size_t failures = 0;
};

/// Rows ordered by (n, beta) as given; instance k of cell (i, j) uses
/// CounterRng::derive(seed, i, j, k).
std::vector<BenchRow> run_bench(const BenchConfig& cfg);
std::string bench_report(const BenchConfig& cfg, const std::vector<BenchRow>& rows,
                         bool machine);

/// The command-line front end; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cqr::cli
