#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cqr/error.hpp"
#include "cqr/problem.hpp"
#include "cqr/sdp.hpp"

/// Turns an SDP optimum into the global minimizer set and a tightness verdict.
namespace cqr::extract {

struct ExtractConfig {
  double tol_rank = 1e-7;    // eigenvalue > tol_rank * max(1, lambda_max) counts
  double tol_root = 1e-6;    // root intersection and certificate residuals
  double tol_null = 1e-6;    // relative singular value cutoff for the affine system
  double tol_member = 1e-6;  // sphere consistency checks, relative to z*
};

/// The evidence is inconsistent: the verdict should be tight but no
/// minimizer could be extracted. Carries the residual summary in what().
class SolverAccuracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// M(s) - gamma = |R [1; s]|^2 + sum_i p_i(|s|)^2 + |s| sum_j q_j(|s|)^2.
/// Quadratic p_i have coefficients (a0, a1, a2), linear q_j have (b0, b1).
struct Certificate {
  double gamma = 0.0;
  Matrix R;               // rank(X0) x (n+1)
  std::vector<Vector> p;  // one per retained eigenpair of X1
  std::vector<Vector> q;  // one per retained eigenpair of X2
  std::size_t rank_x0 = 0, rank_x1 = 0, rank_x2 = 0;
  std::vector<std::string> anomalies;

  /// sum_i p_i(z)^2 + z sum_j q_j(z)^2
  double univariate(double z) const;
  /// Right-hand side of the identity above.
  double value(std::span<const double> s) const;
};

double poly_eval(std::span<const double> coeffs, double z);

Certificate factor_dual(const sdp::SdpDual& dual, double tol_rank = 1e-7);

/// Nonnegative common zeros of all nonzero p_i and q_j.
std::vector<double> common_roots(const Certificate& cert, double tol_root = 1e-6);

/// Whether s = 0 zeroes every term of the certificate.
bool zero_membership(const Certificate& cert, double tol = 1e-6);

/// { hat_s + N c : |c| = radius }, the solutions of R [1; s] = 0 with |s| = z*.
struct SphereSlice {
  Vector particular;
  Matrix basis;  // n x k, orthonormal columns
  double radius = 0.0;
};

std::optional<SphereSlice> solve_sphere_affine(const Certificate& cert, double z_star,
                                               const ExtractConfig& cfg = {});

struct MinimizerSet {
  bool contains_zero = false;
  std::optional<double> z_star;
  std::optional<Vector> particular;
  Matrix basis;
  double radius = 0.0;
  // Members live in the coordinates of the problem that was solved; `back`
  // maps them to the caller's coordinates.
  BackMap back;
  std::size_t n = 0;

  bool empty() const { return !contains_zero && !particular; }
  std::size_t nullspace_dim() const { return particular ? basis.cols() : 0; }
  /// A nonzero member (hat_s + radius * first basis column), if any.
  std::optional<Vector> representative() const;
  /// Up to `count` members in caller coordinates; 0 first when it belongs.
  std::vector<Vector> sample(std::size_t count, std::uint64_t seed) const;
};

// structural: beta >= 0 or H has a nonpositive eigenvalue, which forces tightness.
enum class Reason { empty_system, curvature_condition, structural, rank_one };
std::string to_string(Reason r);

struct TightnessReport {
  double gamma_star = 0.0;
  double theta_star = 0.0;
  double mu_upper = 0.0;
  double err_abs = 0.0;
  double err_rel = 0.0;
  bool tight = false;
  Reason reason = Reason::empty_system;
  std::optional<double> condition_value;
  Vector best_point;  // where mu_upper was attained
};

/// Y, Z1 and Z2 each numerically rank one (Z2 may also vanish only when
/// the recovered point is 0).
bool rank_one(const sdp::SdpPrimal& primal, double tol_rank = 1e-7);

/// Steps 2 to 4 of the extraction: zero test, common roots, sphere slice.
MinimizerSet extract_set(const Certificate& cert, std::size_t n, const ExtractConfig& cfg = {});

/// Verdict for a problem with W = I. Throws SolverAccuracyError when the
/// verdict is forced to be tight but `set` is empty.
TightnessReport classify(const CqrProblem& problem, const sdp::SdpPrimal& primal,
                         const sdp::SdpDual& dual, const MinimizerSet& set,
                         const ExtractConfig& cfg = {});

struct Extraction {
  Certificate certificate;
  MinimizerSet set;
  TightnessReport report;
};

/// Certificate, minimizer set and verdict from a converged SDP solution.
Extraction analyze(const CqrProblem& problem, const sdp::SdpSolution& solution,
                   const ExtractConfig& cfg = {});

/// The IPM stopped without converging.
class SolverFailure : public NumericalError {
 public:
  SolverFailure(const std::string& what, sdp::SolveStats stats)
      : NumericalError(what), stats(std::move(stats)) {}
  sdp::SolveStats stats;
};

struct PipelineConfig {
  sdp::IpmConfig ipm;
  ExtractConfig extract;
};

struct PipelineResult {
  sdp::SdpSolution sdp;
  Extraction extraction;  // set.back maps to the input coordinates
};

/// Reduces a weight matrix, solves the SDP, extracts and classifies.
/// Throws UnboundedError, SolverFailure or SolverAccuracyError.
PipelineResult solve(const CqrProblem& problem, const PipelineConfig& cfg = {});

}  // namespace cqr::extract
