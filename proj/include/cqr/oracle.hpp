#pragma once

#include <optional>
#include <vector>

#include "cqr/linalg.hpp"
#include "cqr/problem.hpp"

/// Ground truth for small problems: reduce to a search over the radius
/// r = |s| using the sphere-constrained quadratic subproblem.
namespace cqr::oracle {

struct SpherePoint {
  double value = 0.0;  // min of f0 + g's + s'Hs/2 over |s| = r
  Vector s;            // one argmin
  double multiplier = 0.0;  // nu with (H + nu I) s = -g
  bool hard_case = false;
  /// Hard case only: the argmin with the bottom-eigenvector component negated.
  std::optional<Vector> twin;
};

/// Precomputes the eigendecomposition of H once; reuse across radii.
class SphereSolver {
 public:
  explicit SphereSolver(const CqrProblem& p);

  SpherePoint solve(double r) const;
  /// phi(r) + (beta/6) r^3 + (sigma/4) r^4
  double psi(double r) const;
  double lambda_min() const { return eig_.values.front(); }
  const CqrProblem& problem() const { return problem_; }

 private:
  CqrProblem problem_;
  linalg::EigenDecomp eig_;
  Vector ghat_;         // Q'g
  Vector gap_;          // lambda_i - lambda_1, zeroed on the bottom cluster
  std::size_t bottom_;  // size of the bottom eigenvalue cluster
  double ghat_bottom_norm_;
};

/// Convenience wrapper (throws InputError for r < 0).
SpherePoint phi_on_sphere(const CqrProblem& p, double r);

struct OracleResult {
  double mu_star = 0.0;
  std::vector<Vector> minimizers;  // representatives, two per hard-case sphere
  std::vector<double> radii;       // distinct optimal radii, ascending
  double r_star = 0.0;             // largest optimal radius
  bool hard_case = false;
};

struct OneDimOptions {
  std::size_t samples = 2048;
  double tol_golden = 1e-10;
  double tol_tie = 1e-9;  // radii whose psi is within tol_tie (1+|mu|) are all kept
};

/// Upper bound on the norm of any global minimizer, from the lower model
/// f0 - |g| r + (lambda_1/2) r^2 + (beta/6) r^3 + (sigma/4) r^4.
double radius_bound(const CqrProblem& p);

/// Throws UnboundedError when the problem is not bounded below. A problem
/// carrying W is reduced first and the minimizers are mapped back.
OracleResult solve_1d(const CqrProblem& p, const OneDimOptions& opt = {});

struct GridOptions {
  double bound = 0.0;          // box half-width; 0 picks radius_bound
  std::size_t resolution = 0;  // points per axis; 0 picks a default by n
  std::size_t polish = 8;      // number of best grid points to refine
};

/// Exhaustive grid search for n <= 3 followed by Newton polishing.
/// Throws InputError when n > 3.
OracleResult grid_oracle(const CqrProblem& p, const GridOptions& opt = {});

enum class Applicability { holds, fails, not_applicable };

struct GlobalCheck {
  double stationarity = 0.0;  // |B(s) s + g|
  bool stationary = false;
  double min_eig = 0.0;  // smallest eigenvalue of B(|s|)
  bool psd = false;
  double curvature = 0.0;  // beta + 3 sigma |s|
  Applicability curvature_condition = Applicability::not_applicable;
  bool sufficient = false;  // all three conditions certify a global minimizer
  bool unique = false;      // sufficient and (B positive definite or strict curvature)
};

GlobalCheck verify_global(const CqrProblem& p, std::span<const double> s);

struct DescentResult {
  Vector s;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Gradient descent with Armijo backtracking from a given start. A local
/// method only; it can stall at non-global stationary points.
DescentResult local_descent(const CqrProblem& p, Vector start, std::size_t max_iter = 10000,
                            double tol_grad = 1e-8);

}  // namespace cqr::oracle
