#pragma once

#include <array>
#include <optional>
#include <string>

#include "cqr/problem.hpp"

/// The moment / sum-of-squares SDP pair of a CQR problem.
///
/// Primal (moments): Y of order n+1 indexed by (1, s), Z1 of order 3 indexed
/// by (1, z, z^2) and Z2 of order 2 indexed by (1, z), where z = |s|. The
/// cost is <C_Y, Y> + (beta/6) Z2[1][1] + (sigma/4) Z1[2][2] and eight linear
/// equalities tie the blocks together. Dual (certificate): gamma and PSD
/// blocks X0, X1, X2 with
///   M(s) - gamma = [s]' X0 [s] + [z]_2' X1 [z]_2 + z [z]_1' X2 [z]_1.
namespace cqr::sdp {

inline constexpr std::size_t kConstraints = 8;

struct SdpData {
  std::size_t n = 0;
  Matrix cost_y;   // [[f0, g'/2], [g/2, H/2]]
  Matrix cost_z1;  // sigma/4 at (2, 2)
  Matrix cost_z2;  // beta/6 at (1, 1)
  Vector rhs;      // (1, 0, ..., 0)

  // Constraint i acts on Y as e_y[i] * E00 + d_y[i] * diag(0, 1, ..., 1) and
  // on the small blocks through the symmetric matrices a_z1[i], a_z2[i].
  std::array<double, kConstraints> e_y{};
  std::array<double, kConstraints> d_y{};
  std::array<Matrix, kConstraints> a_z1;
  std::array<Matrix, kConstraints> a_z2;

  // Maximal linearly independent subset (0-based) used by the solver, and
  // the 1-based indices left out.
  std::vector<std::size_t> active;
  std::vector<std::size_t> dropped;

  double f0 = 0, beta = 0, sigma = 0;
  Vector g;
  Matrix h;
};

/// Requires W = I (apply core's transform first); throws InputError otherwise.
SdpData assemble(const CqrProblem& p);

struct SdpPrimal {
  Matrix Y, Z1, Z2;
  double theta = 0.0;
};

struct SdpDual {
  double gamma = 0.0;
  Matrix X0, X1, X2;
};

enum class Mode { dense, eigen };
enum class Status { converged, max_iterations, ill_conditioned, stalled };

std::string to_string(Mode m);
std::string to_string(Status s);

struct SolveStats {
  std::size_t iterations = 0;
  double rel_gap = 0.0;
  double primal_infeas = 0.0;
  double dual_infeas = 0.0;
  double wall_seconds = 0.0;
  Mode mode = Mode::dense;
  Status status = Status::converged;
  double scale = 1.0;  // internal radius scale: the solve runs in s / scale
  std::string diagnostic;
};

struct IpmConfig {
  double tol_gap = 1e-9;
  double tol_feas = 1e-9;
  std::size_t max_iterations = 200;
  double step_fraction = 0.98;
  Mode mode = Mode::dense;
};

struct SdpSolution {
  SdpPrimal primal;
  SdpDual dual;
  SolveStats stats;
};

/// Infeasible primal-dual path following with the HKM direction and
/// Mehrotra predictor-corrector steps. On failure the best iterate found is
/// returned with a non-converged status.
SdpSolution ipm_solve(const SdpData& data, const IpmConfig& config = {});

/// All eight constraint functionals applied to (Y, Z1, Z2).
Vector apply_constraints(const SdpData& data, const Matrix& y, const Matrix& z1,
                         const Matrix& z2);

/// Mismatch of the certificate identity, coefficient group by group.
struct SosMismatch {
  double constant = 0.0;  // X0_00 + X1_00 - (f0 - gamma)
  Vector linear;          // 2 X0_0s - g
  double z1 = 0.0;        // 2 X1_01 + X2_00
  Matrix quadratic;       // X0_ss + (X1_11 + 2 X1_02 + 2 X2_01) I - H/2
  double z3 = 0.0;        // 2 X1_12 + X2_11 - beta/6
  double z4 = 0.0;        // X1_22 - sigma/4

  double norm() const;
};

SosMismatch sos_mismatch(const SdpData& data, const SdpDual& dual);

struct Residuals {
  double primal_infeas = 0.0;  // |A(Y, Z1, Z2) - b|
  double dual_infeas = 0.0;    // norm of the certificate identity mismatch
  double gap = 0.0;            // theta - gamma
  double primal_min_eig = 0.0;  // smallest eigenvalue over Y, Z1, Z2
  double dual_min_eig = 0.0;    // smallest eigenvalue over X0, X1, X2
};

/// Recomputed from scratch; theta is re-evaluated from the primal blocks.
Residuals residuals(const SdpData& data, const SdpPrimal& primal, const SdpDual& dual);

/// Primal objective <C, (Y, Z1, Z2)>.
double primal_objective(const SdpData& data, const Matrix& y, const Matrix& z1,
                        const Matrix& z2);

/// The rank-one lift (Y(s), Z1(s), Z2(s)) of a point s.
SdpPrimal lift(const SdpData& data, std::span<const double> s);

}  // namespace cqr::sdp
