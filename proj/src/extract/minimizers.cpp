#include <algorithm>
#include <cmath>
#include <limits>

#include "cqr/extract.hpp"
#include "cqr/linalg.hpp"
#include "cqr/random.hpp"

namespace cqr::extract {
namespace {

// Damped Newton on M, falling back to the gradient where the Hessian is
// unavailable or indefinite.
Vector polish(const CqrProblem& p, Vector s) {
  double val = evaluate(p, s);
  const double gscale = 1.0 + norm2(p.g());
  for (int it = 0; it < 100; ++it) {
    const Vector grad = gradient(p, s);
    if (norm2(grad) <= 1e-14 * gscale) break;
    Vector dir = -1.0 * grad;
    if (norm2(s) > 0 || p.beta() == 0) {
      Matrix hs = hessian(p, s);
      const double lmin = linalg::min_psd_eig(hs);
      const double scale = std::max(1.0, max_abs(hs));
      const double shift = lmin > 1e-10 * scale ? 0.0 : -lmin + 1e-8 * scale;
      for (std::size_t i = 0; i < p.n(); ++i) hs(i, i) += shift;
      const linalg::CholeskyResult c = linalg::cholesky(hs);
      if (c.ok()) dir = linalg::cholesky_solve(c.factor, dir);
    }
    const double slope = dot(grad, dir);
    bool moved = false;
    double t = 1.0;
    for (int k = 0; k < 60 && !moved; ++k, t *= 0.5) {
      Vector trial = s;
      axpy(t, dir, trial);
      const double tv = evaluate(p, trial);
      if (tv <= val + 1e-4 * t * slope) {
        s = std::move(trial);
        val = tv;
        moved = true;
      }
    }
    if (!moved) break;
  }
  return s;
}

Vector moment_point(const sdp::SdpPrimal& primal) {
  const std::size_t n = primal.Y.rows() - 1;
  Vector s(n);
  const double y00 = primal.Y(0, 0);
  for (std::size_t i = 0; i < n; ++i) s[i] = primal.Y(i + 1, 0) / y00;
  return s;
}

bool block_rank_one(const Matrix& m, double tol) {
  const Vector ev = linalg::sym_eigenvalues(symmetrized(m));
  const double top = ev.back();
  if (!(top > 0)) return false;
  return ev.size() < 2 || ev[ev.size() - 2] <= tol * top;
}

}  // namespace

std::optional<Vector> MinimizerSet::representative() const {
  if (!particular) return std::nullopt;
  Vector s = *particular;
  if (basis.cols() > 0 && radius > 0) axpy(radius, basis.col(0), s);
  return s;
}

std::vector<Vector> MinimizerSet::sample(std::size_t count, std::uint64_t seed) const {
  std::vector<Vector> out;
  if (count == 0) return out;
  if (contains_zero) out.push_back(back(Vector(n, 0.0)));
  if (!particular) return out;
  const std::size_t k = basis.cols();
  if (k == 0 || radius == 0.0) {
    out.push_back(back(*particular));
    return out;
  }
  CounterRng rng(seed);
  while (out.size() < count) {
    Vector c = rng.normal_vector(k);
    const double nc = norm2(c);
    if (nc == 0) continue;
    Vector s = *particular;
    for (std::size_t j = 0; j < k; ++j) {
      const double w = radius * c[j] / nc;
      for (std::size_t i = 0; i < n; ++i) s[i] += w * basis(i, j);
    }
    out.push_back(back(s));
  }
  return out;
}

std::string to_string(Reason r) {
  switch (r) {
    case Reason::empty_system: return "empty-system";
    case Reason::curvature_condition: return "curvature-condition";
    case Reason::structural: return "structural";
    case Reason::rank_one: return "rank-one-recovery";
  }
  return "unknown";
}

std::optional<SphereSlice> solve_sphere_affine(const Certificate& cert, double z_star,
                                               const ExtractConfig& cfg) {
  const std::size_t n = cert.R.cols() - 1;
  SphereSlice out;
  if (cert.R.rows() == 0) {
    out.particular = Vector(n, 0.0);
    out.basis = Matrix::identity(n);
    out.radius = z_star;
    return out;
  }
  Matrix rs(cert.R.rows(), n);
  Vector rhs(cert.R.rows());
  for (std::size_t i = 0; i < rs.rows(); ++i) {
    rhs[i] = -cert.R(i, 0);
    for (std::size_t j = 0; j < n; ++j) rs(i, j) = cert.R(i, j + 1);
  }
  const linalg::MinNormSolution ls = linalg::min_norm_lstsq(rs, rhs, cfg.tol_null);
  // Consistency is judged by what the residual contributes to the
  // certificate identity, the scale on which everything else is accurate.
  const double res = ls.residual;
  if (res * res > cfg.tol_root * (1.0 + std::abs(cert.gamma))) return std::nullopt;
  out.particular = ls.x;
  out.basis = linalg::nullspace(rs, cfg.tol_null).basis;
  const double sn = norm2(out.particular);
  const double slack = z_star * z_star - sn * sn;
  const double tol = cfg.tol_member * (1.0 + z_star);
  if (out.basis.cols() == 0) {
    if (std::abs(sn - z_star) > tol) return std::nullopt;
    return out;
  }
  if (slack < -tol * (1.0 + z_star)) return std::nullopt;
  out.radius = std::sqrt(std::max(0.0, slack));
  return out;
}

MinimizerSet extract_set(const Certificate& cert, std::size_t n, const ExtractConfig& cfg) {
  MinimizerSet set;
  set.n = n;
  set.basis = Matrix(n, 0);
  set.contains_zero = zero_membership(cert, cfg.tol_root);
  const bool constrained = !cert.p.empty() || !cert.q.empty();
  if (!constrained) {
    // No univariate terms: every solution of the affine system qualifies.
    if (auto sl = solve_sphere_affine(cert, 0.0, cfg)) {
      const double z = norm2(sl->particular);
      if (sl->basis.cols() == 0 && z > cfg.tol_member) {
        set.z_star = z;
        set.particular = sl->particular;
      }
    }
    return set;
  }
  const double floor = cfg.tol_member;
  double best = std::numeric_limits<double>::infinity();
  for (double z : common_roots(cert, cfg.tol_root)) {
    if (z <= floor) continue;
    auto sl = solve_sphere_affine(cert, z, cfg);
    if (!sl) continue;
    const double fz = cert.univariate(z);
    if (fz >= best) continue;
    best = fz;
    set.z_star = z;
    set.particular = std::move(sl->particular);
    set.basis = std::move(sl->basis);
    set.radius = sl->radius;
  }
  return set;
}

bool rank_one(const sdp::SdpPrimal& primal, double tol_rank) {
  if (!block_rank_one(primal.Y, tol_rank) || !block_rank_one(primal.Z1, tol_rank)) return false;
  const double z2 = primal.Z2.trace();
  if (z2 <= tol_rank * primal.Z1.trace()) return true;  // point at the origin
  return block_rank_one(primal.Z2, tol_rank);
}

TightnessReport classify(const CqrProblem& problem, const sdp::SdpPrimal& primal,
                         const sdp::SdpDual& dual, const MinimizerSet& set,
                         const ExtractConfig& cfg) {
  TightnessReport r;
  r.gamma_star = dual.gamma;
  r.theta_star = primal.theta;
  const std::size_t n = problem.n();

  std::vector<Vector> pts{Vector(n, 0.0)};
  if (auto rep = set.representative()) pts.push_back(*rep);
  const Vector ym = moment_point(primal);
  pts.push_back(ym);
  const Vector yp = polish(problem, ym);
  pts.push_back(yp);
  r.mu_upper = std::numeric_limits<double>::infinity();
  for (const Vector& s : pts) {
    const double v = evaluate(problem, s);
    if (v < r.mu_upper) {
      r.mu_upper = v;
      r.best_point = s;
    }
  }
  r.err_abs = std::abs(r.mu_upper - r.gamma_star);
  r.err_rel = r.mu_upper != 0.0 ? r.err_abs / std::abs(r.mu_upper) : r.err_abs;

  auto cond = [&](double z) { return z * (problem.beta() + 3.0 * problem.sigma() * z); };
  if (set.z_star)
    r.condition_value = cond(*set.z_star);
  else if (set.contains_zero)
    r.condition_value = 0.0;
  else
    r.condition_value = cond(norm2(yp));

  const bool structural =
      problem.beta() >= 0 || linalg::min_psd_eig(problem.H()) <= 0;
  if (rank_one(primal, cfg.tol_rank) && !set.empty()) {
    r.tight = true;
    r.reason = Reason::rank_one;
  } else if (structural) {
    if (set.empty())
      throw SolverAccuracyError(
          "tightness is guaranteed for this problem but no minimizer was extracted (gamma " +
          std::to_string(r.gamma_star) + ", best value " + std::to_string(r.mu_upper) + ")");
    r.tight = true;
    r.reason = Reason::structural;
  } else if (!set.empty()) {
    r.tight = true;
    r.reason = Reason::curvature_condition;
  } else {
    r.tight = false;
    r.reason = Reason::empty_system;
  }
  return r;
}

Extraction analyze(const CqrProblem& problem, const sdp::SdpSolution& solution,
                   const ExtractConfig& cfg) {
  if (problem.W()) throw InputError("analyze: reduce the weight matrix first");
  Extraction ex;
  ex.certificate = factor_dual(solution.dual, cfg.tol_rank);
  const std::size_t n = problem.n();
  if (rank_one(solution.primal, cfg.tol_rank)) {
    const Vector s = polish(problem, moment_point(solution.primal));
    ex.set.n = n;
    ex.set.basis = Matrix(n, 0);
    const double z = norm2(s);
    if (z <= cfg.tol_member) {
      ex.set.contains_zero = true;
    } else {
      ex.set.z_star = z;
      ex.set.particular = s;
    }
  } else {
    ex.set = extract_set(ex.certificate, n, cfg);
    if (ex.set.particular && ex.set.nullspace_dim() == 0) {
      Vector s = polish(problem, *ex.set.particular);
      ex.set.z_star = norm2(s);
      ex.set.particular = std::move(s);
    } else if (!ex.set.particular) {
      // The affine system can be too ill-conditioned near the hard case to
      // pin the point down; a point whose value meets the bound is a
      // minimizer regardless.
      Vector s = polish(problem, moment_point(solution.primal));
      const double z = norm2(s);
      const double gap = evaluate(problem, s) - solution.dual.gamma;
      if (z > cfg.tol_member && gap <= cfg.tol_root * (1.0 + std::abs(solution.dual.gamma))) {
        ex.set.z_star = z;
        ex.set.particular = std::move(s);
      }
    }
  }
  ex.report = classify(problem, solution.primal, solution.dual, ex.set, cfg);
  return ex;
}

PipelineResult solve(const CqrProblem& problem, const PipelineConfig& cfg) {
  if (!problem.bounded_below())
    throw UnboundedError("the objective is unbounded below (sigma = beta = 0, H not PD)");
  const Transformed t = apply_w_transform(problem);
  PipelineResult out;
  out.sdp = sdp::ipm_solve(sdp::assemble(t.problem), cfg.ipm);
  if (out.sdp.stats.status != sdp::Status::converged)
    throw SolverFailure("interior-point solve ended with status " +
                            sdp::to_string(out.sdp.stats.status),
                        out.sdp.stats);
  out.extraction = analyze(t.problem, out.sdp, cfg.extract);
  out.extraction.set.back = t.back;
  out.extraction.report.best_point = t.back(out.extraction.report.best_point);
  return out;
}

}  // namespace cqr::extract
