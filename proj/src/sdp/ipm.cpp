#include <chrono>
#include <algorithm>
#include <cmath>

#include "cqr/linalg.hpp"
#include "cqr/sdp.hpp"
#include "slack.hpp"

namespace cqr::sdp {
namespace {

using detail::ArrowSlack;
using detail::DenseSlack;

double tail_trace(const Matrix& m) {
  double t = 0.0;
  for (std::size_t i = 1; i < m.rows(); ++i) t += m(i, i);
  return t;
}

template <class Slack>
struct Point {
  Matrix xy, x1, x2;
  Slack sy;
  Matrix s1, s2;
  Vector y;
};

struct SmallInv {
  Matrix chol, inv;
  bool factor(const Matrix& m) {
    auto c = linalg::cholesky(m);
    if (!c.ok()) return false;
    chol = std::move(c.factor);
    inv = linalg::cholesky_inverse(chol);
    return true;
  }
};

struct Measures {
  double pobj = 0, dobj = 0, rel_gap = 0, pinf = 0, dinf = 0;
  double merit(const IpmConfig& c) const {
    return std::max({rel_gap / c.tol_gap, pinf / c.tol_feas, dinf / c.tol_feas});
  }
};

// Primal step length for the Y block. Dense mode uses the exact eigenvalues
// of the congruence; eigen mode estimates them with Lanczos and validates the
// step with a Cholesky factorization.
double primal_step_dense(const Matrix& chol_x, const Matrix&, const Matrix& dx, double cap) {
  return linalg::max_psd_step(chol_x, dx, cap);
}

double primal_step_lanczos(const Matrix& chol_x, const Matrix& x, const Matrix& dx, double cap) {
  const std::size_t m = x.rows();
  Vector u(m);
  auto apply = [&](std::span<const double> in, std::span<double> out) {
    std::copy(in.begin(), in.end(), u.begin());
    linalg::solve_lower_transposed(chol_x, u);
    Vector w = dx * std::span<const double>(u);
    linalg::solve_lower(chol_x, w);
    for (std::size_t i = 0; i < m; ++i) out[i] = -w[i];
  };
  const double lam = linalg::lanczos_max_eigenvalue(apply, m, std::min<std::size_t>(m, 40));
  double t = lam <= 0.0 ? cap : std::min(cap, 1.0 / lam);
  // Ritz values underestimate the top eigenvalue, so t may overshoot.
  for (int k = 0; k < 60; ++k) {
    Matrix trial = x;
    trial.add_scaled(dx, t);
    if (linalg::cholesky(trial).ok()) break;
    t *= 0.8;
  }
  return t;
}

template <class Slack>
class Driver {
 public:
  Driver(const SdpData& d, const IpmConfig& cfg, Slack cost_y)
      : d_(d), cfg_(cfg), cost_y_(std::move(cost_y)) {
    order_ = double(d.n + 1 + 3 + 2);
    cost_norm_ = std::sqrt(std::pow(cost_y_.frob(), 2) + std::pow(frobenius_norm(d.cost_z1), 2) +
                           std::pow(frobenius_norm(d.cost_z2), 2));
    rhs_norm_ = norm2(d.rhs);
    primal_step_ = cfg.mode == Mode::eigen ? primal_step_lanczos : primal_step_dense;
    const auto& act = d.active;
    Matrix gram(act.size(), act.size());
    for (std::size_t a = 0; a < act.size(); ++a)
      for (std::size_t b = 0; b < act.size(); ++b) {
        const std::size_t i = act[a], j = act[b];
        gram(a, b) = d.e_y[i] * d.e_y[j] + double(d.n) * d.d_y[i] * d.d_y[j] +
                     inner(d.a_z1[i], d.a_z1[j]) + inner(d.a_z2[i], d.a_z2[j]);
      }
    gram_chol_ = linalg::cholesky(gram).factor;
  }

  SolveStats run(Point<Slack>& pt) {
    SolveStats st;
    st.mode = cfg_.mode;
    Point<Slack> best = pt;
    Measures best_m = measure(pt);
    int tiny_steps = 0;
    st.status = Status::max_iterations;

    std::size_t it = 0;
    for (; it <= cfg_.max_iterations; ++it) {
      const Measures m = measure(pt);
      if (m.merit(cfg_) < best_m.merit(cfg_)) {
        best = pt;
        best_m = m;
      }
      if (m.rel_gap <= cfg_.tol_gap && m.pinf <= cfg_.tol_feas && m.dinf <= cfg_.tol_feas) {
        st.status = Status::converged;
        best = pt;
        best_m = m;
        break;
      }
      if (it == cfg_.max_iterations) break;

      const auto outcome = step(pt);
      if (outcome == StepOutcome::failed) {
        st.status = Status::ill_conditioned;
        st.diagnostic = diagnostic_;
        break;
      }
      tiny_steps = outcome == StepOutcome::tiny ? tiny_steps + 1 : 0;
      if (tiny_steps >= 5) {
        st.status = Status::stalled;
        st.diagnostic = "step lengths below 1e-8 for 5 iterations";
        ++it;
        break;
      }
    }
    pt = std::move(best);
    st.iterations = it;
    st.rel_gap = best_m.rel_gap;
    st.primal_infeas = best_m.pinf;
    st.dual_infeas = best_m.dinf;
    return st;
  }

 private:
  enum class StepOutcome { ok, tiny, failed };

  // The Y block enters only through its corner entry and the trace of its
  // trailing block.
  Vector constraint_values(double y00, double ytail, const Matrix& m1, const Matrix& m2) const {
    Vector out(kConstraints);
    for (std::size_t i = 0; i < kConstraints; ++i)
      out[i] = d_.e_y[i] * y00 + d_.d_y[i] * ytail + inner(d_.a_z1[i], m1) +
               inner(d_.a_z2[i], m2);
    return out;
  }

  // C - S - A*(y), block by block.
  void dual_residual(const Point<Slack>& pt, Slack& ry, Matrix& r1, Matrix& r2) const {
    ry = cost_y_;
    ry.axpy(-1.0, pt.sy);
    r1 = d_.cost_z1 - pt.s1;
    r2 = d_.cost_z2 - pt.s2;
    subtract_adjoint(pt.y, ry, r1, r2);
  }

  void subtract_adjoint(const Vector& y, Slack& sy, Matrix& s1, Matrix& s2) const {
    double corner = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < kConstraints; ++i) {
      if (y[i] == 0.0) continue;
      corner += d_.e_y[i] * y[i];
      tail += d_.d_y[i] * y[i];
      s1.add_scaled(d_.a_z1[i], -y[i]);
      s2.add_scaled(d_.a_z2[i], -y[i]);
    }
    sy.add_corner(-corner);
    sy.add_tail(-tail);
  }

  Measures measure(const Point<Slack>& pt) const {
    Measures m;
    m.pobj = cost_y_.inner(pt.xy) + inner(d_.cost_z1, pt.x1) + inner(d_.cost_z2, pt.x2);
    m.dobj = dot(d_.rhs, pt.y);
    m.rel_gap = std::abs(m.pobj - m.dobj) / (1.0 + std::abs(m.pobj) + std::abs(m.dobj));
    const Vector ax = constraint_values(pt.xy(0, 0), tail_trace(pt.xy), pt.x1, pt.x2);
    m.pinf = norm2(d_.rhs - ax) / (1.0 + rhs_norm_);
    Slack ry;
    Matrix r1, r2;
    dual_residual(pt, ry, r1, r2);
    const double rd = std::sqrt(std::pow(ry.frob(), 2) + std::pow(frobenius_norm(r1), 2) +
                                std::pow(frobenius_norm(r2), 2));
    m.dinf = rd / (1.0 + cost_norm_);
    return m;
  }

  double complementarity(const Matrix& xy, const Matrix& x1, const Matrix& x2, const Slack& sy,
                         const Matrix& s1, const Matrix& s2) const {
    return sy.inner(xy) + inner(x1, s1) + inner(x2, s2);
  }

  struct Direction {
    Matrix xy, x1, x2;
    Slack sy;
    Matrix s1, s2;
    Vector y;
  };

  // Everything that depends only on the current point.
  struct Factored {
    SmallInv s1, s2;
    Matrix chol_xy;
    SmallInv x1, x2;
    Matrix schur_chol;
    Slack ry;
    Matrix r1, r2;
    Vector base_rhs;  // b + A(X Rd S^{-1})
    Vector a_sinv;    // A(S^{-1})
    Matrix sinv_y;
  };

  bool prepare(Point<Slack>& pt, Factored& f) {
    if (!pt.sy.factor() || !f.s1.factor(pt.s1) || !f.s2.factor(pt.s2)) {
      diagnostic_ = "dual slack lost definiteness";
      return false;
    }
    auto cx = linalg::cholesky(pt.xy);
    if (!cx.ok() || !f.x1.factor(pt.x1) || !f.x2.factor(pt.x2)) {
      diagnostic_ = "primal iterate lost definiteness";
      return false;
    }
    f.chol_xy = std::move(cx.factor);
    dual_residual(pt, f.ry, f.r1, f.r2);

    const auto& act = d_.active;
    const std::size_t k = act.size();
    const Matrix& x = pt.xy;
    const double t_ee = x(0, 0) * pt.sy.inv00();
    const Vector c0 = pt.sy.inv_col0();
    double t_ed = 0.0;
    for (std::size_t j = 1; j < x.rows(); ++j) t_ed += x(0, j) * c0[j];
    const double t_dd = pt.sy.tail_contract(x);

    std::vector<Matrix> p1(k), p2(k);
    for (std::size_t b = 0; b < k; ++b) {
      p1[b] = (pt.x1 * d_.a_z1[act[b]]) * f.s1.inv;
      p2[b] = (pt.x2 * d_.a_z2[act[b]]) * f.s2.inv;
    }
    Matrix schur(k, k);
    for (std::size_t a = 0; a < k; ++a) {
      const std::size_t i = act[a];
      for (std::size_t b = 0; b < k; ++b) {
        const std::size_t j = act[b];
        schur(a, b) = d_.e_y[i] * d_.e_y[j] * t_ee +
                      (d_.e_y[i] * d_.d_y[j] + d_.d_y[i] * d_.e_y[j]) * t_ed +
                      d_.d_y[i] * d_.d_y[j] * t_dd + inner(d_.a_z1[i], p1[b]) +
                      inner(d_.a_z2[i], p2[b]);
      }
    }
    schur = symmetrized(schur);
    auto cs = linalg::cholesky(schur);
    if (!cs.ok()) {
      // Tiny diagonal shift before giving up.
      double shift = 1e-14 * std::max(1.0, max_abs(schur));
      for (int tries = 0; tries < 6 && !cs.ok(); ++tries, shift *= 100.0) {
        Matrix reg = schur;
        for (std::size_t a = 0; a < k; ++a) reg(a, a) += shift;
        cs = linalg::cholesky(reg);
      }
      if (!cs.ok()) {
        diagnostic_ = "Schur complement matrix is not positive definite";
        return false;
      }
    }
    f.schur_chol = std::move(cs.factor);

    f.sinv_y = pt.sy.inverse();
    f.a_sinv = constraint_values(pt.sy.inv00(), pt.sy.inv_tail_trace(), f.s1.inv, f.s2.inv);
    const Matrix zy = pt.sy.product(x, f.ry);
    const Vector a_xrs = constraint_values(zy(0, 0), tail_trace(zy), (pt.x1 * f.r1) * f.s1.inv,
                                           (pt.x2 * f.r2) * f.s2.inv);
    f.base_rhs = d_.rhs + a_xrs;
    return true;
  }

  Direction direction(const Point<Slack>& pt, const Factored& f, double target,
                      const Direction* pred) {
    const auto& act = d_.active;
    Vector rhs(act.size());
    Vector corr(kConstraints, 0.0);
    Matrix cy, c1, c2;  // predictor second-order terms dX dS S^{-1}
    if (pred) {
      cy = pt.sy.product(pred->xy, pred->sy);
      c1 = (pred->x1 * pred->s1) * f.s1.inv;
      c2 = (pred->x2 * pred->s2) * f.s2.inv;
      corr = constraint_values(cy(0, 0), tail_trace(cy), c1, c2);
    }
    for (std::size_t a = 0; a < act.size(); ++a) {
      const std::size_t i = act[a];
      rhs[a] = f.base_rhs[i] - target * f.a_sinv[i] + corr[i];
    }
    const Vector dy_act = linalg::cholesky_solve(f.schur_chol, rhs);

    Direction dir;
    dir.y.assign(kConstraints, 0.0);
    for (std::size_t a = 0; a < act.size(); ++a) dir.y[act[a]] = dy_act[a];
    dir.sy = f.ry;
    dir.s1 = f.r1;
    dir.s2 = f.r2;
    subtract_adjoint(dir.y, dir.sy, dir.s1, dir.s2);

    auto primal_dir = [&](const Matrix& x, const Matrix& sinv, const Matrix& prod,
                          const Matrix* second) {
      Matrix dx = sinv * target;
      dx -= x;
      Matrix sym = symmetrized(prod);
      dx -= sym;
      if (second) dx -= symmetrized(*second);
      return dx;
    };
    dir.xy = primal_dir(pt.xy, f.sinv_y, pt.sy.product(pt.xy, dir.sy), pred ? &cy : nullptr);
    dir.x1 = primal_dir(pt.x1, f.s1.inv, (pt.x1 * dir.s1) * f.s1.inv, pred ? &c1 : nullptr);
    dir.x2 = primal_dir(pt.x2, f.s2.inv, (pt.x2 * dir.s2) * f.s2.inv, pred ? &c2 : nullptr);

    // Once S^{-1} is large, cancellation in the formula above leaves A(dX)
    // visibly off b - A(X); remove the discrepancy by a least-norm correction.
    const Vector ax = constraint_values(pt.xy(0, 0), tail_trace(pt.xy), pt.x1, pt.x2);
    const Vector adx = constraint_values(dir.xy(0, 0), tail_trace(dir.xy), dir.x1, dir.x2);
    Vector miss(act.size());
    for (std::size_t a = 0; a < act.size(); ++a)
      miss[a] = d_.rhs[act[a]] - ax[act[a]] - adx[act[a]];
    const Vector fix = linalg::cholesky_solve(gram_chol_, miss);
    double corner = 0.0, tail = 0.0;
    for (std::size_t a = 0; a < act.size(); ++a) {
      const std::size_t i = act[a];
      corner += d_.e_y[i] * fix[a];
      tail += d_.d_y[i] * fix[a];
      dir.x1.add_scaled(d_.a_z1[i], fix[a]);
      dir.x2.add_scaled(d_.a_z2[i], fix[a]);
    }
    dir.xy(0, 0) += corner;
    for (std::size_t k = 1; k < dir.xy.rows(); ++k) dir.xy(k, k) += tail;
    return dir;
  }

  std::pair<double, double> step_lengths(const Point<Slack>& pt, const Factored& f,
                                         const Direction& dir) const {
    const double cap = 1.0 / cfg_.step_fraction;
    double ap = primal_step_(f.chol_xy, pt.xy, dir.xy, cap);
    ap = std::min(ap, linalg::max_psd_step(f.x1.chol, dir.x1, cap));
    ap = std::min(ap, linalg::max_psd_step(f.x2.chol, dir.x2, cap));
    double ad = pt.sy.max_step(dir.sy, cap);
    ad = std::min(ad, linalg::max_psd_step(f.s1.chol, dir.s1, cap));
    ad = std::min(ad, linalg::max_psd_step(f.s2.chol, dir.s2, cap));
    return {std::min(1.0, cfg_.step_fraction * ap), std::min(1.0, cfg_.step_fraction * ad)};
  }

  StepOutcome step(Point<Slack>& pt) {
    Factored f;
    if (!prepare(pt, f)) return StepOutcome::failed;
    const double mu = complementarity(pt.xy, pt.x1, pt.x2, pt.sy, pt.s1, pt.s2) / order_;

    const Direction pred = direction(pt, f, 0.0, nullptr);
    const auto [ap0, ad0] = step_lengths(pt, f, pred);
    const double mu_aff =
        (complementarity(pt.xy, pt.x1, pt.x2, pt.sy, pt.s1, pt.s2) +
         ad0 * complementarity(pt.xy, pt.x1, pt.x2, pred.sy, pred.s1, pred.s2) +
         ap0 * complementarity(pred.xy, pred.x1, pred.x2, pt.sy, pt.s1, pt.s2) +
         ap0 * ad0 * complementarity(pred.xy, pred.x1, pred.x2, pred.sy, pred.s1, pred.s2)) /
        order_;
    const double expon = std::max(1.0, 3.0 * std::pow(std::min(ap0, ad0), 2));
    const double centering = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, expon), 0.0, 1.0);

    Direction dir = direction(pt, f, centering * mu, &pred);
    auto [ap, ad] = step_lengths(pt, f, dir);
    if (std::min(ap, ad) < 0.5 * std::min(ap0, ad0)) {
      // The second-order term can wreck centrality near a degenerate optimum;
      // fall back to a first-order step with more centering.
      Direction alt = direction(pt, f, std::max(centering, 0.3) * mu, nullptr);
      const auto [ap2, ad2] = step_lengths(pt, f, alt);
      if (std::min(ap2, ad2) > std::min(ap, ad)) {
        dir = std::move(alt);
        ap = ap2;
        ad = ad2;
      }
    }

    // Near the optimum the blocks are nearly singular and rounding can push
    // the computed step off the cone; shrink until the factorizations succeed.
    Point<Slack> next = pt;
    for (int tries = 0;; ++tries) {
      next.xy = pt.xy;
      next.xy.add_scaled(dir.xy, ap);
      next.xy = symmetrized(next.xy);
      next.x1 = pt.x1;
      next.x1.add_scaled(dir.x1, ap);
      next.x2 = pt.x2;
      next.x2.add_scaled(dir.x2, ap);
      const bool primal_ok = linalg::cholesky(next.xy).ok() && linalg::cholesky(next.x1).ok() &&
                             linalg::cholesky(next.x2).ok();
      next.sy = pt.sy;
      next.sy.axpy(ad, dir.sy);
      next.s1 = pt.s1;
      next.s1.add_scaled(dir.s1, ad);
      next.s2 = pt.s2;
      next.s2.add_scaled(dir.s2, ad);
      const bool dual_ok = next.sy.factor() && linalg::cholesky(next.s1).ok() &&
                           linalg::cholesky(next.s2).ok();
      if (primal_ok && dual_ok) break;
      if (tries == 30) {
        diagnostic_ = "no step keeps the iterate inside the cone";
        return StepOutcome::failed;
      }
      if (!primal_ok) ap *= 0.7;
      if (!dual_ok) ad *= 0.7;
    }
    next.y = pt.y;
    axpy(ad, dir.y, next.y);
    pt = std::move(next);
    return std::max(ap, ad) < 1e-8 ? StepOutcome::tiny : StepOutcome::ok;
  }

  const SdpData& d_;
  IpmConfig cfg_;
  Slack cost_y_;
  double order_ = 1.0;
  double cost_norm_ = 0.0;
  double rhs_norm_ = 0.0;
  Matrix gram_chol_;
  double (*primal_step_)(const Matrix&, const Matrix&, const Matrix&, double) = nullptr;
  std::string diagnostic_;
};

template <class Slack>
Point<Slack> initial_point(const SdpData& d) {
  const double gnorm = norm2(d.g);
  const double hnorm = frobenius_norm(d.h);
  const double rho_p = 1.0 + gnorm + hnorm;
  const double rho_d =
      1.0 + std::max({std::abs(d.f0), gnorm, hnorm, std::abs(d.beta), d.sigma});
  Point<Slack> pt;
  pt.xy = Matrix::identity(d.n + 1) * rho_p;
  pt.x1 = Matrix::identity(3) * rho_p;
  pt.x2 = Matrix::identity(2) * rho_p;
  pt.sy = Slack::scaled_identity(d.n + 1, rho_d);
  pt.s1 = Matrix::identity(3) * rho_d;
  pt.s2 = Matrix::identity(2) * rho_d;
  pt.y.assign(kConstraints, 0.0);
  pt.y[0] = -rho_d;
  return pt;
}

// D M D for D = diag(scales).
Matrix scale_both(const Matrix& m, const Vector& scales) {
  Matrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) *= scales[i] * scales[j];
  return out;
}

Vector geometric(std::size_t len, double head, double ratio, bool constant_tail = false) {
  Vector v(len);
  for (std::size_t i = 0; i < len; ++i)
    v[i] = i == 0 ? head : (constant_tail ? head * ratio : v[i - 1] * ratio);
  return v;
}

// Largest root of sigma r^3 + (beta/2) r^2 + lam_min r - |g|, the stationary
// radius of a one-dimensional lower model. The solve runs in t = s / c with
// c this radius, which keeps the moment blocks (powers of |t| up to four)
// of order one.
double radius_scale(const SdpData& d, double lam_min) {
  const double gn = norm2(d.g);
  if (d.sigma <= 0.0) return 1.0;
  auto f = [&](double r) { return ((d.sigma * r + 0.5 * d.beta) * r + lam_min) * r - gn; };
  const double hi = 1.0 + std::max({std::abs(0.5 * d.beta), std::abs(lam_min), gn}) / d.sigma;
  const int samples = 400;
  double root = 0.0;
  for (int k = samples; k > 0; --k) {
    const double a = hi * (k - 1) / samples, b = hi * k / samples;
    if (f(a) <= 0.0 && f(b) > 0.0) {
      double lo = a, up = b;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + up);
        (f(mid) <= 0.0 ? lo : up) = mid;
      }
      root = 0.5 * (lo + up);
      break;
    }
  }
  if (!(root > 0.0)) return 1.0;
  return std::clamp(root, 1e-3, 1e3);
}

SdpData rescaled(const SdpData& d, double c) {
  if (c == 1.0) return d;
  Vector g = d.g;
  for (double& v : g) v *= c;
  return assemble(CqrProblem(d.f0, std::move(g), d.h * (c * c), d.beta * c * c * c,
                             d.sigma * c * c * c * c));
}

// Maps the iterate of the problem in t = s / c back to s.
template <class Slack>
SdpSolution finish(const SdpData& d, Point<Slack>& pt, SolveStats st, const Matrix* basis,
                   double c) {
  SdpSolution out;
  Matrix y = std::move(pt.xy);
  Matrix x0 = pt.sy.dense();
  if (basis) {
    y = symmetrized((*basis * y) * basis->transposed());
    x0 = symmetrized((*basis * x0) * basis->transposed());
  }
  const std::size_t n = d.n;
  out.primal.Y = scale_both(y, geometric(n + 1, 1.0, c, true));
  out.primal.Z1 = scale_both(pt.x1, geometric(3, 1.0, c));
  out.primal.Z2 = scale_both(pt.x2, geometric(2, 1.0, c)) * c;
  out.primal.theta = primal_objective(d, out.primal.Y, out.primal.Z1, out.primal.Z2);
  out.dual.gamma = pt.y[0];
  out.dual.X0 = scale_both(x0, geometric(n + 1, 1.0, 1.0 / c, true));
  out.dual.X1 = scale_both(pt.s1, geometric(3, 1.0, 1.0 / c));
  out.dual.X2 = scale_both(pt.s2, geometric(2, 1.0, 1.0 / c)) * (1.0 / c);
  out.stats = std::move(st);
  out.stats.scale = c;
  return out;
}

}  // namespace

SdpSolution ipm_solve(const SdpData& d, const IpmConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  SdpSolution out;
  if (cfg.mode == Mode::dense) {
    const Vector lam = linalg::sym_eigenvalues(d.h);
    const double c = radius_scale(d, lam.empty() ? 0.0 : lam.front());
    const SdpData ds = rescaled(d, c);
    Driver<DenseSlack> drv(ds, cfg, DenseSlack(ds.cost_y));
    auto pt = initial_point<DenseSlack>(ds);
    SolveStats st = drv.run(pt);
    out = finish(d, pt, std::move(st), nullptr, c);
  } else {
    // Work in the eigenbasis of H: the Y-block cost becomes an arrowhead.
    const linalg::EigenDecomp eig = linalg::sym_eigen(d.h);
    const double c = radius_scale(d, eig.values.empty() ? 0.0 : eig.values.front());
    const SdpData ds = rescaled(d, c);
    const std::size_t n = d.n;
    Vector ghat = transpose_times(eig.vectors, std::span<const double>(ds.g));
    Vector b(n), diag(n);
    for (std::size_t i = 0; i < n; ++i) {
      b[i] = 0.5 * ghat[i];
      diag[i] = 0.5 * c * c * eig.values[i];
    }
    Matrix basis(n + 1, n + 1);
    basis(0, 0) = 1.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) basis(i + 1, j + 1) = eig.vectors(i, j);
    Driver<ArrowSlack> drv(ds, cfg, ArrowSlack(ds.f0, std::move(b), std::move(diag)));
    auto pt = initial_point<ArrowSlack>(ds);
    SolveStats st = drv.run(pt);
    out = finish(d, pt, std::move(st), &basis, c);
  }
  out.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace cqr::sdp
