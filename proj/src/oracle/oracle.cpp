#include <algorithm>
#include <cmath>
#include <limits>

#include "cqr/error.hpp"
#include "cqr/oracle.hpp"

namespace cqr::oracle {
namespace {

struct Candidate {
  double r;
  double psi;
};

double golden_section(const SphereSolver& ss, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = ss.psi(c), fd = ss.psi(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = ss.psi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = ss.psi(d);
    }
  }
  return fc <= fd ? c : d;
}

// Stationarity in r: psi'(r) = r * h(r).
double radial_residual(const SphereSolver& ss, double r) {
  const CqrProblem& p = ss.problem();
  return 0.5 * p.beta() * r + p.sigma() * r * r - ss.solve(r).multiplier;
}

// Sharpen a local minimizer to a root of the radial residual when one can be
// bracketed inside [lo_lim, hi_lim].
double polish_radius(const SphereSolver& ss, double r, double lo_lim, double hi_lim) {
  if (r <= 0) return r;
  double delta = 1e-9 * (1.0 + r);
  double lo = r, hi = r;
  bool bracketed = false;
  for (int k = 0; k < 30; ++k) {
    lo = std::max(lo_lim, r - delta);
    hi = std::min(hi_lim, r + delta);
    if (lo > 0 && radial_residual(ss, lo) <= 0 && radial_residual(ss, hi) >= 0) {
      bracketed = true;
      break;
    }
    delta *= 4;
  }
  if (!bracketed) return r;
  for (int it = 0; it < 200 && hi - lo > 2e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (radial_residual(ss, mid) <= 0)
      lo = mid;
    else
      hi = mid;
  }
  // psi is flat near a minimizer, so only reject the root on a clear increase.
  const double best = 0.5 * (lo + hi);
  const double pr = ss.psi(r);
  return ss.psi(best) <= pr + 1e-9 * (1.0 + std::abs(pr)) ? best : r;
}

OracleResult map_back(OracleResult res, const BackMap& back) {
  for (Vector& s : res.minimizers) s = back(s);
  return res;
}

// Levenberg-shifted Newton with backtracking.
Vector polish_point(const CqrProblem& p, Vector s) {
  const double gscale = 1.0 + norm2(p.g());
  double val = evaluate(p, s);
  for (int it = 0; it < 200; ++it) {
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
    double t = 1.0;
    bool moved = false;
    const double slope = dot(grad, dir);
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

}  // namespace

double radius_bound(const CqrProblem& p) {
  if (p.W()) {
    // |s| <= |s|_W / sqrt(lambda_min(W))
    return radius_bound(apply_w_transform(p).problem) /
           std::sqrt(linalg::min_psd_eig(*p.W()));
  }
  const double lam1 = linalg::min_psd_eig(p.H());
  const double a[4] = {-norm2(p.g()), 0.5 * lam1, p.beta() / 6.0, p.sigma() / 4.0};
  int k = 3;
  while (k >= 0 && a[k] == 0.0) --k;
  if (k <= 0 || a[k] < 0) throw UnboundedError("objective is unbounded below");
  // Fujiwara bound on the roots of the polynomial a_0 + a_1 r + ... + a_k r^k.
  double m = 0.0;
  for (int i = 0; i < k; ++i) {
    double ratio = std::abs(a[i] / a[k]);
    if (i == 0) ratio *= 0.5;
    m = std::max(m, std::pow(ratio, 1.0 / double(k - i)));
  }
  return 2.0 * m;
}

OracleResult solve_1d(const CqrProblem& p, const OneDimOptions& opt) {
  if (!p.bounded_below()) throw UnboundedError("objective is unbounded below");
  if (p.W()) {
    const Transformed t = apply_w_transform(p);
    return map_back(solve_1d(t.problem, opt), t.back);
  }
  const SphereSolver ss(p);
  const double rmax = 1.01 * radius_bound(p) + 1e-12;

  std::vector<Candidate> cands{{0.0, ss.psi(0.0)}};
  const std::size_t m = std::max<std::size_t>(opt.samples, 3);
  std::vector<double> rs(m), vals(m);
  for (std::size_t j = 0; j < m; ++j) {
    rs[j] = rmax * double(j) / double(m - 1);
    vals[j] = ss.psi(rs[j]);
  }
  for (std::size_t j = 0; j < m; ++j) {
    const bool left_ok = j == 0 || vals[j] <= vals[j - 1];
    const bool right_ok = j + 1 == m || vals[j] <= vals[j + 1];
    if (!left_ok || !right_ok) continue;
    const double a = rs[j == 0 ? 0 : j - 1];
    const double b = rs[j + 1 == m ? m - 1 : j + 1];
    double r = golden_section(ss, a, b, opt.tol_golden * (1.0 + rmax));
    r = polish_radius(ss, r, a, b);
    cands.push_back({r, ss.psi(r)});
  }

  double mu = std::numeric_limits<double>::infinity();
  for (const Candidate& c : cands) mu = std::min(mu, c.psi);
  const double tie = opt.tol_tie * (1.0 + std::abs(mu));

  std::vector<Candidate> keep;
  for (const Candidate& c : cands)
    if (c.psi <= mu + tie) keep.push_back(c);
  std::sort(keep.begin(), keep.end(),
            [](const Candidate& x, const Candidate& y) { return x.r < y.r; });
  std::vector<Candidate> merged;
  for (const Candidate& c : keep) {
    if (!merged.empty() && c.r - merged.back().r <= 1e-6 * (1.0 + c.r)) {
      if (c.psi < merged.back().psi && merged.back().r != 0.0) merged.back() = c;
      continue;
    }
    merged.push_back(c);
  }

  OracleResult res;
  res.mu_star = mu;
  for (const Candidate& c : merged) {
    const SpherePoint sp = ss.solve(c.r);
    res.radii.push_back(c.r);
    res.minimizers.push_back(sp.s);
    if (sp.twin) {
      res.minimizers.push_back(*sp.twin);
      res.hard_case = true;
    }
  }
  res.r_star = res.radii.back();
  return res;
}

OracleResult grid_oracle(const CqrProblem& p, const GridOptions& opt) {
  const std::size_t n = p.n();
  if (n > 3) throw InputError("grid oracle supports n <= 3");
  if (!p.bounded_below()) throw UnboundedError("objective is unbounded below");
  if (p.W()) {
    const Transformed t = apply_w_transform(p);
    return map_back(grid_oracle(t.problem, opt), t.back);
  }
  const double bound = opt.bound > 0 ? opt.bound : 1.01 * radius_bound(p) + 1e-6;
  std::size_t res = opt.resolution;
  if (res == 0) res = n == 1 ? 20001 : (n == 2 ? 601 : 101);
  if (res % 2 == 0) ++res;
  const double step = 2.0 * bound / double(res - 1);

  std::size_t total = 1;
  for (std::size_t d = 0; d < n; ++d) total *= res;
  auto point_at = [&](std::size_t idx, Vector& x) {
    for (std::size_t d = n; d-- > 0;) {
      x[d] = -bound + step * double(idx % res);
      idx /= res;
    }
  };
  Vector s(n);
  std::vector<double> vals(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    point_at(idx, s);
    vals[idx] = evaluate(p, s);
  }

  // Discrete local minima over axis neighbours, best `polish` of them kept;
  // ties resolved by enumeration order.
  struct Entry {
    double value;
    std::size_t index;
  };
  std::vector<Entry> best;
  const std::size_t keep = std::max<std::size_t>(opt.polish, 1);
  for (std::size_t idx = 0; idx < total; ++idx) {
    const double v = vals[idx];
    bool local = true;
    std::size_t stride = 1;
    for (std::size_t d = 0; d < n && local; ++d, stride *= res) {
      const std::size_t coord = (idx / stride) % res;
      if (coord > 0 && vals[idx - stride] < v) local = false;
      if (coord + 1 < res && vals[idx + stride] < v) local = false;
    }
    if (!local) continue;
    if (best.size() < keep || v < best.back().value) {
      Entry e{v, idx};
      auto pos = std::upper_bound(best.begin(), best.end(), e, [](const Entry& x, const Entry& y) {
        return x.value < y.value;
      });
      best.insert(pos, e);
      if (best.size() > keep) best.pop_back();
    }
  }

  std::vector<std::pair<double, Vector>> polished;
  for (const Entry& e : best) {
    point_at(e.index, s);
    Vector x = polish_point(p, s);
    polished.emplace_back(evaluate(p, x), std::move(x));
  }
  double mu = std::numeric_limits<double>::infinity();
  for (const auto& [v, x] : polished) mu = std::min(mu, v);

  OracleResult out;
  out.mu_star = mu;
  for (const auto& [v, x] : polished) {
    if (v > mu + 1e-9 * (1.0 + std::abs(mu))) continue;
    bool dup = false;
    for (const Vector& y : out.minimizers)
      if (norm2(x - y) <= 1e-6 * (1.0 + norm2(y))) dup = true;
    if (dup) continue;
    out.minimizers.push_back(x);
    const double r = norm2(x);
    bool seen = false;
    for (double q : out.radii)
      if (std::abs(q - r) <= 1e-6 * (1.0 + r)) seen = true;
    if (!seen) out.radii.push_back(r);
  }
  std::sort(out.radii.begin(), out.radii.end());
  out.r_star = out.radii.back();
  return out;
}

GlobalCheck verify_global(const CqrProblem& p, std::span<const double> s) {
  GlobalCheck c;
  const double r = p.norm(s);
  const Matrix b = b_matrix(p, r);
  const Vector eig = linalg::sym_eigenvalues(b);
  const double bnorm = std::max(std::abs(eig.front()), std::abs(eig.back()));
  Vector res = b * s;
  axpy(1.0, p.g(), res);
  c.stationarity = norm2(res);
  c.stationary = c.stationarity <= 1e-7 * (1.0 + norm2(p.g()) + bnorm * norm2(s));
  c.min_eig = eig.front();
  const double eig_tol = 1e-8 * std::max(1.0, bnorm);
  c.psd = c.min_eig >= -eig_tol;
  c.curvature = p.beta() + 3.0 * p.sigma() * r;
  const double curv_tol = 1e-10 * std::max(1.0, std::abs(p.beta()));
  if (r == 0.0) {
    c.curvature_condition = Applicability::not_applicable;
    c.sufficient = c.stationary && c.psd && p.beta() >= 0;
  } else {
    c.curvature_condition =
        c.curvature >= -curv_tol ? Applicability::holds : Applicability::fails;
    c.sufficient = c.stationary && c.psd && c.curvature_condition == Applicability::holds;
  }
  c.unique = c.sufficient && (c.min_eig > eig_tol || c.curvature > curv_tol);
  return c;
}

DescentResult local_descent(const CqrProblem& p, Vector start, std::size_t max_iter,
                            double tol_grad) {
  if (start.size() != p.n()) throw InputError("start point has the wrong dimension");
  DescentResult out;
  out.s = std::move(start);
  out.value = evaluate(p, out.s);
  const double gscale = 1.0 + norm2(p.g());
  double t = 1.0;
  for (; out.iterations < max_iter; ++out.iterations) {
    const Vector grad = gradient(p, out.s);
    const double gn = norm2(grad);
    if (gn <= tol_grad * gscale) {
      out.converged = true;
      break;
    }
    t *= 2.0;
    bool accepted = false;
    for (int k = 0; k < 80; ++k) {
      Vector trial = out.s;
      axpy(-t, grad, trial);
      const double tv = evaluate(p, trial);
      if (tv <= out.value - 1e-4 * t * gn * gn) {
        out.s = std::move(trial);
        out.value = tv;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  return out;
}

}  // namespace cqr::oracle
