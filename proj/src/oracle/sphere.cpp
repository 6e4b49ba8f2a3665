#include <algorithm>
#include <cmath>

#include "cqr/error.hpp"
#include "cqr/oracle.hpp"

namespace cqr::oracle {

SphereSolver::SphereSolver(const CqrProblem& p) : problem_(p) {
  if (p.W()) throw InputError("sphere solver expects W = I; reduce the problem first");
  eig_ = linalg::sym_eigen(p.H());
  const std::size_t n = p.n();
  ghat_ = transpose_times(eig_.vectors, p.g());
  const double lam1 = eig_.values.front();
  const double cluster = 1e-12 * std::max(1.0, max_abs(std::span<const double>(eig_.values)));
  gap_.resize(n);
  bottom_ = 0;
  double bottom_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = eig_.values[i] - lam1;
    if (d <= cluster) {
      gap_[i] = 0.0;
      ++bottom_;
      bottom_sq += ghat_[i] * ghat_[i];
    } else {
      gap_[i] = d;
    }
  }
  ghat_bottom_norm_ = std::sqrt(bottom_sq);
}

SpherePoint SphereSolver::solve(double r) const {
  if (!(r >= 0)) throw InputError("phi_on_sphere: radius must be nonnegative");
  const std::size_t n = problem_.n();
  const double lam1 = eig_.values.front();
  SpherePoint out;
  Vector y(n, 0.0);

  auto finish = [&](double t) {
    out.multiplier = t - lam1;
    double val = problem_.f0();
    for (std::size_t i = 0; i < n; ++i)
      val += ghat_[i] * y[i] + 0.5 * eig_.values[i] * y[i] * y[i];
    out.value = val;
    out.s = eig_.vectors * y;
  };

  if (r == 0.0) {
    finish(0.0);
    return out;
  }

  const double gnorm = norm2(ghat_);
  if (ghat_bottom_norm_ <= 1e-14 * (1.0 + gnorm)) {
    // Candidate hard case: the multiplier sits at -lambda_1.
    for (std::size_t i = bottom_; i < n; ++i) y[i] = -ghat_[i] / gap_[i];
    const double np = norm2(y);
    if (np <= r) {
      const double alpha = std::sqrt(std::max(0.0, r * r - np * np));
      out.hard_case = alpha > 0.0;
      y[0] = alpha;
      finish(0.0);
      if (out.hard_case) {
        Vector yt = y;
        yt[0] = -alpha;
        out.twin = eig_.vectors * yt;
      }
      return out;
    }
  }

  // Secular equation in t = nu + lambda_1 > 0:  sum ghat_i^2 / (gap_i + t)^2 = r^2.
  auto fill = [&](double t) {
    for (std::size_t i = 0; i < n; ++i) {
      const double d = gap_[i] + t;
      y[i] = d > 0 ? -ghat_[i] / d : 0.0;
    }
  };
  double lo = 0.0;
  double hi = gnorm / r;
  double t = hi;
  for (int it = 0; it < 300; ++it) {
    fill(t);
    const double ny = norm2(y);
    const double f = 1.0 / ny - 1.0 / r;
    if (std::abs(ny - r) <= 4e-16 * r) break;
    if (f < 0)
      lo = t;
    else
      hi = t;
    if (hi - lo <= 4e-16 * hi) break;
    double deriv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = gap_[i] + t;
      deriv += ghat_[i] * ghat_[i] / (d * d * d);
    }
    deriv /= ny * ny * ny;
    double next = deriv > 0 ? t - f / deriv : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  fill(t);
  finish(t);
  return out;
}

double SphereSolver::psi(double r) const {
  const CqrProblem& p = problem_;
  return solve(r).value + p.beta() / 6.0 * r * r * r + p.sigma() / 4.0 * r * r * r * r;
}

SpherePoint phi_on_sphere(const CqrProblem& p, double r) {
  if (!(r >= 0)) throw InputError("phi_on_sphere: radius must be nonnegative");
  return SphereSolver(p).solve(r);
}

}  // namespace cqr::oracle
