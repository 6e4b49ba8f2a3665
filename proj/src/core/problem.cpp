#include "cqr/problem.hpp"

#include <cmath>

#include "cqr/error.hpp"
#include "cqr/linalg.hpp"

namespace cqr {
namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw InputError(std::string(what) + " has a non-finite entry");
}

Matrix checked_symmetric(const Matrix& m, std::size_t n, const char* what) {
  if (m.rows() != n || m.cols() != n)
    throw InputError(std::string(what) + " must be " + std::to_string(n) + "x" +
                     std::to_string(n));
  require_finite(m.values(), what);
  if (asymmetry(m) > 1e-12 * std::max(1.0, max_abs(m)))
    throw InputError(std::string(what) + " is not symmetric");
  return symmetrized(m);
}

// W s, or s itself when W is absent.
Vector weighted(const CqrProblem& p, std::span<const double> s) {
  if (p.W()) return *p.W() * s;
  return Vector(s.begin(), s.end());
}

void check_dim(const CqrProblem& p, std::span<const double> s) {
  if (s.size() != p.n())
    throw InputError("point has dimension " + std::to_string(s.size()) + ", expected " +
                     std::to_string(p.n()));
}

}  // namespace

CqrProblem::CqrProblem(double f0, Vector g, Matrix h, double beta, double sigma,
                       std::optional<Matrix> w)
    : f0_(f0), g_(std::move(g)), beta_(beta), sigma_(sigma) {
  if (g_.empty()) throw InputError("dimension n must be positive");
  if (!std::isfinite(f0) || !std::isfinite(beta) || !std::isfinite(sigma))
    throw InputError("f0, beta and sigma must be finite");
  if (sigma < 0) throw InputError("sigma must be nonnegative");
  require_finite(g_, "g");
  h_ = checked_symmetric(h, n(), "H");
  if (w) {
    Matrix ws = checked_symmetric(*w, n(), "W");
    const double lmin = linalg::min_psd_eig(ws);
    if (!(lmin > 1e-14 * std::max(1.0, max_abs(ws))))
      throw InputError("W is not positive definite");
    w_ = std::move(ws);
  }
  if (sigma_ > 0 || beta_ > 0) {
    bounded_below_ = true;
  } else if (beta_ == 0) {
    bounded_below_ = linalg::cholesky(h_).ok() && linalg::min_psd_eig(h_) > 0;
  }
}

double CqrProblem::norm(std::span<const double> s) const {
  if (!w_) return norm2(s);
  const Vector ws = *w_ * s;
  return std::sqrt(std::max(0.0, dot(s, ws)));
}

double evaluate(const CqrProblem& p, std::span<const double> s) {
  check_dim(p, s);
  const double r = p.norm(s);
  const Vector hs = p.H() * s;
  return p.f0() + dot(p.g(), s) + 0.5 * dot(s, hs) + p.beta() / 6.0 * r * r * r +
         p.sigma() / 4.0 * r * r * r * r;
}

Vector gradient(const CqrProblem& p, std::span<const double> s) {
  check_dim(p, s);
  const double r = p.norm(s);
  Vector out = p.H() * s;
  axpy(1.0, p.g(), out);
  axpy(0.5 * p.beta() * r + p.sigma() * r * r, weighted(p, s), out);
  return out;
}

Matrix hessian(const CqrProblem& p, std::span<const double> s) {
  check_dim(p, s);
  const double r = p.norm(s);
  if (r == 0.0 && p.beta() != 0.0)
    throw NonsmoothPointError("Hessian is undefined at s = 0 when beta != 0");
  Matrix out = p.H();
  if (r == 0.0) return out;
  const Matrix w = p.W() ? *p.W() : Matrix::identity(p.n());
  const Vector ws = weighted(p, s);
  const Matrix wss = outer(ws, ws);
  out.add_scaled(w, 0.5 * p.beta() * r + p.sigma() * r * r);
  out.add_scaled(wss, 0.5 * p.beta() / r + 2.0 * p.sigma());
  return symmetrized(out);
}

EvalBundle eval_bundle(const CqrProblem& p, std::span<const double> s, bool with_hessian) {
  EvalBundle b;
  b.value = evaluate(p, s);
  b.gradient = gradient(p, s);
  if (with_hessian) b.hessian = hessian(p, s);
  return b;
}

Matrix b_matrix(const CqrProblem& p, double r) {
  if (!(r >= 0)) throw InputError("b_matrix: radius must be nonnegative");
  Matrix out = p.H();
  const double shift = 0.5 * p.beta() * r + p.sigma() * r * r;
  if (p.W())
    out.add_scaled(*p.W(), shift);
  else
    for (std::size_t i = 0; i < p.n(); ++i) out(i, i) += shift;
  return out;
}

Vector BackMap::operator()(std::span<const double> t) const {
  Vector s = linear ? *linear * t : Vector(t.begin(), t.end());
  if (scale != 1.0)
    for (double& x : s) x *= scale;
  return s;
}

Transformed apply_w_transform(const CqrProblem& p) {
  if (!p.W()) return {p, {}, false};
  const linalg::EigenDecomp ed = linalg::sym_eigen(*p.W());
  const std::size_t n = p.n();
  // W^{-1/2} = Q diag(1/sqrt(lambda)) Q'
  Matrix scaled = ed.vectors;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(ed.values[j] > 0)) throw InputError("W is not positive definite");
    const double f = 1.0 / std::sqrt(ed.values[j]);
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= f;
  }
  const Matrix w_inv_half = symmetrized(scaled * ed.vectors.transposed());
  Vector g = w_inv_half * p.g();
  Matrix h = symmetrized(w_inv_half * p.H() * w_inv_half);
  CqrProblem out(p.f0(), std::move(g), std::move(h), p.beta(), p.sigma());
  out.label = p.label;
  return {std::move(out), BackMap{w_inv_half, 1.0}, true};
}

Transformed normalize_sigma(const CqrProblem& p) {
  if (p.sigma() == 0.0 || p.sigma() == 4.0) return {p, {}, false};
  const double c = std::pow(4.0 / p.sigma(), 0.25);
  Vector g = c * p.g();
  Matrix h = p.H() * (c * c);
  CqrProblem out(p.f0(), std::move(g), std::move(h), p.beta() * c * c * c, 4.0, p.W());
  out.label = p.label;
  return {std::move(out), BackMap{std::nullopt, c}, true};
}

}  // namespace cqr
