#pragma once

#include "cqr/linalg.hpp"
#include "cqr/matrix.hpp"

// Representations of the Y-block dual slack. The solver only touches the
// slack through this interface, so the dense and arrowhead variants share
// one driver.
namespace cqr::sdp::detail {

class DenseSlack {
 public:
  DenseSlack() = default;
  explicit DenseSlack(Matrix m) : m_(std::move(m)) {}

  static DenseSlack scaled_identity(std::size_t order, double c) {
    return DenseSlack(Matrix::identity(order) * c);
  }

  bool factor() {
    auto c = linalg::cholesky(m_);
    if (!c.ok()) return false;
    chol_ = std::move(c.factor);
    inv_ = linalg::cholesky_inverse(chol_);
    return true;
  }

  double inv00() const { return inv_(0, 0); }
  Vector inv_col0() const { return inv_.col(0); }
  double inv_tail_trace() const { return inv_.trace() - inv_(0, 0); }
  // <X_ss, (S^{-1})_ss> over the trailing block.
  double tail_contract(const Matrix& x) const {
    double t = 0.0;
    for (std::size_t i = 1; i < x.rows(); ++i)
      for (std::size_t j = 1; j < x.cols(); ++j) t += x(i, j) * inv_(i, j);
    return t;
  }
  const Matrix& inverse() const { return inv_; }

  // x * r * S^{-1}
  Matrix product(const Matrix& x, const DenseSlack& r) const { return (x * r.m_) * inv_; }

  double inner(const Matrix& x) const { return cqr::inner(m_, x); }
  double frob() const { return frobenius_norm(m_); }
  void axpy(double a, const DenseSlack& o) { m_.add_scaled(o.m_, a); }
  void add_corner(double c) { m_(0, 0) += c; }
  void add_tail(double c) {
    for (std::size_t i = 1; i < m_.rows(); ++i) m_(i, i) += c;
  }
  double max_step(const DenseSlack& d, double cap) const {
    return linalg::max_psd_step(chol_, d.m_, cap);
  }
  Matrix dense() const { return m_; }

 private:
  Matrix m_;
  Matrix chol_;
  Matrix inv_;
};

// [[a, b'], [b, diag(d)]]. The slack keeps this shape when the cost is
// expressed in the eigenbasis of H, since every constraint touches Y only
// through E00 and diag(0, 1, ..., 1).
class ArrowSlack {
 public:
  ArrowSlack() = default;
  ArrowSlack(double a, Vector b, Vector d) : a_(a), b_(std::move(b)), d_(std::move(d)) {}

  static ArrowSlack scaled_identity(std::size_t order, double c) {
    return ArrowSlack(c, Vector(order - 1, 0.0), Vector(order - 1, c));
  }

  bool factor() {
    const std::size_t n = d_.size();
    dinv_.assign(n, 0.0);
    w_.assign(n + 1, 0.0);
    w_[0] = 1.0;
    double schur = a_;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(d_[i] > 0.0)) return false;
      dinv_[i] = 1.0 / d_[i];
      w_[i + 1] = -b_[i] * dinv_[i];
      schur -= b_[i] * b_[i] * dinv_[i];
    }
    if (!(schur > 0.0)) return false;
    rho_ = schur;
    return true;
  }

  double inv00() const { return 1.0 / rho_; }
  Vector inv_col0() const {
    Vector c = w_;
    for (double& v : c) v /= rho_;
    return c;
  }
  double inv_tail_trace() const {
    double t = 0.0;
    for (double v : dinv_) t += v;
    return t + (dot(w_, w_) - 1.0) / rho_;
  }
  double tail_contract(const Matrix& x) const {
    const std::size_t n = dinv_.size();
    double diag = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto xi = x.row(i + 1);
      diag += xi[i + 1] * dinv_[i];
      double r = 0.0;
      for (std::size_t j = 0; j < n; ++j) r += xi[j + 1] * w_[j + 1];
      quad += w_[i + 1] * r;
    }
    return diag + quad / rho_;
  }
  Matrix inverse() const {
    Matrix m = outer(w_, w_) * (1.0 / rho_);
    for (std::size_t i = 0; i < dinv_.size(); ++i) m(i + 1, i + 1) += dinv_[i];
    return m;
  }

  Matrix product(const Matrix& x, const ArrowSlack& r) const {
    const std::size_t m = x.rows();
    Matrix out(m, m);
    Vector xr(m);
    for (std::size_t i = 0; i < m; ++i) {
      const auto xi = x.row(i);
      double c0 = xi[0] * r.a_;
      for (std::size_t k = 1; k < m; ++k) c0 += xi[k] * r.b_[k - 1];
      xr[0] = c0;
      for (std::size_t j = 1; j < m; ++j) xr[j] = xi[0] * r.b_[j - 1] + xi[j] * r.d_[j - 1];
      const double q = dot(xr, w_) / rho_;
      auto oi = out.row(i);
      oi[0] = q * w_[0];
      for (std::size_t j = 1; j < m; ++j) oi[j] = xr[j] * dinv_[j - 1] + q * w_[j];
    }
    return out;
  }

  double inner(const Matrix& x) const {
    double t = a_ * x(0, 0);
    for (std::size_t i = 0; i < d_.size(); ++i)
      t += b_[i] * (x(0, i + 1) + x(i + 1, 0)) + d_[i] * x(i + 1, i + 1);
    return t;
  }
  double frob() const { return std::sqrt(a_ * a_ + 2.0 * dot(b_, b_) + dot(d_, d_)); }
  void axpy(double s, const ArrowSlack& o) {
    a_ += s * o.a_;
    cqr::axpy(s, o.b_, b_);
    cqr::axpy(s, o.d_, d_);
  }
  void add_corner(double c) { a_ += c; }
  void add_tail(double c) {
    for (double& v : d_) v += c;
  }

  // Bisection on the O(n) definiteness test; the feasible steps form an
  // interval starting at 0.
  double max_step(const ArrowSlack& dir, double cap) const {
    auto pd = [&](double t) {
      double schur = a_ + t * dir.a_;
      for (std::size_t i = 0; i < d_.size(); ++i) {
        const double di = d_[i] + t * dir.d_[i];
        if (!(di > 0.0)) return false;
        const double bi = b_[i] + t * dir.b_[i];
        schur -= bi * bi / di;
      }
      return schur > 0.0;
    };
    if (pd(cap)) return cap;
    double lo = 0.0, hi = cap;
    for (std::size_t i = 0; i < d_.size(); ++i)
      if (dir.d_[i] < 0.0) hi = std::min(hi, -d_[i] / dir.d_[i]);
    for (int it = 0; it < 80 && hi - lo > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (pd(mid) ? lo : hi) = mid;
    }
    return lo;
  }

  Matrix dense() const {
    const std::size_t n = d_.size();
    Matrix m(n + 1, n + 1);
    m(0, 0) = a_;
    for (std::size_t i = 0; i < n; ++i) {
      m(0, i + 1) = b_[i];
      m(i + 1, 0) = b_[i];
      m(i + 1, i + 1) = d_[i];
    }
    return m;
  }

 private:
  double a_ = 0.0;
  Vector b_, d_;
  Vector dinv_, w_;
  double rho_ = 1.0;
};

}  // namespace cqr::sdp::detail
