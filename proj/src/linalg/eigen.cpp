#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cqr/error.hpp"
#include "cqr/linalg.hpp"

namespace cqr::linalg {
namespace {

constexpr double kEps = 2.220446049250313e-16;

void require_symmetric(const Matrix& a) {
  if (!a.square()) throw InputError("sym_eigen: matrix is not square");
  const double scale = std::max(1.0, max_abs(a));
  if (asymmetry(a) > 1e-10 * scale)
    throw InputError("sym_eigen: matrix is not symmetric");
}

// Implicit-shift QL on a symmetric tridiagonal matrix. `e[i]` couples rows
// i and i+1 on entry; `v`, when non-null, accumulates the rotations.
void tql(Vector& d, Vector& e, Matrix* v) {
  const std::size_t n = d.size();
  if (n == 0) return;
  e.resize(n, 0.0);
  e[n - 1] = 0.0;
  const std::size_t cap = 30 * std::max<std::size_t>(n, 1);
  std::size_t total_iters = 0;
  double f = 0.0;
  double tst1 = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= kEps * tst1) break;
      ++m;
    }
    if (m > l) {
      do {
        if (++total_iters > cap)
          throw NumericalError("sym_eigen: QL iteration cap exceeded");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          if (v != nullptr) {
            for (std::size_t k = 0; k < n; ++k) {
              double& vk1 = (*v)(k, ii + 1);
              double& vk0 = (*v)(k, ii);
              h = vk1;
              vk1 = s * vk0 + c * h;
              vk0 = c * vk0 - s * h;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > kEps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

// Householder reduction to tridiagonal form with accumulated transform
// (EISPACK tred2 ordering). On return `v` holds Q, `d` the diagonal and
// `e[i]` the coupling of rows i and i+1.
void tred2(Matrix& v, Vector& d, Vector& e) {
  const std::size_t n = v.rows();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (std::size_t k = j + 1; k + 1 <= i; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k + 1 <= i; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (std::size_t k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  // tred2 stores the coupling of i-1 and i in e[i]; shift to e[i] ~ (i, i+1).
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
}

// Values-only Householder tridiagonalization (lower triangle updates).
void tridiagonalize(Matrix a, Vector& d, Vector& e) {
  const std::size_t n = a.rows();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  Vector v(n), p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;  // length of the column below the diagonal
    double alpha_sq = 0.0;
    double scale = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) scale = std::max(scale, std::abs(a(i, k)));
    if (scale == 0.0) {
      d[k] = a(k, k);
      e[k] = 0.0;
      continue;
    }
    for (std::size_t i = 0; i < m; ++i) {
      v[i] = a(k + 1 + i, k) / scale;
      alpha_sq += v[i] * v[i];
    }
    double alpha = std::sqrt(alpha_sq);
    if (v[0] > 0) alpha = -alpha;
    const double vtv = alpha_sq - 2.0 * alpha * v[0] + alpha * alpha;
    v[0] -= alpha;
    d[k] = a(k, k);
    e[k] = alpha * scale;
    if (vtv == 0.0) continue;
    const double tau = 2.0 / vtv;
    // p = tau * A22 v
    for (std::size_t i = 0; i < m; ++i) {
      const double* row = a.data() + (k + 1 + i) * n + (k + 1);
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += row[j] * v[j];
      p[i] = tau * s;
    }
    double vp = 0.0;
    for (std::size_t i = 0; i < m; ++i) vp += v[i] * p[i];
    const double kk = 0.5 * tau * vp;
    for (std::size_t i = 0; i < m; ++i) p[i] -= kk * v[i];
    for (std::size_t i = 0; i < m; ++i) {
      double* row = a.data() + (k + 1 + i) * n + (k + 1);
      const double vi = v[i];
      const double pi = p[i];
      for (std::size_t j = 0; j < m; ++j) row[j] -= vi * p[j] + pi * v[j];
    }
  }
  if (n >= 2) {
    d[n - 2] = a(n - 2, n - 2);
    e[n - 2] = a(n - 1, n - 2);
  }
  if (n >= 1) {
    d[n - 1] = a(n - 1, n - 1);
    e[n - 1] = 0.0;
  }
}

void fix_sign(Matrix& vectors, std::size_t j) {
  std::size_t best = 0;
  double best_abs = -1.0;
  for (std::size_t i = 0; i < vectors.rows(); ++i) {
    const double a = std::abs(vectors(i, j));
    if (a > best_abs * (1.0 + 1e-12)) {
      best_abs = a;
      best = i;
    }
  }
  if (vectors(best, j) < 0)
    for (std::size_t i = 0; i < vectors.rows(); ++i) vectors(i, j) = -vectors(i, j);
}

}  // namespace

EigenDecomp sym_eigen(const Matrix& a) {
  require_symmetric(a);
  const std::size_t n = a.rows();
  EigenDecomp out;
  if (n == 0) return out;
  Matrix v = symmetrized(a);
  Vector d, e;
  tred2(v, d, e);
  tql(d, e, &v);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = d[order[j]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    fix_sign(out.vectors, j);
  }
  return out;
}

Vector sym_eigenvalues(const Matrix& a) {
  require_symmetric(a);
  Vector d, e;
  tridiagonalize(symmetrized(a), d, e);
  tql(d, e, nullptr);
  std::sort(d.begin(), d.end());
  return d;
}

Vector tridiagonal_eigenvalues(Vector diag, Vector off) {
  off.resize(diag.size(), 0.0);
  tql(diag, off, nullptr);
  std::sort(diag.begin(), diag.end());
  return diag;
}

double min_psd_eig(const Matrix& a) {
  if (a.rows() == 0) return INFINITY;
  return sym_eigenvalues(a).front();
}

double lanczos_max_eigenvalue(
    const std::function<void(std::span<const double>, std::span<double>)>& apply,
    std::size_t n, std::size_t steps) {
  if (n == 0) return -INFINITY;
  steps = std::min(steps, n);
  std::vector<Vector> basis;
  basis.reserve(steps);
  Vector q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = 1.0 + 0.25 * std::sin(1.7 * double(i) + 0.3);
  const double qn = norm2(q);
  for (double& x : q) x /= qn;

  Vector alpha, beta;
  Vector w(n);
  for (std::size_t k = 0; k < steps; ++k) {
    basis.push_back(q);
    apply(q, w);
    const double a = dot(w, q);
    alpha.push_back(a);
    // Full reorthogonalization, twice for stability.
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& b : basis) axpy(-dot(w, b), b, w);
    const double b = norm2(w);
    const double scale = std::max(1.0, std::abs(a));
    if (k + 1 == steps || b <= 1e-13 * scale) break;
    beta.push_back(b);
    for (std::size_t i = 0; i < n; ++i) q[i] = w[i] / b;
  }
  beta.resize(alpha.size(), 0.0);
  const Vector ritz = tridiagonal_eigenvalues(alpha, beta);
  return ritz.back();
}

}  // namespace cqr::linalg
