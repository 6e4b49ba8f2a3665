#include <algorithm>
#include <cmath>
#include <numeric>

#include "cqr/error.hpp"
#include "cqr/linalg.hpp"

namespace cqr::linalg {
namespace {

constexpr double kEps = 2.220446049250313e-16;

// One-sided Jacobi on the rows of `ut` (each row is a column of A).
Svd jacobi_tall(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Matrix ut = a.transposed();  // n x m
  Matrix vt = Matrix::identity(n);
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        auto ui = ut.row(i);
        auto uj = ut.row(j);
        const double alpha = dot(ui, ui);
        const double beta = dot(uj, uj);
        const double gamma = dot(ui, uj);
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        for (std::size_t k = 0; k < m; ++k) {
          const double x = ui[k], y = uj[k];
          ui[k] = c * x - s * y;
          uj[k] = s * x + c * y;
        }
        auto vi = vt.row(i);
        auto vj = vt.row(j);
        for (std::size_t k = 0; k < n; ++k) {
          const double x = vi[k], y = vj[k];
          vi[k] = c * x - s * y;
          vj[k] = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
    if (sweep == 79) throw NumericalError("svd: Jacobi sweeps did not converge");
  }

  Vector sigma(n);
  for (std::size_t i = 0; i < n; ++i) sigma[i] = norm2(ut.row(i));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  Svd out;
  out.values.resize(n);
  out.u = Matrix(m, n);
  out.v = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.values[c] = sigma[src];
    for (std::size_t k = 0; k < n; ++k) out.v(k, c) = vt(src, k);
    if (sigma[src] > 0.0)
      for (std::size_t k = 0; k < m; ++k) out.u(k, c) = ut(src, k) / sigma[src];
  }
  return out;
}

}  // namespace

CholeskyResult cholesky(const Matrix& a) {
  CholeskyResult res;
  if (!a.square()) throw InputError("cholesky: matrix is not square");
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double djj = a(j, j);
    const double* lj = l.data() + j * n;
    for (std::size_t k = 0; k < j; ++k) djj -= lj[k] * lj[k];
    if (!(djj > 0.0) || !std::isfinite(djj)) {
      res.failed_pivot = j + 1;
      return res;
    }
    const double ljj = std::sqrt(djj);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      const double* li = l.data() + i * n;
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
      l(i, j) = s / ljj;
    }
  }
  res.factor = std::move(l);
  return res;
}

void solve_lower(const Matrix& l, std::span<double> b) {
  const std::size_t n = l.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    const double* li = l.data() + i * n;
    for (std::size_t k = 0; k < i; ++k) s -= li[k] * b[k];
    b[i] = s / li[i];
  }
}

void solve_lower_transposed(const Matrix& l, std::span<double> b) {
  const std::size_t n = l.rows();
  for (std::size_t ii = n; ii-- > 0;) {
    b[ii] /= l(ii, ii);
    const double bi = b[ii];
    const double* li = l.data() + ii * n;
    for (std::size_t k = 0; k < ii; ++k) b[k] -= li[k] * bi;
  }
}

Vector cholesky_solve(const Matrix& l, std::span<const double> b) {
  Vector x(b.begin(), b.end());
  solve_lower(l, x);
  solve_lower_transposed(l, x);
  return x;
}

namespace {

// W = L^{-1} M, row by row.
Matrix lower_solve_matrix(const Matrix& l, const Matrix& m) {
  const std::size_t n = l.rows();
  const std::size_t c = m.cols();
  Matrix w = m;
  for (std::size_t i = 0; i < n; ++i) {
    double* wi = w.data() + i * c;
    for (std::size_t k = 0; k < i; ++k) {
      const double lik = l(i, k);
      if (lik == 0.0) continue;
      const double* wk = w.data() + k * c;
      for (std::size_t j = 0; j < c; ++j) wi[j] -= lik * wk[j];
    }
    const double inv = 1.0 / l(i, i);
    for (std::size_t j = 0; j < c; ++j) wi[j] *= inv;
  }
  return w;
}

}  // namespace

Matrix cholesky_inverse(const Matrix& l) {
  const Matrix linv = lower_solve_matrix(l, Matrix::identity(l.rows()));
  return symmetrized(transpose_times(linv, linv));
}

Matrix congruence_inverse(const Matrix& l, const Matrix& m) {
  const Matrix w = lower_solve_matrix(l, m);
  return symmetrized(lower_solve_matrix(l, w.transposed()));
}

double max_psd_step(const Matrix& chol_a, const Matrix& d, double cap) {
  if (d.rows() == 0) return cap;
  const double lam_min = sym_eigenvalues(congruence_inverse(chol_a, d)).front();
  if (lam_min >= 0.0) return cap;
  return std::min(cap, -1.0 / lam_min);
}

Svd svd(const Matrix& a) {
  if (a.rows() >= a.cols()) return jacobi_tall(a);
  Svd t = jacobi_tall(a.transposed());
  std::swap(t.u, t.v);
  return t;
}

NullspaceBasis nullspace(const Matrix& a, double tol_null) {
  const std::size_t n = a.cols();
  NullspaceBasis out;
  Svd s = a.empty() ? Svd{} : svd(a);
  const double smax = s.values.empty() ? 0.0 : s.values.front();
  std::size_t rank = 0;
  if (smax > 0.0)
    while (rank < s.values.size() && s.values[rank] > tol_null * smax) ++rank;
  out.rank = rank;

  // Complement of the row space via the projector I - V_r V_r^T.
  Matrix proj = Matrix::identity(n);
  for (std::size_t c = 0; c < rank; ++c) {
    const Vector vc = s.v.col(c);
    proj.add_scaled(outer(vc, vc), -1.0);
  }
  const EigenDecomp ed = sym_eigen(symmetrized(proj));
  out.basis = Matrix(n, n - rank);
  for (std::size_t c = 0; c < n - rank; ++c)
    for (std::size_t i = 0; i < n; ++i) out.basis(i, c) = ed.vectors(i, rank + c);
  return out;
}

MinNormSolution min_norm_lstsq(const Matrix& a, std::span<const double> b,
                               double tol_null, double tol_consistency) {
  if (a.rows() != b.size()) throw InputError("min_norm_solve: dimension mismatch");
  MinNormSolution out;
  out.x.assign(a.cols(), 0.0);
  if (!a.empty()) {
    const Svd s = svd(a);
    const double smax = s.values.empty() ? 0.0 : s.values.front();
    for (std::size_t c = 0; c < s.values.size(); ++c) {
      if (!(smax > 0.0) || s.values[c] <= tol_null * smax) break;
      double coef = 0.0;
      for (std::size_t k = 0; k < a.rows(); ++k) coef += s.u(k, c) * b[k];
      coef /= s.values[c];
      for (std::size_t k = 0; k < a.cols(); ++k) out.x[k] += coef * s.v(k, c);
    }
  }
  Vector r = a.empty() ? Vector(b.begin(), b.end()) : a * out.x;
  if (!a.empty())
    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= b[k];
  out.residual = norm2(r);
  const double anorm = a.empty() ? 0.0 : svd(a).values.front();
  out.consistent =
      out.residual <= tol_consistency * (anorm * norm2(out.x) + norm2(b)) || out.residual == 0.0;
  return out;
}

std::optional<Vector> min_norm_solve(const Matrix& a, std::span<const double> b,
                                     double tol_null) {
  MinNormSolution s = min_norm_lstsq(a, b, tol_null, tol_null);
  if (!s.consistent) return std::nullopt;
  return std::move(s.x);
}

}  // namespace cqr::linalg
