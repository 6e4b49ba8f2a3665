#include <algorithm>
#include <cmath>

#include "cqr/extract.hpp"
#include "cqr/linalg.hpp"

namespace cqr::extract {
namespace {

struct Factor {
  std::vector<Vector> rows;  // sqrt(lambda) v', largest first
  std::size_t rank = 0;
};

Factor psd_factor(const Matrix& x, double tol_rank) {
  Factor f;
  if (x.empty()) return f;
  const linalg::EigenDecomp ed = linalg::sym_eigen(symmetrized(x));
  const double cut = tol_rank * std::max(1.0, ed.values.back());
  for (std::size_t k = ed.values.size(); k-- > 0;) {
    if (ed.values[k] <= cut) break;
    Vector r = ed.vectors.col(k);
    const double s = std::sqrt(ed.values[k]);
    for (double& v : r) v *= s;
    f.rows.push_back(std::move(r));
  }
  f.rank = f.rows.size();
  return f;
}

// Sign convention: the highest-degree coefficient that is not negligible
// is made nonnegative.
void normalize_sign(Vector& c) {
  const double big = max_abs(c);
  for (std::size_t k = c.size(); k-- > 0;) {
    if (std::abs(c[k]) <= 1e-12 * big) continue;
    if (c[k] < 0)
      for (double& v : c) v = -v;
    return;
  }
}

// Coefficients of sum p_i^2 + z sum q_j^2, ascending, degree 4.
Vector univariate_coeffs(const Certificate& c) {
  Vector f(5, 0.0);
  for (const Vector& a : c.p)
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) f[i + j] += a[i] * a[j];
  for (const Vector& b : c.q)
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) f[i + j + 1] += b[i] * b[j];
  return f;
}

// Real roots of a polynomial of degree <= 2; a slightly negative
// discriminant is read as a double root.
void real_roots(const Vector& c, Vector& out) {
  const double big = max_abs(c);
  if (big == 0.0) return;
  const double a2 = c.size() > 2 ? c[2] : 0.0;
  const double a1 = c[1], a0 = c[0];
  if (std::abs(a2) <= 1e-12 * big) {
    if (std::abs(a1) > 1e-12 * big) out.push_back(-a0 / a1);
    return;
  }
  const double disc = a1 * a1 - 4 * a2 * a0;
  if (disc < -1e-8 * (a1 * a1 + std::abs(4 * a2 * a0))) return;
  if (disc <= 0) {
    out.push_back(-a1 / (2 * a2));
    return;
  }
  // Stable form avoids cancellation in the smaller root.
  const double t = -0.5 * (a1 + std::copysign(std::sqrt(disc), a1));
  out.push_back(t / a2);
  if (t != 0.0) out.push_back(a0 / t);
}

double refine_minimum(const Vector& f, double z) {
  double fz = poly_eval(f, z);
  for (int it = 0; it < 50; ++it) {
    const double d1 = f[1] + z * (2 * f[2] + z * (3 * f[3] + z * 4 * f[4]));
    const double d2 = 2 * f[2] + z * (6 * f[3] + z * 12 * f[4]);
    if (!(d2 > 0)) break;
    const double next = std::max(0.0, z - d1 / d2);
    const double fn = poly_eval(f, next);
    if (!(fn < fz)) break;
    z = next;
    fz = fn;
  }
  return z;
}

}  // namespace

double poly_eval(std::span<const double> c, double z) {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * z + c[k];
  return v;
}

double Certificate::univariate(double z) const {
  double v = 0.0;
  for (const Vector& a : p) v += poly_eval(a, z) * poly_eval(a, z);
  double w = 0.0;
  for (const Vector& b : q) w += poly_eval(b, z) * poly_eval(b, z);
  return v + z * w;
}

double Certificate::value(std::span<const double> s) const {
  Vector ext(s.size() + 1);
  ext[0] = 1.0;
  std::copy(s.begin(), s.end(), ext.begin() + 1);
  double v = 0.0;
  if (!R.empty()) {
    const Vector rs = R * ext;
    v = dot(rs, rs);
  }
  return v + univariate(norm2(s));
}

Certificate factor_dual(const sdp::SdpDual& dual, double tol_rank) {
  Certificate c;
  c.gamma = dual.gamma;
  const Factor f0 = psd_factor(dual.X0, tol_rank);
  c.rank_x0 = f0.rank;
  c.R = Matrix(f0.rank, dual.X0.rows());
  for (std::size_t i = 0; i < f0.rank; ++i)
    std::copy(f0.rows[i].begin(), f0.rows[i].end(), c.R.row(i).begin());

  Factor f1 = psd_factor(dual.X1, tol_rank);
  c.rank_x1 = f1.rank;
  for (Vector& a : f1.rows) {
    normalize_sign(a);
    c.p.push_back(std::move(a));
  }
  Factor f2 = psd_factor(dual.X2, tol_rank);
  c.rank_x2 = f2.rank;
  for (Vector& b : f2.rows) {
    normalize_sign(b);
    c.q.push_back(std::move(b));
  }
  if (c.rank_x1 > 2)
    c.anomalies.push_back("rank anomaly: rank X1 = " + std::to_string(c.rank_x1));
  if (c.rank_x2 > 2)
    c.anomalies.push_back("rank anomaly: rank X2 = " + std::to_string(c.rank_x2));
  return c;
}

std::vector<double> common_roots(const Certificate& cert, double tol_root) {
  Vector cand;
  for (const Vector& a : cert.p) real_roots(a, cand);
  for (const Vector& b : cert.q) real_roots(b, cand);
  const Vector f = univariate_coeffs(cert);
  // Roots of one factor are only approximate for the others, and double
  // roots are ill-conditioned; settle each candidate at the nearest
  // minimum of the nonnegative sum of squares and accept it there.
  const double accept = tol_root * (1.0 + std::abs(cert.gamma));
  std::vector<std::pair<double, double>> hits;  // (F(z), z)
  for (double z : cand) {
    if (z < -tol_root * (1.0 + std::abs(z))) continue;
    z = refine_minimum(f, std::max(0.0, z));
    const double fz = poly_eval(f, z);
    if (fz <= accept) hits.emplace_back(fz, z);
  }
  std::sort(hits.begin(), hits.end());
  std::vector<double> out;
  const double merge = std::sqrt(tol_root);
  for (const auto& [fz, z] : hits) {
    bool dup = false;
    for (double y : out)
      if (std::abs(y - z) <= merge * (1.0 + z)) dup = true;
    if (!dup) out.push_back(z);
  }
  return out;
}

bool zero_membership(const Certificate& cert, double tol) {
  double v = 0.0;
  for (std::size_t i = 0; i < cert.R.rows(); ++i) v += cert.R(i, 0) * cert.R(i, 0);
  for (const Vector& a : cert.p) v += a[0] * a[0];
  return v <= tol * (1.0 + std::abs(cert.gamma));
}

}  // namespace cqr::extract
