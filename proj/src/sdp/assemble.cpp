#include <cmath>

#include "cqr/error.hpp"
#include "cqr/linalg.hpp"
#include "cqr/sdp.hpp"

namespace cqr::sdp {
namespace {

Matrix sym_unit(std::size_t order, std::size_t i, std::size_t j, double c = 1.0) {
  Matrix m(order, order);
  if (i == j) {
    m(i, i) = c;
  } else {
    m(i, j) = 0.5 * c;
    m(j, i) = 0.5 * c;
  }
  return m;
}

double constraint_inner(const SdpData& d, std::size_t i, std::size_t j) {
  return d.e_y[i] * d.e_y[j] + double(d.n) * d.d_y[i] * d.d_y[j] + inner(d.a_z1[i], d.a_z1[j]) +
         inner(d.a_z2[i], d.a_z2[j]);
}

// Greedy pivoted Cholesky of the Gram matrix in index order.
void choose_active(SdpData& d) {
  std::vector<Vector> rows;  // rows of the partial factor for accepted indices
  for (std::size_t k = 0; k < kConstraints; ++k) {
    Vector lk;
    for (std::size_t a = 0; a < rows.size(); ++a) {
      double v = constraint_inner(d, d.active[a], k);
      for (std::size_t b = 0; b < a; ++b) v -= rows[a][b] * lk[b];
      lk.push_back(v / rows[a][a]);
    }
    double pivot = constraint_inner(d, k, k);
    for (double v : lk) pivot -= v * v;
    if (pivot <= 1e-12 * constraint_inner(d, k, k)) {
      d.dropped.push_back(k + 1);
      continue;
    }
    lk.push_back(std::sqrt(pivot));
    rows.push_back(std::move(lk));
    d.active.push_back(k);
  }
}

}  // namespace

SdpData assemble(const CqrProblem& p) {
  if (p.W()) throw InputError("assemble: reduce the weight matrix first");
  SdpData d;
  const std::size_t n = p.n();
  d.n = n;
  d.f0 = p.f0();
  d.beta = p.beta();
  d.sigma = p.sigma();
  d.g = p.g();
  d.h = p.H();

  d.cost_y = Matrix(n + 1, n + 1);
  d.cost_y(0, 0) = p.f0();
  for (std::size_t i = 0; i < n; ++i) {
    d.cost_y(0, i + 1) = 0.5 * p.g()[i];
    d.cost_y(i + 1, 0) = 0.5 * p.g()[i];
    for (std::size_t j = 0; j < n; ++j) d.cost_y(i + 1, j + 1) = 0.5 * p.H()(i, j);
  }
  d.cost_z1 = Matrix(3, 3);
  d.cost_z1(2, 2) = p.sigma() / 4.0;
  d.cost_z2 = Matrix(2, 2);
  d.cost_z2(1, 1) = p.beta() / 6.0;

  d.rhs = Vector(kConstraints, 0.0);
  d.rhs[0] = 1.0;

  for (std::size_t i = 0; i < kConstraints; ++i) {
    d.a_z1[i] = Matrix(3, 3);
    d.a_z2[i] = Matrix(2, 2);
  }
  // Y00 = 1
  d.e_y[0] = 1.0;
  // Z1_00 - Y00 = 0
  d.a_z1[1] = sym_unit(3, 0, 0);
  d.e_y[1] = -1.0;
  // Z1_01 - Z2_00 = 0
  d.a_z1[2] = sym_unit(3, 0, 1);
  d.a_z2[2] = sym_unit(2, 0, 0, -1.0);
  // Z1_11 - Z2_01 = 0
  d.a_z1[3] = sym_unit(3, 1, 1);
  d.a_z2[3] = sym_unit(2, 0, 1, -1.0);
  // Z1_02 - Z2_01 = 0
  d.a_z1[4] = sym_unit(3, 0, 2);
  d.a_z2[4] = sym_unit(2, 0, 1, -1.0);
  // Z1_12 - Z2_11 = 0
  d.a_z1[5] = sym_unit(3, 1, 2);
  d.a_z2[5] = sym_unit(2, 1, 1, -1.0);
  // Z1_02 - Z1_11 = 0
  d.a_z1[6] = sym_unit(3, 0, 2) + sym_unit(3, 1, 1, -1.0);
  // Z1_11 - (Y11 + ... + Ynn) = 0
  d.a_z1[7] = sym_unit(3, 1, 1);
  d.d_y[7] = -1.0;

  choose_active(d);
  return d;
}

Vector apply_constraints(const SdpData& d, const Matrix& y, const Matrix& z1, const Matrix& z2) {
  Vector out(kConstraints);
  const double y00 = y(0, 0);
  const double tr_ss = y.trace() - y00;
  for (std::size_t i = 0; i < kConstraints; ++i)
    out[i] = d.e_y[i] * y00 + d.d_y[i] * tr_ss + inner(d.a_z1[i], z1) + inner(d.a_z2[i], z2);
  return out;
}

double primal_objective(const SdpData& d, const Matrix& y, const Matrix& z1, const Matrix& z2) {
  return inner(d.cost_y, y) + inner(d.cost_z1, z1) + inner(d.cost_z2, z2);
}

double SosMismatch::norm() const {
  double s = constant * constant + z1 * z1 + z3 * z3 + z4 * z4;
  for (double v : linear) s += v * v;
  for (double v : quadratic.values()) s += v * v;
  return std::sqrt(s);
}

SosMismatch sos_mismatch(const SdpData& d, const SdpDual& dual) {
  const std::size_t n = d.n;
  const Matrix& x0 = dual.X0;
  const Matrix& x1 = dual.X1;
  const Matrix& x2 = dual.X2;
  SosMismatch m;
  m.constant = x0(0, 0) + x1(0, 0) - (d.f0 - dual.gamma);
  m.linear.resize(n);
  for (std::size_t i = 0; i < n; ++i) m.linear[i] = x0(0, i + 1) + x0(i + 1, 0) - d.g[i];
  m.z1 = x1(0, 1) + x1(1, 0) + x2(0, 0);
  const double shift = x1(1, 1) + x1(0, 2) + x1(2, 0) + x2(0, 1) + x2(1, 0);
  m.quadratic = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m.quadratic(i, j) = x0(i + 1, j + 1) + (i == j ? shift : 0.0) - 0.5 * d.h(i, j);
  m.z3 = x1(1, 2) + x1(2, 1) + x2(1, 1) - d.beta / 6.0;
  m.z4 = x1(2, 2) - d.sigma / 4.0;
  return m;
}

Residuals residuals(const SdpData& d, const SdpPrimal& primal, const SdpDual& dual) {
  Residuals r;
  const Vector ax = apply_constraints(d, primal.Y, primal.Z1, primal.Z2);
  r.primal_infeas = norm2(ax - d.rhs);
  r.dual_infeas = sos_mismatch(d, dual).norm();
  r.gap = primal_objective(d, primal.Y, primal.Z1, primal.Z2) - dual.gamma;
  r.primal_min_eig = std::min({linalg::min_psd_eig(primal.Y), linalg::min_psd_eig(primal.Z1),
                               linalg::min_psd_eig(primal.Z2)});
  r.dual_min_eig = std::min({linalg::min_psd_eig(dual.X0), linalg::min_psd_eig(dual.X1),
                             linalg::min_psd_eig(dual.X2)});
  return r;
}

SdpPrimal lift(const SdpData& d, std::span<const double> s) {
  if (s.size() != d.n) throw InputError("lift: dimension mismatch");
  Vector v(d.n + 1);
  v[0] = 1.0;
  std::copy(s.begin(), s.end(), v.begin() + 1);
  const double z = norm2(s);
  SdpPrimal out;
  out.Y = outer(v, v);
  const Vector w2{1.0, z, z * z};
  const Vector w1{1.0, z};
  out.Z1 = outer(w2, w2);
  out.Z2 = outer(w1, w1) * z;
  out.theta = primal_objective(d, out.Y, out.Z1, out.Z2);
  return out;
}

std::string to_string(Mode m) { return m == Mode::dense ? "dense" : "eigen"; }

std::string to_string(Status s) {
  switch (s) {
    case Status::converged: return "converged";
    case Status::max_iterations: return "max-iterations";
    case Status::ill_conditioned: return "ill-conditioned";
    case Status::stalled: return "stalled";
  }
  return "unknown";
}

}  // namespace cqr::sdp
