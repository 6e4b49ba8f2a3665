#include <doctest.h>

#include <cmath>

#include "cqr/extract.hpp"
#include "cqr/linalg.hpp"
#include "examples.hpp"

using namespace cqr;
using namespace cqr::extract;

namespace {

PipelineResult run(const CqrProblem& p) { return solve(p); }

// Distance from x to { hat_s + N c : |c| = rho }.
double distance_to_set(const MinimizerSet& set, const Vector& x) {
  Vector d = x - *set.particular;
  const Vector c = transpose_times(set.basis, d);
  Vector proj = *set.particular;
  const double nc = norm2(c);
  for (std::size_t j = 0; j < c.size(); ++j)
    for (std::size_t i = 0; i < x.size(); ++i)
      proj[i] += (nc > 0 ? set.radius * c[j] / nc : 0.0) * set.basis(i, j);
  return norm2(x - proj);
}

Matrix gram(const std::vector<Vector>& rows) {
  const std::size_t m = rows.empty() ? 0 : rows[0].size();
  Matrix g(m, m);
  for (const Vector& r : rows) g += outer(r, r);
  return g;
}

}  // namespace

TEST_CASE("factor_dual recovers a rank-two block from its factors") {
  const Vector u{1.0, -2.0, 0.5}, v{0.3, 0.7, -1.1};
  sdp::SdpDual d;
  d.X0 = Matrix::identity(2);
  d.X1 = outer(u, u) + outer(v, v);
  d.X2 = Matrix(2, 2);
  const Certificate c = factor_dual(d);
  CHECK(c.rank_x1 == 2);
  CHECK(c.rank_x2 == 0);
  CHECK(c.q.empty());
  CHECK(frobenius_norm(gram(c.p) - d.X1) < 1e-8);
  for (const Vector& a : c.p) CHECK(a[2] >= 0);
  // Both factor vectors lie in span{u, v}.
  Matrix basis(3, 2);
  basis.set_col(0, u);
  basis.set_col(1, v);
  for (const Vector& a : c.p) {
    const linalg::MinNormSolution ls = linalg::min_norm_lstsq(basis, a);
    CHECK(ls.residual < 1e-8);
  }
}

TEST_CASE("zero X1 gives no quadratic factors") {
  sdp::SdpDual d;
  d.X0 = Matrix(3, 3);
  d.X1 = Matrix(3, 3);
  d.X2 = Matrix::identity(2);
  const Certificate c = factor_dual(d);
  CHECK(c.p.empty());
  CHECK(c.rank_x0 == 0);
  CHECK(c.R.rows() == 0);
  CHECK(c.rank_x2 == 2);
}

TEST_CASE("a full-rank X1 is reported as an anomaly") {
  sdp::SdpDual d;
  d.X0 = Matrix::identity(2);
  d.X1 = Matrix::identity(3);
  d.X2 = Matrix(2, 2);
  const Certificate c = factor_dual(d);
  CHECK(c.p.size() == 3);
  REQUIRE(c.anomalies.size() == 1);
  CHECK(c.anomalies[0].find("rank anomaly") != std::string::npos);
}

TEST_CASE("polynomials without a common zero give no roots") {
  Certificate c;
  c.p = {Vector{-1, 0, 1}, Vector{-2, 1, 0}};
  CHECK(common_roots(c).empty());
  c.p = {Vector{-1, 0, 1}, Vector{1, -2, 1}};
  c.q = {Vector{-3, 3}};
  const auto roots = common_roots(c);
  REQUIRE(roots.size() == 1);
  CHECK(roots[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("full-rank affine part yields a singleton") {
  Certificate c;
  const double z = 1.5;
  c.R = Matrix(3, 4);
  for (std::size_t i = 0; i < 3; ++i) c.R(i, i + 1) = 1.0;
  c.R(0, 0) = -z;
  const auto sl = solve_sphere_affine(c, z);
  REQUIRE(sl);
  CHECK(sl->basis.cols() == 0);
  CHECK(norm2(sl->particular - Vector{z, 0, 0}) < 1e-12);
  CHECK(!solve_sphere_affine(c, 2.0));
}

TEST_CASE("certificate reproduces the objective gap on the worked examples") {
  const CqrProblem problems[] = {examples::quartic_single_min(), examples::alternating_ten(),
                                 examples::sphere_family(), examples::rank_one_three(),
                                 examples::rank_one_five(), examples::zero_and_sphere(3)};
  std::uint64_t k = 0;
  for (const CqrProblem& p : problems) {
    const PipelineResult r = run(p);
    const Certificate& c = r.extraction.certificate;
    const Matrix rr = transpose_times(c.R, c.R);
    // Only eigenvalues below the rank cutoff are discarded.
    const double lmax = linalg::sym_eigenvalues(r.sdp.dual.X0).back();
    CHECK(frobenius_norm(rr - r.sdp.dual.X0) <=
          1e-7 * std::max(1.0, lmax) * double(p.n() + 1) + 1e-7 * frobenius_norm(r.sdp.dual.X0));
    CounterRng rng(CounterRng::derive(31, k++));
    for (int i = 0; i < 20; ++i) {
      const Vector s = rng.normal_vector(p.n());
      const double m = evaluate(p, s);
      CHECK(std::abs(m - c.gamma - c.value(s)) <= 1e-6 * (1.0 + std::abs(m)));
    }
  }
}

TEST_CASE("single nonzero minimizer of norm one is not attained by the bound") {
  const PipelineResult r = run(examples::quartic_single_min());
  const TightnessReport& t = r.extraction.report;
  CHECK(std::abs(t.gamma_star + 1.0) < 1e-6);
  CHECK_FALSE(t.tight);
  CHECK(t.reason == Reason::empty_system);
  REQUIRE(t.condition_value);
  CHECK(std::abs(*t.condition_value + 12.0) < 1e-6);
  CHECK(r.extraction.set.empty());
  CHECK(std::abs(t.mu_upper) < 1e-9);
}

TEST_CASE("two minimizers of different norms: not tight") {
  const PipelineResult r = run(examples::quartic_two_mins());
  CHECK_FALSE(r.extraction.report.tight);
  CHECK(std::abs(r.extraction.report.gamma_star + 5.0) < 1e-5);
}

TEST_CASE("zero together with the radius-two sphere") {
  const PipelineResult r = run(examples::zero_and_sphere(2));
  const MinimizerSet& s = r.extraction.set;
  CHECK(r.extraction.report.tight);
  CHECK(std::abs(r.extraction.report.gamma_star) < 1e-7);
  CHECK(s.contains_zero);
  REQUIRE(s.z_star);
  CHECK(*s.z_star == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(s.nullspace_dim() == 2);
  CHECK(s.radius == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(zero_membership(r.extraction.certificate));
}

TEST_CASE("alternating n = 10 example: two antipodal minimizers") {
  const PipelineResult r = run(examples::alternating_ten());
  const Extraction& e = r.extraction;
  CHECK(e.certificate.rank_x0 == 9);
  const auto roots = common_roots(e.certificate);
  REQUIRE(roots.size() == 1);
  CHECK(std::abs(roots[0] - 1.0) < 1e-4);
  REQUIRE(e.set.particular);
  CHECK(norm2(*e.set.particular) < 1e-6);
  REQUIRE(e.set.nullspace_dim() == 1);
  CHECK(e.set.radius == doctest::Approx(1.0).epsilon(1e-6));
  Vector alt(10);
  for (std::size_t i = 0; i < 10; ++i) alt[i] = (i % 2 == 0 ? -1.0 : 1.0) / std::sqrt(10.0);
  CHECK(std::abs(std::abs(dot(e.set.basis.col(0), alt)) - 1.0) < 1e-6);
  CHECK(e.report.tight);
  CHECK_FALSE(e.set.contains_zero);
  // The certificate's quadratic factors span the same space as (z^2 - 1)
  // and (z - 1)^2.
  Matrix ref(3, 2);
  ref.set_col(0, Vector{-1, 0, 1});
  ref.set_col(1, Vector{1, -2, 1});
  for (const Vector& a : e.certificate.p)
    CHECK(linalg::min_norm_lstsq(ref, a).residual < 1e-4 * norm2(a));
}

TEST_CASE("sphere family: a 3-sphere of minimizers") {
  const PipelineResult r = run(examples::sphere_family());
  const Extraction& e = r.extraction;
  REQUIRE(e.set.z_star);
  CHECK(std::abs(*e.set.z_star - 1.6559) < 1e-3);
  CHECK(e.set.nullspace_dim() == 4);
  CHECK(distance_to_set(e.set, Vector{1.1709, -1.1709, 0, 0, 0}) < 1e-3);
  CHECK(e.report.err_abs <= 1e-6);
  CHECK(std::abs(e.report.mu_upper + 5.2479) < 1e-3);
}

TEST_CASE("rank-one recovery on the three-dimensional example") {
  const PipelineResult r = run(examples::rank_one_three());
  const Extraction& e = r.extraction;
  CHECK(e.report.reason == Reason::rank_one);
  CHECK_FALSE(zero_membership(e.certificate));
  REQUIRE(e.set.particular);
  const Vector expect{-1.8131, 3.6458, -6.5873};
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs((*e.set.particular)[i] - expect[i]) < 1e-3);
  CHECK(e.report.err_rel <= 1e-6);
}

TEST_CASE("zero is excluded when the bound is far below f0") {
  const CqrProblem p(0, Vector{1e3, -2e3}, Matrix::identity(2), 0, 4);
  CHECK_FALSE(zero_membership(run(p).extraction.certificate));
}

TEST_CASE("minimizer-set members are stationary with a PSD curvature matrix") {
  const CqrProblem problems[] = {examples::sphere_family(), examples::alternating_ten(),
                                 examples::zero_and_sphere(4)};
  for (const CqrProblem& p : problems) {
    const MinimizerSet& s = run(p).extraction.set;
    REQUIRE(s.particular);
    const Vector& sh = *s.particular;
    for (std::size_t j = 0; j < s.basis.cols(); ++j) CHECK(std::abs(dot(sh, s.basis.col(j))) < 1e-8);
    const double z = *s.z_star;
    CHECK(std::abs(dot(sh, sh) + s.radius * s.radius - z * z) <= 1e-8 * z * z);
    for (const Vector& m : s.sample(25, 9)) {
      const double r = norm2(m);
      if (r == 0.0) continue;
      CHECK(std::abs(r - z) <= 1e-8 * z);
      CHECK(norm2(gradient(p, m)) <= 1e-6 * (1.0 + norm2(p.g())));
      CHECK(linalg::min_psd_eig(b_matrix(p, r)) >= -1e-7);
    }
  }
}

TEST_CASE("forced tightness with nothing extracted is a solver accuracy error") {
  const CqrProblem p = examples::alternating_ten();
  const PipelineResult r = run(p);
  MinimizerSet empty;
  empty.n = p.n();
  CHECK_THROWS_AS(classify(p, r.sdp.primal, r.sdp.dual, empty), SolverAccuracyError);
}

TEST_CASE("weighted norm: members map back to stationary points") {
  const Matrix w{{2.0, 0.5}, {0.5, 1.0}};
  const CqrProblem p(0.3, Vector{1.0, -2.0}, Matrix{{-3, 1}, {1, 2}}, -2.0, 4, w);
  const PipelineResult r = run(p);
  CHECK(r.extraction.report.tight);
  const auto members = r.extraction.set.sample(5, 1);
  REQUIRE(!members.empty());
  for (const Vector& s : members) {
    CHECK(norm2(gradient(p, s)) < 1e-6 * (1.0 + norm2(p.g())));
    CHECK(evaluate(p, s) == doctest::Approx(r.extraction.report.gamma_star).epsilon(1e-7));
  }
  CHECK(evaluate(p, r.extraction.report.best_point) ==
        doctest::Approx(r.extraction.report.mu_upper).epsilon(1e-12));
}

TEST_CASE("unbounded problems are rejected before solving") {
  const CqrProblem p(0, Vector{1, 0}, Matrix::identity(2) * -1.0, 0, 0);
  CHECK_THROWS_AS(solve(p), UnboundedError);
}
