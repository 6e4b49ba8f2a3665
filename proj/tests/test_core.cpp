#include <doctest.h>

#include <cmath>

#include "cqr/error.hpp"
#include "cqr/linalg.hpp"
#include "cqr/problem.hpp"
#include "cqr/random.hpp"

using namespace cqr;

namespace {

CqrProblem one_dim(double f0, double g, double h, double beta, double sigma) {
  return CqrProblem(f0, Vector{g}, Matrix{{h}}, beta, sigma);
}

CqrProblem random_problem(CounterRng& rng, std::size_t n) {
  return CqrProblem(rng.normal(), rng.normal_vector(n), rng.symmetric_normal(n),
                    rng.uniform(-5, 5), rng.uniform(0.5, 5));
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("evaluate") {
  const CqrProblem a = one_dim(1, -4, 12, -24, 4);
  CHECK(evaluate(a, Vector{1.0}) == doctest::Approx(0.0));
  CHECK(evaluate(a, Vector{0.0}) == 1.0);

  const CqrProblem b(0, Vector{1, 0}, Matrix::identity(2) * 2.0, 3, 4);
  CHECK(evaluate(b, Vector{1, 1}) == doctest::Approx(7.0 + std::sqrt(2.0)).epsilon(1e-14));

  CHECK_THROWS_AS(evaluate(b, Vector{1.0}), InputError);
}

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(one_dim(0, 0, 1, 0, -1), InputError);
  CHECK_THROWS_AS(CqrProblem(0, Vector{0, 0}, Matrix{{1, 1}, {0, 1}}, 0, 1), InputError);
  CHECK_THROWS_AS(CqrProblem(0, Vector{0, 0}, Matrix::identity(3), 0, 1), InputError);
  CHECK_THROWS_AS(CqrProblem(0, Vector{0}, Matrix{{1}}, 0, 1, Matrix{{-1}}), InputError);

  const CqrProblem nearly(0, Vector{0, 0}, Matrix{{1, 1 + 1e-14}, {1, 1}}, 0, 1);
  CHECK(nearly.H()(0, 1) == nearly.H()(1, 0));

  CHECK(one_dim(0, 0, -1, 0, 1).bounded_below());
  CHECK(one_dim(0, 0, -1, 1, 0).bounded_below());
  CHECK(one_dim(0, 0, 1, 0, 0).bounded_below());
  CHECK_FALSE(one_dim(0, 0, -1, 0, 0).bounded_below());
  CHECK_FALSE(one_dim(0, 0, 0, 0, 0).bounded_below());
  CHECK_FALSE(one_dim(0, 0, 5, -1, 0).bounded_below());
}

TEST_CASE("gradient") {
  const CqrProblem a = one_dim(1, -4, 12, -24, 4);
  CHECK(std::abs(gradient(a, Vector{1.0})[0]) <= 1e-14);
  CounterRng rng(1);
  const CqrProblem p = random_problem(rng, 4);
  CHECK(gradient(p, Vector(4, 0.0)) == p.g());
}

TEST_CASE("gradient and hessian match finite differences") {
  for (int k = 0; k < 50; ++k) {
    CounterRng rng(CounterRng::derive(2, k));
    const std::size_t n = 1 + k % 5;
    const CqrProblem p = random_problem(rng, n);
    Vector s = rng.normal_vector(n);
    if (norm2(s) < 0.1) s[0] += 0.5;

    const Vector grad = gradient(p, s);
    const Matrix hess = hessian(p, s);
    const double h = 1e-5 * (1 + norm2(s));
    Vector fd(n);
    Matrix fdh(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      Vector sp = s, sm = s;
      sp[i] += h;
      sm[i] -= h;
      fd[i] = (evaluate(p, sp) - evaluate(p, sm)) / (2 * h);
      const Vector gp = gradient(p, sp), gm = gradient(p, sm);
      for (std::size_t j = 0; j < n; ++j) fdh(j, i) = (gp[j] - gm[j]) / (2 * h);
    }
    CHECK(norm2(fd - grad) <= 1e-5 * std::max(1.0, norm2(grad)));
    CHECK(max_abs(fdh - hess) <= 1e-5 * std::max(1.0, max_abs(hess)));
    CHECK(asymmetry(hess) <= 1e-12 * std::max(1.0, max_abs(hess)));
    // gradient = g + B(|s|) s
    const Vector bs = b_matrix(p, norm2(s)) * s + p.g();
    CHECK(norm2(bs - grad) <= 1e-12 * std::max(1.0, norm2(grad)));
  }
}

TEST_CASE("hessian special cases") {
  const CqrProblem p(0, Vector{0, 0}, Matrix::identity(2) * 2.0, 0, 4);
  const Matrix h = hessian(p, Vector{1, 0});
  CHECK(h(0, 0) == doctest::Approx(14.0));
  CHECK(h(1, 1) == doctest::Approx(6.0));
  CHECK(h(0, 1) == 0.0);

  const CqrProblem a = one_dim(1, -4, 12, -24, 4);
  CHECK(std::abs(hessian(a, Vector{1.0})(0, 0)) <= 1e-13);
  CHECK_THROWS_AS(hessian(a, Vector{0.0}), NonsmoothPointError);
  CHECK(hessian(p, Vector{0, 0})(0, 0) == 2.0);
}

TEST_CASE("b_matrix") {
  const CqrProblem a = one_dim(1, -4, 12, -24, 4);
  CHECK(b_matrix(a, 0)(0, 0) == 12.0);
  CHECK(b_matrix(a, 1)(0, 0) == doctest::Approx(4.0));
  const CqrProblem b(0, Vector{0, 0}, Matrix::diagonal(Vector{-1, 2}), 4, 0);
  const Matrix m = b_matrix(b, 1);
  CHECK(m(0, 0) == doctest::Approx(1.0));
  CHECK(m(1, 1) == doctest::Approx(4.0));
  CHECK_THROWS_AS(b_matrix(b, -1), InputError);
}

TEST_CASE("evaluate is invariant under simultaneous rotation") {
  CounterRng rng(17);
  const std::size_t n = 4;
  const CqrProblem p = random_problem(rng, n);
  const Matrix q = linalg::sym_eigen(rng.symmetric_normal(n)).vectors;
  const CqrProblem rotated(p.f0(), q * p.g(), symmetrized(q * p.H() * q.transposed()), p.beta(),
                           p.sigma());
  for (int k = 0; k < 10; ++k) {
    const Vector s = rng.normal_vector(n);
    CHECK(rel(evaluate(rotated, q * s), evaluate(p, s)) <= 1e-12);
  }
}

TEST_CASE("apply_w_transform") {
  const CqrProblem plain = one_dim(1, 2, 4, 1, 1);
  const Transformed same = apply_w_transform(plain);
  CHECK_FALSE(same.applied);
  CHECK(same.back(Vector{3.0})[0] == 3.0);

  const CqrProblem w4(0, Vector{2}, Matrix{{4}}, 1, 1, Matrix{{4}});
  const Transformed t = apply_w_transform(w4);
  CHECK(t.applied);
  CHECK(t.problem.g()[0] == doctest::Approx(1.0));
  CHECK(t.problem.H()(0, 0) == doctest::Approx(1.0));
  CHECK_FALSE(t.problem.W().has_value());
  CHECK(w4.norm(t.back(Vector{3.0})) == doctest::Approx(3.0));

  CounterRng rng(23);
  const std::size_t n = 3;
  const Matrix a = rng.normal_matrix(n, n);
  Matrix w = transpose_times(a, a);
  for (std::size_t i = 0; i < n; ++i) w(i, i) += 0.5;
  const CqrProblem pw(rng.normal(), rng.normal_vector(n), rng.symmetric_normal(n), -2, 3,
                      symmetrized(w));
  const Transformed tw = apply_w_transform(pw);
  for (int k = 0; k < 10; ++k) {
    const Vector st = rng.normal_vector(n);
    CHECK(rel(evaluate(pw, tw.back(st)), evaluate(tw.problem, st)) <= 1e-10);
  }
}

TEST_CASE("normalize_sigma") {
  const CqrProblem four = one_dim(0, 1, 1, 1, 4);
  CHECK_FALSE(normalize_sigma(four).applied);

  const CqrProblem p = one_dim(0, 1, 2, 3, 64);
  const Transformed t = normalize_sigma(p);
  CHECK(t.applied);
  CHECK(t.problem.sigma() == doctest::Approx(4.0));
  CHECK(t.problem.g()[0] == doctest::Approx(0.5));
  CHECK(t.problem.H()(0, 0) == doctest::Approx(0.5));
  CHECK(t.problem.beta() == doctest::Approx(3.0 / 8.0));
  CHECK(t.back(Vector{1.0})[0] == doctest::Approx(0.5));

  CHECK_FALSE(normalize_sigma(one_dim(0, 1, 1, 1, 0)).applied);

  CounterRng rng(29);
  const CqrProblem r(rng.normal(), rng.normal_vector(3), rng.symmetric_normal(3), -1.5, 1.0);
  const Transformed tr = normalize_sigma(r);
  for (int k = 0; k < 10; ++k) {
    const Vector st = rng.normal_vector(3);
    CHECK(rel(evaluate(r, tr.back(st)), evaluate(tr.problem, st)) <= 1e-10);
  }
}
