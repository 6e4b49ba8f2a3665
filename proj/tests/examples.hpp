#pragma once

#include "cqr/cli.hpp"
#include "cqr/problem.hpp"
#include "cqr/random.hpp"

// Worked instances used across the test suite.
namespace cqr::examples {

// |s|^4 - 4|s|^3 + 6s^2 - 4s + 1: minimizer 1, relaxation bound -1.
inline CqrProblem quartic_single_min() {
  return CqrProblem(1, Vector{-4}, Matrix{{12}}, -24, 4);
}

// |s|^4 - 6|s|^3 + 13s^2 - 12s + 4: minimizers 1 and 2, relaxation bound -5.
inline CqrProblem quartic_two_mins() {
  return CqrProblem(4, Vector{-12}, Matrix{{26}}, -36, 4);
}

// |s|^2 (|s| - 1)^2 + eps |s|^3: unique minimizer 0.
inline CqrProblem zero_min(std::size_t n, double eps) {
  return CqrProblem(0, Vector(n, 0.0), Matrix::identity(n) * 2.0, -12 + eps, 4);
}

// |s|^2 (|s| - 2)^2: minimizers 0 and the sphere of radius 2.
inline CqrProblem zero_and_sphere(std::size_t n) {
  return CqrProblem(0, Vector(n, 0.0), Matrix::identity(n) * 8.0, -24, 4);
}

// n = 10, beta = 0: two minimizers +-(1/sqrt 10)(-1, 1, ..., 1), value -1.
inline CqrProblem alternating_ten() {
  Matrix h(10, 10);
  h(0, 0) = 14;
  for (std::size_t i = 1; i < 10; ++i) h(i, i) = -2;
  for (std::size_t j = 1; j < 10; ++j) {
    const double v = (j % 2 == 1) ? 2.0 : -2.0;  // s_1 s_even positive, s_1 s_odd negative
    h(0, j) = v;
    h(j, 0) = v;
  }
  return CqrProblem(0, Vector(10, 0.0), h, 0, 4);
}

// n = 5, all-ones coupling: a 3-sphere of minimizers at norm 1.6559.
inline CqrProblem sphere_family() {
  Matrix h(5, 5, 1.0);
  for (std::size_t i = 0; i < 5; ++i) h(i, i) = -5;
  return CqrProblem(0, Vector(5, 0.0), h, -6, 4);
}

// n = 3 with linear term: unique minimizer near (-1.8131, 3.6458, -6.5873).
inline CqrProblem rank_one_three() {
  return CqrProblem(0, Vector{1, 2, 3}, Matrix{{-5, 1, 0}, {1, -4, 2}, {0, 2, -6}}, -60, 4);
}

// n = 5 with linear term: unique minimizer of norm 4.2612, value -144.8805.
inline CqrProblem rank_one_five() {
  Matrix h{{-4, -2, -1, -3, 0},
           {-2, 0, 1, -2, -1},
           {-1, 1, -2, 0, -2},
           {-3, -2, 0, -3, -1},
           {0, -1, -2, -1, -1}};
  return CqrProblem(0, Vector(5, 2.0), h, -30, 4);
}

// The random recipe: g ~ N(0, I), H = (A + A')/2 with A standard normal, sigma = 4.
inline CqrProblem random_instance(std::uint64_t key, std::size_t n, double beta) {
  return cli::random_problem(key, n, beta);
}

}  // namespace cqr::examples
