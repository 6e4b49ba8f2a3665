#pragma once

#include <optional>
#include <span>
#include <string>

#include "cqr/matrix.hpp"

namespace cqr {

/// f0 + g's + s'Hs/2 + (beta/6)|s|^3 + (sigma/4)|s|^4, where |s| is the
/// Euclidean norm, or the W-norm sqrt(s'Ws) when a weight matrix is given.
class CqrProblem {
 public:
  /// Validates and stores H symmetrized. Throws InputError on bad input.
  CqrProblem(double f0, Vector g, Matrix h, double beta, double sigma,
             std::optional<Matrix> w = std::nullopt);

  std::size_t n() const noexcept { return g_.size(); }
  double f0() const noexcept { return f0_; }
  const Vector& g() const noexcept { return g_; }
  const Matrix& H() const noexcept { return h_; }
  double beta() const noexcept { return beta_; }
  double sigma() const noexcept { return sigma_; }
  const std::optional<Matrix>& W() const noexcept { return w_; }

  /// sigma > 0, or sigma = 0 < beta, or sigma = beta = 0 with H positive definite.
  bool bounded_below() const noexcept { return bounded_below_; }

  /// Norm used by the regularization terms.
  double norm(std::span<const double> s) const;

  std::string label;  // free-form identifier carried through reports

 private:
  double f0_;
  Vector g_;
  Matrix h_;
  double beta_;
  double sigma_;
  std::optional<Matrix> w_;
  bool bounded_below_ = false;
};

struct EvalBundle {
  double value = 0.0;
  Vector gradient;
  std::optional<Matrix> hessian;
};

double evaluate(const CqrProblem& p, std::span<const double> s);
/// At s = 0 the regularization terms contribute nothing, so this is g.
Vector gradient(const CqrProblem& p, std::span<const double> s);
/// Throws NonsmoothPointError at s = 0 when beta != 0.
Matrix hessian(const CqrProblem& p, std::span<const double> s);
EvalBundle eval_bundle(const CqrProblem& p, std::span<const double> s, bool with_hessian);

/// H + ((beta/2) r + sigma r^2) W, with W = I when absent.
Matrix b_matrix(const CqrProblem& p, double r);

/// Maps a point of a transformed problem back to the original variables:
/// s = scale * (linear * t), with `linear` = I when absent.
struct BackMap {
  std::optional<Matrix> linear;
  double scale = 1.0;

  Vector operator()(std::span<const double> t) const;
};

struct Transformed {
  CqrProblem problem;
  BackMap back;
  bool applied = false;  // false when the transform is the identity
};

/// Substitutes s = W^{-1/2} t so the regularization norm becomes Euclidean.
Transformed apply_w_transform(const CqrProblem& p);

/// Substitutes s = (4/sigma)^{1/4} t so that the quartic coefficient is 4.
/// With sigma = 0 the identity transform is returned and `applied` is false.
Transformed normalize_sigma(const CqrProblem& p);

}  // namespace cqr
