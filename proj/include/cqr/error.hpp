#pragma once

#include <stdexcept>
#include <string>

namespace cqr {

/// Malformed or inconsistent user input (dimensions, symmetry, signs).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical kernel failed to converge or broke down.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hessian requested at s = 0 while the cubic term is active.
class NonsmoothPointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The objective has no global minimizer (sigma = beta = 0 and H not PD).
class UnboundedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace cqr
