#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

/// Argument outside the mathematical domain of an operation (omega_a <= 0,
/// non-finite coordinates, theta outside the curve domain, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two objects that must agree do not (basis built for another N, fidelity
/// between states in different sectors, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Point where a parity-projected coherent state has zero norm.
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Iterative numerics that did not converge. Carries the best iterate so the
/// caller can still inspect where the search ended.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double best_q = 0.0, double best_theta = 0.0,
               double best_value = 0.0)
      : std::runtime_error(what), best_q_(best_q), best_theta_(best_theta), best_value_(best_value) {}

  double best_q() const noexcept { return best_q_; }
  double best_theta() const noexcept { return best_theta_; }
  double best_value() const noexcept { return best_value_; }

 private:
  double best_q_;
  double best_theta_;
  double best_value_;
};

/// A resource limit was hit (Fock truncation ladder exhausted).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration or CSV input; the message names the line and key.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dicke
