#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace zaremba {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller violated a documented precondition (e.g. a mesh lacking a symmetry).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A size cap was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AssemblyError : public std::runtime_error {
 public:
  AssemblyError(const std::string& what, std::size_t triangle)
      : std::runtime_error(what), triangle_(triangle) {}
  std::size_t triangle() const noexcept { return triangle_; }

 private:
  std::size_t triangle_;
};

class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best_residuals)
      : std::runtime_error(what), residuals_(std::move(best_residuals)) {}
  const std::vector<double>& best_residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

}  // namespace zaremba
