#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mhd {

/// Malformed or inconsistent input (bad orders, mismatched fields, bad files).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Floating-point failure during integration or quadrature.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Step-halving consistency check failed; the estimator grid is too coarse.
class RefinementError : public NumericalError {
 public:
  explicit RefinementError(const std::string& what) : NumericalError(what) {}
};

/// A constructor precondition (e.g. W.k = 0 for a sine flow) was violated.
/// `condition()` names the violated relation.
class AdmissibilityError : public std::invalid_argument {
 public:
  AdmissibilityError(std::string condition, const std::string& what)
      : std::invalid_argument(what), condition_(std::move(condition)) {}

  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

}  // namespace mhd
