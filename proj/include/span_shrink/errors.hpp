#pragma once

#include <stdexcept>
#include <string>

namespace span_shrink {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Base for failures caused by the data rather than by the caller: the CLI
/// maps these to exit code 2.
class StatisticalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A span that must be positive is zero (tied extremes, constant sample).
class DegenerateSpan : public StatisticalError {
 public:
  using StatisticalError::StatisticalError;
};

/// Too few observations for the requested trimming depth.
class InsufficientSample : public StatisticalError {
 public:
  using StatisticalError::StatisticalError;
};

/// An asymptotic approximation was asked for outside its validity range.
class ValidityRange : public DomainError {
 public:
  ValidityRange(const std::string& what, double ratio)
      : DomainError(what), ratio_(ratio) {}

  double ratio() const noexcept { return ratio_; }

 private:
  double ratio_;
};

}  // namespace span_shrink
