#pragma once

#include <stdexcept>
#include <string>

namespace toroid {

// Numeric values are part of the C ABI (see toroid.h); do not renumber.
enum class ErrorCode : int {
  kOk = 0,
  kDomain = 1,
  kDegenerateToroid = 2,
  kNearSingularArgument = 3,
  kOverflow = 4,
  kTruncation = 5,
  kOutOfRegion = 6,
  kCoincidentPoints = 7,
  kCoordinateSingularity = 8,
  kNoRoot = 9,
  kRangeExceeded = 10,
  kSolver = 11,
  kMesh = 12,
  kUnsupported = 13,
  kInvalidArgument = 14,
  kInternal = 99,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Thrown when a harmonic table is requested past the degree at which
/// P_{n-1/2} would leave the safe floating-point range.
class OverflowError : public Error {
 public:
  OverflowError(const std::string& what, int max_safe_degree)
      : Error(ErrorCode::kOverflow, what), max_safe_degree_(max_safe_degree) {}

  int max_safe_degree() const noexcept { return max_safe_degree_; }

 private:
  int max_safe_degree_;
};

/// A series did not meet its tolerance before the term cap.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double partial_sum, double tail_bound,
                  int terms)
      : Error(ErrorCode::kTruncation, what),
        partial_sum_(partial_sum),
        tail_bound_(tail_bound),
        terms_(terms) {}

  double partial_sum() const noexcept { return partial_sum_; }
  double tail_bound() const noexcept { return tail_bound_; }
  int terms() const noexcept { return terms_; }

 private:
  double partial_sum_;
  double tail_bound_;
  int terms_;
};

class RangeExceededError : public Error {
 public:
  RangeExceededError(const std::string& what, double bound)
      : Error(ErrorCode::kRangeExceeded, what), bound_(bound) {}

  double bound() const noexcept { return bound_; }

 private:
  double bound_;
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, double condition_estimate)
      : Error(ErrorCode::kSolver, what), condition_estimate_(condition_estimate) {}

  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

}  // namespace toroid
