#pragma once

#include <cmath>
#include <string>

#include "toroid/error.hpp"
#include "toroid/greens.hpp"

namespace toroid::detail {

// Running sum with the three-quiet-terms stopping rule. Each term comes with
// an envelope (its magnitude with oscillating factors replaced by 1).
class SeriesSum {
 public:
  enum class Reference {
    kSum,        // envelope compared with |partial sum|
    kMagnitude,  // envelope compared with the sum of envelopes; for sums that may vanish
  };

  SeriesSum(const TruncationPolicy& policy, Reference ref)
      : tol_(policy.rel_tol), ref_(ref) {}

  // Returns true once converged.
  bool add(double term, double envelope) {
    sum_ += term;
    magnitude_ += envelope;
    ++terms_;
    const double scale = ref_ == Reference::kSum ? std::abs(sum_) : magnitude_;
    last_ = scale > 0.0 ? envelope / scale : (envelope == 0.0 ? 0.0 : 1.0);
    quiet_ = (last_ < tol_) ? quiet_ + 1 : 0;
    return quiet_ >= 3;
  }

  double sum() const { return sum_; }
  int terms() const { return terms_; }
  double tail_bound() const { return last_; }

  SeriesDiagnostics diagnostics() const { return {terms_, last_, false}; }

  [[noreturn]] void fail(const std::string& what, int limit) const {
    throw TruncationError(what + ": no convergence within " + std::to_string(limit) +
                              " terms (last relative term " + std::to_string(last_) +
                              ")",
                          sum_, last_, terms_);
  }

 private:
  double tol_;
  Reference ref_;
  double sum_ = 0.0;
  double magnitude_ = 0.0;
  double last_ = 1.0;
  int terms_ = 0;
  int quiet_ = 0;
};

inline double neumann_factor(int n) { return n == 0 ? 1.0 : 2.0; }

// Test hook: flips the sign of the n = 0 coefficient in the induced-potential
// series. Only the mutation test touches it.
bool flip_zero_term() noexcept;
void set_flip_zero_term(bool on) noexcept;

}  // namespace toroid::detail
