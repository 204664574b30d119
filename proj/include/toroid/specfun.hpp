#pragma once

#include <span>
#include <vector>

namespace toroid {

/// Complete elliptic integral of the first kind K(m), parameter m = k^2 in [0, 1).
double elliptic_k(double m);

/// Complete elliptic integral of the second kind E(m), m in [0, 1].
double elliptic_e(double m);

/// K expressed through the complementary parameter mc = 1 - m. Keeps full
/// relative accuracy when m is within rounding of 1 (ring kernels, z -> 1).
double elliptic_k_complement(double mc);
double elliptic_e_complement(double mc);

/// Smallest argument accepted for Q_{n-1/2}; Q_{-1/2} diverges at z = 1.
inline constexpr double kMinHarmonicArgument = 1.0 + 1e-12;

/// Largest degree index n for which P_{n-1/2}(z), Q_{n-1/2}(z) and their ratio
/// stay comfortably inside the normal double range.
int max_safe_degree(double z);

/// P_{n-1/2}(z) for n = 0..n_max by forward recurrence; z >= 1.
std::vector<double> legendre_p_half(double z, int n_max);

/// Toroidal harmonics P_{n-1/2}(z), Q_{n-1/2}(z) and Q/P for n = 0..n_max.
/// Immutable once built.
class HarmonicTable {
 public:
  static HarmonicTable build(double z, int n_max);

  double argument() const noexcept { return z_; }
  double xi() const noexcept { return xi_; }
  int n_max() const noexcept { return static_cast<int>(p_.size()) - 1; }

  std::span<const double> p() const noexcept { return p_; }
  std::span<const double> q() const noexcept { return q_; }
  std::span<const double> ratio() const noexcept { return ratio_; }

  double p(int n) const { return p_.at(static_cast<std::size_t>(n)); }
  double q(int n) const { return q_.at(static_cast<std::size_t>(n)); }
  double ratio(int n) const { return ratio_.at(static_cast<std::size_t>(n)); }

 private:
  HarmonicTable() = default;

  double z_ = 1.0;
  double xi_ = 0.0;
  std::vector<double> p_;
  std::vector<double> q_;
  std::vector<double> ratio_;
};

}  // namespace toroid
