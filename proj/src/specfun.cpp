#include "toroid/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include "toroid/error.hpp"

namespace toroid {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Carlson's symmetric integral R_F by duplication (Carlson 1995, Alg. 1).
double carlson_rf(double x, double y, double z) {
  const double a0 = (x + y + z) / 3.0;
  const double q = std::pow(3.0 * kEps, -1.0 / 6.0) *
                   std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
  double xn = x, yn = y, zn = z, an = a0, scale = 1.0;
  while (q * scale >= std::abs(an)) {
    const double rx = std::sqrt(xn), ry = std::sqrt(yn), rz = std::sqrt(zn);
    const double lambda = rx * ry + rx * rz + ry * rz;
    xn = 0.25 * (xn + lambda);
    yn = 0.25 * (yn + lambda);
    zn = 0.25 * (zn + lambda);
    an = 0.25 * (an + lambda);
    scale *= 0.25;
  }
  const double dx = (a0 - x) * scale / an;
  const double dy = (a0 - y) * scale / an;
  const double dz = -dx - dy;
  const double e2 = dx * dy - dz * dz;
  const double e3 = dx * dy * dz;
  return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) /
         std::sqrt(an);
}

// Carlson's R_D (Carlson 1995, Alg. 4).
double carlson_rd(double x, double y, double z) {
  const double a0 = (x + y + 3.0 * z) / 5.0;
  const double q = std::pow(0.25 * kEps, -1.0 / 6.0) *
                   std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
  double xn = x, yn = y, zn = z, an = a0, scale = 1.0, tail = 0.0;
  while (q * scale >= std::abs(an)) {
    const double rx = std::sqrt(xn), ry = std::sqrt(yn), rz = std::sqrt(zn);
    const double lambda = rx * ry + rx * rz + ry * rz;
    tail += scale / (rz * (zn + lambda));
    xn = 0.25 * (xn + lambda);
    yn = 0.25 * (yn + lambda);
    zn = 0.25 * (zn + lambda);
    an = 0.25 * (an + lambda);
    scale *= 0.25;
  }
  const double dx = (a0 - x) * scale / an;
  const double dy = (a0 - y) * scale / an;
  const double dz = -(dx + dy) / 3.0;
  const double xy = dx * dy;
  const double z2 = dz * dz;
  const double e2 = xy - 6.0 * z2;
  const double e3 = (3.0 * xy - 8.0 * z2) * dz;
  const double e4 = 3.0 * (xy - z2) * z2;
  const double e5 = xy * z2 * dz;
  const double series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 -
                        3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0;
  return scale * series / (an * std::sqrt(an)) + 3.0 * tail;
}

// acosh(1 + t) without losing the digits of a small t.
double acosh1p(double t) { return std::log1p(t + std::sqrt(t * (t + 2.0))); }

}  // namespace

double elliptic_k_complement(double mc) {
  if (!(mc > 0.0 && mc <= 1.0)) {
    throw Error(ErrorCode::kDomain,
                "elliptic_k: complementary parameter must lie in (0, 1], got " +
                    std::to_string(mc));
  }
  return carlson_rf(0.0, mc, 1.0);
}

double elliptic_e_complement(double mc) {
  if (!(mc >= 0.0 && mc <= 1.0)) {
    throw Error(ErrorCode::kDomain,
                "elliptic_e: complementary parameter must lie in [0, 1], got " +
                    std::to_string(mc));
  }
  if (mc == 0.0) return 1.0;
  const double m = 1.0 - mc;
  return carlson_rf(0.0, mc, 1.0) - m / 3.0 * carlson_rd(0.0, mc, 1.0);
}

double elliptic_k(double m) {
  if (!(m >= 0.0 && m < 1.0)) {
    throw Error(ErrorCode::kDomain,
                "elliptic_k: parameter must lie in [0, 1), got " + std::to_string(m));
  }
  return elliptic_k_complement(1.0 - m);
}

double elliptic_e(double m) {
  if (!(m >= 0.0 && m <= 1.0)) {
    throw Error(ErrorCode::kDomain,
                "elliptic_e: parameter must lie in [0, 1], got " + std::to_string(m));
  }
  if (m == 0.0) return std::numbers::pi / 2.0;
  return elliptic_e_complement(1.0 - m);
}

int max_safe_degree(double z) {
  if (!(z >= 1.0)) {
    throw Error(ErrorCode::kDomain,
                "harmonic argument must be >= 1, got " + std::to_string(z));
  }
  // P grows like e^{n xi}, Q and Q/P decay like e^{-n xi}, e^{-2 n xi}.
  // Keeping n xi <= 330 leaves Q/P above ~1e-286.
  constexpr double kExponentBudget = 330.0;
  constexpr int kHardCap = std::numeric_limits<int>::max() / 4;
  const double xi = acosh1p(z - 1.0);
  if (xi * kHardCap <= kExponentBudget) return kHardCap;
  return static_cast<int>(std::floor(kExponentBudget / xi));
}

std::vector<double> legendre_p_half(double z, int n_max) {
  if (!(z >= 1.0) || !std::isfinite(z)) {
    throw Error(ErrorCode::kDomain,
                "legendre_p_half: argument must be finite and >= 1, got " +
                    std::to_string(z));
  }
  if (n_max < 0) {
    throw Error(ErrorCode::kDomain, "legendre_p_half: n_max must be >= 0");
  }
  const int safe = max_safe_degree(z);
  if (n_max > safe) {
    throw OverflowError("legendre_p_half: n_max = " + std::to_string(n_max) +
                            " exceeds the overflow horizon " + std::to_string(safe) +
                            " at z = " + std::to_string(z),
                        safe);
  }
  const double t = z - 1.0;
  const double xi = acosh1p(t);
  std::vector<double> p(static_cast<std::size_t>(n_max) + 1);
  // P_{-1/2}(z) = (2/pi) sqrt(2/(z+1)) K((z-1)/(z+1))
  p[0] = 2.0 / std::numbers::pi * std::sqrt(2.0 / (z + 1.0)) *
         elliptic_k_complement(2.0 / (z + 1.0));
  if (n_max == 0) return p;
  // P_{1/2}(cosh xi) = (2/pi) e^{xi/2} E(1 - e^{-2 xi})
  p[1] = 2.0 / std::numbers::pi * std::exp(0.5 * xi) *
         elliptic_e_complement(std::exp(-2.0 * xi));
  for (int n = 1; n < n_max; ++n) {
    const auto k = static_cast<std::size_t>(n);
    p[k + 1] = (2.0 * n * z * p[k] - (n - 0.5) * p[k - 1]) / (n + 0.5);
  }
  return p;
}

HarmonicTable HarmonicTable::build(double z, int n_max) {
  if (!(z >= kMinHarmonicArgument) || !std::isfinite(z)) {
    throw Error(ErrorCode::kNearSingularArgument,
                "harmonic_table: argument " + std::to_string(z) +
                    " is below 1 + 1e-12 (degenerate toroid, Q_{-1/2} diverges)");
  }
  HarmonicTable table;
  table.z_ = z;
  table.xi_ = acosh1p(z - 1.0);
  table.p_ = legendre_p_half(z, n_max);

  const auto size = static_cast<std::size_t>(n_max) + 1;
  table.q_.assign(size, 0.0);
  table.ratio_.assign(size, 0.0);

  // Q_{-1/2}(z) = k K(k^2), k^2 = 2/(z+1).
  const double k2 = 2.0 / (z + 1.0);
  table.q_[0] = std::sqrt(k2) * elliptic_k_complement((z - 1.0) / (z + 1.0));

  // Backward recurrence in ratio form r_n = Q_n / Q_{n-1}, started from a zero
  // tail far enough out that the dominant solution is suppressed by ~e^{-40}.
  const std::int64_t start = static_cast<std::int64_t>(n_max) + 15 +
                             static_cast<std::int64_t>(std::ceil(20.0 / table.xi_));
  double r_next = 0.0;
  for (std::int64_t n = start; n >= 1; --n) {
    const double dn = static_cast<double>(n);
    const double r = (dn - 0.5) / (2.0 * dn * z - (dn + 0.5) * r_next);
    if (n <= n_max) table.ratio_[static_cast<std::size_t>(n)] = r;
    r_next = r;
  }
  for (std::size_t n = 1; n < size; ++n) {
    table.q_[n] = table.q_[n - 1] * table.ratio_[n];
  }
  for (std::size_t n = 0; n < size; ++n) {
    table.ratio_[n] = table.q_[n] / table.p_[n];
  }
  return table;
}

}  // namespace toroid
