#include "toroid/dispersion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include "series.hpp"
#include "toroid/units.hpp"

namespace toroid {
namespace {

constexpr double kPi = std::numbers::pi;

// Trigonometry of theta = arccot(z/f) in (0, pi), computed algebraically so
// that z = 0 gives cos(theta) = 0 exactly and z -> -z flips only cos(theta).
struct AxisAngle {
  double sin;
  double cos;
  double theta;

  AxisAngle(double z, double f) {
    const double h = std::hypot(f, z);
    sin = f / h;
    cos = z / h;
    theta = std::atan2(f, z);
  }
};

double to_e2nm2(double value, DipoleUnit unit) {
  switch (unit) {
    case DipoleUnit::kElementaryChargeNm:
      return value;
    case DipoleUnit::kDebye: {
      const double d = units::kDebye * units::kCoulombMetreToENm;
      return value * d * d;
    }
    case DipoleUnit::kCoulombMetre:
      return value * units::kCoulombMetreToENm * units::kCoulombMetreToENm;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown dipole unit");
}

}  // namespace

ParticleModel ParticleModel::axial(double d2z, DipoleUnit unit) {
  return from_components(0.0, 0.0, d2z, unit);
}

ParticleModel ParticleModel::from_components(double d2x, double d2y, double d2z,
                                             DipoleUnit unit) {
  if (d2x != 0.0 || d2y != 0.0) {
    throw Error(ErrorCode::kUnsupported,
                "only axially polarizable particles are supported (<d_x^2> = <d_y^2> = 0)");
  }
  const double v = to_e2nm2(d2z, unit);
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::kDomain, "<d_z^2> must be positive and finite");
  }
  return ParticleModel{v};
}

Evaluation gh_mixed_derivative(double z, double z_prime, const AxialGreens& g) {
  if (!std::isfinite(z) || !std::isfinite(z_prime)) {
    throw Error(ErrorCode::kDomain, "gh_mixed_derivative: positions must be finite");
  }
  const double f = g.geometry().f;
  const AxisAngle u(z, f);
  const AxisAngle v(z_prime, f);
  const double delta = u.theta - v.theta;
  const double cc = u.cos * v.cos;
  const double ss = u.sin * v.sin;
  const double skew = v.sin * u.cos - u.sin * v.cos;

  const HarmonicTable& t = g.table();
  detail::SeriesSum series(g.policy(), detail::SeriesSum::Reference::kMagnitude);
  bool done = false;
  for (int n = 0; n <= t.n_max() && !done; ++n) {
    const double w = detail::neumann_factor(n) * t.ratio(n);
    const double four_n2 = 4.0 * n * n;
    const double term = (cc + four_n2 * ss) * std::cos(2.0 * n * delta) +
                        2.0 * n * skew * std::sin(2.0 * n * delta);
    const double env = std::abs(cc) + four_n2 * ss + 2.0 * n * std::abs(skew);
    done = series.add(w * term, w * env);
  }
  if (!done) series.fail("gh_mixed_derivative", t.n_max() + 1);

  const double pref = -(u.sin * u.sin) * (v.sin * v.sin) / (2.0 * kPi * kPi * f * f * f);
  return {pref * series.sum(), series.diagnostics()};
}

Evaluation vdw_energy(double zp, const ParticleModel& p, const AxialGreens& g) {
  Evaluation e = gh_mixed_derivative(zp, zp, g);
  // <d^2>/(2 eps0) in eV nm^3 per (e nm)^2 is 2 pi * e^2/(4 pi eps0).
  e.value *= 2.0 * kPi * units::kCoulombEvNm * p.d2z;
  return e;
}

Evaluation vdw_force(double zp, const ParticleModel& p, const AxialGreens& g) {
  if (!std::isfinite(zp)) {
    throw Error(ErrorCode::kDomain, "vdw_force: position must be finite");
  }
  const double f = g.geometry().f;
  const AxisAngle u(zp, f);
  const double s2 = u.sin * u.sin;

  // U = -(k d2z / pi f^3) sum eps_n R_n (s^4 + (4n^2-1) s^6), ds/dz = -cos s^2 / f.
  const HarmonicTable& t = g.table();
  detail::SeriesSum series(g.policy(), detail::SeriesSum::Reference::kMagnitude);
  bool done = false;
  for (int n = 0; n <= t.n_max() && !done; ++n) {
    const double w = detail::neumann_factor(n) * t.ratio(n);
    const double term = w * (4.0 + 6.0 * (4.0 * n * n - 1.0) * s2);
    done = series.add(term, std::abs(term));
  }
  if (!done) series.fail("vdw_force", t.n_max() + 1);

  Evaluation e{0.0, series.diagnostics()};
  if (u.cos == 0.0) return e;
  const double s5 = s2 * s2 * u.sin;
  e.value = -units::kCoulombEvNm * p.d2z / (kPi * f * f * f * f) * u.cos * s5 * series.sum();
  return e;
}

ForceProfile force_profile(std::span<const double> zp, const ParticleModel& p,
                           const AxialGreens& g) {
  ForceProfile out;
  out.zp.assign(zp.begin(), zp.end());
  out.energy.reserve(zp.size());
  out.force.reserve(zp.size());
  out.diagnostics.reserve(zp.size());
  for (double z : zp) {
    const Evaluation u = vdw_energy(z, p, g);
    const Evaluation fz = vdw_force(z, p, g);
    out.energy.push_back(u.value);
    out.force.push_back(fz.value);
    out.diagnostics.push_back(fz.diag.terms > u.diag.terms ? fz.diag : u.diag);
  }
  return out;
}

double find_force_zero(const ParticleModel& p, const AxialGreens& g, double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::kInvalidArgument, "find_force_zero: need a finite bracket lo < hi");
  }
  double f_lo = vdw_force(lo, p, g).value;
  const double f_hi = vdw_force(hi, p, g).value;
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw Error(ErrorCode::kNoRoot,
                "find_force_zero: force does not change sign on [" + std::to_string(lo) +
                    ", " + std::to_string(hi) + "] nm");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = vdw_force(mid, p, g).value;
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double critical_ratio(double zp, double b, const ParticleModel& p, const RatioSearch& search) {
  if (!(zp > 0.0) || !(b > 0.0)) {
    throw Error(ErrorCode::kDomain, "critical_ratio: need z_p > 0 and b > 0");
  }
  if (!(search.ratio_lo > 1.0) || !(search.ratio_hi > search.ratio_lo) ||
      search.scan_points < 2 || !(search.rel_resolution > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "critical_ratio: invalid search range");
  }
  auto repulsive = [&](double ratio) {
    const AxialGreens g(ToroidGeometry::from_radii(ratio * b, b), search.policy);
    return vdw_force(zp, p, g).value > 0.0;
  };

  if (repulsive(search.ratio_lo)) {
    throw RangeExceededError("critical_ratio: force already repulsive at a/b = " +
                                 std::to_string(search.ratio_lo),
                             search.ratio_lo);
  }
  const double log_span = std::log(search.ratio_hi / search.ratio_lo);
  double below = search.ratio_lo;
  double above = std::numeric_limits<double>::quiet_NaN();
  for (int i = 1; i < search.scan_points; ++i) {
    const double r = (i == search.scan_points - 1)
                         ? search.ratio_hi
                         : search.ratio_lo * std::exp(log_span * i / (search.scan_points - 1));
    if (repulsive(r)) {
      above = r;
      break;
    }
    below = r;
  }
  if (std::isnan(above)) {
    throw RangeExceededError("critical_ratio: force still attractive at a/b = " +
                                 std::to_string(search.ratio_hi),
                             search.ratio_hi);
  }
  while ((above - below) > search.rel_resolution * below) {
    const double mid = 0.5 * (below + above);
    if (repulsive(mid)) {
      above = mid;
    } else {
      below = mid;
    }
  }
  return 0.5 * (below + above);
}

ContourGrid sweep_contour(std::span<const double> ratios, std::span<const double> zp_over_b,
                          double b, const ParticleModel& p, TruncationPolicy policy,
                          unsigned threads) {
  if (ratios.empty() || zp_over_b.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "sweep_contour: empty grid");
  }
  if (!(b > 0.0)) throw Error(ErrorCode::kDomain, "sweep_contour: b must be positive");
  for (double r : ratios) {
    if (!(r > 1.0)) {
      throw Error(ErrorCode::kDegenerateToroid, "sweep_contour: every a/b must exceed 1");
    }
  }

  ContourGrid grid;
  grid.b = b;
  grid.ratios.assign(ratios.begin(), ratios.end());
  grid.zp_over_b.assign(zp_over_b.begin(), zp_over_b.end());
  const std::size_t rows = grid.rows();
  const std::size_t cols = grid.cols();
  grid.force.assign(rows * cols, std::numeric_limits<double>::quiet_NaN());
  grid.status.assign(rows * cols, ErrorCode::kOk);

  auto fill_column = [&](std::size_t col) {
    try {
      const AxialGreens g(ToroidGeometry::from_radii(grid.ratios[col] * b, b), policy);
      for (std::size_t row = 0; row < rows; ++row) {
        try {
          grid.force[row * cols + col] = vdw_force(grid.zp_over_b[row] * b, p, g).value;
        } catch (const Error& e) {
          grid.status[row * cols + col] = e.code();
        }
      }
    } catch (const Error& e) {
      for (std::size_t row = 0; row < rows; ++row) grid.status[row * cols + col] = e.code();
    }
  };

  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cols));
  if (workers <= 1) {
    for (std::size_t col = 0; col < cols; ++col) fill_column(col);
    return grid;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t col = next++; col < cols; col = next++) fill_column(col);
    });
  }
  pool.clear();
  return grid;
}

}  // namespace toroid
