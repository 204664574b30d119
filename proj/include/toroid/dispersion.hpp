#pragma once

#include <span>
#include <vector>

#include "toroid/error.hpp"
#include "toroid/greens.hpp"

namespace toroid {

enum class DipoleUnit {
  kElementaryChargeNm,  // (e nm)^2
  kDebye,               // D^2
  kCoulombMetre,        // (C m)^2
};

/// An axially polarizable particle: only <d_z^2> is non-zero.
struct ParticleModel {
  double d2z = 1.0;  // (e nm)^2

  static ParticleModel axial(double d2z, DipoleUnit unit = DipoleUnit::kElementaryChargeNm);

  /// Rejects any transverse fluctuation with kUnsupported; the on-axis
  /// dispersion result only covers the <d_z^2> channel.
  static ParticleModel from_components(double d2x, double d2y, double d2z,
                                       DipoleUnit unit = DipoleUnit::kElementaryChargeNm);
};

/// d^2 G_H / dz dz' for two axial points, nm^-3, where G_H = eps0 V_H / q.
Evaluation gh_mixed_derivative(double z, double z_prime, const AxialGreens& g);

/// Non-retarded dispersion energy U_NR(z_p) in eV. Negative and even in z_p.
Evaluation vdw_energy(double zp, const ParticleModel& p, const AxialGreens& g);

/// Axial force F_z = -dU_NR/dz_p in eV/nm. Odd in z_p; positive values at
/// z_p > 0 push the particle away from the centre.
Evaluation vdw_force(double zp, const ParticleModel& p, const AxialGreens& g);

struct ForceProfile {
  std::vector<double> zp;
  std::vector<double> energy;
  std::vector<double> force;
  std::vector<SeriesDiagnostics> diagnostics;
};

ForceProfile force_profile(std::span<const double> zp, const ParticleModel& p,
                           const AxialGreens& g);

/// Bisection for the sign change of F_z inside [lo, hi]. kNoRoot when the
/// force has the same sign at both ends.
double find_force_zero(const ParticleModel& p, const AxialGreens& g, double lo, double hi);

struct RatioSearch {
  double ratio_lo = 1.01;
  double ratio_hi = 1000.0;
  double rel_resolution = 1e-4;
  int scan_points = 240;
  TruncationPolicy policy{};
};

/// Smallest a/b at which the force at z_p turns repulsive for tube radius b.
/// kRangeExceeded (bound attached) when the threshold is outside the search range.
double critical_ratio(double zp, double b, const ParticleModel& p, const RatioSearch& search = {});

/// F_z over an (a/b) x (z_p/b) grid at fixed b. Rows follow zp_over_b,
/// columns follow ratios. Cell failures are recorded, not thrown.
struct ContourGrid {
  double b = 1.0;
  std::vector<double> ratios;
  std::vector<double> zp_over_b;
  std::vector<double> force;       // row-major, rows x cols
  std::vector<ErrorCode> status;   // kOk where the cell evaluated

  std::size_t rows() const noexcept { return zp_over_b.size(); }
  std::size_t cols() const noexcept { return ratios.size(); }
  double at(std::size_t row, std::size_t col) const { return force.at(row * cols() + col); }
};

ContourGrid sweep_contour(std::span<const double> ratios, std::span<const double> zp_over_b,
                          double b, const ParticleModel& p, TruncationPolicy policy = {},
                          unsigned threads = 0);

}  // namespace toroid
