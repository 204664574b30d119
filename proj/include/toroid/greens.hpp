#pragma once

#include <memory>

#include "toroid/geometry.hpp"
#include "toroid/specfun.hpp"

namespace toroid {

/// Adaptive truncation of the harmonic series: stop once rel_tol holds for
/// three consecutive terms, never sum past n_cap.
struct TruncationPolicy {
  double rel_tol = 1e-12;
  int n_cap = 2000;
};

struct SeriesDiagnostics {
  int terms = 0;
  double tail_bound = 0.0;   // last term envelope relative to the reference scale
  bool far_source = false;   // source beyond 1e6 f, value reported as 0
};

struct Evaluation {
  double value = 0.0;
  SeriesDiagnostics diag;
};

/// A point charge on the symmetry axis (xi' = 0).
struct AxialSource {
  double z = 0.0;               // nm
  double eta = 0.0;             // toroidal eta of the source
  double one_minus_cos = 2.0;   // 1 - cos(eta'), = 2 f^2 / (f^2 + z^2)
  double charge = 1.0;          // elementary charges

  static AxialSource on_axis(double z, double f, double charge = 1.0);
};

/// Sources further than this many focal radii are treated as at infinity.
inline constexpr double kFarSourceFactor = 1e6;

/// Induced-charge potential of a grounded toroid for axial sources.
///
/// Holds the geometry and the Q/P table at cosh xi0. Copies share a
/// thread-safe cache of harmonic tables keyed by field-point argument, so an
/// AxialGreens may be used concurrently from several threads.
class AxialGreens {
 public:
  explicit AxialGreens(const ToroidGeometry& geometry, TruncationPolicy policy = {});

  const ToroidGeometry& geometry() const noexcept { return geometry_; }
  const TruncationPolicy& policy() const noexcept { return policy_; }
  const HarmonicTable& table() const noexcept { return *table_; }

  AxialSource source_at(double z, double charge = 1.0) const {
    return AxialSource::on_axis(z, geometry_.f, charge);
  }

  /// 1/|r - r'| (nm^-1) from the toroidal expansion about an axial source.
  /// Field points on the axis itself are rejected: every Q_{n-1/2}(1) diverges.
  Evaluation inverse_distance(const ToroidalCoords& field, const AxialSource& src) const;

  /// V_H in units of q / (4 pi eps0 f).
  Evaluation vh_dimensionless(const ToroidalCoords& field, const AxialSource& src) const;

  /// V_H in volts for the source charge in elementary charges.
  Evaluation vh_potential(const ToroidalCoords& field, const AxialSource& src) const;

  /// q V_H at the source's own position, in eV. No 1/2: this is the
  /// charge / induced-charge interaction, not the total field energy.
  Evaluation charge_interaction_energy(double z_src, double charge = 1.0) const;

  /// Max over n_samples surface points of |V_coulomb + V_H| / |V_coulomb|.
  double surface_residual(const AxialSource& src, int n_samples) const;

 private:
  struct Cache;

  std::shared_ptr<const HarmonicTable> field_table(double cosh_xi) const;

  ToroidGeometry geometry_;
  TruncationPolicy policy_;
  std::shared_ptr<const HarmonicTable> table_;
  std::shared_ptr<Cache> cache_;
};

}  // namespace toroid
