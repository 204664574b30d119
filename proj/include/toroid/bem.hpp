#pragma once

#include <memory>
#include <span>
#include <vector>

#include "toroid/geometry.hpp"
#include "toroid/greens.hpp"

namespace toroid {

/// One axisymmetric ring panel: the arc t in [t_lo, t_hi] of the meridian
/// circle (r, z) = (a + b cos t, b sin t), collocated at its midpoint.
struct Panel {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double t_mid = 0.0;
  double eta = 0.0;  // toroidal eta of the collocation point
  double r = 0.0;
  double z = 0.0;
  double ds = 0.0;   // meridian arc length
};

struct BemMesh {
  ToroidGeometry geometry;
  std::vector<Panel> panels;

  /// Uniform panels in the tube angle (equal arc lengths). n_panels >= 16.
  static BemMesh build(const ToroidGeometry& geometry, int n_panels);

  double total_arc_length() const;
  double max_arc_length() const;
};

/// Potential (V) at (r, z) of a uniformly charged ring of radius r0 at height
/// z0 carrying `charge` elementary charges. Throws kCoincidentPoints on the ring.
double ring_potential(double r, double z, double r0, double z0, double charge);

class BemSolution;

/// Collocation matrix of a mesh, LU-factored once and reused for every source.
class BemSolver {
 public:
  explicit BemSolver(BemMesh mesh);

  const BemMesh& mesh() const noexcept { return *mesh_; }
  double condition_estimate() const noexcept { return condition_; }

  /// Induced surface density for a grounded toroid and an axial point charge.
  BemSolution solve(const AxialSource& src) const;

 private:
  struct Factorization;

  std::shared_ptr<const BemMesh> mesh_;
  std::shared_ptr<const Factorization> lu_;
  double condition_ = 0.0;
};

class BemSolution {
 public:
  const BemMesh& mesh() const noexcept { return *mesh_; }
  const AxialSource& source() const noexcept { return source_; }
  std::span<const double> sigma() const noexcept { return sigma_; }  // e / nm^2
  double residual() const noexcept { return residual_; }

  /// Net charge induced on the toroid, in e.
  double total_induced_charge() const;

  /// Induced potential in volts at (r, z). Points inside the tube are rejected.
  double vh(double r, double z) const;

  /// Homogeneous Green's function eps0 V_H / q at (r, z), nm^-1.
  double green(double r, double z) const;

 private:
  friend class BemSolver;
  BemSolution() = default;

  double coulomb_units(double r, double z) const;

  std::shared_ptr<const BemMesh> mesh_;
  AxialSource source_;
  std::vector<double> sigma_;
  double residual_ = 0.0;
};

struct MixedDerivativeEstimate {
  double value = 0.0;       // central difference with the requested step
  double half_step = 0.0;   // same with step / 2
  double richardson = 0.0;  // (4 * half_step - value) / 3
  bool accuracy_warning = false;
};

/// d^2 G_H / dz dz' on the axis by four-point central differences of BEM
/// solutions, with a Richardson check between step and step / 2.
MixedDerivativeEstimate bem_mixed_derivative(double z, double z_prime, const BemSolver& solver,
                                             double step);
MixedDerivativeEstimate bem_mixed_derivative(double z, double z_prime,
                                             const ToroidGeometry& geometry, int n_panels,
                                             double step);

}  // namespace toroid
