#pragma once

namespace toroid {

/// A torus of centre-circle radius a and tube radius b (nm) together with the
/// toroidal-coordinate parameters that place its surface at xi = xi0.
struct ToroidGeometry {
  double a = 0.0;
  double b = 0.0;
  double f = 0.0;  // focal ring radius, sqrt(a^2 - b^2)
  double xi0 = 0.0;
  double cosh_xi0 = 1.0;  // a / b

  /// Throws kDomain for non-positive radii, kDegenerateToroid for a <= b.
  static ToroidGeometry from_radii(double a, double b);
};

/// Toroidal coordinates with xi >= 0, eta in (-pi, pi], phi in [0, 2 pi).
struct ToroidalCoords {
  double xi = 0.0;
  double eta = 0.0;
  double phi = 0.0;

  /// Wraps eta and phi into their principal ranges; rejects negative xi.
  static ToroidalCoords normalized(double xi, double eta, double phi = 0.0);
};

struct Cartesian {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Throws kCoordinateSingularity at (xi, eta) = (0, 0), the point at infinity.
Cartesian toroidal_to_cartesian(const ToroidalCoords& c, double f);

/// Throws kCoordinateSingularity on the focal ring r = f, z = 0.
ToroidalCoords cartesian_to_toroidal(const Cartesian& p, double f);

/// Scale factor h_xi = h_eta = f / (cosh xi - cos eta).
double metric_coefficient(const ToroidalCoords& c, double f);

/// eta of the on-axis point at height z: 2 * (angle in (0, pi) with cot = z/f),
/// reduced to (-pi, pi]. z = 0 gives pi.
double axis_eta_from_z(double z, double f);

/// cosh xi - cos eta computed without cancellation.
double toroidal_denominator(double xi, double eta);

}  // namespace toroid
