#include "toroid/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "toroid/error.hpp"

namespace toroid {
namespace {

constexpr double kPi = std::numbers::pi;

double wrap_eta(double eta) {
  double w = std::remainder(eta, 2.0 * kPi);  // [-pi, pi]
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

double wrap_phi(double phi) {
  double w = std::fmod(phi, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  if (w >= 2.0 * kPi) w = 0.0;
  return w;
}

}  // namespace

ToroidGeometry ToroidGeometry::from_radii(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::kDomain, "toroid radii must be positive and finite (a = " +
                                        std::to_string(a) + ", b = " + std::to_string(b) +
                                        ")");
  }
  if (a <= b) {
    throw Error(ErrorCode::kDegenerateToroid,
                "degenerate toroid: need a > b (a = " + std::to_string(a) +
                    ", b = " + std::to_string(b) + ")");
  }
  ToroidGeometry g;
  g.a = a;
  g.b = b;
  g.f = std::sqrt((a - b) * (a + b));
  g.cosh_xi0 = a / b;
  const double t = (a - b) / b;
  g.xi0 = std::log1p(t + std::sqrt(t * (t + 2.0)));
  return g;
}

ToroidalCoords ToroidalCoords::normalized(double xi, double eta, double phi) {
  if (!(xi >= 0.0) || !std::isfinite(eta) || !std::isfinite(phi)) {
    throw Error(ErrorCode::kDomain, "toroidal coordinates need xi >= 0 and finite angles");
  }
  return {xi, wrap_eta(eta), wrap_phi(phi)};
}

double toroidal_denominator(double xi, double eta) {
  const double sh = std::sinh(0.5 * xi);
  const double s = std::sin(0.5 * eta);
  return 2.0 * (sh * sh + s * s);
}

Cartesian toroidal_to_cartesian(const ToroidalCoords& c, double f) {
  const double den = toroidal_denominator(c.xi, c.eta);
  if (!(den > 0.0) || !std::isfinite(c.xi)) {
    throw Error(ErrorCode::kCoordinateSingularity,
                "toroidal (xi, eta) = (0, 0) is the point at infinity");
  }
  const double r = f * std::sinh(c.xi) / den;
  return {r * std::cos(c.phi), r * std::sin(c.phi), f * std::sin(c.eta) / den};
}

ToroidalCoords cartesian_to_toroidal(const Cartesian& p, double f) {
  const double r = std::hypot(p.x, p.y);
  const double near2 = (r - f) * (r - f) + p.z * p.z;
  if (!(near2 > 0.0)) {
    throw Error(ErrorCode::kCoordinateSingularity,
                "point lies on the focal ring r = f, z = 0");
  }
  // xi = ln(d_far / d_near); d_far^2 - d_near^2 = 4 f r.
  const double xi = 0.5 * std::log1p(4.0 * f * r / near2);
  const double eta = std::atan2(2.0 * f * p.z, r * r + p.z * p.z - f * f);
  const double phi = (r > 0.0) ? std::atan2(p.y, p.x) : 0.0;
  return ToroidalCoords::normalized(xi, eta, phi);
}

double metric_coefficient(const ToroidalCoords& c, double f) {
  const double den = toroidal_denominator(c.xi, c.eta);
  if (!(den > 0.0)) {
    throw Error(ErrorCode::kCoordinateSingularity,
                "metric coefficient is singular at (xi, eta) = (0, 0)");
  }
  return f / den;
}

double axis_eta_from_z(double z, double f) {
  if (!(f > 0.0)) {
    throw Error(ErrorCode::kDomain, "axis_eta_from_z: focal radius must be positive");
  }
  // odd in z bit for bit, so mirrored sources give mirrored results exactly
  return z < 0.0 ? -2.0 * std::atan2(f, -z) : 2.0 * std::atan2(f, z);
}

}  // namespace toroid
