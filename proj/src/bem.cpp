#include "toroid/bem.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "toroid/error.hpp"
#include "toroid/specfun.hpp"
#include "toroid/units.hpp"

namespace toroid {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kRegularDepth = 40;
constexpr int kSingularDepth = 30;

struct GaussRule {
  std::array<double, 8> x{};
  std::array<double, 8> w{};

  GaussRule() {
    constexpr int n = 8;
    for (int i = 0; i < n; ++i) {
      double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (t * p1 - p0) / (t * t - 1.0);
        const double step = p1 / dp;
        t -= step;
        if (std::abs(step) < 1e-16) break;
      }
      x[static_cast<std::size_t>(i)] = t;
      w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};

const GaussRule& gauss_rule() {
  static const GaussRule rule;
  return rule;
}

template <class F>
double gauss8(const F& fn, double ta, double tb) {
  const GaussRule& g = gauss_rule();
  const double half = 0.5 * (tb - ta);
  const double mid = 0.5 * (tb + ta);
  double acc = 0.0;
  for (std::size_t i = 0; i < 8; ++i) acc += g.w[i] * fn(mid + half * g.x[i]);
  return half * acc;
}

// Gauss-Legendre on pieces graded towards the nearest approach of the field
// point: a piece is accepted once the distance exceeds twice its arc length.
template <class F, class Dist>
double graded_gauss(const F& fn, const Dist& dist, double ta, double tb, double radius,
                    int depth, int max_depth) {
  const double tm = 0.5 * (ta + tb);
  if (depth >= max_depth || dist(tm) >= 2.0 * radius * (tb - ta)) return gauss8(fn, ta, tb);
  return graded_gauss(fn, dist, ta, tm, radius, depth + 1, max_depth) +
         graded_gauss(fn, dist, tm, tb, radius, depth + 1, max_depth);
}

double xlogx_minus_x(double x) { return x > 0.0 ? x * std::log(x) - x : 0.0; }

// Potential (Coulomb units, e/nm) at (r, z) of a panel carrying unit density:
//   int 2 pi r(t) b * (2/pi) K(m) / D dt = int 4 b r(t) K(m) / D dt.
double panel_integral_regular(const ToroidGeometry& g, const Panel& p, double r, double z) {
  auto kernel = [&](double t) {
    const double rt = g.a + g.b * std::cos(t);
    const double zt = g.b * std::sin(t);
    const double dz = z - zt;
    const double far2 = (r + rt) * (r + rt) + dz * dz;
    const double near2 = (r - rt) * (r - rt) + dz * dz;
    return 4.0 * g.b * rt * elliptic_k_complement(near2 / far2) / std::sqrt(far2);
  };
  auto dist = [&](double t) {
    return std::hypot(r - (g.a + g.b * std::cos(t)), z - g.b * std::sin(t));
  };
  return graded_gauss(kernel, dist, p.t_lo, p.t_hi, g.b, 0, kRegularDepth);
}

// Same integral for a field point on the panel's own arc at tube angle t_star.
// K(m) ~ -ln|t - t*| is cancelled against g(t*) ln|t - t*| and that log is
// integrated in closed form.
double panel_integral_singular(const ToroidGeometry& g, const Panel& p, double t_star) {
  const double r_star = g.a + g.b * std::cos(t_star);
  const double z_star = g.b * std::sin(t_star);
  auto weight = [&](double t) {
    const double rt = g.a + g.b * std::cos(t);
    const double dz = z_star - g.b * std::sin(t);
    return 4.0 * g.b * rt / std::hypot(r_star + rt, dz);
  };
  const double w_star = weight(t_star);
  auto smooth = [&](double t) {
    const double rt = g.a + g.b * std::cos(t);
    const double dz = z_star - g.b * std::sin(t);
    const double far2 = (r_star + rt) * (r_star + rt) + dz * dz;
    const double chord = 2.0 * g.b * std::sin(0.5 * std::abs(t - t_star));
    const double k = elliptic_k_complement(chord * chord / far2);
    return 4.0 * g.b * rt * k / std::sqrt(far2) + w_star * std::log(std::abs(t - t_star));
  };
  auto dist = [&](double t) { return g.b * std::abs(t - t_star); };
  double acc = 0.0;
  if (t_star > p.t_lo) acc += graded_gauss(smooth, dist, p.t_lo, t_star, g.b, 0, kSingularDepth);
  if (t_star < p.t_hi) acc += graded_gauss(smooth, dist, t_star, p.t_hi, g.b, 0, kSingularDepth);
  return acc - w_star * (xlogx_minus_x(t_star - p.t_lo) + xlogx_minus_x(p.t_hi - t_star));
}

// Tube angle of (r, z) if it lies on the toroidal surface and inside the panel.
bool on_panel_arc(const ToroidGeometry& g, const Panel& p, double r, double z, double& t_star) {
  const double rho = std::hypot(r - g.a, z);
  if (std::abs(rho - g.b) > 1e-9 * g.b) return false;
  const double t = std::atan2(z, r - g.a);
  for (double cand : {t, t + 2.0 * kPi, t - 2.0 * kPi}) {
    if (cand >= p.t_lo && cand <= p.t_hi) {
      t_star = cand;
      return true;
    }
  }
  return false;
}

double panel_integral(const ToroidGeometry& g, const Panel& p, double r, double z) {
  double t_star = 0.0;
  if (on_panel_arc(g, p, r, z, t_star)) return panel_integral_singular(g, p, t_star);
  return panel_integral_regular(g, p, r, z);
}

double panel_charge(const ToroidGeometry& g, const Panel& p) {
  // int 2 pi r(t) b dt over the panel
  return 2.0 * kPi * g.b *
         (g.a * (p.t_hi - p.t_lo) + g.b * (std::sin(p.t_hi) - std::sin(p.t_lo)));
}

}  // namespace

BemMesh BemMesh::build(const ToroidGeometry& geometry, int n_panels) {
  if (n_panels < 16) {
    throw Error(ErrorCode::kMesh,
                "build_mesh: need at least 16 panels, got " + std::to_string(n_panels));
  }
  BemMesh mesh;
  mesh.geometry = geometry;
  mesh.panels.reserve(static_cast<std::size_t>(n_panels));
  const double step = 2.0 * kPi / n_panels;
  for (int j = 0; j < n_panels; ++j) {
    Panel p;
    p.t_lo = -kPi + j * step;
    p.t_hi = (j == n_panels - 1) ? kPi : -kPi + (j + 1) * step;
    p.t_mid = 0.5 * (p.t_lo + p.t_hi);
    p.r = geometry.a + geometry.b * std::cos(p.t_mid);
    p.z = geometry.b * std::sin(p.t_mid);
    p.ds = geometry.b * (p.t_hi - p.t_lo);
    p.eta = cartesian_to_toroidal({p.r, 0.0, p.z}, geometry.f).eta;
    mesh.panels.push_back(p);
  }
  return mesh;
}

double BemMesh::total_arc_length() const {
  double total = 0.0;
  for (const Panel& p : panels) total += p.ds;
  return total;
}

double BemMesh::max_arc_length() const {
  double worst = 0.0;
  for (const Panel& p : panels) worst = std::max(worst, p.ds);
  return worst;
}

double ring_potential(double r, double z, double r0, double z0, double charge) {
  const double dz = z - z0;
  const double near2 = (r - r0) * (r - r0) + dz * dz;
  const double far2 = (r + r0) * (r + r0) + dz * dz;
  if (!(near2 > 0.0)) {
    throw Error(ErrorCode::kCoincidentPoints, "ring_potential: field point lies on the ring");
  }
  const double phi = 2.0 / kPi * elliptic_k_complement(near2 / far2) / std::sqrt(far2);
  return units::kCoulombEvNm * charge * phi;
}

struct BemSolver::Factorization {
  Eigen::MatrixXd matrix;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
};

BemSolver::BemSolver(BemMesh mesh) : mesh_(std::make_shared<const BemMesh>(std::move(mesh))) {
  const ToroidGeometry& g = mesh_->geometry;
  const auto n = static_cast<Eigen::Index>(mesh_->panels.size());
  auto fact = std::make_shared<Factorization>();
  fact->matrix.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Panel& col = mesh_->panels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) {
      const Panel& src = mesh_->panels[static_cast<std::size_t>(j)];
      fact->matrix(i, j) = (i == j) ? panel_integral_singular(g, src, col.t_mid)
                                    : panel_integral_regular(g, src, col.r, col.z);
    }
  }
  fact->lu.compute(fact->matrix);
  const double rcond = fact->lu.rcond();
  condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(rcond > 1e-14)) {
    throw SolverError("BEM collocation matrix is ill-conditioned (condition estimate " +
                          std::to_string(condition_) + ")",
                      condition_);
  }
  lu_ = std::move(fact);
}

BemSolution BemSolver::solve(const AxialSource& src) const {
  const ToroidGeometry& g = mesh_->geometry;
  if (!(std::hypot(g.a, src.z) > g.b)) {
    throw Error(ErrorCode::kOutOfRegion, "BEM source must lie outside the conductor");
  }
  const auto n = static_cast<Eigen::Index>(mesh_->panels.size());
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Panel& p = mesh_->panels[static_cast<std::size_t>(i)];
    rhs(i) = -src.charge / std::hypot(p.r, p.z - src.z);
  }
  const Eigen::VectorXd sigma = lu_->lu.solve(rhs);
  const double residual =
      (lu_->matrix * sigma - rhs).lpNorm<Eigen::Infinity>() / rhs.lpNorm<Eigen::Infinity>();
  if (!(residual <= 1e-8)) {
    throw SolverError("BEM solve residual " + std::to_string(residual) + " above 1e-8",
                      condition_);
  }
  BemSolution sol;
  sol.mesh_ = mesh_;
  sol.source_ = src;
  sol.sigma_.assign(sigma.data(), sigma.data() + n);
  sol.residual_ = residual;
  return sol;
}

double BemSolution::total_induced_charge() const {
  double q = 0.0;
  for (std::size_t j = 0; j < sigma_.size(); ++j) {
    q += sigma_[j] * panel_charge(mesh_->geometry, mesh_->panels[j]);
  }
  return q;
}

double BemSolution::coulomb_units(double r, double z) const {
  const ToroidGeometry& g = mesh_->geometry;
  if (std::hypot(r - g.a, z) < g.b * (1.0 - 1e-9)) {
    throw Error(ErrorCode::kOutOfRegion, "bem_vh: field point inside the conductor");
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < sigma_.size(); ++j) {
    acc += sigma_[j] * panel_integral(g, mesh_->panels[j], std::abs(r), z);
  }
  return acc;
}

double BemSolution::vh(double r, double z) const {
  return units::kCoulombEvNm * coulomb_units(r, z);
}

double BemSolution::green(double r, double z) const {
  return coulomb_units(r, z) / (4.0 * kPi * source_.charge);
}

MixedDerivativeEstimate bem_mixed_derivative(double z, double z_prime, const BemSolver& solver,
                                             double step) {
  const double f = solver.mesh().geometry.f;
  if (!(step > 0.0) || !(step < 0.1 * f)) {
    throw Error(ErrorCode::kInvalidArgument,
                "bem_mixed_derivative: step must lie in (0, 0.1 f)");
  }
  auto central = [&](double h) {
    const BemSolution up = solver.solve(AxialSource::on_axis(z_prime + h, f));
    const BemSolution down = solver.solve(AxialSource::on_axis(z_prime - h, f));
    const double g_pp = up.green(0.0, z + h);
    const double g_mp = up.green(0.0, z - h);
    const double g_pm = down.green(0.0, z + h);
    const double g_mm = down.green(0.0, z - h);
    const double scale = std::max({std::abs(g_pp), std::abs(g_mp), std::abs(g_pm), std::abs(g_mm)});
    return std::pair{(g_pp - g_pm - g_mp + g_mm) / (4.0 * h * h), scale};
  };
  const auto [coarse, scale] = central(step);
  const auto [fine, scale_half] = central(0.5 * step);

  MixedDerivativeEstimate out;
  out.value = coarse;
  out.half_step = fine;
  out.richardson = (4.0 * fine - coarse) / 3.0;
  const double change = std::abs(fine - coarse);
  const double roundoff = 1e-13 * std::max(scale, scale_half) / (0.25 * step * step);
  out.accuracy_warning = change > 1e-2 * std::abs(out.richardson) ||
                         roundoff > 1e-3 * std::abs(out.richardson);
  return out;
}

MixedDerivativeEstimate bem_mixed_derivative(double z, double z_prime,
                                             const ToroidGeometry& geometry, int n_panels,
                                             double step) {
  const BemSolver solver(BemMesh::build(geometry, n_panels));
  return bem_mixed_derivative(z, z_prime, solver, step);
}

}  // namespace toroid
