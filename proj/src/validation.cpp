#include "toroid/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "toroid/bem.hpp"
#include "toroid/dispersion.hpp"
#include "toroid/error.hpp"

namespace toroid {
namespace {

constexpr double kPi = std::numbers::pi;

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

CheckResult make(std::string name, double measured, double threshold, std::string detail) {
  return {std::move(name), measured <= threshold, measured, threshold, std::move(detail)};
}

// eps0 V_H / q from the series, both points on the axis.
double series_green(const AxialGreens& g, double z, double z_src) {
  const double f = g.geometry().f;
  const ToroidalCoords field{0.0, axis_eta_from_z(z, f), 0.0};
  return g.vh_dimensionless(field, g.source_at(z_src)).value / (4.0 * kPi * f);
}

double series_mixed_fd(const AxialGreens& g, double z, double zp, double h) {
  auto d = [&](double s) {
    return (series_green(g, z + s, zp + s) - series_green(g, z + s, zp - s) -
            series_green(g, z - s, zp + s) + series_green(g, z - s, zp - s)) /
           (4.0 * s * s);
  };
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

CheckResult expansion_identity(const AxialGreens& g, std::mt19937_64& rng) {
  const double f = g.geometry().f;
  std::uniform_real_distribution<double> xi_dist(0.05, 3.0);
  std::uniform_real_distribution<double> eta_dist(-kPi, kPi);
  std::uniform_real_distribution<double> src_dist(-3.0, 3.0);
  double worst = 0.0;
  int used = 0;
  while (used < 100) {
    const ToroidalCoords c{xi_dist(rng), eta_dist(rng), 0.0};
    const AxialSource src = g.source_at(src_dist(rng) * f);
    const Cartesian p = toroidal_to_cartesian(c, f);
    const double direct = std::hypot(std::hypot(p.x, p.y), p.z - src.z);
    if (direct < 1e-3 * f) continue;
    worst = std::max(worst, rel_err(g.inverse_distance(c, src).value, 1.0 / direct));
    ++used;
  }
  return make("expansion identity", worst, 1e-10, "100 random points, 0.05 <= xi <= 3");
}

CheckResult surface_residual(const AxialGreens& g) {
  const double f = g.geometry().f;
  double worst = 0.0;
  for (double zs : {0.0, f, 3.0 * f}) {
    worst = std::max(worst, g.surface_residual(g.source_at(zs), 256));
  }
  const double threshold = std::max(1e-8, 100.0 * g.policy().rel_tol);
  return make("surface residual", worst, threshold, "sources z' = 0, f, 3f; 256 surface points");
}

CheckResult bem_vs_series(const AxialGreens& g, const BemSolver& solver, std::mt19937_64& rng) {
  const ToroidGeometry& geo = g.geometry();
  const AxialSource src = g.source_at(0.5 * geo.f);
  const BemSolution sol = solver.solve(src);
  std::uniform_real_distribution<double> r_dist(0.0, geo.a + 3.0 * geo.b);
  std::uniform_real_distribution<double> z_dist(-3.0 * geo.b, 3.0 * geo.b);
  double worst = 0.0;
  int used = 0;
  while (used < 20) {
    const double r = r_dist(rng);
    const double z = z_dist(rng);
    if (std::hypot(r - geo.a, z) < 1.3 * geo.b) continue;
    const ToroidalCoords c = cartesian_to_toroidal({r, 0.0, z}, geo.f);
    worst = std::max(worst, rel_err(sol.vh(r, z), g.vh_potential(c, src).value));
    ++used;
  }
  return make("BEM vs series", worst, 1e-3,
              fmt::format("20 exterior points, {} panels, source z' = f/2", solver.mesh().panels.size()));
}

CheckResult mixed_vs_series_fd(const AxialGreens& g) {
  const double f = g.geometry().f;
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double z = (-1.5 + 0.3 * i) * f;
    const double zp = (0.2 + 0.15 * i) * f;
    const double analytic = gh_mixed_derivative(z, zp, g).value;
    worst = std::max(worst, rel_err(series_mixed_fd(g, z, zp, 1e-2 * f), analytic));
  }
  return make("mixed derivative vs series FD", worst, 1e-6,
              "10 axial pairs, Richardson of steps f/100, f/200");
}

CheckResult mixed_vs_bem(const AxialGreens& g, const BemSolver& solver) {
  const double f = g.geometry().f;
  double worst = 0.0;
  int warnings = 0;
  for (double zp : {0.25 * f, 0.6 * f}) {
    const MixedDerivativeEstimate est = bem_mixed_derivative(zp, zp, solver, 1e-2 * f);
    worst = std::max(worst, rel_err(est.richardson, gh_mixed_derivative(zp, zp, g).value));
    warnings += est.accuracy_warning ? 1 : 0;
  }
  return make("mixed derivative vs BEM", worst, 1e-2,
              fmt::format("z = z' in {{f/4, 0.6 f}}, {} step warnings", warnings));
}

CheckResult force_vs_energy(const AxialGreens& g) {
  const double f = g.geometry().f;
  const ParticleModel p{};
  double worst = 0.0;
  for (int i = 1; i <= 10; ++i) {
    const double zp = 0.3 * i * f;
    const double h = 1e-3 * f;
    const double slope = (vdw_energy(zp + h, p, g).value - vdw_energy(zp - h, p, g).value) / (2.0 * h);
    const double slope_half =
        (vdw_energy(zp + 0.5 * h, p, g).value - vdw_energy(zp - 0.5 * h, p, g).value) / h;
    const double dudz = (4.0 * slope_half - slope) / 3.0;
    const double force = vdw_force(zp, p, g).value;
    const double scale = std::max(std::abs(force), 1e-3 * std::abs(vdw_energy(zp, p, g).value) / f);
    worst = std::max(worst, std::abs(force + dudz) / scale);
  }
  return make("force vs energy slope", worst, 1e-6, "10 points 0.3 f .. 3 f");
}

CheckResult far_field_slope(const AxialGreens& g) {
  const double a = g.geometry().a;
  const ParticleModel p{};
  constexpr int kPoints = 21;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < kPoints; ++i) {
    const double zp = 50.0 * a * std::pow(10.0, static_cast<double>(i) / (kPoints - 1));
    const double x = std::log(zp);
    const double y = std::log(std::abs(vdw_energy(zp, p, g).value));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (kPoints * sxy - sx * sy) / (kPoints * sxx - sx * sx);
  CheckResult c = make("far-field slope", std::abs(slope + 4.0), 0.05,
                       fmt::format("log-log slope {:.6f} over [50a, 500a]", slope));
  return c;
}

template <class F>
CheckResult guarded(const char* name, F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return {name, false, std::nan(""), 0.0, fmt::format("{}: {}", to_string(e.code()), e.what())};
  }
}

}  // namespace

bool ValidationReport::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

ValidationReport run_validation(const ValidationConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const AxialGreens g(ToroidGeometry::from_radii(cfg.a, cfg.b), cfg.policy);
  std::mt19937_64 rng(cfg.seed);

  ValidationReport report;
  report.checks.push_back(guarded("expansion identity", [&] { return expansion_identity(g, rng); }));
  report.checks.push_back(guarded("surface residual", [&] { return surface_residual(g); }));

  std::unique_ptr<BemSolver> solver;
  const CheckResult assembly = guarded("BEM assembly", [&] {
    solver = std::make_unique<BemSolver>(BemMesh::build(g.geometry(), cfg.n_panels));
    return make("BEM assembly", 0.0, 0.0,
                fmt::format("condition estimate {:.3e}", solver->condition_estimate()));
  });
  if (!solver) {
    report.checks.push_back(assembly);
  } else {
    report.checks.push_back(guarded("BEM vs series", [&] { return bem_vs_series(g, *solver, rng); }));
    report.checks.push_back(guarded("mixed derivative vs BEM", [&] { return mixed_vs_bem(g, *solver); }));
  }
  report.checks.push_back(guarded("mixed derivative vs series FD", [&] { return mixed_vs_series_fd(g); }));
  report.checks.push_back(guarded("force vs energy slope", [&] { return force_vs_energy(g); }));
  report.checks.push_back(guarded("far-field slope", [&] { return far_field_slope(g); }));

  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace toroid
