// Acceptance gate: one PASS/FAIL line per criterion, tolerances fixed here.
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cli_runner.hpp"
#include "support.hpp"
#include "toroid/bem.hpp"
#include "toroid/dispersion.hpp"
#include "toroid/error.hpp"

using namespace toroid;
using testing::Csv;
using testing::rel_err;
using testing::run_cli;

namespace {

constexpr double kPi = std::numbers::pi;
const ParticleModel kUnit{};

struct Outcome {
  bool passed;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

AxialGreens ring(double a, double b) { return AxialGreens(ToroidGeometry::from_radii(a, b)); }

Outcome expansion_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  const AxialGreens g = ring(5.0, 1.0);
  const double f = g.geometry().f;
  testing::Gen gen(101);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ToroidalCoords c{gen.uniform(0.05, 3.0), gen.uniform(-kPi, kPi), 0.0};
    const AxialSource src = g.source_at(gen.uniform(-3.0, 3.0) * f);
    const Cartesian p = toroidal_to_cartesian(c, f);
    worst = std::max(worst, rel_err(g.inverse_distance(c, src).value,
                                     1.0 / std::hypot(p.x, p.z - src.z)));
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-10 && t < 5.0,
          fmt::format("max rel err {:.2e} <= 1e-10 at 100 points, {:.2f} s < 5 s", worst, t)};
}

Outcome grounded_bc() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double ratio : {5.0 / 3.0, 2.5, 5.0}) {
    const AxialGreens g = ring(ratio, 1.0);
    const double f = g.geometry().f;
    for (double zs : {0.0, f, 3.0 * f}) {
      worst = std::max(worst, g.surface_residual(g.source_at(zs), 256));
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-8 && t < 5.0,
          fmt::format("max surface residual {:.2e} <= 1e-8, a/b in {{5/3, 2.5, 5}}, z' in {{0, f, 3f}}, "
                      "{:.2f} s < 5 s",
                      worst, t)};
}

double bem_error(const AxialGreens& g, int n_panels, std::uint64_t seed) {
  const ToroidGeometry& geo = g.geometry();
  const AxialSource src = g.source_at(0.5 * geo.f);
  const BemSolution sol = BemSolver(BemMesh::build(geo, n_panels)).solve(src);
  testing::Gen gen(seed);
  double worst = 0.0;
  int used = 0;
  while (used < 20) {
    const double r = gen.uniform(0.0, geo.a + 3.0 * geo.b);
    const double z = gen.uniform(-3.0 * geo.b, 3.0 * geo.b);
    if (std::hypot(r - geo.a, z) < 1.2 * geo.b) continue;
    const ToroidalCoords c = cartesian_to_toroidal({r, 0.0, z}, geo.f);
    worst = std::max(worst, rel_err(sol.vh(r, z), g.vh_potential(c, src).value));
    ++used;
  }
  return worst;
}

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0, worst_order = 1e300;
  for (double ratio : {5.0 / 3.0, 2.5, 5.0}) {
    const AxialGreens g = ring(ratio, 1.0);
    const double e100 = bem_error(g, 100, 102);
    const double e400 = bem_error(g, 400, 102);
    worst = std::max(worst, e400);
    worst_order = std::min(worst_order, std::log2(e100 / e400) / 2.0);
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-3 && worst_order >= 1.0 && t < 60.0,
          fmt::format("max rel err {:.2e} <= 1e-3 at 400 panels, observed order {:.2f} >= 1, "
                      "{:.2f} s < 60 s",
                      worst, worst_order, t)};
}

Outcome mixed_derivative() {
  const AxialGreens g = ring(5.0, 1.0);
  const double f = g.geometry().f;
  auto green = [&](double z, double zs) {
    return g.vh_dimensionless({0.0, axis_eta_from_z(z, f), 0.0}, g.source_at(zs)).value /
           (4.0 * kPi * f);
  };
  auto stencil = [&](double z, double zs, double h) {
    return (green(z + h, zs + h) - green(z + h, zs - h) - green(z - h, zs + h) +
            green(z - h, zs - h)) /
           (4.0 * h * h);
  };
  double worst_fd = 0.0, worst_bem = 0.0;
  const BemSolver solver(BemMesh::build(g.geometry(), 400));
  for (int i = 0; i < 10; ++i) {
    const double z = (-1.2 + 0.3 * i) * f;
    const double zp = (0.1 + 0.2 * i) * f;
    const double h = 1e-2 * f;
    const double fd = (4.0 * stencil(z, zp, 0.5 * h) - stencil(z, zp, h)) / 3.0;
    worst_fd = std::max(worst_fd, rel_err(fd, gh_mixed_derivative(z, zp, g).value));
    const double zb = (0.05 + 0.1 * i) * f;
    const auto est = bem_mixed_derivative(zb, zb, solver, 1e-3 * f);
    worst_bem = std::max(worst_bem, rel_err(est.value, gh_mixed_derivative(zb, zb, g).value));
  }
  return {worst_fd <= 1e-6 && worst_bem <= 1e-2,
          fmt::format("(a) series FD {:.2e} <= 1e-6, (b) BEM FD {:.2e} <= 1e-2, 10 points each",
                      worst_fd, worst_bem)};
}

Outcome symmetry() {
  int violations = 0;
  for (double ratio : {1.5, 3.0, 5.0, 20.0}) {
    const AxialGreens g = ring(ratio, 1.0);
    for (int i = 0; i <= 200; ++i) {
      const double z = 0.05 * i;
      const double u = vdw_energy(z, kUnit, g).value;
      const double fz = vdw_force(z, kUnit, g).value;
      if (!(u < 0.0)) ++violations;
      if (vdw_energy(-z, kUnit, g).value != u) ++violations;
      if (vdw_force(-z, kUnit, g).value != -fz) ++violations;
    }
    if (vdw_force(0.0, kUnit, g).value != 0.0) ++violations;
  }
  return {violations == 0,
          fmt::format("{} violations of U even, U < 0, F odd, F(0) = 0 (exact) on 4 x 201 points",
                      violations)};
}

Outcome repulsion() {
  const AxialGreens thin = ring(5.0, 1.0);
  const double z_star = find_force_zero(kUnit, thin, 0.1, 10.0);
  bool positive = true;
  for (int i = 1; i < 100; ++i) positive &= vdw_force(z_star * i / 100.0, kUnit, thin).value > 0.0;
  const bool z_ok = rel_err(z_star, 2.57147437823625447) < 1e-10;

  bool no_root = false;
  try {
    (void)find_force_zero(kUnit, ring(5.0, 4.9), 1e-3, 100.0);
  } catch (const Error& e) {
    no_root = e.code() == ErrorCode::kNoRoot;
  }

  RatioSearch search;
  search.rel_resolution = 1e-10;
  const double golden[] = {3.55276688908234861, 4.39835037869895555, 5.48474799752996355};
  double prev = 0.0, worst = 0.0;
  bool increasing = true;
  for (int k = 0; k < 3; ++k) {
    const double r = critical_ratio(k + 1.0, 1.0, kUnit, search);
    increasing &= r > prev;
    worst = std::max(worst, rel_err(r, golden[k]));
    prev = r;
  }
  return {positive && z_ok && no_root && increasing && worst < 1e-8,
          fmt::format("z* = {:.12g} nm (golden 2.57147437824, F > 0 below: {}), a/b = 1.0204 no "
                      "root: {}, critical a/b increasing: {}, max dev {:.1e} < 1e-8",
                      z_star, positive, no_root, increasing, worst)};
}

Outcome far_field() {
  const AxialGreens g = ring(5.0, 1.0);
  constexpr int kPoints = 31;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < kPoints; ++i) {
    const double zp = 50.0 * 5.0 * std::pow(10.0, static_cast<double>(i) / (kPoints - 1));
    const double x = std::log(zp);
    const double y = std::log(-vdw_energy(zp, kUnit, g).value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (kPoints * sxy - sx * sy) / (kPoints * sxx - sx * sx);
  return {std::abs(slope + 4.0) <= 0.05,
          fmt::format("log-log slope {:.5f} = -4 +- 0.05 over [50a, 500a]", slope)};
}

Outcome scale_covariance() {
  const double lambda = 2.0;
  const AxialGreens g1 = ring(5.0, 1.0);
  const AxialGreens g2 = ring(lambda * 5.0, lambda * 1.0);
  double dev_u = 0.0, dev_f = 0.0, exp_u = 0.0, exp_f = 0.0;
  for (double zp : {0.7, 1.9, 4.0}) {
    const double ru = vdw_energy(lambda * zp, kUnit, g2).value / vdw_energy(zp, kUnit, g1).value;
    const double rf = vdw_force(lambda * zp, kUnit, g2).value / vdw_force(zp, kUnit, g1).value;
    dev_u = std::max(dev_u, rel_err(ru, std::pow(lambda, -4.0)));
    dev_f = std::max(dev_f, rel_err(rf, std::pow(lambda, -5.0)));
    exp_u = std::log(ru) / std::log(lambda);
    exp_f = std::log(rf) / std::log(lambda);
  }
  return {dev_u <= 1e-10 && dev_f <= 1e-10,
          fmt::format("expected U ~ lambda^-4, F ~ lambda^-5 to 1e-10; measured exponents "
                      "U {:.10f}, F {:.10f} (rel dev {:.2e}, {:.2e})",
                      exp_u, exp_f, dev_u, dev_f)};
}

Outcome curve_shapes() {
  std::vector<std::string> failures;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };

  // axis cut, source at the origin and off centre
  const auto pot = run_cli("potential --a 5 --b 1 --zmin -15 --zmax 15 --zpoints 61");
  expect(pot.exit_code == 0, "potential exit");
  if (pot.exit_code == 0) {
    const Csv c(pot.out);
    expect(c.value(30, "VH_norm") == -1.0, "axis potential normalised to -1 at origin");
    bool even = true, peak = true;
    for (std::size_t i = 0; i < c.rows(); ++i) {
      even &= c.value(i, "VH_V") == c.value(c.rows() - 1 - i, "VH_V");
      peak &= std::abs(c.value(i, "VH_V")) <= std::abs(c.value(30, "VH_V"));
    }
    expect(even, "axis potential even");
    expect(peak, "axis potential peaks at origin");
  }
  const auto skew = run_cli("potential --a 5 --b 1 --source-z 4 --zmin -15 --zmax 15 --zpoints 61");
  if (skew.exit_code == 0) {
    const Csv c(skew.out);
    std::size_t at = 0;
    for (std::size_t i = 0; i < c.rows(); ++i) {
      if (std::abs(c.value(i, "VH_V")) > std::abs(c.value(at, "VH_V"))) at = i;
    }
    expect(c.value(at, "z_nm") > 0.0, "off-centre axis potential skewed towards the source");
  } else {
    expect(false, "potential (off-centre) exit");
  }
  // plane cut, a = 4 nm
  const auto plane = run_cli("potential --a 4 --b 1 --cut plane --zpoints 41");
  if (plane.exit_code == 0) {
    const Csv c(plane.out);
    bool even = true;
    for (std::size_t i = 0; i < c.rows(); ++i) {
      even &= c.value(i, "VH_V") == c.value(c.rows() - 1 - i, "VH_V");
    }
    expect(even && c.value(20, "VH_norm") == -1.0, "plane potential even in r, -1 at origin");
  } else {
    expect(false, "potential (plane) exit");
  }
  const auto ce = run_cli("charge-energy --a 5 --b 1 --zmin -15 --zmax 15 --zpoints 61");
  if (ce.exit_code == 0) {
    const Csv c(ce.out);
    bool ok = c.value(30, "U_norm") == -1.0;
    for (std::size_t i = 31; i < c.rows(); ++i) {
      ok &= std::abs(c.value(i, "U_norm")) < std::abs(c.value(i - 1, "U_norm"));
      ok &= c.value(i, "U_eV") == c.value(60 - i, "U_eV");
    }
    expect(ok, "charge energy -1 at origin, even, |U| decreasing");
  } else {
    expect(false, "charge-energy exit");
  }
  // energy and force tables
  auto vdw_shape = [&](const std::string& args, bool want_repulsion) {
    const auto r = run_cli("vdw " + args + " --zmin -15 --zmax 15 --zpoints 301");
    if (r.exit_code != 0) return false;
    const Csv c(r.out);
    bool ok = c.value(150, "F_eV_per_nm") == 0.0;
    bool repulsive = false;
    for (std::size_t i = 0; i < c.rows(); ++i) {
      ok &= c.value(i, "U_eV") < 0.0;
      ok &= c.value(i, "U_eV") == c.value(300 - i, "U_eV");
      ok &= c.value(i, "F_eV_per_nm") == -c.value(300 - i, "F_eV_per_nm");
      if (i > 150 && c.value(i, "F_eV_per_nm") > 0.0) repulsive = true;
    }
    return ok && repulsive == want_repulsion;
  };
  expect(vdw_shape("--a 5 --b 1", true), "thin ring repulsive near centre");
  expect(vdw_shape("--a 5 --b 4.9", false), "thick toroid attractive everywhere");
  // critical ratio sweep
  const auto sweep = run_cli("sweep-ratio --b 1 --ratio-min 1.5 --ratio-max 10 --ratio-points 171 "
                             "--format json");
  if (sweep.exit_code == 0) {
    const auto doc = nlohmann::json::parse(sweep.out);
    double prev = 0.0;
    bool ok = true;
    for (const auto& c : doc["diagnostics"]["crossings"]) {
      ok &= c["crossing_ratio"].is_number() && c["crossing_ratio"].get<double>() > prev;
      if (c["crossing_ratio"].is_number()) prev = c["crossing_ratio"].get<double>();
    }
    for (std::size_t k = 0; k < 3; ++k) ok &= doc["rows"].back()[1 + 2 * k].get<double>() > 0.0;
    expect(ok, "ratio sweep crossings increasing and repulsive at large a/b");
  } else {
    expect(false, "sweep-ratio exit");
  }
  // cuts of the contour equal the vdw tables, antisymmetric in z_p
  const auto contour = run_cli("contour --b 1 --ratio-min 2 --ratio-max 8 --ratio-points 4 "
                               "--zmin -3 --zmax 3 --zpoints 7");
  const auto cut = run_cli("vdw --a 8 --b 1 --zmin -3 --zmax 3 --zpoints 7 --quantity force");
  if (contour.exit_code == 0 && cut.exit_code == 0) {
    const auto lines = testing::split(contour.out, "\r\n");
    const Csv c(cut.out);
    bool ok = lines.size() == 8 && lines[0].rfind("4,", 0) == 0;
    for (std::size_t i = 1; ok && i < lines.size(); ++i) {
      const auto cells = testing::split(lines[i], ",");
      const auto mirror = testing::split(lines[lines.size() - i], ",");
      ok &= std::stod(cells[4]) == c.value(i - 1, "F_eV_per_nm");
      for (std::size_t j = 1; j < cells.size(); ++j) ok &= std::stod(cells[j]) == -std::stod(mirror[j]);
    }
    expect(ok, "contour matrix cuts equal vdw force, antisymmetric in z_p");
  } else {
    expect(false, "contour exit");
  }

  std::string detail = failures.empty() ? "all curve, sweep and contour shape checks hold" : "failed:";
  for (const auto& f : failures) detail += " [" + f + "]";
  return {failures.empty(), detail};
}

Outcome validate_command() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_cli("validate");
  const double t = seconds_since(t0);
  return {r.exit_code == 0 && t <= 60.0,
          fmt::format("exit {} in {:.2f} s <= 60 s", r.exit_code, t)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"expansion identity", expansion_identity},
      {"grounded boundary condition", grounded_bc},
      {"BEM oracle equivalence", oracle_equivalence},
      {"mixed derivative cross-check", mixed_derivative},
      {"symmetry and sign structure", symmetry},
      {"repulsion phenomenology", repulsion},
      {"far-field law", far_field},
      {"scale covariance", scale_covariance},
      {"curve and map shapes", curve_shapes},
      {"validate command", validate_command},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += o.passed ? 0 : 1;
    std::printf("%s criterion %zu (%s): %s\n", o.passed ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
