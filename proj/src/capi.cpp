#include "toroid/toroid.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "toroid/bem.hpp"
#include "toroid/dispersion.hpp"
#include "toroid/error.hpp"
#include "toroid/geometry.hpp"
#include "toroid/greens.hpp"
#include "toroid/specfun.hpp"
#include "toroid/validation.hpp"

struct tor_greens {
  toroid::AxialGreens impl;
};

struct tor_bem {
  toroid::BemSolver impl;
};

struct tor_bem_solution {
  toroid::BemSolution impl;
};

struct tor_validation_report {
  toroid::ValidationReport impl;
};

namespace {

thread_local std::string g_last_error;

template <class F>
tor_status guard(F&& fn) noexcept {
  try {
    fn();
    return TOR_OK;
  } catch (const toroid::Error& e) {
    g_last_error = e.what();
    return static_cast<tor_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown exception";
  }
  return TOR_E_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) throw toroid::Error(toroid::ErrorCode::kInvalidArgument, what);
}

toroid::TruncationPolicy make_policy(double rel_tol, int n_cap) {
  toroid::TruncationPolicy p;
  if (rel_tol > 0.0) p.rel_tol = rel_tol;
  if (n_cap > 0) p.n_cap = n_cap;
  return p;
}

toroid::ParticleModel make_particle(const tor_particle* p) {
  require(p != nullptr, "particle is null");
  toroid::DipoleUnit unit;
  switch (p->unit) {
    case TOR_UNIT_E2NM2: unit = toroid::DipoleUnit::kElementaryChargeNm; break;
    case TOR_UNIT_DEBYE2: unit = toroid::DipoleUnit::kDebye; break;
    case TOR_UNIT_SI: unit = toroid::DipoleUnit::kCoulombMetre; break;
    default: throw toroid::Error(toroid::ErrorCode::kInvalidArgument, "unknown dipole unit");
  }
  return toroid::ParticleModel::from_components(p->d2x, p->d2y, p->d2z, unit);
}

void fill(tor_diagnostics* diag, const toroid::SeriesDiagnostics& d) {
  if (!diag) return;
  diag->terms = d.terms;
  diag->tail_bound = d.tail_bound;
  diag->far_source = d.far_source ? 1 : 0;
}

void fill(tor_geometry* out, const toroid::ToroidGeometry& g) {
  *out = {g.a, g.b, g.f, g.xi0, g.cosh_xi0};
}

}  // namespace

extern "C" {

TOROID_API const char* tor_version(void) { return "0.1.0"; }

TOROID_API const char* tor_last_error(void) { return g_last_error.c_str(); }

TOROID_API const char* tor_status_string(tor_status status) {
  return toroid::to_string(static_cast<toroid::ErrorCode>(status));
}

TOROID_API tor_status tor_geometry_from_radii(double a, double b, tor_geometry* out) {
  return guard([&] {
    require(out, "output is null");
    fill(out, toroid::ToroidGeometry::from_radii(a, b));
  });
}

TOROID_API tor_status tor_toroidal_to_cartesian(double f, double xi, double eta, double phi,
                                                double out_xyz[3]) {
  return guard([&] {
    require(out_xyz, "output is null");
    const auto p = toroid::toroidal_to_cartesian(toroid::ToroidalCoords::normalized(xi, eta, phi), f);
    out_xyz[0] = p.x;
    out_xyz[1] = p.y;
    out_xyz[2] = p.z;
  });
}

TOROID_API tor_status tor_cartesian_to_toroidal(double f, double x, double y, double z,
                                                double out_xi_eta_phi[3]) {
  return guard([&] {
    require(out_xi_eta_phi, "output is null");
    const auto c = toroid::cartesian_to_toroidal({x, y, z}, f);
    out_xi_eta_phi[0] = c.xi;
    out_xi_eta_phi[1] = c.eta;
    out_xi_eta_phi[2] = c.phi;
  });
}

TOROID_API tor_status tor_harmonics(double z, int n_max, double* p, double* q) {
  return guard([&] {
    require(p && q, "output is null");
    const auto t = toroid::HarmonicTable::build(z, n_max);
    std::copy(t.p().begin(), t.p().end(), p);
    std::copy(t.q().begin(), t.q().end(), q);
  });
}

TOROID_API tor_status tor_max_safe_degree(double z, int* out) {
  return guard([&] {
    require(out, "output is null");
    *out = toroid::max_safe_degree(z);
  });
}

TOROID_API tor_status tor_greens_create(double a, double b, double rel_tol, int n_cap,
                                        tor_greens** out) {
  return guard([&] {
    require(out, "output is null");
    *out = nullptr;
    *out = new tor_greens{
        toroid::AxialGreens(toroid::ToroidGeometry::from_radii(a, b), make_policy(rel_tol, n_cap))};
  });
}

TOROID_API void tor_greens_destroy(tor_greens* g) { delete g; }

TOROID_API tor_status tor_greens_geometry(const tor_greens* g, tor_geometry* out) {
  return guard([&] {
    require(g && out, "null argument");
    fill(out, g->impl.geometry());
  });
}

TOROID_API tor_status tor_inverse_distance(const tor_greens* g, double xi, double eta,
                                           double source_z, double* out,
                                           tor_diagnostics* diag) {
  return guard([&] {
    require(g && out, "null argument");
    const auto e = g->impl.inverse_distance(toroid::ToroidalCoords::normalized(xi, eta),
                                            g->impl.source_at(source_z));
    *out = e.value;
    fill(diag, e.diag);
  });
}

TOROID_API tor_status tor_vh_potential(const tor_greens* g, double xi, double eta,
                                       double source_z, double charge, double* out,
                                       tor_diagnostics* diag) {
  return guard([&] {
    require(g && out, "null argument");
    const auto e = g->impl.vh_potential(toroid::ToroidalCoords::normalized(xi, eta),
                                        g->impl.source_at(source_z, charge));
    *out = e.value;
    fill(diag, e.diag);
  });
}

TOROID_API tor_status tor_vh_potential_rz(const tor_greens* g, double r, double z,
                                          double source_z, double charge, double* out,
                                          tor_diagnostics* diag) {
  return guard([&] {
    require(g && out, "null argument");
    const auto c = toroid::cartesian_to_toroidal({std::abs(r), 0.0, z}, g->impl.geometry().f);
    const auto e = g->impl.vh_potential(c, g->impl.source_at(source_z, charge));
    *out = e.value;
    fill(diag, e.diag);
  });
}

TOROID_API tor_status tor_charge_energy(const tor_greens* g, double source_z, double charge,
                                        double* out, tor_diagnostics* diag) {
  return guard([&] {
    require(g && out, "null argument");
    const auto e = g->impl.charge_interaction_energy(source_z, charge);
    *out = e.value;
    fill(diag, e.diag);
  });
}

TOROID_API tor_status tor_surface_residual(const tor_greens* g, double source_z,
                                           int n_samples, double* out) {
  return guard([&] {
    require(g && out, "null argument");
    *out = g->impl.surface_residual(g->impl.source_at(source_z), n_samples);
  });
}

TOROID_API tor_status tor_gh_mixed_derivative(const tor_greens* g, double z, double z_prime,
                                              double* out, tor_diagnostics* diag) {
  return guard([&] {
    require(g && out, "null argument");
    const auto e = toroid::gh_mixed_derivative(z, z_prime, g->impl);
    *out = e.value;
    fill(diag, e.diag);
  });
}

TOROID_API tor_status tor_vdw_energy(const tor_greens* g, const tor_particle* p, double zp,
                                     double* out, tor_diagnostics* diag) {
  return guard([&] {
    require(g && out, "null argument");
    const auto e = toroid::vdw_energy(zp, make_particle(p), g->impl);
    *out = e.value;
    fill(diag, e.diag);
  });
}

TOROID_API tor_status tor_vdw_force(const tor_greens* g, const tor_particle* p, double zp,
                                    double* out, tor_diagnostics* diag) {
  return guard([&] {
    require(g && out, "null argument");
    const auto e = toroid::vdw_force(zp, make_particle(p), g->impl);
    *out = e.value;
    fill(diag, e.diag);
  });
}

TOROID_API tor_status tor_find_force_zero(const tor_greens* g, const tor_particle* p,
                                          double lo, double hi, double* out) {
  return guard([&] {
    require(g && out, "null argument");
    *out = toroid::find_force_zero(make_particle(p), g->impl, lo, hi);
  });
}

TOROID_API tor_status tor_critical_ratio(double zp, double b, const tor_particle* p,
                                         double ratio_lo, double ratio_hi, double rel_tol,
                                         double* out, double* bound) {
  return guard([&] {
    require(out, "output is null");
    toroid::RatioSearch search;
    if (ratio_lo > 0.0) search.ratio_lo = ratio_lo;
    if (ratio_hi > 0.0) search.ratio_hi = ratio_hi;
    if (rel_tol > 0.0) search.policy.rel_tol = rel_tol;
    try {
      *out = toroid::critical_ratio(zp, b, make_particle(p), search);
    } catch (const toroid::RangeExceededError& e) {
      if (bound) *bound = e.bound();
      throw;
    }
  });
}

TOROID_API tor_status tor_sweep_contour(const double* ratios, size_t n_ratios,
                                        const double* zp_over_b, size_t n_zp, double b,
                                        const tor_particle* p, double rel_tol, int n_cap,
                                        unsigned threads, double* force_out,
                                        int* status_out) {
  return guard([&] {
    require(ratios && zp_over_b && force_out, "null argument");
    const auto grid = toroid::sweep_contour({ratios, n_ratios}, {zp_over_b, n_zp}, b,
                                            make_particle(p), make_policy(rel_tol, n_cap),
                                            threads);
    std::copy(grid.force.begin(), grid.force.end(), force_out);
    if (status_out) {
      std::transform(grid.status.begin(), grid.status.end(), status_out,
                     [](toroid::ErrorCode c) { return static_cast<int>(c); });
    }
  });
}

TOROID_API tor_status tor_bem_create(double a, double b, int n_panels, tor_bem** out) {
  return guard([&] {
    require(out, "output is null");
    *out = nullptr;
    *out = new tor_bem{
        toroid::BemSolver(toroid::BemMesh::build(toroid::ToroidGeometry::from_radii(a, b), n_panels))};
  });
}

TOROID_API void tor_bem_destroy(tor_bem* bem) { delete bem; }

TOROID_API tor_status tor_bem_condition(const tor_bem* bem, double* out) {
  return guard([&] {
    require(bem && out, "null argument");
    *out = bem->impl.condition_estimate();
  });
}

TOROID_API tor_status tor_bem_solve(const tor_bem* bem, double source_z, double charge,
                                    tor_bem_solution** out) {
  return guard([&] {
    require(bem && out, "null argument");
    *out = nullptr;
    const double f = bem->impl.mesh().geometry.f;
    *out = new tor_bem_solution{bem->impl.solve(toroid::AxialSource::on_axis(source_z, f, charge))};
  });
}

TOROID_API void tor_bem_solution_destroy(tor_bem_solution* sol) { delete sol; }

TOROID_API tor_status tor_bem_solution_vh(const tor_bem_solution* sol, double r, double z,
                                          double* out) {
  return guard([&] {
    require(sol && out, "null argument");
    *out = sol->impl.vh(r, z);
  });
}

TOROID_API tor_status tor_bem_solution_total_charge(const tor_bem_solution* sol, double* out) {
  return guard([&] {
    require(sol && out, "null argument");
    *out = sol->impl.total_induced_charge();
  });
}

TOROID_API tor_status tor_bem_solution_residual(const tor_bem_solution* sol, double* out) {
  return guard([&] {
    require(sol && out, "null argument");
    *out = sol->impl.residual();
  });
}

TOROID_API tor_status tor_bem_mixed_derivative(const tor_bem* bem, double z, double z_prime,
                                               double step, tor_mixed_estimate* out) {
  return guard([&] {
    require(bem && out, "null argument");
    const auto e = toroid::bem_mixed_derivative(z, z_prime, bem->impl, step);
    *out = {e.value, e.half_step, e.richardson, e.accuracy_warning ? 1 : 0};
  });
}

TOROID_API tor_status tor_validate(double a, double b, double rel_tol, int n_cap,
                                   int n_panels, uint64_t seed, tor_validation_report** out) {
  return guard([&] {
    require(out, "output is null");
    *out = nullptr;
    toroid::ValidationConfig cfg;
    cfg.a = a;
    cfg.b = b;
    cfg.policy = make_policy(rel_tol, n_cap);
    if (n_panels > 0) cfg.n_panels = n_panels;
    if (seed != 0) cfg.seed = seed;
    *out = new tor_validation_report{toroid::run_validation(cfg)};
  });
}

TOROID_API void tor_validation_report_destroy(tor_validation_report* rep) { delete rep; }

TOROID_API size_t tor_validation_report_count(const tor_validation_report* rep) {
  return rep ? rep->impl.checks.size() : 0;
}

TOROID_API tor_status tor_validation_report_check(const tor_validation_report* rep, size_t i,
                                                  tor_check* out) {
  return guard([&] {
    require(rep && out, "null argument");
    require(i < rep->impl.checks.size(), "check index out of range");
    const auto& c = rep->impl.checks[i];
    *out = {c.name.c_str(), c.detail.c_str(), c.passed ? 1 : 0, c.measured, c.threshold};
  });
}

TOROID_API int tor_validation_report_passed(const tor_validation_report* rep) {
  return rep && rep->impl.all_passed() ? 1 : 0;
}

TOROID_API double tor_validation_report_seconds(const tor_validation_report* rep) {
  return rep ? rep->impl.seconds : 0.0;
}

}  // extern "C"
