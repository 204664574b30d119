#include "toroid/greens.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <string>
#include <unordered_map>

#include "series.hpp"
#include "toroid/error.hpp"
#include "toroid/units.hpp"

namespace toroid {
namespace detail {
namespace {
std::atomic<bool> g_flip_zero_term{false};
}  // namespace

bool flip_zero_term() noexcept { return g_flip_zero_term.load(std::memory_order_relaxed); }
void set_flip_zero_term(bool on) noexcept {
  g_flip_zero_term.store(on, std::memory_order_relaxed);
}
}  // namespace detail

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxCachedTables = 1024;

int table_size(double z, const TruncationPolicy& policy) {
  return std::min(policy.n_cap, max_safe_degree(z));
}

// eta - eta' folded into [-pi, pi]; mirrored pairs give exactly negated results
double phase_difference(double eta, double eta_src) {
  const double d = eta - eta_src;
  if (d < -kPi) return eta + (2.0 * kPi - eta_src);
  if (d > kPi) return eta - (eta_src - 2.0 * kPi);
  return d;
}

}  // namespace

struct AxialGreens::Cache {
  std::mutex mutex;
  std::unordered_map<std::uint64_t, std::shared_ptr<const HarmonicTable>> tables;
};

AxialSource AxialSource::on_axis(double z, double f, double charge) {
  if (!std::isfinite(z)) {
    throw Error(ErrorCode::kDomain, "source position must be finite");
  }
  AxialSource s;
  s.z = z;
  s.eta = axis_eta_from_z(z, f);
  s.one_minus_cos = 2.0 * f * f / (f * f + z * z);
  s.charge = charge;
  return s;
}

AxialGreens::AxialGreens(const ToroidGeometry& geometry, TruncationPolicy policy)
    : geometry_(geometry), policy_(policy), cache_(std::make_shared<Cache>()) {
  if (!(policy_.rel_tol > 0.0 && policy_.rel_tol < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rel_tol must lie in (0, 1)");
  }
  if (policy_.n_cap < 3) {
    throw Error(ErrorCode::kInvalidArgument, "n_cap must be at least 3");
  }
  table_ = std::make_shared<const HarmonicTable>(
      HarmonicTable::build(geometry_.cosh_xi0, table_size(geometry_.cosh_xi0, policy_)));
}

std::shared_ptr<const HarmonicTable> AxialGreens::field_table(double cosh_xi) const {
  const auto key = std::bit_cast<std::uint64_t>(cosh_xi);
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->tables.find(key); it != cache_->tables.end()) return it->second;
  }
  auto table = std::make_shared<const HarmonicTable>(
      HarmonicTable::build(cosh_xi, table_size(cosh_xi, policy_)));
  std::lock_guard lock(cache_->mutex);
  if (cache_->tables.size() >= kMaxCachedTables) cache_->tables.clear();
  return cache_->tables.try_emplace(key, std::move(table)).first->second;
}

Evaluation AxialGreens::inverse_distance(const ToroidalCoords& field,
                                         const AxialSource& src) const {
  const double f = geometry_.f;
  const Cartesian p = toroidal_to_cartesian(field, f);
  const double dist = std::hypot(std::hypot(p.x, p.y), p.z - src.z);
  if (!(dist > 1e-12 * (f + std::abs(src.z)))) {
    throw Error(ErrorCode::kCoincidentPoints,
                "inverse_distance: field point coincides with the source");
  }
  const double cosh_xi = std::cosh(field.xi);
  if (cosh_xi < kMinHarmonicArgument) {
    throw Error(ErrorCode::kDomain,
                "inverse_distance: field point on the symmetry axis; the toroidal "
                "expansion about an axial source needs xi > 0");
  }
  const auto table = field_table(cosh_xi);
  const double d_eta = phase_difference(field.eta, src.eta);

  detail::SeriesSum series(policy_, detail::SeriesSum::Reference::kSum);
  bool done = false;
  for (int n = 0; n <= table->n_max() && !done; ++n) {
    const double coef = detail::neumann_factor(n) * table->q(n);
    done = series.add(coef * std::cos(n * d_eta), coef);
  }
  if (!done) series.fail("inverse_distance", table->n_max() + 1);

  const double pref = std::sqrt(toroidal_denominator(field.xi, field.eta)) *
                      std::sqrt(src.one_minus_cos) / (kPi * f);
  return {pref * series.sum(), series.diagnostics()};
}

Evaluation AxialGreens::vh_dimensionless(const ToroidalCoords& field,
                                         const AxialSource& src) const {
  if (field.xi > geometry_.xi0 * (1.0 + 1e-12)) {
    throw Error(ErrorCode::kOutOfRegion,
                "vh_potential: field point inside the conductor (xi = " +
                    std::to_string(field.xi) + " > xi0 = " + std::to_string(geometry_.xi0) +
                    ")");
  }
  if (std::abs(src.z) > kFarSourceFactor * geometry_.f) {
    Evaluation far;
    far.diag.far_source = true;
    return far;
  }

  const HarmonicTable& t0 = *table_;
  const double z_field = std::cosh(std::min(field.xi, geometry_.xi0));
  const std::vector<double> seed = legendre_p_half(z_field, 1);
  double p_prev = seed[0];
  double p_cur = seed[1];
  const double d_eta = phase_difference(field.eta, src.eta);

  detail::SeriesSum series(policy_, detail::SeriesSum::Reference::kSum);
  bool done = false;
  for (int n = 0; n <= t0.n_max() && !done; ++n) {
    double p_field;
    if (n == 0) {
      p_field = p_prev;
    } else if (n == 1) {
      p_field = p_cur;
    } else {
      const double next = (2.0 * (n - 1) * z_field * p_cur - (n - 1.5) * p_prev) / (n - 0.5);
      p_prev = p_cur;
      p_cur = next;
      p_field = p_cur;
    }
    double coef = detail::neumann_factor(n) * t0.q(n) * (p_field / t0.p(n));
    if (n == 0 && detail::flip_zero_term()) coef = -coef;
    done = series.add(coef * std::cos(n * d_eta), std::abs(coef));
  }
  if (!done) series.fail("vh_potential", t0.n_max() + 1);

  const double pref = -std::sqrt(toroidal_denominator(field.xi, field.eta)) *
                      std::sqrt(src.one_minus_cos) / kPi;
  return {pref * series.sum(), series.diagnostics()};
}

Evaluation AxialGreens::vh_potential(const ToroidalCoords& field,
                                     const AxialSource& src) const {
  Evaluation e = vh_dimensionless(field, src);
  e.value *= units::kCoulombEvNm * src.charge / geometry_.f;
  return e;
}

Evaluation AxialGreens::charge_interaction_energy(double z_src, double charge) const {
  const AxialSource src = source_at(z_src, charge);
  Evaluation e = vh_potential(ToroidalCoords{0.0, src.eta, 0.0}, src);
  e.value *= charge;
  return e;
}

double AxialGreens::surface_residual(const AxialSource& src, int n_samples) const {
  if (n_samples < 8) {
    throw Error(ErrorCode::kInvalidArgument, "surface_residual needs at least 8 samples");
  }
  const double f = geometry_.f;
  double worst = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double eta = -kPi + 2.0 * kPi * (i + 0.5) / n_samples;
    const ToroidalCoords c{geometry_.xi0, eta, 0.0};
    const Cartesian p = toroidal_to_cartesian(c, f);
    const double dist = std::hypot(p.x, p.z - src.z);
    const double coulomb = 1.0 / dist;
    const double induced = vh_dimensionless(c, src).value / f;
    worst = std::max(worst, std::abs(coulomb + induced) / coulomb);
  }
  return worst;
}

}  // namespace toroid
