// toroid: command-line front end over the toroid C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "toroid/toroid.h"

namespace {

using nlohmann::json;

enum Exit { kExitOk = 0, kExitValidation = 1, kExitConfig = 2, kExitNumerical = 3 };

struct Failure {
  int exit_code;
  std::string message;
};

struct RunConfig {
  double a = 5.0;
  double b = 1.0;
  double d2z = 1.0;
  std::string d2z_unit = "e2nm2";
  double zmin = -15.0;
  double zmax = 15.0;
  int zpoints = 301;
  double ratio_min = 1.1;
  double ratio_max = 10.0;
  int ratio_points = 200;
  double tol = 1e-12;
  int ncap = 2000;
  std::string format = "csv";
  bool normalize = false;
  std::string out;
  double charge = 1.0;
  int panels = 400;
  unsigned threads = 0;

  // subcommand specific
  double source_z = 0.0;
  std::string cut = "axis";
  std::string quantity = "both";
  std::vector<double> zp_list{1.0, 2.0, 3.0};
  bool z_range_given = false;
};

[[noreturn]] void fail(int code, std::string message) { throw Failure{code, std::move(message)}; }

// Status from the library: configuration-type codes map to exit 2, the rest to 3.
void check(tor_status s, const char* what) {
  if (s == TOR_OK) return;
  const int code = (s == TOR_E_DOMAIN || s == TOR_E_DEGENERATE_TOROID ||
                    s == TOR_E_INVALID_ARGUMENT || s == TOR_E_UNSUPPORTED)
                       ? kExitConfig
                       : kExitNumerical;
  fail(code, fmt::format("{}: {} ({})", what, tor_last_error(), tor_status_string(s)));
}

void validate_config(const RunConfig& c) {
  if (!(c.a > 0.0) || !(c.b > 0.0)) fail(kExitConfig, "radii must be positive");
  if (!(c.a > c.b)) fail(kExitConfig, fmt::format("need a > b (a = {}, b = {})", c.a, c.b));
  if (c.zpoints < 2 || c.ratio_points < 2) fail(kExitConfig, "grid counts must be at least 2");
  if (!(c.zmin < c.zmax)) fail(kExitConfig, "need zmin < zmax");
  if (!(c.ratio_min > 1.0) || !(c.ratio_min < c.ratio_max)) {
    fail(kExitConfig, "need 1 < ratio-min < ratio-max");
  }
  if (!(c.tol > 0.0 && c.tol <= 1e-4)) fail(kExitConfig, "--tol must lie in (0, 1e-4]");
  if (c.ncap < 3) fail(kExitConfig, "--ncap must be at least 3");
  if (!(c.d2z > 0.0)) fail(kExitConfig, "--d2z must be positive");
}

tor_particle particle(const RunConfig& c) {
  tor_dipole_unit unit = TOR_UNIT_E2NM2;
  if (c.d2z_unit == "debye2") unit = TOR_UNIT_DEBYE2;
  if (c.d2z_unit == "si") unit = TOR_UNIT_SI;
  return {0.0, 0.0, c.d2z, unit};
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // weighted form keeps grids symmetric about 0 bit for bit
    v[static_cast<std::size_t>(i)] = (lo * (n - 1 - i) + hi * i) / (n - 1);
  }
  return v;
}

// Runs fn(i) for i in [0, n) on a small pool; the first failure wins.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& fn) {
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::atomic<std::size_t> next{0};
  std::optional<Failure> first;
  std::mutex mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (const Failure& f) {
        std::lock_guard lock(mutex);
        if (!first) first = f;
        next = n;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (first) throw *first;
}

class Greens {
 public:
  explicit Greens(const RunConfig& c) {
    check(tor_greens_create(c.a, c.b, c.tol, c.ncap, &g_), "geometry");
  }
  ~Greens() { tor_greens_destroy(g_); }
  Greens(const Greens&) = delete;
  Greens& operator=(const Greens&) = delete;
  const tor_greens* get() const { return g_; }

 private:
  tor_greens* g_ = nullptr;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<tor_diagnostics> point_diag;  // one per row when present
  json extra = json::object();
};

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    os << (i ? "," : "") << csv_field(t.columns[i]);
  }
  os << "\r\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << num(row[i]);
    os << "\r\n";
  }
}

json config_json(const RunConfig& c, const std::string& command) {
  return {{"command", command},   {"version", tor_version()}, {"a_nm", c.a},
          {"b_nm", c.b},          {"d2z", c.d2z},             {"d2z_unit", c.d2z_unit},
          {"zmin", c.zmin},       {"zmax", c.zmax},           {"zpoints", c.zpoints},
          {"ratio_min", c.ratio_min}, {"ratio_max", c.ratio_max},
          {"ratio_points", c.ratio_points}, {"tol", c.tol},   {"ncap", c.ncap},
          {"normalize", c.normalize}, {"charge", c.charge}};
}

void write_json(std::ostream& os, const RunConfig& c, const std::string& command,
                const Table& t) {
  json diag = t.extra;
  if (!t.point_diag.empty()) {
    json points = json::array();
    for (const auto& d : t.point_diag) {
      points.push_back({{"terms", d.terms}, {"tail_bound", d.tail_bound},
                        {"far_source", d.far_source != 0}});
    }
    diag["points"] = std::move(points);
  }
  json doc = {{"config", config_json(c, command)},
              {"columns", t.columns},
              {"rows", t.rows},
              {"diagnostics", std::move(diag)}};
  os << doc.dump(2) << "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(kExitConfig, fmt::format("cannot write {}", path.string()));
  os << text;
}

std::string plot_script(const std::string& data, const std::string& xlabel,
                        const std::vector<std::string>& columns, int first_col, int stride) {
  std::string s = "set datafile separator \",\"\nset key autotitle columnhead\n";
  s += fmt::format("set xlabel \"{}\"\nset grid\nplot ", xlabel);
  for (std::size_t i = static_cast<std::size_t>(first_col); i <= columns.size();
       i += static_cast<std::size_t>(stride)) {
    if (i != static_cast<std::size_t>(first_col)) s += ", \\\n     ";
    s += fmt::format("\"{}\" using 1:{} with lines", data, i);
  }
  return s + "\n";
}

// Emits the table to --out (plus a gnuplot script next to it) or to stdout.
void emit(const RunConfig& c, const std::string& command, const Table& t,
          const std::string& xlabel) {
  if (c.out.empty()) {
    std::ostringstream os;
    if (c.format == "json") {
      write_json(os, c, command, t);
    } else {
      write_csv(os, t);
    }
    std::cout << os.str() << std::flush;
    return;
  }
  const std::filesystem::path path(c.out);
  std::ostringstream os;
  if (c.format == "json") {
    write_json(os, c, command, t);
  } else {
    write_csv(os, t);
  }
  write_text_file(path, os.str());
  if (c.format == "csv" && !xlabel.empty()) {
    // raw and normalized columns alternate after the abscissa
    const int first = c.normalize ? 3 : 2;
    const int stride = 2;
    auto script = path;
    script.replace_extension(".gp");
    write_text_file(script,
                    plot_script(path.filename().string(), xlabel, t.columns, first, stride));
  }
}

int cmd_geom(const RunConfig& c) {
  tor_geometry g{};
  check(tor_geometry_from_radii(c.a, c.b, &g), "geometry");
  Greens greens(c);
  double residual = 0.0;
  for (double zs : {0.0, g.f, 3.0 * g.f}) {
    double r = 0.0;
    check(tor_surface_residual(greens.get(), zs, 256, &r), "surface residual");
    residual = std::max(residual, r);
  }
  // round trip of surface points through the coordinate maps
  double roundtrip = 0.0;
  for (int i = 0; i < 256; ++i) {
    const double eta = -std::numbers::pi + 2.0 * std::numbers::pi * (i + 0.5) / 256;
    double xyz[3], back[3];
    check(tor_toroidal_to_cartesian(g.f, g.xi0, eta, 0.0, xyz), "coordinates");
    check(tor_cartesian_to_toroidal(g.f, xyz[0], xyz[1], xyz[2], back), "coordinates");
    roundtrip = std::max(roundtrip, std::abs(back[0] - g.xi0) / g.xi0);
    roundtrip = std::max(roundtrip, std::abs(std::hypot(xyz[0] - g.a, xyz[2]) - g.b) / g.b);
  }
  Table t;
  t.columns = {"a_nm", "b_nm", "f_nm", "xi0", "cosh_xi0", "surface_residual",
               "surface_roundtrip_residual"};
  t.rows.push_back({g.a, g.b, g.f, g.xi0, g.cosh_xi0, residual, roundtrip});
  emit(c, "geom", t, "");
  return kExitOk;
}

int cmd_potential(RunConfig c) {
  const bool plane = c.cut == "plane";
  const double gap = c.a - c.b;
  if (plane && !c.z_range_given) {
    c.zmin = -gap;
    c.zmax = gap;
  }
  validate_config(c);
  if (plane && (std::abs(c.zmin) > gap * (1.0 + 1e-12) || std::abs(c.zmax) > gap * (1.0 + 1e-12))) {
    fail(kExitConfig, fmt::format("plane cut needs |r| <= a - b = {}", gap));
  }
  Greens g(c);
  const auto grid = linspace(c.zmin, c.zmax, c.zpoints);
  Table t;
  t.columns = {plane ? "r_nm" : "z_nm", "VH_V", "VH_norm"};
  t.rows.assign(grid.size(), {});
  t.point_diag.assign(grid.size(), {});
  parallel_for(grid.size(), c.threads, [&](std::size_t i) {
    double v = 0.0;
    const double r = plane ? grid[i] : 0.0;
    const double z = plane ? 0.0 : grid[i];
    check(tor_vh_potential_rz(g.get(), r, z, c.source_z, c.charge, &v, &t.point_diag[i]),
          "potential");
    t.rows[i] = {grid[i], v, 0.0};
  });
  double origin = 0.0;
  check(tor_vh_potential_rz(g.get(), 0.0, 0.0, c.source_z, c.charge, &origin, nullptr),
        "potential");
  for (auto& row : t.rows) row[2] = row[1] / std::abs(origin);
  t.extra["origin_VH_V"] = origin;
  t.extra["source_z_nm"] = c.source_z;
  t.extra["cut"] = c.cut;
  emit(c, "potential", t, plane ? "r (nm)" : "z (nm)");
  return kExitOk;
}

int cmd_charge_energy(const RunConfig& c) {
  validate_config(c);
  Greens g(c);
  const auto grid = linspace(c.zmin, c.zmax, c.zpoints);
  Table t;
  t.columns = {"zprime_nm", "U_eV", "U_norm"};
  t.rows.assign(grid.size(), {});
  t.point_diag.assign(grid.size(), {});
  parallel_for(grid.size(), c.threads, [&](std::size_t i) {
    double u = 0.0;
    check(tor_charge_energy(g.get(), grid[i], c.charge, &u, &t.point_diag[i]), "charge energy");
    t.rows[i] = {grid[i], u, 0.0};
  });
  double origin = 0.0;
  check(tor_charge_energy(g.get(), 0.0, c.charge, &origin, nullptr), "charge energy");
  for (auto& row : t.rows) row[2] = row[1] / std::abs(origin);
  t.extra["origin_U_eV"] = origin;
  emit(c, "charge-energy", t, "z' (nm)");
  return kExitOk;
}

int cmd_vdw(const RunConfig& c) {
  validate_config(c);
  Greens g(c);
  const tor_particle p = particle(c);
  const bool energy = c.quantity != "force";
  const bool force = c.quantity != "energy";
  const auto grid = linspace(c.zmin, c.zmax, c.zpoints);
  std::vector<double> u(grid.size()), fz(grid.size());
  std::vector<tor_diagnostics> diag(grid.size());
  parallel_for(grid.size(), c.threads, [&](std::size_t i) {
    tor_diagnostics du{}, df{};
    if (energy) check(tor_vdw_energy(g.get(), &p, grid[i], &u[i], &du), "vdw energy");
    if (force) check(tor_vdw_force(g.get(), &p, grid[i], &fz[i], &df), "vdw force");
    diag[i] = du.terms >= df.terms ? du : df;
  });

  Table t;
  t.columns = {"zp_nm"};
  double u0 = 0.0;
  if (energy) {
    check(tor_vdw_energy(g.get(), &p, 0.0, &u0, nullptr), "vdw energy");
    t.columns.insert(t.columns.end(), {"U_eV", "U_norm"});
    t.extra["origin_U_eV"] = u0;
  }
  double f_peak = 0.0;
  for (double v : fz) f_peak = std::max(f_peak, std::abs(v));
  if (force) {
    t.columns.insert(t.columns.end(), {"F_eV_per_nm", "F_norm"});
    t.extra["peak_abs_F_eV_per_nm"] = f_peak;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> row{grid[i]};
    if (energy) row.insert(row.end(), {u[i], u[i] / std::abs(u0)});
    if (force) row.insert(row.end(), {fz[i], f_peak > 0.0 ? fz[i] / f_peak : 0.0});
    t.rows.push_back(std::move(row));
  }
  t.point_diag = std::move(diag);
  emit(c, "vdw", t, "z_p (nm)");
  return kExitOk;
}

// Linear interpolation of the first attractive-to-repulsive change along a column.
std::optional<double> first_crossing(const std::vector<double>& x, const std::vector<double>& y) {
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (y[i - 1] <= 0.0 && y[i] > 0.0) {
      return x[i - 1] + (x[i] - x[i - 1]) * (-y[i - 1]) / (y[i] - y[i - 1]);
    }
  }
  return std::nullopt;
}

int cmd_sweep_ratio(const RunConfig& c) {
  validate_config(c);
  if (c.zp_list.empty()) fail(kExitConfig, "--zp needs at least one value");
  const tor_particle p = particle(c);
  const auto ratios = linspace(c.ratio_min, c.ratio_max, c.ratio_points);
  std::vector<double> zpb;
  for (double zp : c.zp_list) {
    if (!(zp > 0.0)) fail(kExitConfig, "--zp values must be positive");
    zpb.push_back(zp / c.b);
  }
  std::vector<double> force(ratios.size() * zpb.size());
  std::vector<int> status(force.size());
  check(tor_sweep_contour(ratios.data(), ratios.size(), zpb.data(), zpb.size(), c.b, &p, c.tol,
                          c.ncap, c.threads, force.data(), status.data()),
        "sweep");
  for (int s : status) check(static_cast<tor_status>(s), "sweep cell");

  Table t;
  t.columns = {"ratio"};
  for (double zp : c.zp_list) {
    t.columns.push_back(fmt::format("F_zp{}_eV_per_nm", zp));
    t.columns.push_back(fmt::format("F_zp{}_norm", zp));
  }
  json crossings = json::array();
  std::vector<double> peaks(zpb.size());
  for (std::size_t k = 0; k < zpb.size(); ++k) {
    std::vector<double> col(ratios.size());
    for (std::size_t j = 0; j < ratios.size(); ++j) col[j] = force[k * ratios.size() + j];
    for (double v : col) peaks[k] = std::max(peaks[k], std::abs(v));
    const auto cross = first_crossing(ratios, col);
    json entry = {{"zp_nm", c.zp_list[k]}};
    entry["crossing_ratio"] = cross ? json(*cross) : json(nullptr);
    crossings.push_back(entry);
    if (c.format == "csv") {
      std::cerr << (cross ? fmt::format("zp = {} nm: force turns repulsive at a/b = {:.6g}\n",
                                        c.zp_list[k], *cross)
                          : fmt::format("zp = {} nm: no crossing in [{}, {}]\n", c.zp_list[k],
                                        c.ratio_min, c.ratio_max));
    }
  }
  for (std::size_t j = 0; j < ratios.size(); ++j) {
    std::vector<double> row{ratios[j]};
    for (std::size_t k = 0; k < zpb.size(); ++k) {
      const double v = force[k * ratios.size() + j];
      row.push_back(v);
      row.push_back(peaks[k] > 0.0 ? v / peaks[k] : 0.0);
    }
    t.rows.push_back(std::move(row));
  }
  t.extra["crossings"] = std::move(crossings);
  t.extra["b_nm"] = c.b;
  emit(c, "sweep-ratio", t, "a/b");
  return kExitOk;
}

int cmd_contour(RunConfig c) {
  if (!c.z_range_given) {
    c.zmin = 0.0;
    c.zmax = 5.0;
  }
  validate_config(c);
  const tor_particle p = particle(c);
  const auto ratios = linspace(c.ratio_min, c.ratio_max, c.ratio_points);
  const auto zpb = linspace(c.zmin, c.zmax, c.zpoints);
  std::vector<double> force(ratios.size() * zpb.size());
  std::vector<int> status(force.size());
  check(tor_sweep_contour(ratios.data(), ratios.size(), zpb.data(), zpb.size(), c.b, &p, c.tol,
                          c.ncap, c.threads, force.data(), status.data()),
        "contour");
  for (int s : status) check(static_cast<tor_status>(s), "contour cell");

  std::ostringstream os;
  if (c.format == "json") {
    Table t;
    t.columns = {"zp_over_b", "ratio", "F_eV_per_nm"};
    for (std::size_t i = 0; i < zpb.size(); ++i) {
      for (std::size_t j = 0; j < ratios.size(); ++j) {
        t.rows.push_back({zpb[i], ratios[j], force[i * ratios.size() + j]});
      }
    }
    t.extra["layout"] = "one row per grid cell";
    t.extra["b_nm"] = c.b;
    write_json(os, c, "contour", t);
  } else {
    // gnuplot nonuniform matrix: first row is the column count then a/b,
    // each later row is z_p/b followed by F_z
    os << ratios.size();
    for (double r : ratios) os << "," << num(r);
    os << "\r\n";
    for (std::size_t i = 0; i < zpb.size(); ++i) {
      os << num(zpb[i]);
      for (std::size_t j = 0; j < ratios.size(); ++j) os << "," << num(force[i * ratios.size() + j]);
      os << "\r\n";
    }
  }
  if (c.out.empty()) {
    std::cout << os.str() << std::flush;
    return kExitOk;
  }
  const std::filesystem::path path(c.out);
  write_text_file(path, os.str());
  if (c.format == "csv") {
    auto script = path;
    script.replace_extension(".gp");
    write_text_file(script, fmt::format(
                                "set datafile separator \",\"\n"
                                "set xlabel \"a/b\"\nset ylabel \"z_p/b\"\n"
                                "set view map\nset contour base\nset cntrparam levels discrete 0\n"
                                "set pm3d at b\n"
                                "splot \"{}\" nonuniform matrix with pm3d notitle\n",
                                path.filename().string()));
  }
  return kExitOk;
}

int cmd_validate(const RunConfig& c) {
  validate_config(c);
  tor_validation_report* rep = nullptr;
  check(tor_validate(c.a, c.b, c.tol, c.ncap, c.panels, 0, &rep), "validate");
  std::unique_ptr<tor_validation_report, void (*)(tor_validation_report*)> guard(
      rep, tor_validation_report_destroy);
  const bool passed = tor_validation_report_passed(rep) != 0;
  const double seconds = tor_validation_report_seconds(rep);
  std::vector<tor_check> checks(tor_validation_report_count(rep));
  for (std::size_t i = 0; i < checks.size(); ++i) {
    check(tor_validation_report_check(rep, i, &checks[i]), "validate");
  }

  std::ostringstream os;
  if (c.format == "json") {
    json rows = json::array();
    for (const auto& k : checks) {
      rows.push_back({k.name, k.passed != 0, k.measured, k.threshold, k.detail});
    }
    json doc = {{"config", config_json(c, "validate")},
                {"columns", {"check", "passed", "measured", "threshold", "detail"}},
                {"rows", std::move(rows)},
                {"diagnostics", {{"seconds", seconds}, {"all_passed", passed}}}};
    os << doc.dump(2) << "\n";
  } else {
    os << "check,passed,measured,threshold,detail\r\n";
    for (const auto& k : checks) {
      os << csv_field(k.name) << "," << (k.passed ? "PASS" : "FAIL") << "," << num(k.measured)
         << "," << num(k.threshold) << "," << csv_field(k.detail) << "\r\n";
    }
  }
  if (c.out.empty()) {
    std::cout << os.str() << std::flush;
  } else {
    write_text_file(c.out, os.str());
  }
  for (const auto& k : checks) {
    if (!k.passed) std::cerr << "validation failed: " << k.name << " (" << k.detail << ")\n";
  }
  std::cerr << fmt::format("validation {} in {:.2f} s\n", passed ? "passed" : "FAILED", seconds);
  return passed ? kExitOk : kExitValidation;
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--a", c.a, "centre-circle radius a (nm)")->capture_default_str();
  sub->add_option("--b", c.b, "tube radius b (nm)")->capture_default_str();
  sub->add_option("--d2z", c.d2z, "<d_z^2> of the particle")->capture_default_str();
  sub->add_option("--d2z-unit", c.d2z_unit, "unit of --d2z")
      ->check(CLI::IsMember({"e2nm2", "debye2", "si"}))
      ->capture_default_str();
  auto* zmin = sub->add_option("--zmin", c.zmin, "grid start (nm; z_p/b for contour)");
  auto* zmax = sub->add_option("--zmax", c.zmax, "grid end");
  sub->add_option("--zpoints", c.zpoints, "grid points")->capture_default_str();
  zmin->capture_default_str();
  zmax->capture_default_str();
  sub->add_option("--ratio-min", c.ratio_min, "smallest a/b")->capture_default_str();
  sub->add_option("--ratio-max", c.ratio_max, "largest a/b")->capture_default_str();
  sub->add_option("--ratio-points", c.ratio_points, "a/b grid points")->capture_default_str();
  sub->add_option("--tol", c.tol, "relative series tolerance, in (0, 1e-4]")
      ->capture_default_str();
  sub->add_option("--ncap", c.ncap, "maximum number of series terms")->capture_default_str();
  sub->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_flag("--normalize", c.normalize, "plot the normalized column in emitted scripts");
  sub->add_option("--out", c.out, "output file; a gnuplot script is written alongside");
  sub->add_option("--charge", c.charge, "source charge (e)")->capture_default_str();
  sub->add_option("--threads", c.threads, "worker threads, 0 = all cores")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Induced potential and dispersion forces of a grounded toroid"};
  app.set_version_flag("--version", std::string(tor_version()));
  app.require_subcommand(1);
  RunConfig cfg;

  auto* geom = app.add_subcommand("geom", "geometry parameters and surface sanity residuals");
  auto* potential = app.add_subcommand("potential", "induced potential V_H along a cut");
  auto* energy = app.add_subcommand("charge-energy", "charge / induced-charge energy U(z')");
  auto* vdw = app.add_subcommand("vdw", "dispersion energy and force on the axis");
  auto* sweep = app.add_subcommand("sweep-ratio", "force against a/b at fixed z_p");
  auto* contour = app.add_subcommand("contour", "force over an (a/b, z_p/b) grid");
  auto* validate = app.add_subcommand("validate", "run the cross-check battery");
  for (auto* sub : {geom, potential, energy, vdw, sweep, contour, validate}) add_common(sub, cfg);

  potential->add_option("--source-z", cfg.source_z, "axial source position (nm)")
      ->capture_default_str();
  potential->add_option("--cut", cfg.cut, "axis (r = 0) or plane (z = 0)")
      ->check(CLI::IsMember({"axis", "plane"}))
      ->capture_default_str();
  vdw->add_option("--quantity", cfg.quantity, "energy, force or both")
      ->check(CLI::IsMember({"energy", "force", "both"}))
      ->capture_default_str();
  sweep->add_option("--zp", cfg.zp_list, "particle positions (nm)")->delimiter(',');
  validate->add_option("--panels", cfg.panels, "BEM panels")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    for (auto* sub : app.get_subcommands()) {
      cfg.z_range_given = sub->count("--zmin") + sub->count("--zmax") > 0;
    }
    if (geom->parsed()) {
      validate_config(cfg);
      return cmd_geom(cfg);
    }
    if (potential->parsed()) return cmd_potential(cfg);
    if (energy->parsed()) return cmd_charge_energy(cfg);
    if (vdw->parsed()) return cmd_vdw(cfg);
    if (sweep->parsed()) return cmd_sweep_ratio(cfg);
    if (contour->parsed()) return cmd_contour(cfg);
    if (validate->parsed()) return cmd_validate(cfg);
  } catch (const Failure& f) {
    std::cerr << "toroid: " << f.message << "\n";
    return f.exit_code;
  }
  return kExitConfig;
}
