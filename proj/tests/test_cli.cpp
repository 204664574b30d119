#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_runner.hpp"

using testing::Csv;
using testing::run_cli;

TEST_CASE("geom") {
  auto r = run_cli("geom --a 5 --b 3");
  REQUIRE(r.exit_code == 0);
  Csv csv(r.out);
  CHECK(csv.value(0, "f_nm") == 4.0);
  CHECK(csv.value(0, "cosh_xi0") == doctest::Approx(1.6667).epsilon(1e-4));
  CHECK(csv.value(0, "surface_residual") < 1e-10);
  CHECK(run_cli("geom --a 3 --b 5").exit_code == 2);
  CHECK(Csv(run_cli("geom --a 5 --b 1").out).value(0, "f_nm") ==
        doctest::Approx(4.898979).epsilon(1e-7));
}

TEST_CASE("configuration errors exit with 2") {
  CHECK(run_cli("geom --bogus 1").exit_code == 2);
  CHECK(run_cli("vdw --tol 1e-3").exit_code == 2);
  CHECK(run_cli("vdw --zpoints 1").exit_code == 2);
  CHECK(run_cli("potential --cut plane --zmin 0 --zmax 4.5").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);
}

TEST_CASE("numerical failure exits with 3 and prints nothing") {
  auto r = run_cli("vdw --ncap 3");
  CHECK(r.exit_code == 3);
  CHECK(r.out.empty());
}

TEST_CASE("csv layout is RFC 4180 with CRLF and deterministic") {
  auto a = run_cli("vdw --zpoints 21 --threads 3");
  auto b = run_cli("vdw --zpoints 21 --threads 1");
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("\r\n") != std::string::npos);
  CHECK(a.out.rfind("zp_nm,U_eV,U_norm,F_eV_per_nm,F_norm\r\n", 0) == 0);
}

TEST_CASE("json layout") {
  auto r = run_cli("charge-energy --zpoints 5 --format json");
  REQUIRE(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.size() == 4);
  CHECK(doc["config"]["version"] == "0.1.0");
  CHECK(doc["columns"] == nlohmann::json({"zprime_nm", "U_eV", "U_norm"}));
  CHECK(doc["rows"].size() == 5);
  CHECK(doc["diagnostics"]["points"].size() == 5);
  CHECK(doc["diagnostics"]["points"][0]["terms"].get<int>() > 3);
}

TEST_CASE("potential along the axis") {
  auto r = run_cli("potential --a 5 --zmin -10 --zmax 10 --zpoints 41");
  REQUIRE(r.exit_code == 0);
  Csv csv(r.out);
  const std::size_t n = csv.rows();
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(csv.value(i, "VH_V") == doctest::Approx(csv.value(n - 1 - i, "VH_V")).epsilon(1e-13));
    CHECK(std::abs(csv.value(i, "VH_norm")) <= 1.0 + 1e-15);
  }
  CHECK(csv.value(20, "z_nm") == 0.0);
  CHECK(csv.value(20, "VH_norm") == -1.0);

  // an off-centre source pulls the strongest induced potential towards itself
  Csv shifted(run_cli("potential --a 5 --source-z 3 --zmin -10 --zmax 10 --zpoints 41").out);
  std::size_t peak = 0;
  for (std::size_t i = 0; i < shifted.rows(); ++i) {
    if (std::abs(shifted.value(i, "VH_V")) > std::abs(shifted.value(peak, "VH_V"))) peak = i;
  }
  CHECK(shifted.value(peak, "z_nm") > 0.0);
  CHECK(shifted.value(peak, "z_nm") <= 3.0);
  CHECK(std::abs(shifted.value(30, "VH_V")) > std::abs(shifted.value(10, "VH_V")));
}

TEST_CASE("potential in the plane") {
  auto r = run_cli("potential --a 4 --cut plane --zpoints 31");
  REQUIRE(r.exit_code == 0);
  Csv csv(r.out);
  CHECK(csv.value(0, "r_nm") == -3.0);
  for (std::size_t i = 0; i < csv.rows(); ++i) {
    CHECK(csv.value(i, "VH_V") ==
          doctest::Approx(csv.value(csv.rows() - 1 - i, "VH_V")).epsilon(1e-13));
  }
  CHECK(csv.value(15, "VH_norm") == -1.0);
}

TEST_CASE("charge energy") {
  Csv csv(run_cli("charge-energy --a 5 --zmin -10 --zmax 10 --zpoints 41").out);
  CHECK(csv.value(20, "U_norm") == -1.0);
  for (std::size_t i = 21; i < csv.rows(); ++i) {
    CHECK(std::abs(csv.value(i, "U_norm")) < std::abs(csv.value(i - 1, "U_norm")));
    CHECK(csv.value(i, "U_eV") == csv.value(40 - i, "U_eV"));
  }
}

TEST_CASE("vdw tables") {
  Csv thin(run_cli("vdw --a 5 --b 1 --zmin -10 --zmax 10 --zpoints 401").out);
  const std::size_t mid = 200;
  CHECK(thin.value(mid, "F_eV_per_nm") == 0.0);
  CHECK(thin.value(mid, "U_norm") == -1.0);
  bool went_positive = false, then_negative = false;
  for (std::size_t i = mid + 1; i < thin.rows(); ++i) {
    const double f = thin.value(i, "F_eV_per_nm");
    CHECK(thin.value(i, "U_eV") == thin.value(2 * mid - i, "U_eV"));
    CHECK(f == -thin.value(2 * mid - i, "F_eV_per_nm"));
    CHECK(thin.value(i, "U_eV") < 0.0);
    if (f > 0.0 && !then_negative) went_positive = true;
    if (f < 0.0 && went_positive) then_negative = true;
  }
  CHECK(went_positive);
  CHECK(then_negative);
  // force against the energy slope
  for (std::size_t i = 10; i + 10 < thin.rows(); i += 37) {
    const double h = thin.value(i + 1, "zp_nm") - thin.value(i, "zp_nm");
    const double slope = (thin.value(i + 1, "U_eV") - thin.value(i - 1, "U_eV")) / (2.0 * h);
    CHECK(thin.value(i, "F_eV_per_nm") == doctest::Approx(-slope).epsilon(2e-2).scale(1e-5));
  }

  Csv thick(run_cli("vdw --a 5 --b 4.9 --zmin 0 --zmax 20 --zpoints 81 --quantity force").out);
  CHECK(thick.columns() == std::vector<std::string>{"zp_nm", "F_eV_per_nm", "F_norm"});
  for (std::size_t i = 1; i < thick.rows(); ++i) CHECK(thick.value(i, "F_eV_per_nm") < 0.0);
}

TEST_CASE("sweep over a/b") {
  auto r = run_cli("sweep-ratio --b 1 --ratio-min 1.5 --ratio-max 10 --ratio-points 171 --format json");
  REQUIRE(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  const auto& cross = doc["diagnostics"]["crossings"];
  REQUIRE(cross.size() == 3);
  double prev = 0.0;
  const double golden[] = {3.55276688908234861, 4.39835037869895555, 5.48474799752996355};
  for (int k = 0; k < 3; ++k) {
    const double c = cross[k]["crossing_ratio"].get<double>();
    CHECK(c > prev);
    CHECK(std::abs(c - golden[k]) < 0.05);  // grid spacing
    prev = c;
  }
  const auto& last = doc["rows"].back();
  for (int k = 0; k < 3; ++k) CHECK(last[1 + 2 * k].get<double>() > 0.0);
}

TEST_CASE("contour file and plotting script") {
  const auto dir = std::filesystem::temp_directory_path() / ("toroid_cli_" + std::to_string(getpid()));
  std::filesystem::create_directories(dir);
  const auto data = dir / "contour.csv";
  auto r = run_cli("contour --ratio-points 6 --zpoints 4 --zmin -1 --zmax 2 --out " + data.string());
  REQUIRE(r.exit_code == 0);
  std::ifstream in(data, std::ios::binary);
  std::stringstream text;
  text << in.rdbuf();
  const auto lines = testing::split(text.str(), "\r\n");
  REQUIRE(lines.size() == 5);
  CHECK(lines[0].rfind("6,", 0) == 0);
  CHECK(lines[1].rfind("-1,", 0) == 0);
  const auto cells = testing::split(lines[2], ",");  // z_p/b = 0
  for (std::size_t j = 1; j < cells.size(); ++j) CHECK(std::stod(cells[j]) == 0.0);
  std::ifstream gp(dir / "contour.gp");
  std::stringstream script;
  script << gp.rdbuf();
  CHECK(script.str().find("\"contour.csv\" nonuniform matrix") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("plot script for curves") {
  const auto dir = std::filesystem::temp_directory_path() / ("toroid_cli_v_" + std::to_string(getpid()));
  std::filesystem::create_directories(dir);
  REQUIRE(run_cli("vdw --normalize --zpoints 11 --out " + (dir / "v.csv").string()).exit_code == 0);
  std::ifstream gp(dir / "v.gp");
  std::stringstream script;
  script << gp.rdbuf();
  CHECK(script.str().find("\"v.csv\" using 1:3") != std::string::npos);
  CHECK(script.str().find("\"v.csv\" using 1:5") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("validate") {
  auto r = run_cli("validate");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  Csv csv(r.out);
  CHECK(csv.rows() == 7);
}
