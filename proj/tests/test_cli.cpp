// End-to-end checks of the command-line front end: exit codes, report files,
// CSV snapshots and byte-level determinism.  Drives the installed binary via
// std::system with configs written to a scratch directory.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kairon/config.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

const fs::path kScratch = fs::temp_directory_path() / "kairon_cli_tests";

struct RunResult {
  int exit_code;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(KAIRON_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return RunResult{WEXITSTATUS(status)};
}

fs::path write_config(const std::string& name, const ordered_json& j) {
  fs::create_directories(kScratch);
  const fs::path path = kScratch / name;
  std::ofstream out(path);
  out << j.dump(2);
  return path;
}

ordered_json small_config(int m) {
  ordered_json j = kairon::RunConfig::defaults(m).echo();
  j["samples"] = {{"group", 60}, {"jacobian", 4}, {"mc", 4000}, {"field_points", 10},
                  {"rapidity", 2.0}};
  j["quadrature"] = {{"sphere_resolution", m == 3 ? 8 : 64},
                     {"s_steps", 200},
                     {"loop_steps", 150},
                     {"t_steps", 1200},
                     {"s_window", {-8.0, 8.0}},
                     {"t_window", {-4.0, 4.0}}};
  return j;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("shipped default configs match RunConfig::defaults") {
  for (int m = 1; m <= 3; ++m) {
    const fs::path shipped =
        fs::path(KAIRON_SOURCE_DIR) / "configs" / ("verify_m" + std::to_string(m) + ".json");
    REQUIRE(fs::exists(shipped));
    const ordered_json on_disk = ordered_json::parse(slurp(shipped));
    CHECK(on_disk == kairon::RunConfig::defaults(m).echo());
  }
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("").exit_code == 2);
  CHECK(run("frobnicate --config x.json").exit_code == 2);
  CHECK(run("verify").exit_code == 2);                          // --config required
  CHECK(run("verify --config /nonexistent.json").exit_code == 2);
}

TEST_CASE("verify: small config passes, reports land on disk") {
  const fs::path cfg = write_config("verify_small.json", small_config(2));
  const fs::path report = kScratch / "report.json";
  CHECK(run("verify --config " + cfg.string() + " --out " + report.string()).exit_code == 0);

  const ordered_json j = ordered_json::parse(slurp(report));
  CHECK(j["summary"]["pass"] == true);
  CHECK(j["config_hash"].is_string());
  for (const auto& c : j["checks"]) {
    CHECK(c.contains("anchor"));
    CHECK(c.contains("residual"));
    CHECK(c.contains("tolerance"));
  }

  SUBCASE("reports are byte-identical across runs") {
    const fs::path second = kScratch / "report2.json";
    CHECK(run("verify --config " + cfg.string() + " --out " + second.string()).exit_code == 0);
    CHECK(slurp(report) == slurp(second));
  }
}

TEST_CASE("verify: unreachable tolerance exits 1") {
  ordered_json j = small_config(2);
  j["tolerances"] = {{"cocycle_identity", 1e-30}};
  const fs::path cfg = write_config("verify_tight.json", j);
  CHECK(run("verify --config " + cfg.string()).exit_code == 1);
}

TEST_CASE("verify: light-like worldline exits 2") {
  ordered_json j = small_config(2);
  j["worldline"] = {{"kind", "straight_line"}, {"beta", {1.0, 0.0}}};
  const fs::path cfg = write_config("verify_lightlike.json", j);
  CHECK(run("verify --config " + cfg.string()).exit_code == 2);
}

TEST_CASE("propagate: CSV snapshot with slab support") {
  ordered_json j = small_config(2);
  j["propagate"] = {{"x0", 0.0},
                    {"grid", {{{"min", -3.0}, {"max", 3.0}, {"count", 41}},
                              {{"min", 0.0}, {"max", 0.0}, {"count", 1}}}},
                    {"mode", "fixed_direction"},
                    {"direction", {1.0, 0.0}}};
  const fs::path cfg = write_config("propagate.json", j);
  const fs::path csv = kScratch / "snapshot.csv";
  CHECK(run("propagate --config " + cfg.string() + " --out " + csv.string()).exit_code == 0);

  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# config_hash=", 0) == 0);
  std::getline(in, line);
  CHECK(line == "x1,x2,psi");

  int rows = 0, nonzero_inside = 0, nonzero_outside = 0;
  while (std::getline(in, line)) {
    ++rows;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const double x1 = std::stod(line.substr(0, c1));
    const double value = std::stod(line.substr(c2 + 1));
    // fixed direction e1 at x0=0: psi != 0 exactly when |x1| < 1
    if (std::abs(x1) < 1.0 && value != 0.0) ++nonzero_inside;
    if (std::abs(x1) >= 1.0 && value != 0.0) ++nonzero_outside;
  }
  CHECK(rows == 41);
  CHECK(nonzero_inside > 0);
  CHECK(nonzero_outside == 0);

  SUBCASE("byte-identical with several threads") {
    const fs::path csv4 = kScratch / "snapshot4.csv";
    CHECK(run("propagate --config " + cfg.string() + " --threads 4 --out " + csv4.string()).exit_code == 0);
    CHECK(slurp(csv) == slurp(csv4));
  }
}

TEST_CASE("propagate: 1+1 support lies on the null lines") {
  ordered_json j = small_config(1);
  j["propagate"] = {{"x0", 2.0},
                    {"grid", {{{"min", -4.0}, {"max", 4.0}, {"count", 81}}}},
                    {"mode", "fixed_direction"},
                    {"direction", {-1.0}}};
  const fs::path cfg = write_config("propagate1d.json", j);
  const fs::path csv = kScratch / "snapshot1d.csv";
  CHECK(run("propagate --config " + cfg.string() + " --out " + csv.string()).exit_code == 0);

  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto c1 = line.find(',');
    const double x1 = std::stod(line.substr(0, c1));
    const double value = std::stod(line.substr(c1 + 1));
    // w = -1 at x0 = 2: the slab is |2 - x1| < 1
    if (value != 0.0) CHECK(std::abs(2.0 - x1) < 1.0);
  }
}

TEST_CASE("inner-product command") {
  const fs::path cfg = write_config("inner.json", small_config(3));
  const fs::path out = kScratch / "inner.json.out";
  CHECK(run("inner-product --config " + cfg.string() + " --out " + out.string()).exit_code == 0);
  const ordered_json j = ordered_json::parse(slurp(out));
  REQUIRE(j["values"].size() == 2);
  const double v0 = j["values"][0]["value"].get<double>();
  CHECK(v0 > 0.0);
  CHECK(j["pairwise_defects"][0]["relative_defect"].get<double>() <= 1e-5);

  SUBCASE("empty worldline list exits 2") {
    ordered_json bad = small_config(3);
    bad["inner_product"] = {{"worldlines", ordered_json::array()}};
    const fs::path cfgbad = write_config("inner_bad.json", bad);
    CHECK(run("inner-product --config " + cfgbad.string()).exit_code == 2);
  }
  SUBCASE("non-compact data in multi-path mode exits 2") {
    ordered_json bad = small_config(3);
    bad["initial_data"] = {{"expression", "exp(-t^2)"}};  // no support given
    const fs::path cfgbad = write_config("inner_noncompact.json", bad);
    CHECK(run("inner-product --config " + cfgbad.string()).exit_code == 2);
  }
}

TEST_CASE("transform command") {
  ordered_json j = small_config(2);
  j["transforms"] = {{{"type", "boost"}, {"direction", {1.0, 0.0}}, {"rapidity", 1.0}},
                     {{"type", "rotation"}, {"i", 1}, {"j", 2}, {"angle", 0.7}},
                     {{"type", "translation"}, {"a", {0.2, 0.1, 0.0}}}};
  j["quadrature"]["t_steps"] = 2000;
  j["quadrature"]["sphere_resolution"] = 256;
  const fs::path cfg = write_config("transform.json", j);
  const fs::path out = kScratch / "transform.json.out";
  CHECK(run("transform --config " + cfg.string() + " --out " + out.string()).exit_code == 0);
  const ordered_json r = ordered_json::parse(slurp(out));
  CHECK(r["norm_before"].get<double>() > 0.0);
  CHECK(r["defect"].get<double>() <= 1e-6);

  SUBCASE("invalid transform parameters exit 2") {
    ordered_json bad = small_config(2);
    bad["transforms"] = {{{"type", "boost"}, {"direction", {3.0, 0.0}}, {"rapidity", 1.0}}};
    const fs::path cfgbad = write_config("transform_bad.json", bad);
    CHECK(run("transform --config " + cfgbad.string()).exit_code == 2);
  }
}
