#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "ifsthermo/errors.hpp"

using namespace ifsthermo;
using namespace ifsthermo::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string config(const std::string& name) { return std::string(IFSTHERMO_CONFIG_DIR) + "/" + name; }

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "ifsthermo_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch_dir() / name;
  std::ofstream(p) << text;
  return p.string();
}

// Minimal RFC 4180 reader.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\n') {
      row.push_back(field);
      rows.push_back(row);
      row.clear();
      field.clear();
    } else {
      field += c;
    }
  }
  REQUIRE_FALSE(quoted);
  REQUIRE(field.empty());
  return rows;
}

void check_rectangular(const std::vector<std::vector<std::string>>& rows) {
  REQUIRE_FALSE(rows.empty());
  for (const auto& r : rows) REQUIRE(r.size() == rows.front().size());
}

}  // namespace

TEST_CASE("pressure command") {
  const Result r = run_cli({"pressure", "--config", config("middle_thirds.json"), "--t", "0"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  check_rectangular(rows);
  CHECK(rows[0] == std::vector<std::string>{"n", "P_n"});
  CHECK(rows.size() == 17);
  CHECK(std::stod(rows.back()[1]) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  const Result fig = run_cli({"pressure", "--config", config("darst_0.1_0.5.json"), "--t", "1", "--depth", "12"});
  REQUIRE(fig.code == 0);
  const auto frows = parse_csv(fig.out);
  CHECK(frows.size() == 13);
  for (std::size_t i = 1; i < frows.size(); ++i) CHECK(std::abs(std::stod(frows[i][1]) - std::log(0.6)) <= 1e-12);
}

TEST_CASE("over-budget runs fail with the resource status and leave no file") {
  const fs::path out = scratch_dir() / "never.csv";
  fs::remove(out);
  const Result r = run_cli({"pressure", "--config", config("middle_thirds.json"), "--depth", "40", "--out", out.string()});
  CHECK(r.code == kExitResource);
  CHECK(r.err.find("resource") != std::string::npos);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("the enumeration budget can be overridden from the environment") {
  ::setenv(kBudgetEnv, "1000", 1);
  const Result r = run_cli({"pressure", "--config", config("middle_thirds.json")});
  ::setenv(kBudgetEnv, "lots", 1);
  const Result bad = run_cli({"pressure", "--config", config("middle_thirds.json")});
  ::unsetenv(kBudgetEnv);
  CHECK(r.code == kExitResource);
  CHECK(bad.code == kExitInput);
  CHECK(bad.err.find(kBudgetEnv) != std::string::npos);
}

TEST_CASE("beta-curve command") {
  const Result r = run_cli({"beta-curve", "--config", config("darst_0.1_0.5.json")});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  check_rectangular(rows);
  CHECK(rows[0] == std::vector<std::string>{"t", "beta", "residual"});
  bool saw_delta = false, saw_alpha = false;
  double prev_t = -1, prev_b = -1e300;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double t = std::stod(rows[i][0]), b = std::stod(rows[i][1]);
    CHECK(t > prev_t);
    CHECK(b > prev_b);
    if (std::abs(b) <= 1e-8) saw_delta = true;
    if (t == 1.0 && std::abs(b - 1.0) <= 1e-8) saw_alpha = true;
    prev_t = t;
    prev_b = b;
  }
  CHECK(saw_delta);
  CHECK(saw_alpha);
  // 25 grid points plus the injected delta row (t = 1 is already on the grid).
  CHECK(rows.size() == 27);

  const Result ahlfors = run_cli({"beta-curve", "--config", config("middle_thirds.json"), "--steps", "11"});
  REQUIRE(ahlfors.code == 0);
  const double delta = std::log(2.0) / std::log(3.0);
  const auto arows = parse_csv(ahlfors.out);
  for (std::size_t i = 1; i < arows.size(); ++i) {
    const double t = std::stod(arows[i][0]);
    CHECK(std::abs(std::stod(arows[i][1]) - (delta - t) / (delta - 1.0)) <= 1e-8);
    CHECK(std::stod(arows[i][2]) <= 1e-8);
  }
}

TEST_CASE("beta-curve rejects non-admissible configurations") {
  const std::string path = write_file("boundary.json", R"({
    "system": {"ratios": [0.3333333333333333, 0.3333333333333333]},
    "potential": {"form": "conformal"},
    "alpha": 0.5
  })");
  const Result r = run_cli({"beta-curve", "--config", path});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("admissible") != std::string::npos);
}

TEST_CASE("dimensions command") {
  const Result mt = run_cli({"dimensions", "--config", config("middle_thirds.json")});
  REQUIRE(mt.code == 0);
  const auto rows = parse_csv(mt.out);
  check_rectangular(rows);
  CHECK(rows[0] == std::vector<std::string>{"delta", "dim_nu", "s", "s_0", "s_1", "min_ratio", "ordering_note"});
  CHECK(std::abs(std::stod(rows[1][0]) - 0.630930) <= 1e-6);
  CHECK(std::abs(std::stod(rows[1][2]) - 0.398072) <= 1e-6);

  const Result f1 = run_cli({"dimensions", "--config", config("darst_0.1_0.5.json"), "--format", "json"});
  REQUIRE(f1.code == 0);
  CHECK(nlohmann::json::parse(f1.out).at("ordering_note") == "dim_nu > s");
  const Result f2 = run_cli({"dimensions", "--config", config("darst_0.01_0.8.json"), "--format", "json"});
  REQUIRE(f2.code == 0);
  CHECK(nlohmann::json::parse(f2.out).at("ordering_note") == "dim_nu < s");
}

TEST_CASE("staircase command") {
  const Result r = run_cli({"staircase", "--config", config("middle_thirds.json")});
  REQUIRE(r.code == 0);
  auto rows = parse_csv(r.out);
  check_rectangular(rows);
  CHECK(rows[0] == std::vector<std::string>{"x", "F_lower", "F_upper"});
  REQUIRE(rows.size() == 5);
  CHECK(std::stod(rows[2][1]) == 0.5);
  CHECK(std::stod(rows[3][2]) == 0.5);

  const Result ten = run_cli({"staircase", "--config", config("middle_thirds.json"), "--level", "10"});
  REQUIRE(ten.code == 0);
  rows = parse_csv(ten.out);
  REQUIRE(rows.size() == 1 + 2 * 1024);
  for (std::size_t i = 2; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][0]) > std::stod(rows[i - 1][0]));
    CHECK(std::stod(rows[i][1]) >= std::stod(rows[i - 1][1]));
    CHECK(std::stod(rows[i][2]) >= std::stod(rows[i - 1][2]));
  }

  const Result darst = run_cli({"staircase", "--config", config("darst_0.1_0.5.json"), "--format", "json"});
  REQUIRE(darst.code == 0);
  const auto doc = nlohmann::json::parse(darst.out);
  CHECK(doc.at("count") == 512);
  // The 0-half carries mass 1/6.
  const auto& pts = doc.at("points");
  CHECK(pts[255].at("F_upper").get<double>() == doctest::Approx(1.0 / 6).epsilon(1e-12));
}

TEST_CASE("scan-point command") {
  const Result alt = run_cli({"scan-point", "--config", config("middle_thirds.json"), "--period", "0,1"});
  REQUIRE(alt.code == 0);
  const auto rows = parse_csv(alt.out);
  check_rectangular(rows);
  CHECK(rows[0] == std::vector<std::string>{"n", "k", "i", "score", "in_chain", "oscillation_candidate"});
  CHECK(rows[1][5] == "0");

  const Result blocks =
      run_cli({"scan-point", "--config", config("middle_thirds.json"), "--construct", "blocks", "--format", "json"});
  REQUIRE(blocks.code == 0);
  const auto doc = nlohmann::json::parse(blocks.out);
  CHECK(doc.at("oscillation_candidate") == true);
  CHECK(doc.at("depth").get<int>() >= 200);

  const Result endpoint = run_cli({"scan-point", "--config", config("middle_thirds.json"), "--constant", "0"});
  CHECK(endpoint.code == kExitInput);
  CHECK(endpoint.out.empty());
}

TEST_CASE("validate command") {
  const Result ok = run_cli({"validate", "--config", config("nonlinear.json")});
  CHECK(ok.code == 0);
  CHECK(ok.out == "condition,detail\n");
  const std::string path = write_file("overlap.json", R"({"system": {"ratios": [0.6, 0.5]}})");
  const Result bad = run_cli({"validate", "--config", path, "--format", "json"});
  CHECK(bad.code == kExitInput);
  const auto doc = nlohmann::json::parse(bad.out);
  CHECK(doc.at("valid") == false);
  CHECK(doc.at("violations")[0].at("condition") == "strong separation");
  // Other commands refuse the same system.
  CHECK(run_cli({"pressure", "--config", path}).code == kExitInput);
}

TEST_CASE("config errors name the field") {
  auto expect = [](const std::string& text, const std::string& fragment) {
    const std::string path = write_file("bad.json", text);
    const Result r = run_cli({"dimensions", "--config", path});
    CHECK(r.code == kExitInput);
    CHECK_MESSAGE(r.err.find(fragment) != std::string::npos, r.err);
  };
  expect(R"({"system": {"maps": [{"kind": "affine", "ratio": 0.3}]}})", "$.system.maps[0].offset");
  expect(R"({"system": {"ratios": [0.1, 0.5]}, "alpha": "one"})", "$.alpha");
  expect(R"({"system": {"ratios": [0.1, 0.5]}, "potential": {"form": "weird"}})", "$.potential.form");
  expect(R"({"system": {"ratios": [0.1, 0.5]}, "numerics": {"depht": 3}})", "$.numerics.depht");
  expect("{\n  \"system\": {\n    \"ratios\": [0.1,\n  }\n}", "line 4");
  expect(R"({"system": {"ratios": [0.1, 0.5]}, "potential": {"form": "bernoulli", "probabilities": [0.5]}})",
         "$.potential.probabilities");
  CHECK(run_cli({"dimensions", "--config", "/nonexistent/config.json"}).code == kExitInput);
  CHECK(run_cli({"dimensions"}).code == kExitInput);
  CHECK(run_cli({"frobnicate"}).code == kExitInput);
}

TEST_CASE("outputs are deterministic and well formed") {
  const fs::path a = scratch_dir() / "a.json", b = scratch_dir() / "b.json";
  for (const auto& p : {a, b}) {
    REQUIRE(run_cli({"dimensions", "--config", config("darst_0.01_0.8.json"), "--format", "json", "--out", p.string()})
                .code == 0);
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  CHECK(slurp(a) == slurp(b));
  CHECK(nlohmann::json::accept(slurp(a)));
  for (const char* cmd : {"pressure", "beta-curve", "staircase", "scan-point"}) {
    const Result r = run_cli({cmd, "--config", config("darst_0.1_0.5.json"), "--format", "json", "--period", "0,1"});
    if (std::string(cmd) != "scan-point") {
      const Result plain = run_cli({cmd, "--config", config("darst_0.1_0.5.json"), "--format", "json"});
      REQUIRE(plain.code == 0);
      CHECK(nlohmann::json::accept(plain.out));
    } else {
      REQUIRE(r.code == 0);
      CHECK(nlohmann::json::accept(r.out));
    }
  }
}

TEST_CASE("potential forms resolve") {
  const RunConfig c = parse_config(R"({
    "system": {"ratios": [0.1, 0.5]},
    "potential": {"form": "linear-combination", "coeff_phi": 0.5, "coeff_base": 1.0,
                  "base": {"form": "darst-shift"}}
  })");
  const Thermo th(c.system);
  const PotentialSpec psi = resolve_potential(c.potential, th);
  CHECK(psi.phi_coeff == doctest::Approx(1.5));
  CHECK(psi.constant == doctest::Approx(-std::log(0.6)));
  CHECK(parse_word("0,1,1", "w") == Word{0, 1, 1});
  CHECK_THROWS_AS(parse_word("0,x", "w"), InputError);
}
