#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "fdde/cli.hpp"
#include "fdde/io.hpp"

using namespace fdde;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fdde_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

io::CsvTable load(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in);
  return io::read_csv(in);
}

}  // namespace

TEST_CASE("simulate: Ucar stable orbit") {
  const auto path = scratch("ucar_stable.csv");
  const auto r = run({"simulate", "--model", "ucar", "--alpha", "0.9", "--tau1", "0.4", "--tau2", "0.5",
                      "--T", "200", "--h", "0.01", "--history", "0.8", "--out", path.string()});
  REQUIRE(r.code == cli::kSuccess);
  const auto table = load(path);
  CHECK(table.header == std::vector<std::string>{"t", "x", "x_tau1", "x_tau2"});
  REQUIRE(table.rows.size() == 20001);
  CHECK(table.rows.front()[0] == 0.0);
  CHECK(table.rows.front()[1] == 0.8);
  CHECK(table.rows.back()[0] == doctest::Approx(200.0));
  CHECK(std::abs(table.rows.back()[1] - 1.0) <= 1e-3);
  // x_tau1 column is the x column shifted by 40 rows.
  CHECK(table.rows[100][2] == table.rows[60][1]);
  CHECK(table.rows[100][3] == table.rows[50][1]);
}

TEST_CASE("simulate: Ikeda chaotic run stays bounded") {
  const auto path = scratch("ikeda_chaos.csv");
  const auto r = run({"simulate", "--model", "ikeda", "--alpha", "0.7", "--tau1", "0.01", "--tau2", "0.1",
                      "--T", "50", "--h", "0.0025", "--history", "2.5", "--out", path.string()});
  REQUIRE(r.code == cli::kSuccess);
  const auto table = load(path);
  REQUIRE(table.rows.size() == 20001);
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& row : table.rows) {
    REQUIRE(std::isfinite(row[1]));
    if (row[0] >= 25.0) {
      lo = std::min(lo, row[1]);
      hi = std::max(hi, row[1]);
    }
  }
  CHECK(hi - lo > 0.5);
  CHECK(std::max(std::abs(lo), std::abs(hi)) < 20.0);
}

TEST_CASE("simulate: linear system with b = 0 is accepted") {
  const auto path = scratch("linear.csv");
  const auto r = run({"simulate", "--linear", "--a", "-1", "--b", "0", "--alpha", "1", "--tau1", "1",
                      "--tau2", "1", "--T", "2", "--h", "0.001", "--out", path.string()});
  REQUIRE(r.code == cli::kSuccess);
  const auto table = load(path);
  CHECK(std::abs(table.rows[500][1] - 0.5) <= 1e-6);
}

TEST_CASE("simulate: blow-up exits with 2 and keeps the partial file") {
  const auto path = scratch("blowup.csv");
  const auto r = run({"simulate", "--linear", "--a", "40", "--b", "40", "--alpha", "1", "--tau1", "0.1",
                      "--tau2", "0.1", "--T", "50", "--h", "0.01", "--history", "1", "--out", path.string()});
  CHECK(r.code == cli::kTruncated);
  CHECK(r.err.find("non-finite") != std::string::npos);
  const auto table = load(path);
  CHECK(table.rows.size() > 1);
  CHECK(table.rows.size() < 5001);
}

TEST_CASE("simulate: configuration errors exit with 1") {
  const auto path = scratch("bad.csv").string();
  CHECK(run({"simulate", "--model", "ucar", "--alpha", "1.5", "--tau1", "1", "--tau2", "1", "--T", "1", "--out", path}).code == 1);
  CHECK(run({"simulate", "--model", "ucar", "--alpha", "0.5", "--tau1", "1", "--tau2", "1.41421356237", "--T", "10",
             "--h", "0.1", "--out", path}).code == 1);
  CHECK(run({"simulate", "--model", "lorenz", "--alpha", "0.5", "--tau1", "1", "--tau2", "1", "--T", "1", "--out", path}).code == 1);
  CHECK(run({"simulate", "--alpha", "0.5", "--tau1", "1", "--tau2", "1", "--T", "1", "--out", path}).code == 1);
  CHECK(run({"simulate", "--linear", "--a", "1", "--alpha", "0.5", "--tau1", "1", "--tau2", "1", "--T", "1", "--out", path}).code == 1);
  CHECK(run({"simulate", "--model", "ucar", "--alpha", "0.5", "--tau1", "0", "--tau2", "1", "--T", "1", "--out", path}).code == 1);
  CHECK(run({"simulate", "--model", "ucar", "--delta", "-1", "--alpha", "0.5", "--tau1", "1", "--tau2", "1", "--T", "1", "--out", path}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("curves") {
  SUBCASE("Ucar alpha = 1 touches the tau2 axis near 0.4352") {
    const auto path = scratch("ucar_curves.csv");
    const auto r = run({"curves", "--model", "ucar", "--alpha", "1", "--out", path.string()});
    REQUIRE(r.code == 0);
    const auto table = load(path);
    CHECK(table.header ==
          std::vector<std::string>{"v", "tau1", "tau2", "sign1", "m1", "sign2", "m2", "residual"});
    bool found = false;
    for (const auto& row : table.rows) {
      CHECK(row[7] <= 1e-9);
      if (std::abs(row[0] - 2.8284) < 2e-3 && row[1] < 2e-3 && std::abs(row[2] - 0.4352) < 1e-3) found = true;
    }
    CHECK(found);
  }
  SUBCASE("Ikeda coefficients give a non-empty curve") {
    const auto path = scratch("ikeda_curves.csv");
    const auto r = run({"curves", "--linear", "--a", "-3", "--b", "-22.4977", "--alpha", "0.7", "--out", path.string()});
    REQUIRE(r.code == 0);
    CHECK_FALSE(load(path).rows.empty());

    const auto via_model = scratch("ikeda_model_curves.csv");
    REQUIRE(run({"curves", "--model", "ikeda", "--alpha", "0.7", "--x-star", "2.79", "--out", via_model.string()}).code == 0);
    CHECK_FALSE(load(via_model).rows.empty());
  }
  SUBCASE("empty window writes only the header") {
    const auto path = scratch("empty_curves.csv");
    const auto r = run({"curves", "--linear", "--a", "1", "--b", "-3", "--alpha", "1", "--v-min", "5", "--v-max", "6",
                        "--out", path.string()});
    REQUIRE(r.code == 0);
    const auto table = load(path);
    CHECK(table.header.size() == 8);
    CHECK(table.rows.empty());
  }
  SUBCASE("degenerate coefficients exit with 1") {
    const auto r = run({"curves", "--linear", "--a", "1", "--b", "0", "--alpha", "1", "--out", scratch("x.csv").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("degenerate") != std::string::npos);
  }
}

TEST_CASE("classify") {
  using nlohmann::json;
  SUBCASE("Ucar alpha = 0.9") {
    auto r = run({"classify", "--model", "ucar", "--alpha", "0.9", "--tau1", "0.4", "--tau2", "0.5"});
    REQUIRE(r.code == 0);
    auto doc = json::parse(r.out);
    CHECK(doc["verdict"] == "Stable");
    CHECK(doc["a"] == 1.0);
    CHECK(doc["b"] == -3.0);
    CHECK(doc["alpha"] == 0.9);
    CHECK(doc["tau1"] == 0.4);
    CHECK(doc["tau2"] == 0.5);
    CHECK(doc["critical_tau2"].is_number());

    r = run({"classify", "--model", "ucar", "--alpha", "0.9", "--tau1", "1.6", "--tau2", "1.4"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["verdict"] == "Unstable");
  }
  SUBCASE("zero delays with a + b = 0") {
    const auto r = run({"classify", "--linear", "--a", "1", "--b", "-1", "--alpha", "0.5", "--tau1", "0", "--tau2", "0"});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["verdict"] == "OnBoundary");
    CHECK(doc["critical_tau2"].is_null());
    for (const char* key : {"verdict", "critical_tau2", "a", "b", "alpha", "tau1", "tau2"}) CHECK(doc.contains(key));
    CHECK(doc.size() == 7);
  }
  SUBCASE("Ikeda alpha = 0.7") {
    auto r = run({"classify", "--model", "ikeda", "--alpha", "0.7", "--tau1", "0.02", "--tau2", "0.01"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["verdict"] == "Stable");
    r = run({"classify", "--model", "ikeda", "--alpha", "0.7", "--tau1", "0.01", "--tau2", "0.1"});
    CHECK(json::parse(r.out)["verdict"] == "Unstable");
  }
  SUBCASE("degenerate coefficients exit with 1") {
    CHECK(run({"classify", "--linear", "--a", "-1", "--b", "0", "--alpha", "0.5", "--tau1", "1", "--tau2", "1"}).code == 1);
  }
}

TEST_CASE("equilibria") {
  using nlohmann::json;
  SUBCASE("ikeda") {
    const auto r = run({"equilibria", "--model", "ikeda"});
    REQUIRE(r.code == 0);
    const auto list = json::parse(r.out);
    REQUIRE(list.size() == 7);
    for (const auto& e : list) {
      for (const char* key : {"x_star", "a", "b", "stable_at_zero"}) CHECK(e.contains(key));
    }
  }
  SUBCASE("ucar with delta = epsilon = 1") {
    const auto r = run({"equilibria", "--model", "ucar"});
    REQUIRE(r.code == 0);
    const auto list = json::parse(r.out);
    REQUIRE(list.size() == 3);
    CHECK(std::abs(list[1]["x_star"].get<double>()) <= 1e-12);
    CHECK(list[1]["a"] == 1.0);
    CHECK(list[1]["b"] == 0.0);
    CHECK(list[1]["stable_at_zero"] == false);
    CHECK(list[0]["stable_at_zero"] == true);
    CHECK(list[2]["stable_at_zero"] == true);
  }
  SUBCASE("ucar with epsilon = 4") {
    const auto r = run({"equilibria", "--model", "ucar", "--delta", "1", "--epsilon", "4"});
    const auto list = json::parse(r.out);
    REQUIRE(list.size() == 3);
    CHECK(list[0]["x_star"].get<double>() == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(list[2]["x_star"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("unknown model") {
    CHECK(run({"equilibria", "--model", "mackey-glass"}).code == 1);
  }
}

TEST_CASE("CSV values survive a text round trip bit for bit") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<std::uint64_t> bits;
  std::vector<PhaseRow> rows;
  while (rows.size() < 2000) {
    double v[4];
    for (double& d : v) {
      const std::uint64_t b = bits(rng);
      std::memcpy(&d, &b, sizeof d);
    }
    if (std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]) && std::isfinite(v[3])) {
      rows.push_back({v[0], v[1], v[2], v[3]});
    }
  }
  rows.push_back({0.0, -0.0, 5e-324, 1.7976931348623157e308});
  std::stringstream buffer;
  io::write_trajectory_csv(buffer, rows);
  const auto table = io::read_csv(buffer);
  REQUIRE(table.rows.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double want[4] = {rows[i].t, rows[i].x, rows[i].x_tau1, rows[i].x_tau2};
    for (int c = 0; c < 4; ++c) REQUIRE(std::memcmp(&table.rows[i][c], &want[c], sizeof(double)) == 0);
  }
}

#ifdef FDDE_CLI_BINARY
TEST_CASE("the installed binary reports exit codes") {
  auto status = [](const std::string& args) {
    const int raw = std::system((std::string(FDDE_CLI_BINARY) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  const std::string out = scratch("binary.csv").string();
  CHECK(status("equilibria --model ucar") == 0);
  CHECK(status("equilibria --model nope") == 1);
  CHECK(status("simulate --linear --a 40 --b 40 --alpha 1 --tau1 0.1 --tau2 0.1 --T 50 --h 0.01 --out " + out) == 2);
}
#endif
