#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "airdrop/config_io.hpp"
#include "airdrop/error.hpp"
#include "airdrop/runner.hpp"

using namespace airdrop;
using nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({
    "n": 10, "alpha": 1, "beta": 1.13, "rho": 0.5, "t_tot": 10,
    "technology": {"kind": "threshold", "params": {"tau": 5, "v_low": 0, "v_high": 100}}
  })");
}

int category_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    return e.exit_code();
  }
  return 0;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("minimal config round-trips") {
  const ExperimentConfig c = parse_config(minimal());
  CHECK(c.game.n == 10);
  CHECK(c.game.costs == std::vector<double>(10, 1.0));
  CHECK(c.game.technology.tau == 5);
  const GameConfig back = game_config_from_json(game_config_to_json(c.game));
  CHECK(back.costs == c.game.costs);
  CHECK(back.rho == c.game.rho);
  CHECK(back.technology.v_high == 100);
  CHECK(config_hash(minimal()).size() == 16);
  CHECK(config_hash(minimal()) == config_hash(json::parse(minimal().dump())));
}

TEST_CASE("config errors carry categories") {
  CHECK_THROWS_AS(parse_config_text("{ not json"), Error);
  try {
    parse_config_text("{ not json");
  } catch (const Error& e) {
    CHECK(e.exit_code() == 2);
  }
  json d = minimal();
  d.erase("n");
  CHECK(category_of(d) == 3);
  d = minimal();
  d["rho"] = "half";
  CHECK(category_of(d) == 3);
  d = minimal();
  d["rho"] = 1.5;
  CHECK(category_of(d) == 4);
  d = minimal();
  d["technology"]["params"]["tau"] = 0;
  try {
    parse_config(d);
    FAIL("expected an error");
  } catch (const InvalidConfig& e) {
    CHECK(e.field() == "technology.params.tau");
  }
  d = minimal();
  d["technology"]["kind"] = "cubic";
  CHECK(category_of(d) == 3);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1, false) == "0.1");
  CHECK(format_double(0.1, true) == "0.10000000000000001");
  CHECK(format_double(2.0, true) == "2");
  Table t;
  t.columns = {"a", "b"};
  t.rows = {{std::int64_t{1}, 0.5}, {Cell{}, std::string("x")}};
  CHECK(to_csv(t, false) == "a,b\n1,0.5\n,x\n");
}

TEST_CASE("stochastic runs are byte-identical when reproducible") {
  json d = minimal();
  d["experiment"] = {{"trials", 12}, {"steps", 300}, {"stride", 10}};
  const ExperimentConfig c = parse_config(d);
  const auto base = std::filesystem::temp_directory_path() / "airdrop_unit_det";
  std::filesystem::remove_all(base);
  RunOptions o;
  o.seed = 17;
  o.reproducible = true;
  for (ExperimentKind k : {ExperimentKind::simulate, ExperimentKind::hitting}) {
    o.out_dir = base / "a";
    const json s1 = run_experiment(k, c, o);
    o.out_dir = base / "b";
    const json s2 = run_experiment(k, c, o);
    CHECK(s1.dump().size() > 0);
    for (const auto& entry : std::filesystem::directory_iterator(base / "a"))
      CHECK(slurp(entry.path()) == slurp(base / "b" / entry.path().filename()));
  }
  RunOptions unseeded;
  unseeded.out_dir = base / "c";
  CHECK_THROWS_AS(run_experiment(ExperimentKind::hitting, c, unseeded), InvalidConfig);
  std::filesystem::remove_all(base);
}

TEST_CASE("experiment summaries reproduce the qualitative claims") {
  const auto base = std::filesystem::temp_directory_path() / "airdrop_unit_runs";
  std::filesystem::remove_all(base);
  RunOptions o;
  o.reproducible = true;

  SUBCASE("times: hitting time increases with alpha") {
    json d = minimal();
    d["beta"] = 1;
    d["experiment"] = {{"alphas", {0.5, 1, 2}}};
    o.out_dir = base / "times";
    const json s = run_experiment(ExperimentKind::times, parse_config(d), o);
    const auto& rows = s["rows"];
    REQUIRE(rows.size() == 3);
    CHECK(rows[0]["exact_hit_tau"].get<double>() < rows[1]["exact_hit_tau"].get<double>());
    CHECK(rows[1]["exact_hit_tau"].get<double>() < rows[2]["exact_hit_tau"].get<double>());
  }
  SUBCASE("phase: sharp crossing near rho_c") {
    json d = minimal();
    d["beta"] = 50;
    d["experiment"] = {{"rho_grid", {{"from", 0}, {"to", 1}, {"points", 1001}}}};
    o.out_dir = base / "phase";
    const json s = run_experiment(ExperimentKind::phase, parse_config(d), o);
    CHECK(s["rho_c"].get<double>() == doctest::Approx(0.5));
    CHECK(std::abs(s["half_crossing_rho"].get<double>() - 0.5) <= 0.02);
  }
  SUBCASE("simulate: larger rewards hold the level above the threshold") {
    json d = minimal();
    d["experiment"] = {{"steps", 200000}, {"stride", 10}, {"rhos", {0.4, 0.8}}, {"seeds", {1, 2, 3}}};
    o.out_dir = base / "simulate";
    o.seed = 1;
    const json s = run_experiment(ExperimentKind::simulate, parse_config(d), o);
    double occ[2] = {0, 0};
    for (const auto& run : s["runs"]) {
      REQUIRE_FALSE(run["post_hit_occupancy"].is_null());
      occ[run["rho"].get<double>() > 0.5 ? 1 : 0] += run["post_hit_occupancy"].get<double>();
    }
    CHECK(occ[0] < occ[1]);
  }
  SUBCASE("equilibria and profit documents") {
    o.out_dir = base / "eq";
    const json e = run_experiment(ExperimentKind::equilibria, parse_config(minimal()), o);
    CHECK(e["path"] == "levels");
    CHECK(e["threshold"]["rho_c"].get<double>() == doctest::Approx(0.5));
    o.out_dir = base / "profit";
    const json p = run_experiment(ExperimentKind::profit, parse_config(minimal()), o);
    CHECK(p["rho_star"].get<double>() <= p["rho_bar"].get<double>());
    CHECK(std::filesystem::exists(base / "profit" / "profit.csv"));
  }
  std::filesystem::remove_all(base);
}
