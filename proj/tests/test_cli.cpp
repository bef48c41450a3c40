#include "support.hpp"

#include "eqloc/cli.hpp"
#include "eqloc/exact.hpp"
#include "eqloc/format.hpp"
#include "eqloc/ingest.hpp"
#include "eqloc/plan.hpp"

#include <doctest.h>

using namespace eqloc;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string instance_dir(const std::string& tag, const Instance& inst) {
  const auto dir = testing::scratch_dir(tag);
  save_instance(inst, dir.string());
  return dir.string();
}

// Value printed after "key: " on its own line.
std::string field(const std::string& text, const std::string& key) {
  const auto pos = text.find("\n" + key + ": ");
  if (pos == std::string::npos) return {};
  const auto start = pos + key.size() + 3;
  return text.substr(start, text.find('\n', start) - start);
}

std::string synth_city(const std::string& tag, std::vector<std::string> extra = {}) {
  const auto dir = testing::scratch_dir(tag).string();
  std::vector<std::string> args{"synth", "--out-dir", dir};
  args.insert(args.end(), extra.begin(), extra.end());
  REQUIRE(run(args).code == 0);
  return dir;
}

}  // namespace

TEST_CASE("cli: one block with its own store has EDE 0") {
  const auto dir = synth_city("cli_one", {"--grid", "1", "--candidate-stride", "1"});
  const auto r = run({"ede", "--instance", dir});
  CHECK(r.code == 0);
  CHECK(field(r.out, "ede_m") == "0.000");
}

TEST_CASE("cli: fixture T1 EDE printed to three decimals") {
  const auto dir = instance_dir("cli_t1", testing::fixture_t1());
  const auto r = run({"ede", "--instance", dir});
  REQUIRE(r.code == 0);
  const std::vector<double> z{200, 600, 900}, p{100, 50, 10};
  const double oracle = testing::mp_ede(z, p, -testing::plain_alpha(z, p));
  CHECK(field(r.out, "ede_m") == fmt::fixed3(oracle));
  CHECK(field(r.out, "weighted_mean_m") == "368.750");
  CHECK(r.out.rfind("config: {\"command\":\"ede\"", 0) == 0);
}

TEST_CASE("cli: malformed CSV exits 2 and names the line") {
  const auto dir = testing::scratch_dir("cli_bad");
  std::ofstream(dir / "blocks.csv") << "id,population\nb1,10\nb2,1O\n";
  std::ofstream(dir / "sites.csv") << "id,kind\ns1,existing\n";
  std::ofstream(dir / "distances.csv") << "block_id,s1\nb1,5\nb2,7\n";
  const auto r = run({"ede", "--instance", dir.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("blocks.csv:3:2") != std::string::npos);
  CHECK(r.err.find("population") != std::string::npos);
}

TEST_CASE("cli: usage errors exit 2") {
  CHECK(run({"locate", "--k", "1"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"ede", "--instance", "/definitely/not/here"}).code == 2);
  const auto dir = instance_dir("cli_usage", testing::fixture_t1());
  CHECK(run({"target", "--instance", dir}).code == 2);
  CHECK(run({"target", "--instance", dir, "--target-m", "5", "--target-min", "5"}).code == 2);
  CHECK(run({"locate", "--instance", dir, "--k", "1", "--objective", "median"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli: budget beyond the candidates exits 3") {
  const auto dir = instance_dir("cli_budget", testing::fixture_t1());
  const auto r = run({"locate", "--instance", dir, "--k", "3"});
  CHECK(r.code == 3);
  CHECK(r.err.find("exceeds") != std::string::npos);
}

TEST_CASE("cli: locate with k = 0 leaves access unchanged") {
  const auto dir = instance_dir("cli_k0", testing::fixture_t1());
  const auto r = run({"locate", "--instance", dir, "--k", "0"});
  REQUIRE(r.code == 0);
  const auto before = field(r.out, "before_ede_m");
  CHECK(r.out.find("  ede_m: " + before + " -> " + before + "\n") != std::string::npos);
  CHECK(r.out.find("blocks improved/unchanged/worsened: 0/3/0") != std::string::npos);
}

TEST_CASE("cli: locate on a sprawl city with both objectives") {
  const auto city = synth_city("cli_sprawl", {"--grid", "12", "--spacing", "250", "--population", "radial-decay",
                                              "--decay", "1200", "--candidate-stride", "3"});
  const auto out = testing::scratch_dir("cli_sprawl_out").string();
  const auto r = run({"locate", "--instance", city, "--k", "5", "--objective", "mean", "--objective", "kolm-pollak",
                      "--out-dir", out});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("plan mean:") != std::string::npos);
  CHECK(r.out.find("plan kolm-pollak:") != std::string::npos);
  const auto plan = solve_q1(load_instance_dir(city), -1.0, 5, Objective::kolm_pollak);
  CHECK(plan.after.ede < plan.before.ede);
  const auto sites = testing::slurp(fs::path(out) / "plan_kolm-pollak_sites.csv");
  CHECK(std::count(sites.begin(), sites.end(), '\n') == 1 + 1 + 5);
  for (const char* f : {"plan_mean.geojson", "plan_kolm-pollak.geojson", "plan_mean_blocks.csv",
                        "comparison_summary.csv", "comparison_blocks.csv", "run_config.json", "locate.txt"}) {
    CHECK(fs::exists(fs::path(out) / f));
  }
  const auto summary = testing::slurp(fs::path(out) / "comparison_summary.csv");
  CHECK(summary.find("\nmean,") != std::string::npos);
  CHECK(summary.find("\nkolm-pollak,") != std::string::npos);
}

TEST_CASE("cli: target outcomes") {
  const auto city = synth_city("cli_target", {"--grid", "10", "--spacing", "200", "--candidate-stride", "2"});
  const auto base = run({"ede", "--instance", city});
  const double baseline = std::stod(field(base.out, "ede_m"));

  const auto met = run({"target", "--instance", city, "--target-m", fmt::fixed3(baseline + 1)});
  CHECK(met.code == 0);
  CHECK(met.out.find("result: 0 additional stores (minimal)") != std::string::npos);

  const auto out = testing::scratch_dir("cli_target_out").string();
  const auto far = run({"target", "--instance", city, "--target-m", "1", "--out-dir", out});
  CHECK(far.code == 4);
  CHECK(far.out.find("result: INFEASIBLE") != std::string::npos);
  CHECK(testing::slurp(fs::path(out) / "target_plan.csv").find(",infeasible,") != std::string::npos);

  // 10 minutes at 80 m/min
  const auto ten = run({"target", "--instance", city, "--target-min", "10", "--solver", "exact"});
  REQUIRE(ten.code == 0);
  CHECK(field(ten.out, "target_m") == "800.000");
  const auto result = field(ten.out, "result");
  CHECK(result.find("(minimal)") != std::string::npos);
  const std::size_t k = std::stoul(result);
  REQUIRE(k >= 1);
  const auto inst = load_instance_dir(city);
  const auto ctx = calibrate(inst);
  const auto at = solve_exact(inst, ctx, k, Objective::kolm_pollak);
  const auto below = solve_exact(inst, ctx, k - 1, Objective::kolm_pollak);
  CHECK(objective_to_meters(at.objective_value, Objective::kolm_pollak, ctx) <= 800.0 + kTargetTolerance);
  CHECK(objective_to_meters(below.objective_value, Objective::kolm_pollak, ctx) > 800.0);
}

TEST_CASE("cli: synth is seeded and feeds ede") {
  const auto a = synth_city("cli_seed_a", {"--grid", "20", "--stores", "3", "--placement", "random", "--seed", "5"});
  const auto b = synth_city("cli_seed_b", {"--grid", "20", "--stores", "3", "--placement", "random", "--seed", "5"});
  for (const char* f : {"blocks.csv", "sites.csv", "distances.csv", "instance.json"}) {
    CHECK(testing::slurp(fs::path(a) / f) == testing::slurp(fs::path(b) / f));
  }
  const auto r = run({"ede", "--instance", a});
  CHECK(r.code == 0);
  CHECK(field(r.out, "existing_sites") == "3");

  const auto radial = synth_city("cli_radial", {"--grid", "20", "--stores", "3", "--population", "radial-decay"});
  const auto e = run({"ede", "--instance", radial});
  CHECK(std::stod(field(e.out, "ede_m")) > std::stod(field(e.out, "weighted_mean_m")));
}

TEST_CASE("cli: rank") {
  const auto one = synth_city("cli_rank_one", {"--grid", "6", "--name", "solo"});
  const auto out = testing::scratch_dir("cli_rank_out").string();
  auto r = run({"rank", "--instance", one, "--out-dir", out});
  REQUIRE(r.code == 0);
  CHECK(testing::slurp(fs::path(out) / "rank.csv").find("\n1,solo,") != std::string::npos);

  r = run({"rank", "--instance", "zed=" + one, "--instance", "abc=" + one});
  REQUIRE(r.code == 0);
  const auto a = r.out.find("\n1,abc,");
  const auto z = r.out.find("\n2,zed,");
  REQUIRE(a != std::string::npos);
  REQUIRE(z != std::string::npos);
  CHECK(r.out.substr(a + 7, r.out.find(',', a + 7) - a - 7) == r.out.substr(z + 7, r.out.find(',', z + 7) - z - 7));

  const auto near = synth_city("cli_rank_near", {"--grid", "8", "--spacing", "100", "--name", "compact"});
  const auto mid = synth_city("cli_rank_mid", {"--grid", "8", "--spacing", "250", "--name", "middle"});
  const auto wide = synth_city("cli_rank_wide", {"--grid", "8", "--spacing", "600", "--name", "sprawl"});
  r = run({"rank", "--instance", wide, "--instance", near, "--instance", mid});
  REQUIRE(r.code == 0);
  const auto p1 = r.out.find("\n1,compact,");
  const auto p2 = r.out.find("\n2,middle,");
  const auto p3 = r.out.find("\n3,sprawl,");
  CHECK(p1 != std::string::npos);
  CHECK(p2 != std::string::npos);
  CHECK(p3 != std::string::npos);
}
