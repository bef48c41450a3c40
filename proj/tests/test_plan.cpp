#include "support.hpp"

#include "eqloc/error.hpp"
#include "eqloc/plan.hpp"

#include <doctest.h>

using namespace eqloc;

namespace {

// Every block sits `d` meters from the existing store; candidates at `near`.
Instance flat_city(double d, double near, std::size_t candidates) {
  InstanceData data;
  for (int r = 0; r < 4; ++r) data.blocks.push_back({"b" + std::to_string(r), 25.0 * (r + 1), {}});
  data.sites.push_back({"e", SiteKind::existing, {}});
  for (std::size_t c = 0; c < candidates; ++c) data.sites.push_back({"c" + std::to_string(c), SiteKind::candidate, {}});
  data.distances = DistanceMatrix(4, 1 + candidates, d);
  for (std::size_t c = 0; c < candidates; ++c) data.distances(c % 4, 1 + c) = near;
  return Instance(std::move(data));
}

}  // namespace

TEST_CASE("calibration on fixture T1") {
  const auto ctx = calibrate(testing::fixture_t1());
  CHECK(ctx.alpha == doctest::Approx(testing::plain_alpha({200, 600, 900}, {100, 50, 10})).epsilon(1e-14));
  CHECK(ctx.kappa == -ctx.alpha);
  CHECK(ctx.total_population == 160);
}

TEST_CASE("uniform baseline calibrates to 1/c") {
  const auto ctx = calibrate(flat_city(800, 100, 2));
  CHECK(ctx.alpha == doctest::Approx(1.0 / 800));
  CHECK(ctx.kappa == doctest::Approx(-1.0 / 800));
}

TEST_CASE("perfect access cannot be calibrated") {
  CHECK_THROWS_AS(calibrate(flat_city(0, 0, 1)), DegenerateDistances);
}

TEST_CASE("k = 0 leaves access unchanged") {
  const auto inst = testing::fixture_t1();
  const auto plan = solve_q1(inst, -1.0, 0, Objective::kolm_pollak);
  CHECK(plan.chosen_sites.empty());
  CHECK(plan.after.distances == plan.before.distances);
  CHECK(plan.after.ede == plan.before.ede);
}

TEST_CASE("Q1 after-EDE equals the enumerated optimum") {
  testing::Rng rng(51);
  for (int t = 0; t < 25; ++t) {
    const auto inst = testing::random_instance(rng);
    const auto ctx = calibrate(inst);
    const std::size_t k = rng.between(1, std::min<std::size_t>(4, inst.candidate_sites().size()));
    const auto plan = solve_q1(inst, ctx, k, Objective::kolm_pollak);
    const auto oracle = testing::brute_force(inst, ctx.kappa, k, testing::OracleObjective::kolm_pollak);
    CHECK(plan.solver_used == SolverUsed::exact);
    CHECK(plan.proof == Proof::optimal);
    CHECK(testing::relative_gap(plan.after.ede, oracle.ede) < 1e-9);
    CHECK(plan.after.ede <= plan.before.ede + 1e-9);
    CHECK(plan.after.distances == assign_nearest(inst, OpenSet::with_candidates(inst, plan.chosen_sites)).distance);
  }
}

TEST_CASE("policy selects the solver") {
  testing::Rng rng(52);
  const auto inst = testing::random_instance(rng);
  SolverPolicy heur;
  heur.kind = SolverKind::heuristic;
  const auto h = solve_q1(inst, -1.0, 2, Objective::mean, heur);
  CHECK(h.solver_used == SolverUsed::heuristic);
  CHECK(h.proof == Proof::heuristic);

  SolverPolicy tiny;
  tiny.exact.enumeration_limit = 1;
  const auto fallback = solve_q1(inst, -1.0, 2, Objective::mean, tiny);
  CHECK(fallback.solver_used == SolverUsed::heuristic);

  CHECK(parse_solver("auto") == SolverKind::automatic);
  CHECK(parse_solver("exact") == SolverKind::exact);
  CHECK_THROWS(parse_solver("fast"));
}

TEST_CASE("target already met needs no new stores") {
  // baseline EDE 800 m against a 1200 m target
  const auto inst = flat_city(800, 100, 3);
  const auto ctx = calibrate(inst);
  CHECK(ctx.alpha == doctest::Approx(1.0 / 800));
  const auto plan = solve_q2(inst, ctx, 1200.0);
  REQUIRE(plan.minimal_k.has_value());
  CHECK(*plan.minimal_k == 0);
  CHECK(plan.certificate == Certificate::minimal);
  CHECK(plan.chosen_sites.empty());
  CHECK(plan.achieved_ede == doctest::Approx(800));
}

TEST_CASE("target below the all-open EDE is infeasible") {
  const auto inst = flat_city(800, 100, 3);
  const auto plan = solve_q2(inst, -1.0, 150.0);
  CHECK_FALSE(plan.minimal_k.has_value());
  CHECK(plan.certificate == Certificate::infeasible);
  CHECK(plan.achieved_ede > 150.0);
  CHECK(plan.chosen_sites.empty());
  CHECK(plan.plan.chosen_sites.size() == 3);
}

TEST_CASE("Q2 returns the smallest feasible k") {
  testing::Rng rng(53);
  for (int t = 0; t < 15; ++t) {
    const auto inst = testing::random_instance(rng);
    const auto ctx = calibrate(inst);
    const double base = solve_q1(inst, ctx, 0, Objective::kolm_pollak).before.ede;
    const double all = solve_q1(inst, ctx, inst.candidate_sites().size(), Objective::kolm_pollak).after.ede;
    if (base - all < 1.0) continue;
    const double target = all + rng.uniform(0.05, 0.95) * (base - all);
    const auto plan = solve_q2(inst, ctx, target);
    REQUIRE(plan.minimal_k.has_value());
    const std::size_t k = *plan.minimal_k;
    CHECK(plan.certificate == Certificate::minimal);
    CHECK(plan.achieved_ede <= target + kTargetTolerance);
    CHECK(k >= 1);
    CHECK(testing::brute_force(inst, ctx.kappa, k - 1, testing::OracleObjective::kolm_pollak).ede > target);
    CHECK(testing::brute_force(inst, ctx.kappa, k, testing::OracleObjective::kolm_pollak).ede <= target + kTargetTolerance);
  }
}

TEST_CASE("heuristic probes only give an upper bound") {
  testing::Rng rng(54);
  const auto inst = testing::random_instance(rng);
  const auto ctx = calibrate(inst);
  SolverPolicy heur;
  heur.kind = SolverKind::heuristic;
  const double base = solve_q1(inst, ctx, 0, Objective::kolm_pollak).before.ede;
  const auto plan = solve_q2(inst, ctx, base * 0.95, heur);
  if (plan.minimal_k && *plan.minimal_k > 0) CHECK(plan.certificate == Certificate::upper_bound_only);
}
