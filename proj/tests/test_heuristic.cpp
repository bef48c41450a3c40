#include "support.hpp"

#include "eqloc/exact.hpp"
#include "eqloc/heuristic.hpp"
#include "eqloc/plan.hpp"

#include <doctest.h>

using namespace eqloc;

TEST_CASE("greedy on fixture T1 picks the larger saving") {
  const auto inst = testing::fixture_t1();
  const auto ctx = calibrate(inst);
  // s2 saves 50*(600-300) = 15000, s3 saves 10*(900-100) = 8000
  CHECK(greedy_add(inst, ctx, 1, Objective::mean) == std::vector<SiteIndex>{1});
  CHECK(greedy_add(inst, ctx, 0, Objective::mean).empty());
  CHECK(greedy_add(inst, ctx, 2, Objective::mean) == std::vector<SiteIndex>{1, 2});
}

TEST_CASE("greedy with k = 1 is optimal") {
  testing::Rng rng(41);
  for (int t = 0; t < 50; ++t) {
    const auto inst = testing::random_instance(rng);
    const auto ctx = calibrate(inst);
    for (auto obj : {Objective::kolm_pollak, Objective::mean}) {
      const auto g = greedy_add(inst, ctx, 1, obj);
      const double gv = objective_of(OpenSet::with_candidates(inst, g), inst, ctx, obj);
      CHECK(testing::relative_gap(gv, solve_exact(inst, ctx, 1, obj).objective_value) < 1e-12);
    }
  }
}

TEST_CASE("interchange leaves an optimal selection alone") {
  testing::Rng rng(42);
  for (int t = 0; t < 20; ++t) {
    const auto inst = testing::random_instance(rng);
    const auto ctx = calibrate(inst);
    const std::size_t k = std::min<std::size_t>(3, inst.candidate_sites().size());
    const auto opt = solve_exact(inst, ctx, k, Objective::kolm_pollak);
    const auto r = interchange(inst, ctx, opt.chosen_sites, Objective::kolm_pollak);
    CHECK(r.swaps_performed == 0);
    CHECK(r.chosen_sites == opt.chosen_sites);
    CHECK(r.improved_value == r.initial_value);
  }
}

TEST_CASE("interchange improves a poor start") {
  const auto inst = testing::fixture_t1();
  const auto ctx = calibrate(inst);
  const auto r = interchange(inst, ctx, {2}, Objective::mean);
  CHECK(r.chosen_sites == std::vector<SiteIndex>{1});
  CHECK(r.swaps_performed == 1);
  CHECK(r.improved_value < r.initial_value);
}

TEST_CASE("property: heuristic is never worse than greedy and never beats the optimum") {
  testing::Rng rng(43);
  for (int t = 0; t < 40; ++t) {
    const auto inst = testing::random_instance(rng);
    const auto ctx = calibrate(inst);
    const std::size_t k = rng.between(1, std::min<std::size_t>(4, inst.candidate_sites().size()));
    for (auto obj : {Objective::kolm_pollak, Objective::mean}) {
      const auto g = greedy_add(inst, ctx, k, obj);
      const double gv = objective_of(OpenSet::with_candidates(inst, g), inst, ctx, obj);
      const auto h = solve_heuristic(inst, ctx, k, obj);
      const double opt = solve_exact(inst, ctx, k, obj).objective_value;
      CHECK(h.objective_value <= gv + 1e-12 * std::fabs(gv));
      CHECK(h.objective_value >= opt - 1e-12 * std::fabs(opt));
      CHECK(h.chosen_sites.size() == k);
      CHECK(testing::relative_gap(h.objective_value,
                                  objective_of(OpenSet::with_candidates(inst, h.chosen_sites), inst, ctx, obj)) <
            1e-12);
    }
  }
}

TEST_CASE("heuristic is deterministic across workers and reruns") {
  testing::Rng rng(44);
  for (int t = 0; t < 10; ++t) {
    const auto inst = testing::random_instance(rng);
    const auto ctx = calibrate(inst);
    const std::size_t k = std::min<std::size_t>(4, inst.candidate_sites().size());
    HeuristicConfig one{1, 3, 99};
    HeuristicConfig many{4, 3, 99};
    const auto a = solve_heuristic(inst, ctx, k, Objective::kolm_pollak, one);
    const auto b = solve_heuristic(inst, ctx, k, Objective::kolm_pollak, many);
    const auto c = solve_heuristic(inst, ctx, k, Objective::kolm_pollak, one);
    CHECK(a.chosen_sites == b.chosen_sites);
    CHECK(a.objective_value == b.objective_value);
    CHECK(a.chosen_sites == c.chosen_sites);
    const auto plain = solve_heuristic(inst, ctx, k, Objective::kolm_pollak);
    CHECK(a.objective_value <= plain.objective_value);
  }
}
