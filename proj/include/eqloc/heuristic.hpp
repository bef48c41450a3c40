#pragma once

#include "eqloc/assignment.hpp"

#include <cstdint>
#include <vector>

namespace eqloc {

struct HeuristicConfig {
  unsigned workers = 1;
  /// Extra seeded random starts, each improved by interchange. 0 keeps the
  /// deterministic greedy + interchange path only.
  unsigned restarts = 0;
  std::uint64_t seed = 0;
};

struct HeuristicResult {
  std::vector<SiteIndex> chosen_sites;  // ascending
  double objective_value = 0.0;         // objective_of() units
  double initial_value = 0.0;           // value of the selection interchange started from
  double improved_value = 0.0;          // value after interchange
  std::size_t swaps_performed = 0;
};

/// Adds candidates one at a time, each time the one with the largest objective
/// decrease (lowest index on ties). Returns candidate site indices in the order
/// they were added.
std::vector<SiteIndex> greedy_add(const Instance& instance, const KappaContext& ctx, std::size_t k,
                                  Objective objective, unsigned workers = 1);

/// Vertex substitution: applies the best improving (out, in) swap until none
/// improves by more than 1e-12 relative.
HeuristicResult interchange(const Instance& instance, const KappaContext& ctx,
                            const std::vector<SiteIndex>& selection, Objective objective,
                            const HeuristicConfig& config = {});

/// greedy_add followed by interchange, plus config.restarts random starts.
HeuristicResult solve_heuristic(const Instance& instance, const KappaContext& ctx, std::size_t k,
                                Objective objective, const HeuristicConfig& config = {});

}  // namespace eqloc
