#pragma once

#include "eqloc/assignment.hpp"

#include <cstdint>
#include <vector>

namespace eqloc {

enum class ExactMethod { automatic, enumerate, branch_and_bound };

struct ExactConfig {
  /// Largest C(n, k) solved by plain enumeration under ExactMethod::automatic.
  std::uint64_t enumeration_limit = 2'000'000;
  std::uint64_t node_limit = 20'000'000;
  double time_limit_s = 600.0;
  /// Relative gap at which branch-and-bound may stop; 0 proves exact optimality.
  double optimality_tolerance = 0.0;
  ExactMethod method = ExactMethod::automatic;
  unsigned workers = 1;
};

enum class Proof { optimal, heuristic, limit_reached };

const char* to_string(Proof proof);

struct ExactResult {
  std::vector<SiteIndex> chosen_sites;  // candidate site indices, ascending
  double objective_value = 0.0;         // objective_of() units
  Proof proof = Proof::optimal;
  std::uint64_t nodes_explored = 0;
  ExactMethod method_used = ExactMethod::enumerate;
};

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Global minimum of the objective over all k-subsets of candidates. Among equal
/// optima the lexicographically smallest index set wins. Throws
/// BudgetExceedsCandidates if k exceeds the candidate count.
ExactResult solve_exact(const Instance& instance, const KappaContext& ctx, std::size_t k,
                        Objective objective, const ExactConfig& config = {});

/// Branch-and-bound node: candidates forced open and candidates ruled out.
struct PartialSelection {
  std::vector<SiteIndex> committed;
  std::vector<SiteIndex> excluded;
};

/// Relaxation that serves every block from its best site not excluded, ignoring
/// the budget. Never exceeds the objective of any completion of `partial`.
double lower_bound(const PartialSelection& partial, const Instance& instance, const KappaContext& ctx,
                   Objective objective);

}  // namespace eqloc
