#pragma once

#include "eqloc/assignment.hpp"
#include "eqloc/exact.hpp"
#include "eqloc/heuristic.hpp"
#include "eqloc/metrics.hpp"

#include <optional>
#include <vector>

namespace eqloc {

/// Feasibility slack for EDE targets, meters.
inline constexpr double kTargetTolerance = 1e-6;

/// alpha from baseline access, kappa = alpha * epsilon, T = total population.
/// Throws DegenerateDistances for perfect-access instances.
KappaContext calibrate(const Instance& instance, double epsilon = kDefaultEpsilon);

enum class SolverKind { automatic, exact, heuristic };

const char* to_string(SolverKind kind);
SolverKind parse_solver(std::string_view text);

/// automatic: enumeration when C(n, k) fits ExactConfig::enumeration_limit,
/// otherwise greedy + interchange. exact: enumeration or branch-and-bound under
/// the configured limits. heuristic: always greedy + interchange.
struct SolverPolicy {
  SolverKind kind = SolverKind::automatic;
  ExactConfig exact;
  HeuristicConfig heuristic;

  void set_workers(unsigned workers) {
    exact.workers = workers;
    heuristic.workers = workers;
  }
};

enum class SolverUsed { exact, heuristic };

const char* to_string(SolverUsed used);

/// Answer to "where should k new sites go".
struct SitingPlan {
  std::size_t k = 0;
  std::vector<SiteIndex> chosen_sites;  // ascending
  AccessProfile before;
  AccessProfile after;
  Assignment assignment;  // after the new sites open
  Objective objective = Objective::kolm_pollak;
  double objective_value = 0.0;  // objective_of() units
  SolverUsed solver_used = SolverUsed::exact;
  Proof proof = Proof::optimal;
  KappaContext ctx;
  /// No existing sites: `before` is the nearest-candidate fallback used for
  /// calibration, not a real service level.
  bool greenfield = false;
};

SitingPlan solve_q1(const Instance& instance, const KappaContext& ctx, std::size_t k,
                    Objective objective, const SolverPolicy& policy = {});
SitingPlan solve_q1(const Instance& instance, double epsilon, std::size_t k, Objective objective,
                    const SolverPolicy& policy = {});

enum class Certificate { minimal, upper_bound_only, infeasible };

const char* to_string(Certificate certificate);

struct TargetProbe {
  std::size_t k = 0;
  double ede = 0.0;
  bool feasible = false;
  Proof proof = Proof::optimal;
};

/// Answer to "how many new sites reach a target EDE".
struct TargetPlan {
  double target_ede = 0.0;
  std::optional<std::size_t> minimal_k;  // empty when infeasible
  std::vector<SiteIndex> chosen_sites;
  double achieved_ede = 0.0;  // all-candidates-open EDE when infeasible
  Certificate certificate = Certificate::minimal;
  SitingPlan plan;  // the plan at minimal_k, or all candidates open when infeasible
  std::vector<TargetProbe> probes;
  KappaContext ctx;
};

/// Smallest k whose optimal Kolm-Pollak plan meets target_ede, found by
/// galloping then binary search over k. Minimality is certified only when every
/// probe was solved exactly.
TargetPlan solve_q2(const Instance& instance, const KappaContext& ctx, double target_ede,
                    const SolverPolicy& policy = {});
TargetPlan solve_q2(const Instance& instance, double epsilon, double target_ede,
                    const SolverPolicy& policy = {});

}  // namespace eqloc
