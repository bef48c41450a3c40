#include "eqloc/plan.hpp"

#include "eqloc/error.hpp"
#include "eqloc/log.hpp"

#include <stdexcept>
#include <string>

namespace eqloc {

KappaContext calibrate(const Instance& instance, double epsilon) {
  const auto baseline = baseline_distances(instance);
  const double alpha = compute_alpha(baseline, instance.populations());
  return make_context(epsilon, alpha, instance.total_population());
}

const char* to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::automatic: return "auto";
    case SolverKind::exact: return "exact";
    case SolverKind::heuristic: return "heuristic";
  }
  return "auto";
}

SolverKind parse_solver(std::string_view text) {
  if (text == "auto") return SolverKind::automatic;
  if (text == "exact") return SolverKind::exact;
  if (text == "heuristic") return SolverKind::heuristic;
  throw std::invalid_argument("unknown solver '" + std::string(text) + "'");
}

const char* to_string(SolverUsed used) { return used == SolverUsed::exact ? "exact" : "heuristic"; }

const char* to_string(Certificate certificate) {
  switch (certificate) {
    case Certificate::minimal: return "minimal";
    case Certificate::upper_bound_only: return "upper_bound_only";
    case Certificate::infeasible: return "infeasible";
  }
  return "minimal";
}

namespace {

bool use_exact(const Instance& instance, std::size_t k, const SolverPolicy& policy) {
  switch (policy.kind) {
    case SolverKind::exact: return true;
    case SolverKind::heuristic: return false;
    case SolverKind::automatic:
      return binomial(instance.candidate_sites().size(), k) <= policy.exact.enumeration_limit;
  }
  return true;
}

AccessProfile baseline_profile(const Instance& instance, const KappaContext& ctx) {
  return make_profile(baseline_distances(instance), instance.populations(), ctx);
}

}  // namespace

SitingPlan solve_q1(const Instance& instance, const KappaContext& ctx, std::size_t k, Objective objective,
                    const SolverPolicy& policy) {
  if (k > instance.candidate_sites().size()) {
    throw BudgetExceedsCandidates("budget k = " + std::to_string(k) + " exceeds the " +
                                  std::to_string(instance.candidate_sites().size()) +
                                  " candidate sites");
  }
  SitingPlan plan;
  plan.k = k;
  plan.objective = objective;
  plan.ctx = ctx;
  plan.greenfield = instance.existing_sites().empty();
  plan.before = baseline_profile(instance, ctx);

  if (use_exact(instance, k, policy)) {
    ExactConfig config = policy.exact;
    if (policy.kind == SolverKind::automatic) config.method = ExactMethod::enumerate;
    auto result = solve_exact(instance, ctx, k, objective, config);
    plan.chosen_sites = std::move(result.chosen_sites);
    plan.objective_value = result.objective_value;
    plan.solver_used = SolverUsed::exact;
    plan.proof = result.proof;
  } else {
    auto result = solve_heuristic(instance, ctx, k, objective, policy.heuristic);
    plan.chosen_sites = std::move(result.chosen_sites);
    plan.objective_value = result.objective_value;
    plan.solver_used = SolverUsed::heuristic;
    plan.proof = Proof::heuristic;
  }

  plan.assignment = assign_nearest(instance, OpenSet::with_candidates(instance, plan.chosen_sites));
  plan.after = make_profile(plan.assignment.distance, instance.populations(), ctx);
  return plan;
}

SitingPlan solve_q1(const Instance& instance, double epsilon, std::size_t k, Objective objective,
                    const SolverPolicy& policy) {
  return solve_q1(instance, calibrate(instance, epsilon), k, objective, policy);
}

TargetPlan solve_q2(const Instance& instance, const KappaContext& ctx, double target_ede,
                    const SolverPolicy& policy) {
  if (!(target_ede > 0.0)) throw std::invalid_argument("target EDE must be positive");
  const std::size_t n = instance.candidate_sites().size();

  TargetPlan out;
  out.target_ede = target_ede;
  out.ctx = ctx;
  auto meets = [&](double ede) { return ede <= target_ede + kTargetTolerance; };

  bool all_exact = true;
  auto probe = [&](std::size_t k) {
    auto plan = solve_q1(instance, ctx, k, Objective::kolm_pollak, policy);
    const bool ok = meets(plan.after.ede);
    out.probes.push_back({k, plan.after.ede, ok, plan.proof});
    if (plan.proof != Proof::optimal) all_exact = false;
    log::info("probe k=" + std::to_string(k) + " ede=" + std::to_string(plan.after.ede));
    return std::make_pair(ok, std::move(plan));
  };

  const bool has_existing = !instance.existing_sites().empty();
  if (has_existing) {
    auto [ok, plan] = probe(0);
    if (ok) {
      out.minimal_k = 0;
      out.achieved_ede = plan.after.ede;
      out.certificate = Certificate::minimal;
      out.plan = std::move(plan);
      return out;
    }
  }

  // Everything open is the best any k can do.
  {
    const auto all = assign_nearest(instance, OpenSet::all(instance));
    const double all_ede = kolm_pollak_ede(all.distance, instance.populations(), ctx);
    if (!meets(all_ede)) {
      std::vector<SiteIndex> everything = instance.candidate_sites();
      SitingPlan plan;
      plan.k = n;
      plan.chosen_sites = everything;
      plan.before = baseline_profile(instance, ctx);
      plan.assignment = all;
      plan.after = make_profile(all.distance, instance.populations(), ctx);
      plan.objective = Objective::kolm_pollak;
      plan.objective_value = linear_proxy(all.distance, instance.populations(), ctx).log();
      plan.ctx = ctx;
      plan.greenfield = !has_existing;
      out.minimal_k.reset();
      out.achieved_ede = all_ede;
      out.certificate = Certificate::infeasible;
      out.plan = std::move(plan);
      return out;
    }
  }

  // Gallop: k = 1, 2, 4, ... until feasible (k = n is known feasible).
  std::size_t lo = 0;  // largest k known infeasible (k = 0 when greenfield: no sites at all)
  std::size_t hi = 0;
  SitingPlan hi_plan;
  for (std::size_t k = 1;; k = std::min(n, k * 2)) {
    auto [ok, plan] = probe(k);
    if (ok) {
      hi = k;
      hi_plan = std::move(plan);
      break;
    }
    lo = k;
    if (k == n) throw std::logic_error("all-open plan feasible but k = n probe infeasible");
  }
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    auto [ok, plan] = probe(mid);
    if (ok) {
      hi = mid;
      hi_plan = std::move(plan);
    } else {
      lo = mid;
    }
  }

  out.minimal_k = hi;
  out.chosen_sites = hi_plan.chosen_sites;
  out.achieved_ede = hi_plan.after.ede;
  out.certificate = all_exact ? Certificate::minimal : Certificate::upper_bound_only;
  out.plan = std::move(hi_plan);
  return out;
}

TargetPlan solve_q2(const Instance& instance, double epsilon, double target_ede,
                    const SolverPolicy& policy) {
  return solve_q2(instance, calibrate(instance, epsilon), target_ede, policy);
}

}  // namespace eqloc
