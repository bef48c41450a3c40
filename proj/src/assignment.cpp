#include "eqloc/assignment.hpp"

#include "eqloc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace eqloc {

const char* to_string(Objective objective) {
  return objective == Objective::kolm_pollak ? "kolm-pollak" : "mean";
}

Objective parse_objective(std::string_view text) {
  if (text == "kolm-pollak" || text == "kolm_pollak" || text == "ede") return Objective::kolm_pollak;
  if (text == "mean") return Objective::mean;
  throw std::invalid_argument("unknown objective '" + std::string(text) + "'");
}

OpenSet OpenSet::with_candidates(const Instance& instance, std::span<const SiteIndex> candidates) {
  std::vector<SiteIndex> sites = instance.existing_sites();
  for (SiteIndex s : candidates) {
    if (s >= instance.num_sites()) throw std::invalid_argument("site index out of range");
    if (instance.sites()[s].kind != SiteKind::candidate) {
      throw std::invalid_argument("site '" + instance.sites()[s].id + "' is not a candidate");
    }
    sites.push_back(s);
  }
  return from_sites(instance, std::move(sites));
}

OpenSet OpenSet::from_sites(const Instance& instance, std::vector<SiteIndex> sites) {
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  if (sites.empty()) throw std::invalid_argument("open set is empty");
  if (sites.back() >= instance.num_sites()) throw std::invalid_argument("site index out of range");
  for (SiteIndex s : instance.existing_sites()) {
    if (!std::binary_search(sites.begin(), sites.end(), s)) {
      throw std::invalid_argument("open set is missing existing site '" + instance.sites()[s].id + "'");
    }
  }
  return OpenSet(std::move(sites));
}

OpenSet OpenSet::all(const Instance& instance) {
  std::vector<SiteIndex> sites(instance.num_sites());
  for (SiteIndex s = 0; s < sites.size(); ++s) sites[s] = s;
  return OpenSet(std::move(sites));
}

Assignment assign_nearest(const Instance& instance, const OpenSet& open) {
  const auto& d = instance.distances();
  Assignment out;
  out.site.resize(instance.num_blocks());
  out.distance.resize(instance.num_blocks());
  for (BlockIndex r = 0; r < instance.num_blocks(); ++r) {
    SiteIndex best = open.sites().front();
    double best_d = d(r, best);
    // sites() is ascending, so strict < keeps the lowest index on ties.
    for (SiteIndex s : open.sites()) {
      if (d(r, s) < best_d) {
        best = s;
        best_d = d(r, s);
      }
    }
    out.site[r] = best;
    out.distance[r] = best_d;
  }
  return out;
}

double objective_of(const OpenSet& open, const Instance& instance, const KappaContext& ctx,
                    Objective objective) {
  const auto assignment = assign_nearest(instance, open);
  if (objective == Objective::kolm_pollak) {
    return linear_proxy(assignment.distance, instance.populations(), ctx).log();
  }
  double sum = 0.0;
  for (BlockIndex r = 0; r < instance.num_blocks(); ++r) {
    sum += instance.populations()[r] * assignment.distance[r];
  }
  return sum;
}

double objective_to_meters(double value, Objective objective, const KappaContext& ctx) {
  if (objective == Objective::kolm_pollak) return proxy_to_ede(ProxyValue{1.0, value}, ctx);
  return value / ctx.total_population;
}

ReducedProblem::ReducedProblem(const Instance& instance, const KappaContext& ctx, Objective objective)
    : objective_(objective), candidates_(instance.candidate_sites()) {
  if (objective == Objective::kolm_pollak && !(ctx.kappa < 0.0)) {
    throw std::invalid_argument("kappa must be negative");
  }
  const auto& d = instance.distances();
  const auto& pop = instance.populations();
  const auto& existing = instance.existing_sites();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  for (BlockIndex r = 0; r < instance.num_blocks(); ++r) {
    if (pop[r] > 0.0) rows_.push_back(r);
  }
  const std::size_t nr = rows_.size();

  // Column costs use min(d, nearest existing distance).
  std::vector<double> nearest_existing(nr, kInf);
  double worst_all_open = 0.0;
  double worst_relevant = 0.0;
  for (std::size_t i = 0; i < nr; ++i) {
    const BlockIndex r = rows_[i];
    for (SiteIndex s : existing) nearest_existing[i] = std::min(nearest_existing[i], d(r, s));
    double best = nearest_existing[i];
    double worst = existing.empty() ? 0.0 : nearest_existing[i];
    for (SiteIndex s : candidates_) {
      best = std::min(best, d(r, s));
      if (existing.empty()) worst = std::max(worst, d(r, s));
    }
    worst_all_open = std::max(worst_all_open, best);
    worst_relevant = std::max(worst_relevant, worst);
  }

  auto cost = [&](std::size_t i, double dist) {
    const double p = pop[rows_[i]];
    if (objective_ == Objective::mean) return p * dist;
    return p * std::exp(-ctx.kappa * (dist - worst_all_open));
  };

  if (objective_ == Objective::kolm_pollak) {
    log_shift_ = -ctx.kappa * worst_all_open;
    const double headroom = std::log(std::numeric_limits<double>::max()) -
                            std::log(std::max(1.0, instance.total_population())) - 1.0;
    if (-ctx.kappa * (worst_relevant - worst_all_open) > headroom) {
      throw NumericRange("exponentiated distance costs exceed double range (kappa*distance span " +
                         std::to_string(-ctx.kappa * (worst_relevant - worst_all_open)) + ")");
    }
  }

  base_.resize(nr);
  for (std::size_t i = 0; i < nr; ++i) {
    base_[i] = existing.empty() ? kInf : cost(i, nearest_existing[i]);
  }
  cost_.resize(nr * candidates_.size());
  for (std::size_t j = 0; j < candidates_.size(); ++j) {
    for (std::size_t i = 0; i < nr; ++i) {
      cost_[j * nr + i] = cost(i, std::min(d(rows_[i], candidates_[j]), nearest_existing[i]));
    }
  }
}

double ReducedProblem::evaluate(std::span<const std::size_t> columns) const {
  std::vector<double> cur(base_.begin(), base_.end());
  for (std::size_t j : columns) {
    const auto col = column(j);
    for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = std::min(cur[i], col[i]);
  }
  return total(cur);
}

double ReducedProblem::total(std::span<const double> row_costs) {
  double sum = 0.0;
  for (double c : row_costs) sum += c;
  return sum;
}

double ReducedProblem::to_objective(double scaled_total) const {
  if (objective_ == Objective::mean) return scaled_total;
  return std::log(scaled_total) + log_shift_;
}

}  // namespace eqloc
