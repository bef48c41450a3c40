#pragma once

#include "eqloc/metrics.hpp"
#include "eqloc/model.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace eqloc {

enum class Objective {
  kolm_pollak,  // minimize the linear proxy sum p exp(-kappa z)
  mean,         // minimize sum p z (classical p-median)
};

const char* to_string(Objective objective);
/// Accepts "kolm-pollak", "kolm_pollak", "ede" and "mean".
Objective parse_objective(std::string_view text);

/// Sites that are open. Always contains every existing site.
class OpenSet {
 public:
  /// Existing sites plus the given candidate indices. Throws std::invalid_argument
  /// if an index is out of range or not a candidate, or the result is empty.
  static OpenSet with_candidates(const Instance& instance, std::span<const SiteIndex> candidates);
  /// Validates an explicit open set. Throws std::invalid_argument if it misses an
  /// existing site or is empty.
  static OpenSet from_sites(const Instance& instance, std::vector<SiteIndex> sites);
  static OpenSet all(const Instance& instance);

  const std::vector<SiteIndex>& sites() const noexcept { return sites_; }

 private:
  explicit OpenSet(std::vector<SiteIndex> sites) : sites_(std::move(sites)) {}
  std::vector<SiteIndex> sites_;
};

struct Assignment {
  std::vector<SiteIndex> site;     // per block
  std::vector<double> distance;    // per block, meters
};

/// Each block goes to its nearest open site, lowest site index on ties.
Assignment assign_nearest(const Instance& instance, const OpenSet& open);

/// kolm_pollak: natural log of the linear proxy (monotone in the proxy and
/// never overflows; exp() of it is the proxy itself). mean: sum p z, people*m.
double objective_of(const OpenSet& open, const Instance& instance, const KappaContext& ctx,
                    Objective objective);

/// Converts an objective value back to meters: the EDE for kolm_pollak, the
/// weighted mean for mean.
double objective_to_meters(double value, Objective objective, const KappaContext& ctx);

/// Site-selection-only form of the location model. Blocks with zero population
/// are dropped, existing sites are folded into a per-block base cost, and each
/// candidate becomes a cost column. Kolm-Pollak costs are p exp(-kappa (d - D))
/// with D the worst all-open distance, so no feasible total can under- or overflow.
class ReducedProblem {
 public:
  ReducedProblem(const Instance& instance, const KappaContext& ctx, Objective objective);

  std::size_t num_rows() const noexcept { return rows_.size(); }
  std::size_t num_candidates() const noexcept { return candidates_.size(); }
  Objective objective() const noexcept { return objective_; }

  /// Candidate site index of column j.
  SiteIndex site_of(std::size_t column) const noexcept { return candidates_[column]; }
  const std::vector<SiteIndex>& candidate_sites() const noexcept { return candidates_; }

  std::span<const double> base() const noexcept { return base_; }
  std::span<const double> column(std::size_t j) const noexcept {
    return {cost_.data() + j * rows_.size(), rows_.size()};
  }

  /// Scaled total for the given columns opened on top of the existing sites.
  double evaluate(std::span<const std::size_t> columns) const;
  /// Scaled total of an explicit per-row cost vector.
  static double total(std::span<const double> row_costs);

  double to_objective(double scaled_total) const;

 private:
  Objective objective_;
  std::vector<BlockIndex> rows_;
  std::vector<SiteIndex> candidates_;
  std::vector<double> base_;
  std::vector<double> cost_;  // column-major: cost_[j * rows + r]
  double log_shift_ = 0.0;
};

}  // namespace eqloc
