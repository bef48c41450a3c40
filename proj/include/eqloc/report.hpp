#pragma once

#include "eqloc/metrics.hpp"
#include "eqloc/model.hpp"
#include "eqloc/plan.hpp"

#include <string>
#include <vector>

namespace eqloc {

/// Blocks whose distance changes by at most this much count as unchanged.
inline constexpr double kUnchangedTolerance = 1e-9;

struct ProfileSummary {
  double ede = 0.0;
  double weighted_mean = 0.0;
  Quartiles quartiles;
  double max = 0.0;

  static ProfileSummary of(const AccessProfile& profile);
};

struct BlockChange {
  double before = 0.0;
  double after = 0.0;
};

struct MethodComparison {
  std::string label;
  Objective objective = Objective::kolm_pollak;
  std::size_t k = 0;
  std::vector<SiteIndex> chosen_sites;
  std::vector<BlockChange> pairs;  // per block
  ProfileSummary after;
  std::size_t improved = 0;
  std::size_t unchanged = 0;
  std::size_t worsened = 0;
  double improved_share = 0.0;  // population fractions
  double unchanged_share = 0.0;
  double worsened_share = 0.0;
  double total_reduction = 0.0;           // sum p (before - after), people*m
  double worst_quartile_reduction = 0.0;  // same, over blocks with before >= baseline q3
};

struct ComparisonReport {
  ProfileSummary before;
  std::vector<double> populations;
  std::vector<double> before_distances;
  std::vector<MethodComparison> methods;
};

/// Per-block before/after comparison of plans against a shared baseline. Throws
/// MismatchedBaseline if a plan was built on a different baseline, and
/// std::logic_error if a plan with existing sites makes any block worse.
ComparisonReport compare(const AccessProfile& before, const std::vector<SitingPlan>& plans);

struct RankInput {
  std::string name;
  AccessProfile profile;
  double population = 0.0;
};

struct RankRow {
  std::string name;
  double ede = 0.0;
  double weighted_mean = 0.0;
  double population = 0.0;
  std::size_t rank = 0;
};

struct RankTable {
  std::vector<RankRow> rows;  // ascending EDE, ties by name
};

/// Ranks instances by EDE, best (lowest) first.
RankTable rank(const std::vector<RankInput>& inputs);

enum class ExportFormat { geojson, csv };

/// GeoJSON: new and existing sites and blocks as Point features. CSV: one row per
/// block with before/after distances and its assigned site. GeoJSON throws
/// MissingCoordinates for coordinate-free instances.
std::string export_plan(const Instance& instance, const SitingPlan& plan, ExportFormat format);
std::string export_plan(const Instance& instance, const TargetPlan& plan, ExportFormat format);

/// Existing and newly chosen sites of a plan: id, role, coordinates when known.
std::string export_sites_csv(const Instance& instance, const SitingPlan& plan);

struct PlanTable {
  std::vector<std::string> block_ids;
  std::vector<double> populations;
  std::vector<double> before;
  std::vector<double> after;
};

/// Parses the per-block CSV written by export_plan.
PlanTable read_plan_csv(const std::string& text);

std::string rank_csv(const RankTable& table);
std::string comparison_summary_csv(const ComparisonReport& report);
/// Scatter-ready table: one row per block, one after column per method.
std::string comparison_blocks_csv(const Instance& instance, const ComparisonReport& report);

}  // namespace eqloc
