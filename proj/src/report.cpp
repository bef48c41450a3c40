#include "eqloc/report.hpp"

#include "eqloc/csv.hpp"
#include "eqloc/error.hpp"
#include "eqloc/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace eqloc {

ProfileSummary ProfileSummary::of(const AccessProfile& profile) {
  return ProfileSummary{profile.ede, profile.weighted_mean, profile.quartiles, profile.max};
}

ComparisonReport compare(const AccessProfile& before, const std::vector<SitingPlan>& plans) {
  ComparisonReport report;
  report.before = ProfileSummary::of(before);
  report.populations = before.populations;
  report.before_distances = before.distances;
  const auto& pop = before.populations;
  double total_pop = 0.0;
  for (double p : pop) total_pop += p;
  const double worst_threshold = before.quartiles.q3;

  for (std::size_t m = 0; m < plans.size(); ++m) {
    const auto& plan = plans[m];
    if (plan.before.distances != before.distances || plan.after.distances.size() != before.distances.size()) {
      throw MismatchedBaseline("plan " + std::to_string(m + 1) + " was not built on this baseline");
    }
    MethodComparison mc;
    mc.label = to_string(plan.objective);
    for (const auto& other : report.methods) {
      if (other.label == mc.label) mc.label += "-" + std::to_string(m + 1);
    }
    mc.objective = plan.objective;
    mc.k = plan.k;
    mc.chosen_sites = plan.chosen_sites;
    mc.after = ProfileSummary::of(plan.after);
    double improved_pop = 0.0, unchanged_pop = 0.0, worsened_pop = 0.0;
    for (std::size_t r = 0; r < before.distances.size(); ++r) {
      const double b = before.distances[r];
      const double a = plan.after.distances[r];
      mc.pairs.push_back({b, a});
      if (std::abs(a - b) <= kUnchangedTolerance) {
        ++mc.unchanged;
        unchanged_pop += pop[r];
      } else if (a < b) {
        ++mc.improved;
        improved_pop += pop[r];
      } else {
        ++mc.worsened;
        worsened_pop += pop[r];
      }
      mc.total_reduction += pop[r] * (b - a);
      if (pop[r] > 0.0 && b >= worst_threshold) mc.worst_quartile_reduction += pop[r] * (b - a);
    }
    mc.improved_share = improved_pop / total_pop;
    mc.unchanged_share = unchanged_pop / total_pop;
    mc.worsened_share = worsened_pop / total_pop;
    // Opening sites on top of the existing ones cannot lengthen any trip.
    if (mc.worsened != 0 && !plan.greenfield) {
      throw std::logic_error("plan '" + mc.label + "' worsened " + std::to_string(mc.worsened) + " blocks");
    }
    report.methods.push_back(std::move(mc));
  }
  return report;
}

RankTable rank(const std::vector<RankInput>& inputs) {
  if (inputs.empty()) throw std::invalid_argument("nothing to rank");
  RankTable table;
  for (const auto& in : inputs) {
    table.rows.push_back(RankRow{in.name, in.profile.ede, in.profile.weighted_mean, in.population, 0});
  }
  std::sort(table.rows.begin(), table.rows.end(), [](const RankRow& a, const RankRow& b) {
    if (a.ede != b.ede) return a.ede < b.ede;
    return a.name < b.name;
  });
  for (std::size_t i = 0; i < table.rows.size(); ++i) table.rows[i].rank = i + 1;
  return table;
}

namespace {

double round3(double v) {
  const double r = std::round(v * 1000.0) / 1000.0;
  return r == 0.0 ? 0.0 : r;
}

nlohmann::ordered_json point(const LatLon& c) {
  nlohmann::ordered_json g;
  g["type"] = "Point";
  g["coordinates"] = nlohmann::ordered_json::array({c.lon, c.lat});
  return g;
}

std::string geojson(const Instance& instance, const SitingPlan& plan, nlohmann::ordered_json summary) {
  if (!instance.has_coordinates()) {
    throw MissingCoordinates("GeoJSON export needs coordinates for every block and site");
  }
  nlohmann::ordered_json doc;
  doc["type"] = "FeatureCollection";
  doc["plan"] = std::move(summary);
  auto features = nlohmann::ordered_json::array();
  auto site_feature = [&](SiteIndex s, const char* role) {
    const auto& site = instance.sites()[s];
    nlohmann::ordered_json f;
    f["type"] = "Feature";
    f["geometry"] = point(*site.coord);
    f["properties"] = {{"id", site.id}, {"role", role}};
    features.push_back(std::move(f));
  };
  for (SiteIndex s : instance.existing_sites()) site_feature(s, "existing");
  for (SiteIndex s : plan.chosen_sites) site_feature(s, "new");
  for (std::size_t r = 0; r < instance.num_blocks(); ++r) {
    const auto& b = instance.blocks()[r];
    nlohmann::ordered_json f;
    f["type"] = "Feature";
    f["geometry"] = point(*b.coord);
    f["properties"] = {{"id", b.id},
                       {"role", "block"},
                       {"population", b.population},
                       {"before_m", round3(plan.before.distances[r])},
                       {"after_m", round3(plan.after.distances[r])},
                       {"site", instance.sites()[plan.assignment.site[r]].id}};
    features.push_back(std::move(f));
  }
  doc["features"] = std::move(features);
  return doc.dump(1) + "\n";
}

std::string blocks_csv(const Instance& instance, const SitingPlan& plan) {
  std::ostringstream out;
  out << "block_id,population,before_m,after_m,site_id\n";
  for (std::size_t r = 0; r < instance.num_blocks(); ++r) {
    const auto& b = instance.blocks()[r];
    out << csv::escape(b.id) << ',' << fmt::shortest(b.population) << ',' << fmt::fixed3(plan.before.distances[r])
        << ',' << fmt::fixed3(plan.after.distances[r]) << ',' << csv::escape(instance.sites()[plan.assignment.site[r]].id)
        << '\n';
  }
  return out.str();
}

nlohmann::ordered_json siting_summary(const SitingPlan& plan) {
  nlohmann::ordered_json j;
  j["k"] = plan.k;
  j["objective"] = to_string(plan.objective);
  j["solver"] = to_string(plan.solver_used);
  j["proof"] = to_string(plan.proof);
  j["ede_before_m"] = round3(plan.before.ede);
  j["ede_after_m"] = round3(plan.after.ede);
  j["mean_before_m"] = round3(plan.before.weighted_mean);
  j["mean_after_m"] = round3(plan.after.weighted_mean);
  return j;
}

}  // namespace

std::string export_plan(const Instance& instance, const SitingPlan& plan, ExportFormat format) {
  if (plan.before.distances.size() != instance.num_blocks()) {
    throw std::invalid_argument("plan does not belong to this instance");
  }
  if (format == ExportFormat::csv) return blocks_csv(instance, plan);
  return geojson(instance, plan, siting_summary(plan));
}

std::string export_plan(const Instance& instance, const TargetPlan& plan, ExportFormat format) {
  if (plan.plan.before.distances.size() != instance.num_blocks()) {
    throw std::invalid_argument("plan does not belong to this instance");
  }
  if (format == ExportFormat::csv) return blocks_csv(instance, plan.plan);
  auto summary = siting_summary(plan.plan);
  summary["target_m"] = round3(plan.target_ede);
  summary["certificate"] = to_string(plan.certificate);
  if (plan.minimal_k) summary["minimal_k"] = *plan.minimal_k;
  else summary["minimal_k"] = nullptr;
  return geojson(instance, plan.plan, std::move(summary));
}

std::string export_sites_csv(const Instance& instance, const SitingPlan& plan) {
  std::ostringstream out;
  out << "site_id,role,lat,lon\n";
  auto row = [&](SiteIndex s, const char* role) {
    const auto& site = instance.sites()[s];
    out << csv::escape(site.id) << ',' << role << ',';
    if (site.coord) out << fmt::shortest(site.coord->lat) << ',' << fmt::shortest(site.coord->lon);
    else out << ',';
    out << '\n';
  };
  for (SiteIndex s : instance.existing_sites()) row(s, "existing");
  for (SiteIndex s : plan.chosen_sites) row(s, "new");
  return out.str();
}

PlanTable read_plan_csv(const std::string& text) {
  std::istringstream in(text);
  const auto t = csv::read(in, "plan.csv");
  const auto id = t.require_column("block_id");
  const auto pop = t.require_column("population");
  const auto before = t.require_column("before_m");
  const auto after = t.require_column("after_m");
  PlanTable out;
  for (const auto& row : t.rows) {
    out.block_ids.push_back(row.fields[id]);
    out.populations.push_back(csv::parse_double(t, row, pop));
    out.before.push_back(csv::parse_double(t, row, before));
    out.after.push_back(csv::parse_double(t, row, after));
  }
  return out;
}

std::string rank_csv(const RankTable& table) {
  std::ostringstream out;
  out << "rank,name,ede_m,weighted_mean_m,population\n";
  for (const auto& r : table.rows) {
    out << r.rank << ',' << csv::escape(r.name) << ',' << fmt::fixed3(r.ede) << ',' << fmt::fixed3(r.weighted_mean)
        << ',' << fmt::fixed3(r.population) << '\n';
  }
  return out.str();
}

std::string comparison_summary_csv(const ComparisonReport& report) {
  std::ostringstream out;
  out << "method,k,ede_m,weighted_mean_m,q1_m,median_m,q3_m,max_m,improved,unchanged,worsened,"
         "improved_share,unchanged_share,worsened_share,total_reduction,worst_quartile_reduction\n";
  auto stats = [&](const ProfileSummary& s) {
    out << fmt::fixed3(s.ede) << ',' << fmt::fixed3(s.weighted_mean) << ',' << fmt::fixed3(s.quartiles.q1) << ','
        << fmt::fixed3(s.quartiles.median) << ',' << fmt::fixed3(s.quartiles.q3) << ',' << fmt::fixed3(s.max);
  };
  out << "baseline,0,";
  stats(report.before);
  out << ",,,,,,,,\n";
  for (const auto& m : report.methods) {
    out << m.label << ',' << m.k << ',';
    stats(m.after);
    out << ',' << m.improved << ',' << m.unchanged << ',' << m.worsened << ',' << fmt::fixed3(m.improved_share) << ','
        << fmt::fixed3(m.unchanged_share) << ',' << fmt::fixed3(m.worsened_share) << ','
        << fmt::fixed3(m.total_reduction) << ',' << fmt::fixed3(m.worst_quartile_reduction) << '\n';
  }
  return out.str();
}

std::string comparison_blocks_csv(const Instance& instance, const ComparisonReport& report) {
  std::ostringstream out;
  out << "block_id,population,before_m";
  for (const auto& m : report.methods) out << ',' << m.label << "_after_m";
  out << '\n';
  for (std::size_t r = 0; r < instance.num_blocks(); ++r) {
    out << csv::escape(instance.blocks()[r].id) << ',' << fmt::shortest(instance.blocks()[r].population);
    out << ',' << fmt::fixed3(report.before_distances[r]);
    for (const auto& m : report.methods) out << ',' << fmt::fixed3(m.pairs[r].after);
    out << '\n';
  }
  return out.str();
}

}  // namespace eqloc
