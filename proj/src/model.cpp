#include "eqloc/model.hpp"

#include "eqloc/error.hpp"

#include <cmath>
#include <limits>
#include <unordered_set>

namespace eqloc {

const char* to_string(SiteKind kind) {
  return kind == SiteKind::existing ? "existing" : "candidate";
}

const char* to_string(DistanceSource source) {
  switch (source) {
    case DistanceSource::matrix: return "matrix";
    case DistanceSource::haversine: return "haversine";
    case DistanceSource::grid: return "grid";
  }
  return "matrix";
}

DistanceMatrix::DistanceMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ValidationError("dimension mismatch: matrix data has " + std::to_string(data_.size()) +
                          " entries, expected " + std::to_string(rows_ * cols_));
  }
}

bool ValidationReport::has(Violation::Kind kind) const noexcept {
  for (const auto& v : violations) {
    if (v.kind == kind) return true;
  }
  return false;
}

std::string ValidationReport::summary() const {
  if (ok()) return "pass";
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.message;
  }
  return out;
}

ValidationReport validate(const InstanceData& data) {
  ValidationReport report;
  auto add = [&](Violation::Kind kind, std::string message) {
    report.violations.push_back({kind, std::move(message)});
  };

  if (data.sites.empty()) add(Violation::Kind::no_sites, "no sites");

  double total = 0.0;
  for (const auto& b : data.blocks) {
    if (!std::isfinite(b.population)) {
      add(Violation::Kind::non_finite_population, "non-finite population for block '" + b.id + "'");
    } else if (b.population < 0.0) {
      add(Violation::Kind::negative_population, "negative population for block '" + b.id + "'");
    } else {
      total += b.population;
    }
  }
  if (!(total > 0.0)) add(Violation::Kind::zero_total_population, "zero total population");

  std::unordered_set<std::string> seen;
  for (const auto& b : data.blocks) {
    if (!seen.insert(b.id).second) add(Violation::Kind::duplicate_id, "duplicate block id '" + b.id + "'");
  }
  seen.clear();
  for (const auto& s : data.sites) {
    if (!seen.insert(s.id).second) add(Violation::Kind::duplicate_id, "duplicate site id '" + s.id + "'");
  }

  const auto& d = data.distances;
  if (d.rows() != data.blocks.size() || d.cols() != data.sites.size()) {
    add(Violation::Kind::dimension_mismatch,
        "dimension mismatch: matrix is " + std::to_string(d.rows()) + "x" + std::to_string(d.cols()) +
            " but instance has " + std::to_string(data.blocks.size()) + " blocks and " +
            std::to_string(data.sites.size()) + " sites");
    return report;
  }

  bool non_finite = false;
  bool negative = false;
  for (double v : d.data()) {
    if (!std::isfinite(v)) non_finite = true;
    else if (v < 0.0) negative = true;
  }
  if (non_finite) add(Violation::Kind::non_finite_distance, "non-finite distance");
  if (negative) add(Violation::Kind::negative_distance, "negative distance");
  return report;
}

Instance::Instance(InstanceData data) : data_(std::move(data)) {
  const auto report = validate(data_);
  if (!report.ok()) throw ValidationError(report.summary());

  for (SiteIndex s = 0; s < data_.sites.size(); ++s) {
    (data_.sites[s].kind == SiteKind::existing ? existing_ : candidates_).push_back(s);
  }
  populations_.reserve(data_.blocks.size());
  for (const auto& b : data_.blocks) {
    populations_.push_back(b.population);
    total_population_ += b.population;
  }
}

bool Instance::has_coordinates() const noexcept {
  for (const auto& b : data_.blocks) {
    if (!b.coord) return false;
  }
  for (const auto& s : data_.sites) {
    if (!s.coord) return false;
  }
  return true;
}

std::vector<double> baseline_distances(const Instance& instance) {
  const auto& subset =
      instance.existing_sites().empty() ? instance.candidate_sites() : instance.existing_sites();
  const auto& d = instance.distances();
  std::vector<double> out(instance.num_blocks(), std::numeric_limits<double>::infinity());
  for (BlockIndex r = 0; r < instance.num_blocks(); ++r) {
    for (SiteIndex s : subset) {
      if (d(r, s) < out[r]) out[r] = d(r, s);
    }
  }
  return out;
}

}  // namespace eqloc
