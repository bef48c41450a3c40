#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace eqloc {

using SiteIndex = std::size_t;
using BlockIndex = std::size_t;

struct LatLon {
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees

  friend bool operator==(const LatLon&, const LatLon&) = default;
};

/// A demand unit (census block or grid cell).
struct Block {
  std::string id;
  double population = 0.0;
  std::optional<LatLon> coord;

  friend bool operator==(const Block&, const Block&) = default;
};

enum class SiteKind { existing, candidate };

const char* to_string(SiteKind kind);

/// An amenity location, either already open or a potential new one.
struct Site {
  std::string id;
  SiteKind kind = SiteKind::candidate;
  std::optional<LatLon> coord;

  friend bool operator==(const Site&, const Site&) = default;
};

/// Dense block x site matrix of distances in meters, row-major.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  DistanceMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(BlockIndex r, SiteIndex s) const noexcept { return data_[r * cols_ + s]; }
  double& operator()(BlockIndex r, SiteIndex s) noexcept { return data_[r * cols_ + s]; }

  std::span<const double> row(BlockIndex r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// How the distance matrix of an instance was obtained.
enum class DistanceSource {
  matrix,     // supplied by the user (e.g. network distances)
  haversine,  // great-circle approximation from coordinates
  grid,       // Euclidean distances on a synthetic grid
};

const char* to_string(DistanceSource source);

/// Unchecked instance contents, as read from files or assembled by hand.
struct InstanceData {
  std::string name;
  std::vector<Block> blocks;
  std::vector<Site> sites;
  DistanceMatrix distances;
  DistanceSource distance_source = DistanceSource::matrix;

  friend bool operator==(const InstanceData&, const InstanceData&) = default;
};

struct Violation {
  enum class Kind {
    dimension_mismatch,
    negative_population,
    non_finite_population,
    zero_total_population,
    duplicate_id,
    non_finite_distance,
    negative_distance,
    no_sites,
  };
  Kind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(Violation::Kind kind) const noexcept;
  std::string summary() const;
};

ValidationReport validate(const InstanceData& data);

/// A validated, immutable city instance. Construction throws ValidationError
/// on bad data, so every Instance satisfies the model invariants.
class Instance {
 public:
  explicit Instance(InstanceData data);

  const std::string& name() const noexcept { return data_.name; }
  const std::vector<Block>& blocks() const noexcept { return data_.blocks; }
  const std::vector<Site>& sites() const noexcept { return data_.sites; }
  const DistanceMatrix& distances() const noexcept { return data_.distances; }
  DistanceSource distance_source() const noexcept { return data_.distance_source; }
  const InstanceData& data() const noexcept { return data_; }

  std::size_t num_blocks() const noexcept { return data_.blocks.size(); }
  std::size_t num_sites() const noexcept { return data_.sites.size(); }

  /// Site indices by kind, ascending.
  const std::vector<SiteIndex>& existing_sites() const noexcept { return existing_; }
  const std::vector<SiteIndex>& candidate_sites() const noexcept { return candidates_; }

  const std::vector<double>& populations() const noexcept { return populations_; }
  double total_population() const noexcept { return total_population_; }

  bool has_coordinates() const noexcept;

  friend bool operator==(const Instance& a, const Instance& b) { return a.data_ == b.data_; }

 private:
  InstanceData data_;
  std::vector<SiteIndex> existing_;
  std::vector<SiteIndex> candidates_;
  std::vector<double> populations_;
  double total_population_ = 0.0;
};

/// Distance from each block to its nearest existing site. Greenfield
/// instances (no existing sites) fall back to the nearest candidate.
std::vector<double> baseline_distances(const Instance& instance);

}  // namespace eqloc
