#pragma once

#include "eqloc/model.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace eqloc {

inline constexpr double kEarthRadiusM = 6'371'000.0;

/// Great-circle distance in meters on a sphere of radius kEarthRadiusM.
double haversine_m(const LatLon& a, const LatLon& b);

/// Full block x site haversine matrix. Throws MissingCoordinates if any block or
/// site lacks a coordinate.
DistanceMatrix haversine_matrix(const std::vector<Block>& blocks, const std::vector<Site>& sites);

/// Loads blocks CSV (id,population[,lat,lon]), sites CSV (id,kind[,lat,lon]) or a
/// GeoJSON FeatureCollection of Point sites, and an optional distance CSV whose
/// header row lists site ids and whose first column lists block ids. Without a
/// matrix, distances are great-circle approximations.
Instance load_instance(const std::string& blocks_path, const std::string& sites_path,
                       const std::optional<std::string>& distances_path = std::nullopt,
                       const std::string& name = "");

/// Loads blocks.csv, sites.csv (or sites.geojson) and, when present,
/// distances.csv and instance.json from a directory.
Instance load_instance_dir(const std::string& dir);

/// Writes blocks.csv, sites.csv, distances.csv and instance.json so that
/// load_instance_dir reproduces an equal instance.
void save_instance(const Instance& instance, const std::string& dir);

enum class PopulationModel { uniform, radial_decay };
enum class StorePlacement { center, random };

const char* to_string(PopulationModel model);
const char* to_string(StorePlacement placement);

struct SynthSpec {
  std::size_t grid = 10;        // blocks per side
  double spacing_m = 100.0;     // block centroid spacing
  PopulationModel population = PopulationModel::uniform;
  double base_population = 100.0;  // per block (uniform) or at the center (radial)
  double decay_m = 500.0;          // radial e-folding distance
  double jitter = 0.0;             // multiplicative noise amplitude in [0, 1)
  double min_population = 1.0;     // floor applied after rounding to whole people
  std::size_t existing_stores = 1;
  StorePlacement placement = StorePlacement::center;
  std::size_t candidate_stride = 2;  // one candidate per stride x stride block group
  std::uint64_t seed = 0;
  std::string name = "synthetic";
  LatLon origin{40.0, -75.0};  // south-west corner for exported coordinates
};

/// Deterministic grid city with Euclidean distances. Throws std::invalid_argument
/// on an unusable spec.
Instance generate_synthetic(const SynthSpec& spec);

}  // namespace eqloc
