#include "eqloc/ingest.hpp"

#include "eqloc/csv.hpp"
#include "eqloc/error.hpp"
#include "eqloc/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace eqloc {

namespace fs = std::filesystem;

double haversine_m(const LatLon& a, const LatLon& b) {
  constexpr double kDeg = std::numbers::pi / 180.0;
  const double phi1 = a.lat * kDeg;
  const double phi2 = b.lat * kDeg;
  const double dphi = (b.lat - a.lat) * kDeg;
  const double dlambda = (b.lon - a.lon) * kDeg;
  const double s = std::sin(dphi / 2.0);
  const double t = std::sin(dlambda / 2.0);
  const double h = s * s + std::cos(phi1) * std::cos(phi2) * t * t;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

DistanceMatrix haversine_matrix(const std::vector<Block>& blocks, const std::vector<Site>& sites) {
  for (const auto& b : blocks) {
    if (!b.coord) throw MissingCoordinates("block '" + b.id + "' has no coordinates and no distance matrix was given");
  }
  for (const auto& s : sites) {
    if (!s.coord) throw MissingCoordinates("site '" + s.id + "' has no coordinates and no distance matrix was given");
  }
  DistanceMatrix m(blocks.size(), sites.size());
  for (std::size_t r = 0; r < blocks.size(); ++r) {
    for (std::size_t s = 0; s < sites.size(); ++s) m(r, s) = haversine_m(*blocks[r].coord, *sites[s].coord);
  }
  return m;
}

namespace {

std::optional<LatLon> read_coord(const csv::Table& t, const csv::Row& row) {
  const auto lat = t.column("lat");
  const auto lon = t.column("lon");
  if (!lat || !lon) return std::nullopt;
  const bool has_lat = !row.fields[*lat].empty();
  const bool has_lon = !row.fields[*lon].empty();
  if (!has_lat && !has_lon) return std::nullopt;
  if (has_lat != has_lon) {
    throw ParseError(t.source, row.line, (has_lat ? *lon : *lat) + 1, "lat and lon must both be given or both be empty");
  }
  return LatLon{csv::parse_double(t, row, *lat), csv::parse_double(t, row, *lon)};
}

std::vector<Block> read_blocks(const std::string& path) {
  const auto t = csv::read_file(path);
  const auto id = t.require_column("id");
  const auto pop = t.require_column("population");
  std::vector<Block> blocks;
  for (const auto& row : t.rows) {
    Block b;
    b.id = row.fields[id];
    if (b.id.empty()) throw ParseError(path, row.line, id + 1, "field 'id' is empty");
    b.population = csv::parse_double(t, row, pop);
    b.coord = read_coord(t, row);
    blocks.push_back(std::move(b));
  }
  return blocks;
}

SiteKind parse_kind(const std::string& text, const std::string& source, std::size_t line, std::size_t col) {
  if (text == "existing") return SiteKind::existing;
  if (text == "candidate") return SiteKind::candidate;
  throw ParseError(source, line, col, "field 'kind': expected 'existing' or 'candidate', found '" + text + "'");
}

std::vector<Site> read_sites_csv(const std::string& path) {
  const auto t = csv::read_file(path);
  const auto id = t.require_column("id");
  const auto kind = t.require_column("kind");
  std::vector<Site> sites;
  for (const auto& row : t.rows) {
    Site s;
    s.id = row.fields[id];
    if (s.id.empty()) throw ParseError(path, row.line, id + 1, "field 'id' is empty");
    s.kind = parse_kind(row.fields[kind], path, row.line, kind + 1);
    s.coord = read_coord(t, row);
    sites.push_back(std::move(s));
  }
  return sites;
}

std::vector<Site> read_sites_geojson(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path, 0, e.byte, e.what());
  }
  if (doc.value("type", "") != "FeatureCollection" || !doc.contains("features") || !doc["features"].is_array()) {
    throw ParseError(path, 0, 0, "expected a GeoJSON FeatureCollection");
  }
  std::vector<Site> sites;
  std::size_t index = 0;
  for (const auto& f : doc["features"]) {
    ++index;
    const std::string where = "feature " + std::to_string(index);
    try {
      const auto& geom = f.at("geometry");
      if (geom.at("type").get<std::string>() != "Point") throw ParseError(path, 0, 0, where + ": only Point geometries are supported");
      const auto& coords = geom.at("coordinates");
      if (!coords.is_array() || coords.size() < 2) throw ParseError(path, 0, 0, where + ": bad coordinates");
      const auto& props = f.at("properties");
      Site s;
      if (props.contains("id")) {
        s.id = props["id"].is_string() ? props["id"].get<std::string>() : props["id"].dump();
      } else if (f.contains("id")) {
        s.id = f["id"].is_string() ? f["id"].get<std::string>() : f["id"].dump();
      } else {
        throw ParseError(path, 0, 0, where + ": missing id");
      }
      s.kind = parse_kind(props.at("kind").get<std::string>(), path, 0, 0);
      // GeoJSON order is [lon, lat].
      s.coord = LatLon{coords[1].get<double>(), coords[0].get<double>()};
      sites.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path, 0, 0, where + ": " + e.what());
    }
  }
  return sites;
}

bool is_geojson(const std::string& path) {
  const auto ext = fs::path(path).extension().string();
  return ext == ".geojson" || ext == ".json";
}

DistanceMatrix read_matrix(const std::string& path, const std::vector<Block>& blocks, const std::vector<Site>& sites) {
  const auto t = csv::read_file(path);
  if (t.header.size() < 2) throw ParseError(path, t.header_line, 1, "expected a block id column followed by site id columns");
  std::unordered_map<std::string, std::size_t> site_index;
  for (std::size_t s = 0; s < sites.size(); ++s) site_index.emplace(sites[s].id, s);
  std::unordered_map<std::string, std::size_t> block_index;
  for (std::size_t r = 0; r < blocks.size(); ++r) block_index.emplace(blocks[r].id, r);

  std::vector<std::size_t> col_site(t.header.size(), 0);
  std::vector<char> site_seen(sites.size(), 0);
  for (std::size_t c = 1; c < t.header.size(); ++c) {
    const auto it = site_index.find(t.header[c]);
    if (it == site_index.end()) throw ParseError(path, t.header_line, c + 1, "unknown site id '" + t.header[c] + "'");
    if (site_seen[it->second]) throw ParseError(path, t.header_line, c + 1, "duplicate site id '" + t.header[c] + "'");
    site_seen[it->second] = 1;
    col_site[c] = it->second;
  }
  if (t.header.size() - 1 != sites.size()) {
    throw ParseError(path, t.header_line, 0, "dimension mismatch: matrix has " + std::to_string(t.header.size() - 1) +
                                                 " site columns, sites file has " + std::to_string(sites.size()));
  }
  if (t.rows.size() != blocks.size()) {
    throw ParseError(path, 0, 0, "dimension mismatch: matrix has " + std::to_string(t.rows.size()) +
                                     " rows, blocks file has " + std::to_string(blocks.size()));
  }
  DistanceMatrix m(blocks.size(), sites.size(), std::nan(""));
  std::vector<char> block_seen(blocks.size(), 0);
  for (const auto& row : t.rows) {
    const auto it = block_index.find(row.fields[0]);
    if (it == block_index.end()) throw ParseError(path, row.line, 1, "unknown block id '" + row.fields[0] + "'");
    if (block_seen[it->second]) throw ParseError(path, row.line, 1, "duplicate block id '" + row.fields[0] + "'");
    block_seen[it->second] = 1;
    for (std::size_t c = 1; c < row.fields.size(); ++c) m(it->second, col_site[c]) = csv::parse_double(t, row, c);
  }
  return m;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

std::string coord_fields(const std::optional<LatLon>& c) {
  if (!c) return ",";
  return fmt::shortest(c->lat) + "," + fmt::shortest(c->lon);
}

}  // namespace

Instance load_instance(const std::string& blocks_path, const std::string& sites_path,
                       const std::optional<std::string>& distances_path, const std::string& name) {
  InstanceData data;
  data.name = name.empty() ? fs::path(blocks_path).parent_path().filename().string() : name;
  data.blocks = read_blocks(blocks_path);
  data.sites = is_geojson(sites_path) ? read_sites_geojson(sites_path) : read_sites_csv(sites_path);
  if (distances_path) {
    data.distances = read_matrix(*distances_path, data.blocks, data.sites);
    data.distance_source = DistanceSource::matrix;
  } else {
    data.distances = haversine_matrix(data.blocks, data.sites);
    data.distance_source = DistanceSource::haversine;
  }
  return Instance(std::move(data));
}

Instance load_instance_dir(const std::string& dir) {
  const fs::path root(dir);
  if (!fs::is_directory(root)) throw ParseError(dir, 0, 0, "not a directory");
  const fs::path blocks = root / "blocks.csv";
  fs::path sites = root / "sites.csv";
  if (!fs::exists(sites) && fs::exists(root / "sites.geojson")) sites = root / "sites.geojson";
  const fs::path distances = root / "distances.csv";
  const fs::path meta = root / "instance.json";

  std::string name = fs::path(dir).lexically_normal().filename().string();
  if (name.empty() || name == ".") name = fs::absolute(root).lexically_normal().parent_path().filename().string();
  std::optional<DistanceSource> source;
  if (fs::exists(meta)) {
    std::ifstream in(meta, std::ios::binary);
    try {
      const auto j = nlohmann::json::parse(in);
      name = j.value("name", name);
      const auto src = j.value("distance_source", std::string("matrix"));
      if (src == "haversine") source = DistanceSource::haversine;
      else if (src == "grid") source = DistanceSource::grid;
      else source = DistanceSource::matrix;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(meta.string(), 0, 0, e.what());
    }
  }
  const auto dist = fs::exists(distances) ? std::optional<std::string>(distances.string()) : std::nullopt;
  Instance loaded = load_instance(blocks.string(), sites.string(), dist, name);
  if (!source || *source == loaded.distance_source()) return loaded;
  InstanceData data = loaded.data();
  data.distance_source = *source;
  return Instance(std::move(data));
}

void save_instance(const Instance& instance, const std::string& dir) {
  const fs::path root(dir);
  fs::create_directories(root);

  std::ostringstream blocks;
  blocks << "id,population,lat,lon\n";
  for (const auto& b : instance.blocks()) {
    blocks << csv::escape(b.id) << ',' << fmt::shortest(b.population) << ',' << coord_fields(b.coord) << '\n';
  }
  write_text(root / "blocks.csv", blocks.str());

  std::ostringstream sites;
  sites << "id,kind,lat,lon\n";
  for (const auto& s : instance.sites()) {
    sites << csv::escape(s.id) << ',' << to_string(s.kind) << ',' << coord_fields(s.coord) << '\n';
  }
  write_text(root / "sites.csv", sites.str());

  std::ostringstream dist;
  dist << "block_id";
  for (const auto& s : instance.sites()) dist << ',' << csv::escape(s.id);
  dist << '\n';
  const auto& d = instance.distances();
  for (std::size_t r = 0; r < instance.num_blocks(); ++r) {
    dist << csv::escape(instance.blocks()[r].id);
    for (std::size_t s = 0; s < instance.num_sites(); ++s) dist << ',' << fmt::shortest(d(r, s));
    dist << '\n';
  }
  write_text(root / "distances.csv", dist.str());

  nlohmann::ordered_json meta;
  meta["name"] = instance.name();
  meta["distance_source"] = to_string(instance.distance_source());
  write_text(root / "instance.json", meta.dump(2) + "\n");
}

const char* to_string(PopulationModel model) {
  return model == PopulationModel::uniform ? "uniform" : "radial-decay";
}

const char* to_string(StorePlacement placement) {
  return placement == StorePlacement::center ? "center" : "random";
}

namespace {

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::string padded(char prefix, std::size_t value, std::size_t count) {
  const std::size_t width = std::to_string(std::max<std::size_t>(count, 1)).size();
  std::string digits = std::to_string(value);
  return std::string(1, prefix) + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

}  // namespace

Instance generate_synthetic(const SynthSpec& spec) {
  if (spec.grid == 0) throw std::invalid_argument("grid must be at least 1");
  if (!(spec.spacing_m > 0.0)) throw std::invalid_argument("spacing must be positive");
  if (!(spec.base_population > 0.0)) throw std::invalid_argument("base population must be positive");
  if (spec.population == PopulationModel::radial_decay && !(spec.decay_m > 0.0)) {
    throw std::invalid_argument("decay distance must be positive");
  }
  if (spec.jitter < 0.0 || spec.jitter >= 1.0) throw std::invalid_argument("jitter must lie in [0, 1)");
  if (spec.min_population < 0.0) throw std::invalid_argument("minimum population must be non-negative");
  if (spec.candidate_stride == 0) throw std::invalid_argument("candidate stride must be at least 1");
  const std::size_t n = spec.grid;
  const std::size_t cells = n * n;
  if (spec.existing_stores > cells) throw std::invalid_argument("more existing stores than blocks");

  std::mt19937_64 rng(spec.seed);
  const double center = (static_cast<double>(n) - 1.0) * spec.spacing_m / 2.0;
  const double m_per_deg = kEarthRadiusM * std::numbers::pi / 180.0;
  const double lon_scale = m_per_deg * std::cos(spec.origin.lat * std::numbers::pi / 180.0);
  auto to_coord = [&](double x, double y) {
    return LatLon{spec.origin.lat + y / m_per_deg, spec.origin.lon + x / lon_scale};
  };

  struct Point {
    double x;
    double y;
  };
  InstanceData data;
  data.name = spec.name;
  data.distance_source = DistanceSource::grid;
  std::vector<Point> block_pos;
  for (std::size_t gy = 0; gy < n; ++gy) {
    for (std::size_t gx = 0; gx < n; ++gx) {
      const double x = static_cast<double>(gx) * spec.spacing_m;
      const double y = static_cast<double>(gy) * spec.spacing_m;
      double p = spec.base_population;
      if (spec.population == PopulationModel::radial_decay) {
        p *= std::exp(-std::hypot(x - center, y - center) / spec.decay_m);
      }
      if (spec.jitter > 0.0) p *= 1.0 + spec.jitter * (2.0 * unit(rng) - 1.0);
      p = std::max(spec.min_population, std::round(p));
      data.blocks.push_back(Block{padded('b', gy * n + gx + 1, cells), p, to_coord(x, y)});
      block_pos.push_back({x, y});
    }
  }

  std::vector<std::size_t> store_cells;
  if (spec.placement == StorePlacement::center) {
    std::vector<std::size_t> order(cells);
    for (std::size_t i = 0; i < cells; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::hypot(block_pos[a].x - center, block_pos[a].y - center) <
             std::hypot(block_pos[b].x - center, block_pos[b].y - center);
    });
    store_cells.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(spec.existing_stores));
  } else {
    std::vector<std::size_t> order(cells);
    for (std::size_t i = 0; i < cells; ++i) order[i] = i;
    for (std::size_t i = 0; i < spec.existing_stores; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(unit(rng) * static_cast<double>(cells - i));
      std::swap(order[i], order[std::min(j, cells - 1)]);
    }
    store_cells.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(spec.existing_stores));
  }
  std::sort(store_cells.begin(), store_cells.end());

  std::vector<Point> site_pos;
  for (std::size_t i = 0; i < store_cells.size(); ++i) {
    const auto& p = block_pos[store_cells[i]];
    data.sites.push_back(Site{padded('e', i + 1, store_cells.size()), SiteKind::existing, to_coord(p.x, p.y)});
    site_pos.push_back(p);
  }
  // One candidate at the centroid of each stride x stride block group.
  const std::size_t groups = (n + spec.candidate_stride - 1) / spec.candidate_stride;
  std::size_t cand = 0;
  for (std::size_t gy = 0; gy < groups; ++gy) {
    for (std::size_t gx = 0; gx < groups; ++gx) {
      auto centroid = [&](std::size_t g) {
        const std::size_t first = g * spec.candidate_stride;
        const std::size_t last = std::min(n, first + spec.candidate_stride) - 1;
        return (static_cast<double>(first) + static_cast<double>(last)) / 2.0 * spec.spacing_m;
      };
      const Point p{centroid(gx), centroid(gy)};
      data.sites.push_back(Site{padded('c', ++cand, groups * groups), SiteKind::candidate, to_coord(p.x, p.y)});
      site_pos.push_back(p);
    }
  }

  data.distances = DistanceMatrix(cells, site_pos.size());
  for (std::size_t r = 0; r < cells; ++r) {
    for (std::size_t s = 0; s < site_pos.size(); ++s) {
      data.distances(r, s) = std::hypot(block_pos[r].x - site_pos[s].x, block_pos[r].y - site_pos[s].y);
    }
  }
  return Instance(std::move(data));
}

}  // namespace eqloc
