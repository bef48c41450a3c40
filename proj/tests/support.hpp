#pragma once

// Fixtures, seeded instance generators and independent oracles shared by the
// unit tests and the acceptance suite. The oracles only read the raw distance
// matrix; they never touch ReducedProblem or the solver code.

#include "eqloc/metrics.hpp"
#include "eqloc/model.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace testing {

using Real = boost::multiprecision::cpp_dec_float_50;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(unit() * static_cast<double>(n)); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

// 3 blocks, existing s1, candidates s2 and s3.
inline eqloc::Instance fixture_t1() {
  eqloc::InstanceData d;
  d.name = "t1";
  d.blocks = {{"b1", 100, {}}, {"b2", 50, {}}, {"b3", 10, {}}};
  d.sites = {{"s1", eqloc::SiteKind::existing, {}},
             {"s2", eqloc::SiteKind::candidate, {}},
             {"s3", eqloc::SiteKind::candidate, {}}};
  d.distances = eqloc::DistanceMatrix(3, 3, {200, 800, 1500, 600, 300, 1200, 900, 700, 100});
  return eqloc::Instance(std::move(d));
}

struct RandomSpec {
  std::size_t min_blocks = 5;
  std::size_t max_blocks = 30;
  std::size_t min_candidates = 4;
  std::size_t max_candidates = 12;
  std::size_t max_existing = 3;
  bool allow_greenfield = false;
  double extent_m = 3000.0;
  double zero_population_chance = 0.1;
};

// Points in a square; distances are Euclidean so the matrix is metric.
inline eqloc::Instance random_instance(Rng& rng, const RandomSpec& spec = {}) {
  eqloc::InstanceData d;
  d.name = "random";
  const std::size_t rows = rng.between(spec.min_blocks, spec.max_blocks);
  const std::size_t cands = rng.between(spec.min_candidates, spec.max_candidates);
  const std::size_t existing = rng.between(spec.allow_greenfield ? 0 : 1, spec.max_existing);
  std::vector<std::pair<double, double>> bp, sp;
  for (std::size_t r = 0; r < rows; ++r) {
    bp.emplace_back(rng.uniform(0, spec.extent_m), rng.uniform(0, spec.extent_m));
    double pop = rng.chance(spec.zero_population_chance) ? 0.0 : std::floor(rng.uniform(1, 500));
    d.blocks.push_back({"b" + std::to_string(r), pop, {}});
  }
  if (d.blocks[0].population == 0.0) d.blocks[0].population = 1.0;
  for (std::size_t s = 0; s < existing + cands; ++s) {
    sp.emplace_back(rng.uniform(0, spec.extent_m), rng.uniform(0, spec.extent_m));
    const auto kind = s < existing ? eqloc::SiteKind::existing : eqloc::SiteKind::candidate;
    d.sites.push_back({"s" + std::to_string(s), kind, {}});
  }
  d.distances = eqloc::DistanceMatrix(rows, d.sites.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t s = 0; s < d.sites.size(); ++s) {
      d.distances(r, s) = std::hypot(bp[r].first - sp[s].first, bp[r].second - sp[s].second);
    }
  }
  return eqloc::Instance(std::move(d));
}

// Termwise Kolm-Pollak EDE in 50-digit decimal arithmetic.
inline Real mp_proxy(const std::vector<double>& z, const std::vector<double>& p, double kappa) {
  Real sum = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    sum += Real(p[i]) * boost::multiprecision::exp(-Real(kappa) * Real(z[i]));
  }
  return sum;
}

inline double mp_ede(const std::vector<double>& z, const std::vector<double>& p, double kappa) {
  Real total = 0;
  for (double w : p) total += Real(w);
  const Real ede = -boost::multiprecision::log(mp_proxy(z, p, kappa) / total) / Real(kappa);
  return ede.convert_to<double>();
}

inline double plain_alpha(const std::vector<double>& z, const std::vector<double>& p) {
  Real num = 0, den = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    num += Real(p[i]) * Real(z[i]);
    den += Real(p[i]) * Real(z[i]) * Real(z[i]);
  }
  return (num / den).convert_to<double>();
}

// Nearest distance per block over existing sites plus the chosen candidates.
inline std::vector<double> nearest(const eqloc::Instance& inst, const std::vector<std::size_t>& chosen) {
  std::vector<double> z(inst.num_blocks(), std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < inst.num_blocks(); ++r) {
    for (std::size_t s = 0; s < inst.num_sites(); ++s) {
      if (inst.sites()[s].kind == eqloc::SiteKind::existing) z[r] = std::min(z[r], inst.distances()(r, s));
    }
    for (std::size_t s : chosen) z[r] = std::min(z[r], inst.distances()(r, s));
  }
  return z;
}

struct OracleResult {
  std::vector<std::size_t> best;  // site indices
  Real proxy;                     // sum p exp(-kappa z) of the best kolm-pollak set
  double weighted_sum = 0.0;      // sum p z of the best mean set
  double ede = 0.0;
};

enum class OracleObjective { kolm_pollak, mean };

// Exhaustive search over all k-subsets of candidates.
inline OracleResult brute_force(const eqloc::Instance& inst, double kappa, std::size_t k, OracleObjective obj) {
  const auto& cands = inst.candidate_sites();
  const std::size_t n = cands.size();
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  OracleResult best;
  bool have = false;
  const auto& pop = inst.populations();
  while (true) {
    std::vector<std::size_t> sites;
    for (std::size_t i : pick) sites.push_back(cands[i]);
    const auto z = nearest(inst, sites);
    if (obj == OracleObjective::kolm_pollak) {
      const Real v = mp_proxy(z, pop, kappa);
      if (!have || v < best.proxy) {
        best.proxy = v;
        best.best = sites;
        have = true;
      }
    } else {
      Real v = 0;
      for (std::size_t r = 0; r < z.size(); ++r) v += Real(pop[r]) * Real(z[r]);
      const double dv = v.convert_to<double>();
      if (!have || dv < best.weighted_sum) {
        best.weighted_sum = dv;
        best.best = sites;
        have = true;
      }
    }
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  best.ede = mp_ede(nearest(inst, best.best), pop, kappa);
  if (obj == OracleObjective::kolm_pollak) {
    const auto z = nearest(inst, best.best);
    double s = 0;
    for (std::size_t r = 0; r < z.size(); ++r) s += pop[r] * z[r];
    best.weighted_sum = s;
  }
  return best;
}

inline double relative_gap(double a, double b) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
  return std::fabs(a - b) / scale;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  namespace fs = std::filesystem;
  static std::uint64_t counter = 0;
  const fs::path p = fs::temp_directory_path() /
                     ("eqloc_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace testing
