#pragma once

#include <span>
#include <vector>

namespace eqloc {

/// Inequality-aversion parameters for one planning run. alpha is derived from
/// baseline access once and then held fixed.
struct KappaContext {
  double epsilon = -1.0;        // dimensionless aversion, < 0 for bads
  double alpha = 0.0;           // 1/m
  double kappa = 0.0;           // 1/m, alpha * epsilon
  double total_population = 0.0;
};

inline constexpr double kDefaultEpsilon = -1.0;

/// Builds a context with kappa = alpha * epsilon. Throws std::invalid_argument
/// unless epsilon < 0, alpha > 0 and total_population > 0. Warns when |epsilon|
/// is outside the customary [0.5, 2] range.
KappaContext make_context(double epsilon, double alpha, double total_population);

/// (sum p z) / (sum p z^2). Throws DegenerateDistances when every weighted
/// distance is zero.
double compute_alpha(std::span<const double> distances, std::span<const double> populations);

/// A positive number held as scale * exp(log_shift) so that sums of large
/// exponentials stay representable.
struct ProxyValue {
  double scale = 0.0;
  double log_shift = 0.0;

  double log() const;
  /// Plain value; may be +inf when it does not fit in a double.
  double value() const;
  bool representable() const;
};

/// Kolm-Pollak EDE: -(1/kappa) ln[(1/T) sum p exp(-kappa z)], evaluated with
/// the largest exponent factored out.
double kolm_pollak_ede(std::span<const double> distances, std::span<const double> populations,
                       const KappaContext& ctx);

/// sum p exp(-kappa z).
ProxyValue linear_proxy(std::span<const double> assigned_distances,
                        std::span<const double> populations, const KappaContext& ctx);

double proxy_to_ede(const ProxyValue& proxy, const KappaContext& ctx);
double proxy_to_ede(double proxy, const KappaContext& ctx);

/// T exp(-kappa l): the proxy value a target EDE of l meters corresponds to.
ProxyValue target_to_bound(double target_ede, const KappaContext& ctx);

double weighted_mean(std::span<const double> values, std::span<const double> weights);

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

/// Population-weighted value at cumulative fraction q: the smallest value whose
/// cumulative weight reaches q * total. Zero-weight entries are ignored.
double weighted_quantile(std::span<const double> values, std::span<const double> weights, double q);
Quartiles weighted_quartiles(std::span<const double> values, std::span<const double> weights);

/// Distance distribution of a population with its summary statistics.
struct AccessProfile {
  std::vector<double> distances;
  std::vector<double> populations;
  double ede = 0.0;
  double weighted_mean = 0.0;
  Quartiles quartiles;
  double max = 0.0;  // over blocks with positive population
};

AccessProfile make_profile(std::vector<double> distances, std::span<const double> populations,
                           const KappaContext& ctx);

}  // namespace eqloc
