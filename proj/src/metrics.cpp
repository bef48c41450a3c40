#include "eqloc/metrics.hpp"

#include "eqloc/error.hpp"
#include "eqloc/log.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace eqloc {

namespace {

void require_same_size(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("distance and population vectors differ in length");
  }
}

void require_kappa(const KappaContext& ctx) {
  if (!(ctx.kappa < 0.0)) throw std::invalid_argument("kappa must be negative");
}

// sum p exp(-kappa z) as scale * exp(-kappa * z_ref), where z_ref is the
// largest distance carrying positive population. Every term is <= p.
struct ShiftedSum {
  double scale = 0.0;
  double z_ref = 0.0;
  double weight = 0.0;  // sum p, accumulated in the same order as scale
};

ShiftedSum shifted_sum(std::span<const double> z, std::span<const double> p, double kappa) {
  ShiftedSum out;
  bool any = false;
  for (std::size_t r = 0; r < z.size(); ++r) {
    if (p[r] > 0.0 && (!any || z[r] > out.z_ref)) {
      out.z_ref = z[r];
      any = true;
    }
  }
  for (std::size_t r = 0; r < z.size(); ++r) {
    out.weight += p[r];
    if (p[r] > 0.0) out.scale += p[r] * std::exp(-kappa * (z[r] - out.z_ref));
  }
  return out;
}

}  // namespace

KappaContext make_context(double epsilon, double alpha, double total_population) {
  if (!(epsilon < 0.0)) throw std::invalid_argument("epsilon must be negative");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
  if (!(total_population > 0.0)) throw std::invalid_argument("total population must be positive");
  if (std::abs(epsilon) < 0.5 || std::abs(epsilon) > 2.0) {
    log::warn("|epsilon| = " + std::to_string(std::abs(epsilon)) +
              " is outside the typical range [0.5, 2]");
  }
  return KappaContext{epsilon, alpha, alpha * epsilon, total_population};
}

double compute_alpha(std::span<const double> z, std::span<const double> p) {
  require_same_size(z, p);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t r = 0; r < z.size(); ++r) {
    num += p[r] * z[r];
    den += p[r] * z[r] * z[r];
  }
  if (!(den > 0.0)) {
    throw DegenerateDistances("all population-weighted distances are zero; access is already perfect");
  }
  return num / den;
}

double ProxyValue::log() const { return std::log(scale) + log_shift; }

double ProxyValue::value() const { return scale * std::exp(log_shift); }

bool ProxyValue::representable() const { return std::isfinite(value()); }

double kolm_pollak_ede(std::span<const double> z, std::span<const double> p, const KappaContext& ctx) {
  require_same_size(z, p);
  require_kappa(ctx);
  const auto sum = shifted_sum(z, p, ctx.kappa);
  if (!(sum.weight > 0.0)) throw std::invalid_argument("total population must be positive");
  // z_ref + ln(scale / T) / (-kappa); exact for uniform inputs since scale == T.
  return sum.z_ref + std::log(sum.scale / sum.weight) / (-ctx.kappa);
}

ProxyValue linear_proxy(std::span<const double> z, std::span<const double> p, const KappaContext& ctx) {
  require_same_size(z, p);
  require_kappa(ctx);
  const auto sum = shifted_sum(z, p, ctx.kappa);
  if (sum.z_ref == 0.0) return ProxyValue{sum.scale, 0.0};
  return ProxyValue{sum.scale, -ctx.kappa * sum.z_ref};
}

double proxy_to_ede(const ProxyValue& proxy, const KappaContext& ctx) {
  require_kappa(ctx);
  if (!(proxy.scale > 0.0)) throw std::invalid_argument("proxy must be positive");
  return (proxy.log_shift + std::log(proxy.scale / ctx.total_population)) / (-ctx.kappa);
}

double proxy_to_ede(double proxy, const KappaContext& ctx) {
  return proxy_to_ede(ProxyValue{proxy, 0.0}, ctx);
}

ProxyValue target_to_bound(double target_ede, const KappaContext& ctx) {
  require_kappa(ctx);
  if (target_ede < 0.0) throw std::invalid_argument("target EDE must be non-negative");
  return ProxyValue{ctx.total_population, -ctx.kappa * target_ede};
}

double weighted_mean(std::span<const double> values, std::span<const double> weights) {
  require_same_size(values, weights);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (weights[i] > 0.0) {
      num += weights[i] * values[i];
      den += weights[i];
    }
  }
  if (!(den > 0.0)) throw std::invalid_argument("total weight must be positive");
  return num / den;
}

double weighted_quantile(std::span<const double> values, std::span<const double> weights, double q) {
  require_same_size(values, weights);
  std::vector<std::size_t> order;
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (weights[i] > 0.0) {
      order.push_back(i);
      total += weights[i];
    }
  }
  if (order.empty()) throw std::invalid_argument("total weight must be positive");
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const double threshold = q * total;
  double cumulative = 0.0;
  for (std::size_t i : order) {
    cumulative += weights[i];
    if (cumulative >= threshold) return values[i];
  }
  return values[order.back()];
}

Quartiles weighted_quartiles(std::span<const double> values, std::span<const double> weights) {
  return Quartiles{weighted_quantile(values, weights, 0.25), weighted_quantile(values, weights, 0.5),
                   weighted_quantile(values, weights, 0.75)};
}

AccessProfile make_profile(std::vector<double> distances, std::span<const double> populations,
                           const KappaContext& ctx) {
  AccessProfile profile;
  profile.ede = kolm_pollak_ede(distances, populations, ctx);
  profile.weighted_mean = weighted_mean(distances, populations);
  profile.quartiles = weighted_quartiles(distances, populations);
  profile.max = 0.0;
  for (std::size_t r = 0; r < distances.size(); ++r) {
    if (populations[r] > 0.0) profile.max = std::max(profile.max, distances[r]);
  }
  profile.distances = std::move(distances);
  profile.populations.assign(populations.begin(), populations.end());
  return profile;
}

}  // namespace eqloc
