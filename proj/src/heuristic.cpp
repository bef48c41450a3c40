#include "eqloc/heuristic.hpp"

#include "eqloc/error.hpp"
#include "eqloc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace eqloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

void check_budget(const ReducedProblem& prob, std::size_t k, bool has_existing) {
  if (k > prob.num_candidates()) {
    throw BudgetExceedsCandidates("budget k = " + std::to_string(k) + " exceeds the " +
                                  std::to_string(prob.num_candidates()) + " candidate sites");
  }
  if (k == 0 && !has_existing) throw std::invalid_argument("an instance without existing sites needs k >= 1");
}

std::vector<std::size_t> greedy_columns(const ReducedProblem& prob, std::size_t k, unsigned workers) {
  const std::size_t n = prob.num_candidates();
  const std::size_t nr = prob.num_rows();
  std::vector<double> cur(prob.base().begin(), prob.base().end());
  std::vector<char> used(n, 0);
  std::vector<std::size_t> order;
  std::vector<double> totals(n);
  for (std::size_t round = 0; round < k; ++round) {
    parallel_slices(n, workers, [&](std::size_t begin, std::size_t end, unsigned) {
      for (std::size_t j = begin; j < end; ++j) {
        if (used[j]) continue;
        const auto col = prob.column(j);
        double t = 0.0;
        for (std::size_t i = 0; i < nr; ++i) t += std::min(cur[i], col[i]);
        totals[j] = t;
      }
    });
    std::size_t pick = kNone;
    for (std::size_t j = 0; j < n; ++j) {
      if (!used[j] && (pick == kNone || totals[j] < totals[pick])) pick = j;
    }
    used[pick] = 1;
    order.push_back(pick);
    const auto col = prob.column(pick);
    for (std::size_t i = 0; i < nr; ++i) cur[i] = std::min(cur[i], col[i]);
  }
  return order;
}

// Nearest and second-nearest open cost per row; the existing sites act as one
// permanently open facility with owner kNone.
struct OpenCosts {
  std::vector<double> best;
  std::vector<std::size_t> owner;
  std::vector<double> second;

  void rebuild(const ReducedProblem& prob, const std::vector<std::size_t>& selection) {
    const std::size_t nr = prob.num_rows();
    best.assign(prob.base().begin(), prob.base().end());
    owner.assign(nr, kNone);
    second.assign(nr, kInf);
    for (std::size_t j : selection) {
      const auto col = prob.column(j);
      for (std::size_t i = 0; i < nr; ++i) {
        const double c = col[i];
        if (c < best[i]) {
          second[i] = best[i];
          best[i] = c;
          owner[i] = j;
        } else if (c < second[i]) {
          second[i] = c;
        }
      }
    }
  }
};

struct Move {
  double total = kInf;
  std::size_t out = kNone;  // position-independent column ids
  std::size_t in = kNone;

  bool better_than(const Move& other) const {
    if (total != other.total) return total < other.total;
    if (out != other.out) return out < other.out;
    return in < other.in;
  }
};

struct LocalOptimum {
  std::vector<std::size_t> columns;  // ascending
  double total = 0.0;
  double start_total = 0.0;
  std::size_t swaps = 0;
};

LocalOptimum improve(const ReducedProblem& prob, std::vector<std::size_t> selection, unsigned workers) {
  const std::size_t n = prob.num_candidates();
  const std::size_t nr = prob.num_rows();
  std::sort(selection.begin(), selection.end());

  LocalOptimum result;
  result.start_total = prob.evaluate(selection);
  double current = result.start_total;
  if (selection.empty() || selection.size() == n) {
    result.columns = std::move(selection);
    result.total = current;
    return result;
  }

  std::vector<char> chosen(n, 0);
  OpenCosts open;
  std::vector<std::vector<double>> correction(std::max(1u, workers), std::vector<double>(n, 0.0));
  while (true) {
    std::fill(chosen.begin(), chosen.end(), 0);
    for (std::size_t j : selection) chosen[j] = 1;
    open.rebuild(prob, selection);

    const unsigned slices = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), n));
    std::vector<Move> slice_best(slices);
    parallel_slices(n, slices, [&](std::size_t begin, std::size_t end, unsigned w) {
      auto& corr = correction[w];
      for (std::size_t in = begin; in < end; ++in) {
        if (chosen[in]) continue;
        const auto col = prob.column(in);
        // total(out, in) = sum_i min(c_in, best) + sum over rows owned by out of
        // [min(c_in, second) - min(c_in, best)].
        double keep_all = 0.0;
        for (std::size_t j : selection) corr[j] = 0.0;
        for (std::size_t i = 0; i < nr; ++i) {
          const double with_best = std::min(col[i], open.best[i]);
          keep_all += with_best;
          if (open.owner[i] != kNone) corr[open.owner[i]] += std::min(col[i], open.second[i]) - with_best;
        }
        for (std::size_t out : selection) {
          const Move m{keep_all + corr[out], out, in};
          if (m.better_than(slice_best[w])) slice_best[w] = m;
        }
      }
    });
    Move best;
    for (const auto& m : slice_best) {
      if (m.better_than(best)) best = m;
    }
    if (best.out == kNone || !(current - best.total > 1e-12 * std::abs(current))) break;

    std::vector<std::size_t> next = selection;
    std::replace(next.begin(), next.end(), best.out, best.in);
    std::sort(next.begin(), next.end());
    const double next_total = prob.evaluate(next);
    // The incremental total carries rounding; accept only real improvements.
    if (!(next_total < current)) break;
    selection = std::move(next);
    current = next_total;
    ++result.swaps;
  }
  result.columns = std::move(selection);
  result.total = current;
  return result;
}

std::vector<std::size_t> to_columns(const ReducedProblem& prob, const std::vector<SiteIndex>& sites) {
  const auto& cands = prob.candidate_sites();
  std::vector<std::size_t> cols;
  for (SiteIndex s : sites) {
    const auto it = std::lower_bound(cands.begin(), cands.end(), s);
    if (it == cands.end() || *it != s) {
      throw std::invalid_argument("site index " + std::to_string(s) + " is not a candidate");
    }
    cols.push_back(static_cast<std::size_t>(it - cands.begin()));
  }
  std::vector<std::size_t> sorted = cols;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("selection contains a site twice");
  }
  return cols;
}

std::vector<SiteIndex> to_sites(const ReducedProblem& prob, const std::vector<std::size_t>& cols) {
  std::vector<SiteIndex> sites;
  for (std::size_t j : cols) sites.push_back(prob.site_of(j));
  std::sort(sites.begin(), sites.end());
  return sites;
}

// Uniform integer in [0, bound) from raw 64-bit draws; stable across standard libraries.
std::size_t draw_below(std::mt19937_64& rng, std::size_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

}  // namespace

std::vector<SiteIndex> greedy_add(const Instance& instance, const KappaContext& ctx, std::size_t k,
                                  Objective objective, unsigned workers) {
  const ReducedProblem prob(instance, ctx, objective);
  check_budget(prob, k, !instance.existing_sites().empty());
  std::vector<SiteIndex> sites;
  for (std::size_t j : greedy_columns(prob, k, workers)) sites.push_back(prob.site_of(j));
  return sites;
}

HeuristicResult interchange(const Instance& instance, const KappaContext& ctx,
                            const std::vector<SiteIndex>& selection, Objective objective,
                            const HeuristicConfig& config) {
  const ReducedProblem prob(instance, ctx, objective);
  check_budget(prob, selection.size(), !instance.existing_sites().empty());
  const auto opt = improve(prob, to_columns(prob, selection), config.workers);
  HeuristicResult out;
  out.chosen_sites = to_sites(prob, opt.columns);
  out.initial_value = prob.to_objective(opt.start_total);
  out.improved_value = prob.to_objective(opt.total);
  out.objective_value = out.improved_value;
  out.swaps_performed = opt.swaps;
  return out;
}

HeuristicResult solve_heuristic(const Instance& instance, const KappaContext& ctx, std::size_t k,
                                Objective objective, const HeuristicConfig& config) {
  const ReducedProblem prob(instance, ctx, objective);
  check_budget(prob, k, !instance.existing_sites().empty());
  auto best = improve(prob, greedy_columns(prob, k, config.workers), config.workers);
  const double greedy_total = best.start_total;
  std::size_t swaps = best.swaps;

  const std::size_t n = prob.num_candidates();
  for (unsigned r = 1; r <= config.restarts && k > 0 && k < n; ++r) {
    std::mt19937_64 rng(config.seed * 0x9E3779B97F4A7C15ULL + r);
    std::vector<std::size_t> perm(n);
    for (std::size_t j = 0; j < n; ++j) perm[j] = j;
    for (std::size_t j = 0; j < k; ++j) std::swap(perm[j], perm[j + draw_below(rng, n - j)]);
    perm.resize(k);
    auto candidate = improve(prob, std::move(perm), config.workers);
    swaps += candidate.swaps;
    if (candidate.total < best.total ||
        (candidate.total == best.total && candidate.columns < best.columns)) {
      best = std::move(candidate);
    }
  }

  HeuristicResult out;
  out.chosen_sites = to_sites(prob, best.columns);
  out.initial_value = prob.to_objective(greedy_total);
  out.improved_value = prob.to_objective(best.total);
  out.objective_value = out.improved_value;
  out.swaps_performed = swaps;
  return out;
}

}  // namespace eqloc
