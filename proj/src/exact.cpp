#include "eqloc/exact.hpp"

#include "eqloc/error.hpp"
#include "eqloc/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

namespace eqloc {

const char* to_string(Proof proof) {
  switch (proof) {
    case Proof::optimal: return "optimal";
    case Proof::heuristic: return "heuristic";
    case Proof::limit_reached: return "limit_reached";
  }
  return "optimal";
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    // result * num / i is exact at each step; guard the multiplication.
    if (result > std::numeric_limits<std::uint64_t>::max() / num) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result = result * num / i;
  }
  return result;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Incumbent {
  double value = kInf;
  std::vector<std::size_t> columns;

  bool offer(double v, const std::vector<std::size_t>& cols) {
    if (v < value || (v == value && cols < columns)) {
      value = v;
      columns = cols;
      return true;
    }
    return false;
  }
};

void check_budget(const Instance& instance, std::size_t k) {
  if (k > instance.candidate_sites().size()) {
    throw BudgetExceedsCandidates("budget k = " + std::to_string(k) + " exceeds the " +
                                  std::to_string(instance.candidate_sites().size()) +
                                  " candidate sites");
  }
  if (k == 0 && instance.existing_sites().empty()) {
    throw std::invalid_argument("an instance without existing sites needs k >= 1");
  }
}

ExactResult finish(const ReducedProblem& prob, const Incumbent& best, Proof proof, std::uint64_t nodes,
                   ExactMethod method) {
  ExactResult out;
  for (std::size_t j : best.columns) out.chosen_sites.push_back(prob.site_of(j));
  out.objective_value = prob.to_objective(best.value);
  out.proof = proof;
  out.nodes_explored = nodes;
  out.method_used = method;
  return out;
}

// Lexicographic depth-first walk over k-subsets whose first column lies in
// [first_begin, first_end).
void enumerate_range(const ReducedProblem& prob, std::size_t k, std::size_t first_begin,
                     std::size_t first_end, Incumbent& best, std::uint64_t& leaves) {
  const std::size_t n = prob.num_candidates();
  const std::size_t nr = prob.num_rows();
  std::vector<std::vector<double>> level(k + 1, std::vector<double>(nr));
  std::copy(prob.base().begin(), prob.base().end(), level[0].begin());
  std::vector<std::size_t> chosen(k);

  std::function<void(std::size_t, std::size_t, std::size_t)> dfs = [&](std::size_t depth,
                                                                         std::size_t begin,
                                                                         std::size_t end) {
    if (depth == k) {
      ++leaves;
      const double v = ReducedProblem::total(level[k]);
      if (v < best.value) {
        best.value = v;
        best.columns = chosen;
      }
      return;
    }
    for (std::size_t j = begin; j < end; ++j) {
      const auto col = prob.column(j);
      const auto& prev = level[depth];
      auto& next = level[depth + 1];
      for (std::size_t i = 0; i < nr; ++i) next[i] = std::min(prev[i], col[i]);
      chosen[depth] = j;
      dfs(depth + 1, j + 1, n - k + depth + 2);
    }
  };
  if (k == 0) {
    ++leaves;
    best.offer(ReducedProblem::total(level[0]), {});
    return;
  }
  dfs(0, first_begin, std::min(first_end, n - k + 1));
}

ExactResult solve_by_enumeration(const ReducedProblem& prob, std::size_t k, unsigned workers) {
  const std::size_t n = prob.num_candidates();
  const std::size_t firsts = k == 0 ? 1 : n - k + 1;
  const unsigned slices = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), firsts));
  std::vector<Incumbent> per_slice(slices);
  std::vector<std::uint64_t> leaves(slices, 0);
  parallel_slices(firsts, slices, [&](std::size_t begin, std::size_t end, unsigned w) {
    if (k == 0) {
      enumerate_range(prob, 0, 0, 0, per_slice[w], leaves[w]);
    } else {
      enumerate_range(prob, k, begin, end, per_slice[w], leaves[w]);
    }
  });
  Incumbent best;
  std::uint64_t total_leaves = 0;
  for (unsigned w = 0; w < slices; ++w) {
    if (!per_slice[w].columns.empty() || k == 0) best.offer(per_slice[w].value, per_slice[w].columns);
    total_leaves += leaves[w];
  }
  return finish(prob, best, Proof::optimal, total_leaves, ExactMethod::enumerate);
}

enum class ColumnState : std::uint8_t { free, in, out };

struct Node {
  double bound = 0.0;
  std::uint64_t seq = 0;
  std::vector<ColumnState> state;
  std::size_t committed = 0;
  std::size_t free = 0;
  bool leaf = false;
  double leaf_value = kInf;
  std::size_t branch_column = 0;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq > b.seq;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const ReducedProblem& prob, std::size_t k, const ExactConfig& config)
      : prob_(prob), k_(k), config_(config), cur_(prob.num_rows()), best_free_(prob.num_rows()) {}

  ExactResult run() {
    const auto start = std::chrono::steady_clock::now();
    seed_incumbent();

    Node root;
    root.state.assign(prob_.num_candidates(), ColumnState::free);
    root.free = prob_.num_candidates();
    evaluate(root);
    push(std::move(root));

    std::uint64_t nodes = 0;
    Proof proof = Proof::optimal;
    while (!open_.empty()) {
      if (nodes >= config_.node_limit) {
        proof = Proof::limit_reached;
        break;
      }
      if ((nodes & 255u) == 0 && nodes > 0) {
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        if (elapsed.count() > config_.time_limit_s) {
          proof = Proof::limit_reached;
          break;
        }
      }
      Node node = open_.top();
      open_.pop();
      if (pruned(node.bound)) continue;
      ++nodes;
      if (node.leaf) {
        best_.offer(node.leaf_value, columns_in(node.state));
        continue;
      }
      const std::size_t j = node.branch_column;
      if (node.committed < k_) {
        Node child = node;
        child.state[j] = ColumnState::in;
        ++child.committed;
        --child.free;
        evaluate(child);
        push(std::move(child));
      }
      if (node.committed + node.free - 1 >= k_) {
        Node child = std::move(node);
        child.state[j] = ColumnState::out;
        --child.free;
        evaluate(child);
        push(std::move(child));
      }
    }
    return finish(prob_, best_, proof, nodes, ExactMethod::branch_and_bound);
  }

 private:
  bool pruned(double bound) const {
    if (config_.optimality_tolerance > 0.0) {
      return bound >= best_.value * (1.0 - config_.optimality_tolerance);
    }
    return bound > best_.value;
  }

  void push(Node node) {
    if (pruned(node.bound)) return;
    node.seq = next_seq_++;
    open_.push(std::move(node));
  }

  std::vector<std::size_t> columns_in(const std::vector<ColumnState>& state) const {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < state.size(); ++j) {
      if (state[j] == ColumnState::in) cols.push_back(j);
    }
    return cols;
  }

  void load_committed(const std::vector<ColumnState>& state) {
    std::copy(prob_.base().begin(), prob_.base().end(), cur_.begin());
    for (std::size_t j = 0; j < state.size(); ++j) {
      if (state[j] != ColumnState::in) continue;
      const auto col = prob_.column(j);
      for (std::size_t i = 0; i < cur_.size(); ++i) cur_[i] = std::min(cur_[i], col[i]);
    }
  }

  double saving(std::size_t j) const {
    const auto col = prob_.column(j);
    double s = 0.0;
    for (std::size_t i = 0; i < cur_.size(); ++i) {
      if (col[i] < cur_[i]) s += cur_[i] - col[i];
    }
    return s;
  }

  // Fills bound, leaf flag/value and branching column for a node.
  void evaluate(Node& node) {
    load_committed(node.state);
    if (node.committed == k_ || node.committed + node.free == k_) {
      if (node.committed < k_) {
        for (std::size_t j = 0; j < node.state.size(); ++j) {
          if (node.state[j] != ColumnState::free) continue;
          node.state[j] = ColumnState::in;
          const auto col = prob_.column(j);
          for (std::size_t i = 0; i < cur_.size(); ++i) cur_[i] = std::min(cur_[i], col[i]);
        }
        node.committed = k_;
        node.free = 0;
      }
      node.leaf = true;
      node.leaf_value = ReducedProblem::total(cur_);
      node.bound = node.leaf_value;
      return;
    }

    // Relaxation 1: every block takes its best non-excluded site.
    std::copy(cur_.begin(), cur_.end(), best_free_.begin());
    savings_.clear();
    double branch_saving = -1.0;
    for (std::size_t j = 0; j < node.state.size(); ++j) {
      if (node.state[j] != ColumnState::free) continue;
      const auto col = prob_.column(j);
      for (std::size_t i = 0; i < cur_.size(); ++i) best_free_[i] = std::min(best_free_[i], col[i]);
      const double s = saving(j);
      savings_.push_back(s);
      if (s > branch_saving) {
        branch_saving = s;
        node.branch_column = j;
      }
    }
    const double relaxed = ReducedProblem::total(best_free_);

    // Relaxation 2: savings are submodular, so the remaining budget can save at
    // most the sum of the largest individual savings.
    const double committed_total = ReducedProblem::total(cur_);
    const std::size_t remaining = k_ - node.committed;
    std::partial_sort(savings_.begin(), savings_.begin() + static_cast<std::ptrdiff_t>(remaining),
                      savings_.end(), std::greater<>());
    double top = 0.0;
    for (std::size_t i = 0; i < remaining; ++i) top += savings_[i];
    const double budgeted = committed_total - top - 1e-12 * committed_total;

    node.leaf = false;
    node.bound = std::max(relaxed, budgeted);
  }

  void seed_incumbent() {
    std::copy(prob_.base().begin(), prob_.base().end(), cur_.begin());
    std::vector<char> used(prob_.num_candidates(), 0);
    std::vector<std::size_t> cols;
    for (std::size_t round = 0; round < k_; ++round) {
      double best_s = -1.0;
      std::size_t best_j = 0;
      for (std::size_t j = 0; j < prob_.num_candidates(); ++j) {
        if (used[j]) continue;
        const double s = saving(j);
        if (s > best_s) {
          best_s = s;
          best_j = j;
        }
      }
      used[best_j] = 1;
      cols.push_back(best_j);
      const auto col = prob_.column(best_j);
      for (std::size_t i = 0; i < cur_.size(); ++i) cur_[i] = std::min(cur_[i], col[i]);
    }
    std::sort(cols.begin(), cols.end());
    best_.offer(ReducedProblem::total(cur_), cols);
  }

  const ReducedProblem& prob_;
  std::size_t k_;
  ExactConfig config_;
  std::vector<double> cur_;
  std::vector<double> best_free_;
  std::vector<double> savings_;
  Incumbent best_;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace

ExactResult solve_exact(const Instance& instance, const KappaContext& ctx, std::size_t k,
                        Objective objective, const ExactConfig& config) {
  check_budget(instance, k);
  const ReducedProblem prob(instance, ctx, objective);
  const std::size_t n = prob.num_candidates();

  ExactMethod method = config.method;
  if (method == ExactMethod::automatic) {
    method = binomial(n, k) <= config.enumeration_limit ? ExactMethod::enumerate
                                                        : ExactMethod::branch_and_bound;
  }
  if (method == ExactMethod::enumerate || k == 0 || k == n) {
    return solve_by_enumeration(prob, k, config.workers);
  }
  return BranchAndBound(prob, k, config).run();
}

double lower_bound(const PartialSelection& partial, const Instance& instance, const KappaContext& ctx,
                   Objective objective) {
  const ReducedProblem prob(instance, ctx, objective);
  std::vector<char> excluded(instance.num_sites(), 0);
  for (SiteIndex s : partial.excluded) {
    if (s >= instance.num_sites()) throw std::invalid_argument("site index out of range");
    excluded[s] = 1;
  }
  for (SiteIndex s : partial.committed) {
    if (s >= instance.num_sites()) throw std::invalid_argument("site index out of range");
    if (excluded[s]) throw std::invalid_argument("site both committed and excluded");
  }
  std::vector<double> best(prob.base().begin(), prob.base().end());
  for (std::size_t j = 0; j < prob.num_candidates(); ++j) {
    if (excluded[prob.site_of(j)]) continue;
    const auto col = prob.column(j);
    for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::min(best[i], col[i]);
  }
  return prob.to_objective(ReducedProblem::total(best));
}

}  // namespace eqloc
