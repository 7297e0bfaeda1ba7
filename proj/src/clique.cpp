#include "raidnc/clique.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace raidnc {

namespace {

constexpr auto npos = VertexSet::npos;

double sum_weights(const WeightedGraph& g, std::span<const std::size_t> vs) {
  double w = 0.0;
  for (std::size_t v : vs) w += g.weight(v);
  return w;
}

// Weight, then size, then lexicographic ids (rate is fixed inside a graph).
bool better_in_group(double wa, std::span<const std::size_t> a, double wb,
                     std::span<const std::size_t> b, double eps) {
  if (wa > wb + eps) return true;
  if (wb > wa + eps) return false;
  if (a.size() != b.size()) return a.size() > b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

class ExactSearch {
 public:
  ExactSearch(const WeightedGraph& g, double eps) : g_(g), eps_(eps) {}

  Clique run() {
    if (g_.empty()) return {};
    current_.reserve(g_.size());
    expand(g_.full_set(), 0, 0.0);
    Clique out;
    out.vertices = best_;
    out.weight = best_weight_;
    return out;
  }

 private:
  // Cliques are grown in increasing id order, so the search visits them in
  // lexicographic order and the first of several full ties is kept.
  void expand(const VertexSet& common, std::size_t next_min, double weight) {
    if (common.none()) {
      consider(weight);
      return;
    }
    VertexSet cand = common;
    for (std::size_t i = common.find_first(); i != npos && i < next_min; i = common.find_next(i)) {
      cand.reset(i);
    }
    // An earlier vertex adjacent to everything still available makes every
    // completion non-maximal.
    for (std::size_t x = common.find_first(); x != npos && x < next_min; x = common.find_next(x)) {
      if (cand.is_subset_of(g_.neighbors(x))) return;
    }
    if (have_best_ && prune(cand, weight)) return;

    for (std::size_t v = cand.find_first(); v != npos; v = cand.find_next(v)) {
      current_.push_back(v);
      expand(common & g_.neighbors(v), v + 1, weight + g_.weight(v));
      current_.pop_back();
      if (have_best_ && prune_after(cand, v, weight)) return;
    }
  }

  // Greedy colouring of the candidates: each class holds at most one member
  // of any clique.
  std::pair<double, std::size_t> bound(const VertexSet& cand) {
    classes_.clear();
    class_max_.clear();
    for (std::size_t v = cand.find_first(); v != npos; v = cand.find_next(v)) {
      std::size_t c = 0;
      while (c < classes_.size() && classes_[c].intersects(g_.neighbors(v))) ++c;
      if (c == classes_.size()) {
        classes_.emplace_back(g_.size());
        class_max_.push_back(0.0);
      }
      classes_[c].set(v);
      class_max_[c] = std::max(class_max_[c], g_.weight(v));
    }
    double w = 0.0;
    for (double m : class_max_) w += m;
    return {w, classes_.size()};
  }

  bool prune(const VertexSet& cand, double weight) {
    const auto [extra_w, extra_n] = bound(cand);
    const double ub = weight + extra_w;
    const std::size_t ub_size = current_.size() + extra_n;
    if (ub < best_weight_ - eps_) return true;
    return ub <= best_weight_ + eps_ && ub_size <= best_.size();
  }

  // Re-check after branching on v: the remaining siblings are those after v.
  bool prune_after(const VertexSet& cand, std::size_t v, double weight) {
    VertexSet rest = cand;
    for (std::size_t i = cand.find_first(); i != npos && i <= v; i = cand.find_next(i)) rest.reset(i);
    if (rest.none()) return true;
    return prune(rest, weight);
  }

  void consider(double weight) {
    if (current_.empty()) return;
    if (!have_best_ || better_in_group(weight, current_, best_weight_, best_, eps_)) {
      best_ = current_;
      best_weight_ = weight;
      have_best_ = true;
    }
  }

  const WeightedGraph& g_;
  double eps_;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_;
  double best_weight_ = 0.0;
  bool have_best_ = false;
  std::vector<VertexSet> classes_;
  std::vector<double> class_max_;
};

// Grows `members` (with common neighbourhood `common`) to a maximal clique,
// preferring heavy vertices with many heavy neighbours among the remaining
// candidates.
void greedy_complete(const WeightedGraph& g, std::vector<std::size_t>& members, VertexSet common,
                     const VertexSet& banned) {
  common -= banned;
  while (common.any()) {
    std::size_t pick = npos;
    double pick_w = 0.0;
    std::size_t pick_deg = 0;
    VertexSet heavy = common;
    for (std::size_t v = common.find_first(); v != npos; v = common.find_next(v)) {
      if (!(g.weight(v) > 0.0)) heavy.reset(v);
    }
    if (heavy.none()) {
      // Only non-positive weights left: prefer the least negative.
      for (std::size_t v = common.find_first(); v != npos; v = common.find_next(v)) {
        if (pick == npos || g.weight(v) > pick_w) {
          pick = v;
          pick_w = g.weight(v);
        }
      }
    } else {
      for (std::size_t v = heavy.find_first(); v != npos; v = heavy.find_next(v)) {
        const std::size_t deg = (heavy & g.neighbors(v)).count();
        if (pick == npos || g.weight(v) > pick_w || (g.weight(v) == pick_w && deg > pick_deg)) {
          pick = v;
          pick_w = g.weight(v);
          pick_deg = deg;
        }
      }
    }
    members.push_back(pick);
    common &= g.neighbors(pick);
  }
  std::sort(members.begin(), members.end());
}

VertexSet common_of(const WeightedGraph& g, std::span<const std::size_t> members) {
  VertexSet common = g.full_set();
  for (std::size_t m : members) {
    common &= g.neighbors(m);
  }
  for (std::size_t m : members) common.reset(m);
  return common;
}

}  // namespace

bool is_clique(const WeightedGraph& g, std::span<const std::size_t> vertices) {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      if (vertices[i] == vertices[j] || !g.adjacent(vertices[i], vertices[j])) return false;
    }
  }
  return true;
}

bool is_maximal_clique(const WeightedGraph& g, std::span<const std::size_t> vertices) {
  if (!is_clique(g, vertices)) return false;
  if (vertices.empty()) return g.empty();
  return common_of(g, vertices).none();
}

bool is_clique(const RaIdncGraph& g, std::span<const std::size_t> vertices) {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      if (vertices[i] == vertices[j] || !g.adjacent(vertices[i], vertices[j])) return false;
    }
  }
  return true;
}

bool is_maximal_clique(const RaIdncGraph& g, std::span<const std::size_t> vertices) {
  if (!is_clique(g, vertices)) return false;
  if (vertices.empty()) return g.empty();
  return g.common_neighbors(vertices).empty();
}

bool ranks_before(const Clique& a, const Clique& b, double eps) {
  if (a.weight > b.weight + eps) return true;
  if (b.weight > a.weight + eps) return false;
  if (a.rate_index != b.rate_index) return a.rate_index < b.rate_index;
  if (a.size() != b.size()) return a.size() > b.size();
  return std::lexicographical_compare(a.vertices.begin(), a.vertices.end(), b.vertices.begin(),
                                      b.vertices.end());
}

Clique max_weight_clique_exact(const WeightedGraph& g, double eps) {
  return ExactSearch(g, eps).run();
}

Clique max_weight_clique_heuristic(const WeightedGraph& g, const SolverOptions& options) {
  Clique best;
  best.exact = false;
  if (g.empty()) return best;

  std::vector<std::size_t> order(g.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<std::size_t> degree(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) degree[i] = g.degree(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (g.weight(a) != g.weight(b)) return g.weight(a) > g.weight(b);
    return degree[a] > degree[b];
  });

  const VertexSet none = g.empty_set();
  bool have = false;
  auto offer = [&](std::vector<std::size_t> members) {
    const double w = sum_weights(g, members);
    if (!have || better_in_group(w, members, best.weight, best.vertices, options.tie_eps)) {
      best.vertices = std::move(members);
      best.weight = w;
      have = true;
    }
  };

  const std::size_t starts = std::min(order.size(), std::max<std::size_t>(options.greedy_starts, 1));
  for (std::size_t s = 0; s < starts; ++s) {
    std::vector<std::size_t> members{order[s]};
    greedy_complete(g, members, g.neighbors(order[s]), none);
    offer(std::move(members));
  }

  // Drop one member, forbid it, refill greedily.
  for (std::size_t round = 0; round < options.local_search_rounds; ++round) {
    bool improved = false;
    const std::vector<std::size_t> incumbent = best.vertices;
    for (std::size_t drop : incumbent) {
      std::vector<std::size_t> members;
      for (std::size_t m : incumbent) {
        if (m != drop) members.push_back(m);
      }
      VertexSet banned = g.empty_set();
      banned.set(drop);
      const VertexSet common = members.empty() ? g.full_set() : common_of(g, members);
      const double before = best.weight;
      const std::vector<std::size_t> before_ids = best.vertices;
      greedy_complete(g, members, common, banned);
      // The refill may stop short of maximality only because of the ban.
      if (!common_of(g, members).none()) continue;
      offer(std::move(members));
      if (best.weight != before || best.vertices != before_ids) improved = true;
    }
    if (!improved) break;
  }
  return best;
}

Clique max_weight_clique(const WeightedGraph& g, const SolverOptions& options) {
  if (g.size() <= options.exact_threshold) return max_weight_clique_exact(g, options.tie_eps);
  return max_weight_clique_heuristic(g, options);
}

namespace {

void require_equal_weights(std::span<const double> w, double eps) {
  for (double x : w) {
    if (std::abs(x - w.front()) > eps) {
      throw std::invalid_argument("max_clique_equal_weights: weights differ");
    }
  }
}

}  // namespace

Clique max_clique_equal_weights(const WeightedGraph& g, const SolverOptions& options) {
  if (g.empty()) return {};
  require_equal_weights(g.weights(), options.tie_eps);
  WeightedGraph unit = g;
  for (std::size_t i = 0; i < unit.size(); ++i) unit.set_weight(i, 1.0);
  Clique out = max_weight_clique(unit, options);
  out.weight = sum_weights(g, out.vertices);
  return out;
}

namespace {

template <typename SolveGroup>
Clique solve_by_rate(const RaIdncGraph& g, double eps, SolveGroup&& solve) {
  Clique best;
  bool have = false;
  bool all_exact = true;
  for (std::size_t ri = 0; ri < g.group_count(); ++ri) {
    const WeightedGraph& grp = g.group(ri);
    if (grp.empty()) continue;
    Clique local = solve(grp);
    all_exact = all_exact && local.exact;
    const std::size_t first = g.group_range(ri).first;
    for (auto& v : local.vertices) v += first;
    local.rate_index = ri;
    if (!have || ranks_before(local, best, eps)) {
      best = std::move(local);
      have = true;
    }
  }
  best.exact = all_exact;
  return best;
}

}  // namespace

Clique max_weight_clique(const RaIdncGraph& g, const SolverOptions& options) {
  return solve_by_rate(g, options.tie_eps,
                       [&](const WeightedGraph& grp) { return max_weight_clique(grp, options); });
}

Clique max_clique_equal_weights(const RaIdncGraph& g, const SolverOptions& options) {
  std::vector<double> all;
  for (std::size_t i = 0; i < g.size(); ++i) all.push_back(g.weight(i));
  if (!all.empty()) require_equal_weights(all, options.tie_eps);
  return solve_by_rate(g, options.tie_eps, [&](const WeightedGraph& grp) {
    return max_clique_equal_weights(grp, options);
  });
}

namespace {

void bron_kerbosch(const WeightedGraph& g, std::vector<std::size_t>& r, VertexSet p, VertexSet x,
                   const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (p.none() && x.none()) {
    std::vector<std::size_t> sorted = r;
    std::sort(sorted.begin(), sorted.end());
    visit(sorted);
    return;
  }
  // Pivot with the most neighbours in P.
  std::size_t pivot = npos;
  std::size_t pivot_deg = 0;
  const VertexSet px = p | x;
  for (std::size_t u = px.find_first(); u != npos; u = px.find_next(u)) {
    const std::size_t d = (p & g.neighbors(u)).count();
    if (pivot == npos || d > pivot_deg) {
      pivot = u;
      pivot_deg = d;
    }
  }
  const VertexSet branch = p - g.neighbors(pivot);
  for (std::size_t v = branch.find_first(); v != npos; v = branch.find_next(v)) {
    r.push_back(v);
    bron_kerbosch(g, r, p & g.neighbors(v), x & g.neighbors(v), visit);
    r.pop_back();
    p.reset(v);
    x.set(v);
  }
}

}  // namespace

void for_each_maximal_clique(const WeightedGraph& g,
                             const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (g.empty()) return;
  std::vector<std::size_t> r;
  bron_kerbosch(g, r, g.full_set(), g.empty_set(), visit);
}

void for_each_maximal_clique(const RaIdncGraph& g,
                             const std::function<void(const std::vector<std::size_t>&)>& visit) {
  for (std::size_t ri = 0; ri < g.group_count(); ++ri) {
    const std::size_t first = g.group_range(ri).first;
    for_each_maximal_clique(g.group(ri), [&](const std::vector<std::size_t>& local) {
      std::vector<std::size_t> global = local;
      for (auto& v : global) v += first;
      visit(global);
    });
  }
}

}  // namespace raidnc
