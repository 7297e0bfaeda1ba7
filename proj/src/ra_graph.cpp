#include "raidnc/ra_graph.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace raidnc {

class RaIdncGraphBuilder {
 public:
  explicit RaIdncGraphBuilder(std::vector<double> rates) { g_.rates_ = std::move(rates); }

  /// Appends one rate group; `members` must follow (user, message) order.
  template <typename AdjacentFn>
  void add_group(const std::vector<Vertex>& members, const WeightFn& weights,
                 AdjacentFn&& adjacent) {
    std::vector<double> w(members.size(), 0.0);
    if (weights) {
      for (std::size_t i = 0; i < members.size(); ++i) w[i] = weights(members[i]);
    }
    WeightedGraph local(std::move(w));
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        if (adjacent(members[i], members[j])) local.add_edge(i, j);
      }
    }
    for (const Vertex& v : members) {
      g_.origin_.push_back(g_.vertices_.size());
      g_.vertices_.push_back(v);
    }
    g_.groups_.push_back(std::move(local));
    g_.group_begin_.push_back(g_.vertices_.size());
  }

  RaIdncGraph finish() && { return std::move(g_); }

  static RaIdncGraph induced(const RaIdncGraph& src, std::span<const std::size_t> ids) {
    if (!std::is_sorted(ids.begin(), ids.end()) ||
        std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
      throw std::invalid_argument("induced: ids must be strictly ascending");
    }
    RaIdncGraph out;
    out.rates_ = src.rates_;
    std::size_t pos = 0;
    for (std::size_t ri = 0; ri < src.group_count(); ++ri) {
      const auto [first, last] = src.group_range(ri);
      std::vector<std::size_t> local;
      while (pos < ids.size() && ids[pos] < last) {
        if (ids[pos] < first) throw std::out_of_range("induced: id out of range");
        local.push_back(ids[pos] - first);
        ++pos;
      }
      for (std::size_t l : local) {
        out.vertices_.push_back(src.vertices_[first + l]);
        out.origin_.push_back(src.origin_[first + l]);
      }
      out.groups_.push_back(src.groups_[ri].induced(local));
      out.group_begin_.push_back(out.vertices_.size());
    }
    if (pos != ids.size()) throw std::out_of_range("induced: id out of range");
    return out;
  }

  static std::pair<std::size_t, std::size_t> locate(const RaIdncGraph& g, std::size_t id) {
    if (id >= g.size()) throw std::out_of_range("vertex id out of range");
    const std::size_t ri = g.vertices_[id].rate_index;
    return {ri, id - g.group_begin_[ri]};
  }

 private:
  RaIdncGraph g_;
};

double RaIdncGraph::weight(std::size_t id) const {
  const auto [ri, local] = RaIdncGraphBuilder::locate(*this, id);
  return groups_[ri].weight(local);
}

void RaIdncGraph::set_weight(std::size_t id, double w) {
  const auto [ri, local] = RaIdncGraphBuilder::locate(*this, id);
  groups_[ri].set_weight(local, w);
}

bool RaIdncGraph::adjacent(std::size_t a, std::size_t b) const {
  const auto [ra, la] = RaIdncGraphBuilder::locate(*this, a);
  const auto [rb, lb] = RaIdncGraphBuilder::locate(*this, b);
  return ra == rb && groups_[ra].adjacent(la, lb);
}

std::optional<std::size_t> RaIdncGraph::find(UserId u, MessageId f, std::size_t rate_index) const {
  if (rate_index >= groups_.size()) return std::nullopt;
  const auto first = vertices_.begin() + static_cast<std::ptrdiff_t>(group_begin_[rate_index]);
  const auto last = vertices_.begin() + static_cast<std::ptrdiff_t>(group_begin_[rate_index + 1]);
  const auto it = std::lower_bound(first, last, std::pair{u, f}, [](const Vertex& v, const auto& key) {
    return std::pair{v.user, v.message} < key;
  });
  if (it == last || it->user != u || it->message != f) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

RaIdncGraph RaIdncGraph::induced(std::span<const std::size_t> ids) const {
  return RaIdncGraphBuilder::induced(*this, ids);
}

std::vector<std::size_t> RaIdncGraph::common_neighbors(std::span<const std::size_t> clique) const {
  std::vector<std::size_t> out;
  if (clique.empty()) {
    out.resize(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = i;
    return out;
  }
  const auto [ri, first_local] = RaIdncGraphBuilder::locate(*this, clique.front());
  const WeightedGraph& grp = groups_[ri];
  VertexSet common = grp.neighbors(first_local);
  for (std::size_t id : clique.subspan(1)) {
    const auto [r, local] = RaIdncGraphBuilder::locate(*this, id);
    if (r != ri) return out;
    common &= grp.neighbors(local);
  }
  for (auto i = common.find_first(); i != VertexSet::npos; i = common.find_next(i)) {
    out.push_back(group_begin_[ri] + i);
  }
  return out;
}

std::vector<double> candidate_rates(std::span<const double> capacities) {
  std::vector<double> pool(capacities.begin(), capacities.end());
  std::sort(pool.begin(), pool.end(), std::greater<>());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  return pool;
}

std::vector<double> achievable_rates(std::span<const double> pool, double capacity) {
  std::vector<double> out;
  for (double r : pool) {
    if (r <= capacity) out.push_back(r);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

namespace {

bool c2(const SideInfo& si, const Vertex& a, const Vertex& b) {
  return a.message == b.message ||
         (si[b.user].has.contains(a.message) && si[a.user].has.contains(b.message));
}

}  // namespace

RaIdncGraph build_graph(const SideInfo& side_info, std::span<const double> capacities,
                        const WeightFn& weights, const std::vector<bool>* include_users) {
  if (capacities.size() != side_info.users()) {
    throw std::invalid_argument("build_graph: one capacity per user required");
  }
  if (include_users != nullptr && include_users->size() != side_info.users()) {
    throw std::invalid_argument("build_graph: include mask has the wrong size");
  }
  std::vector<double> pool = candidate_rates(capacities);
  RaIdncGraphBuilder builder(pool);
  std::vector<Vertex> members;
  for (std::size_t ri = 0; ri < pool.size(); ++ri) {
    members.clear();
    for (UserId u = 0; u < side_info.users(); ++u) {
      if (include_users != nullptr && !(*include_users)[u]) continue;
      if (pool[ri] > capacities[u]) continue;
      for (MessageId f : side_info[u].wants.to_vector()) {
        members.push_back(Vertex{u, f, ri, pool[ri]});
      }
    }
    builder.add_group(members, weights,
                      [&](const Vertex& a, const Vertex& b) { return c2(side_info, a, b); });
  }
  return std::move(builder).finish();
}

RaIdncGraph build_idnc_graph(const SideInfo& side_info, const WeightFn& weights) {
  RaIdncGraphBuilder builder({0.0});
  std::vector<Vertex> members;
  for (UserId u = 0; u < side_info.users(); ++u) {
    for (MessageId f : side_info[u].wants.to_vector()) members.push_back(Vertex{u, f, 0, 0.0});
  }
  builder.add_group(members, weights,
                    [&](const Vertex& a, const Vertex& b) { return c2(side_info, a, b); });
  return std::move(builder).finish();
}

double decisive_weight(double rate, double erasure_prob, double msg_size_bits) {
  if (!(erasure_prob > 0.0)) {
    throw std::domain_error("erasure probability must be positive outside perfect estimation");
  }
  return std::log(rate / (erasure_prob * msg_size_bits));
}

double vertex_weight(const Vertex& v, const CompletionOutlook& outlook,
                     const ErasureModel& erasure, double user_capacity) {
  if (!(outlook.msg_size_bits() > 0.0)) throw std::invalid_argument("message size must be > 0");
  if (!outlook.decisive(v.user, v.rate)) return 0.0;
  if (erasure.perfect_estimation()) return std::log(v.rate / outlook.msg_size_bits());
  return decisive_weight(v.rate, erasure_probability(erasure, v.rate, user_capacity),
                         outlook.msg_size_bits());
}

WeightFn objective_weights(const CompletionOutlook& outlook, const ErasureModel& erasure,
                           std::span<const double> capacities) {
  return [&outlook, erasure, capacities](const Vertex& v) {
    return vertex_weight(v, outlook, erasure, capacities[v.user]);
  };
}

RaIdncGraph build_layer_graph(const RaIdncGraph& graph, std::span<const std::size_t> clique,
                              std::size_t layer, const CompletionOutlook& outlook) {
  if (clique.empty()) throw std::invalid_argument("layer graph needs a non-empty clique");
  for (std::size_t i = 0; i < clique.size(); ++i) {
    for (std::size_t j = i + 1; j < clique.size(); ++j) {
      if (!graph.adjacent(clique[i], clique[j])) {
        throw std::invalid_argument("layer graph: chosen vertex set is not a clique");
      }
    }
  }
  const Vertex& anchor = graph.vertex(clique.front());
  std::vector<std::size_t> keep;
  for (std::size_t id : graph.common_neighbors(clique)) {
    const Vertex& v = graph.vertex(id);
    if (v.rate_index == anchor.rate_index && outlook.layer(v.user, v.rate) == layer) {
      keep.push_back(id);
    }
  }
  RaIdncGraph out = graph.induced(keep);
  const double w = std::log(anchor.rate / outlook.msg_size_bits());
  for (std::size_t i = 0; i < out.size(); ++i) out.set_weight(i, w);
  return out;
}

void write_graph(std::ostream& out, const RaIdncGraph& graph) {
  const auto old_precision = out.precision(17);
  out << "rates";
  for (double r : graph.rates()) out << ' ' << r;
  out << '\n';
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const Vertex& v = graph.vertex(i);
    out << "vertex " << i << ' ' << v.user + 1 << ' ' << v.message << ' ' << v.rate << ' '
        << graph.weight(i) << '\n';
  }
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (std::size_t j = i + 1; j < graph.size(); ++j) {
      if (graph.adjacent(i, j)) out << "edge " << i << ' ' << j << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace raidnc
