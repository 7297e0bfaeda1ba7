#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "raidnc/channel.hpp"
#include "raidnc/graph.hpp"
#include "raidnc/metrics.hpp"
#include "raidnc/model.hpp"

namespace raidnc {

/// v_{u,f,r}: user u could decode wanted message f if sent at rate r.
struct Vertex {
  UserId user = 0;
  MessageId message = 0;
  std::size_t rate_index = 0;  // into RaIdncGraph::rates()
  double rate = 0.0;
};

/// Rate-aware IDNC graph.
///
/// Two vertices are adjacent iff they share a rate (C1) and either carry the
/// same message or each user already has the other's message (C2). Since C1
/// splits the graph into disconnected rate groups, vertices are stored
/// grouped by rate in descending order, then by user, then by message; each
/// group keeps its own adjacency. Vertex ids follow that order, so within a
/// group a lexicographic comparison of ids is a comparison of (user,
/// message) lists.
class RaIdncGraph {
 public:
  RaIdncGraph() = default;

  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  const std::vector<double>& rates() const { return rates_; }
  std::span<const Vertex> vertices() const { return vertices_; }
  const Vertex& vertex(std::size_t id) const { return vertices_[id]; }

  double weight(std::size_t id) const;
  void set_weight(std::size_t id, double w);

  bool adjacent(std::size_t a, std::size_t b) const;

  std::size_t group_count() const { return groups_.size(); }
  /// [first, last) vertex ids of a rate group.
  std::pair<std::size_t, std::size_t> group_range(std::size_t rate_index) const {
    return {group_begin_[rate_index], group_begin_[rate_index + 1]};
  }
  /// Group subgraph; local id = global id - group_range(ri).first.
  const WeightedGraph& group(std::size_t rate_index) const { return groups_[rate_index]; }

  std::optional<std::size_t> find(UserId u, MessageId f, std::size_t rate_index) const;

  /// Vertex id in the graph this one was induced from (identity for graphs
  /// built from side information).
  std::size_t origin(std::size_t id) const { return origin_[id]; }

  /// Subgraph induced by `ids`, which must be sorted ascending.
  RaIdncGraph induced(std::span<const std::size_t> ids) const;

  /// Global ids adjacent to every member of `clique` (members excluded).
  std::vector<std::size_t> common_neighbors(std::span<const std::size_t> clique) const;

 private:
  friend class RaIdncGraphBuilder;

  std::vector<double> rates_;
  std::vector<Vertex> vertices_;
  std::vector<std::size_t> group_begin_{0};
  std::vector<WeightedGraph> groups_;
  std::vector<std::size_t> origin_;
};

/// Deduplicated capacities, sorted descending.
std::vector<double> candidate_rates(std::span<const double> capacities);

/// Candidates not exceeding `capacity`, descending.
std::vector<double> achievable_rates(std::span<const double> pool, double capacity);

using WeightFn = std::function<double(const Vertex&)>;

/// Full RA-IDNC graph for the given side information and capacities. When
/// `include_users` is given, only flagged users contribute vertices.
/// Weights default to 0 when `weights` is empty.
RaIdncGraph build_graph(const SideInfo& side_info, std::span<const double> capacities,
                        const WeightFn& weights = {},
                        const std::vector<bool>* include_users = nullptr);

/// Classical (rate-free) IDNC graph: one vertex per (u, f in Wants_u),
/// edges by C2 only. All vertices sit in a single group whose rate is 0.
RaIdncGraph build_idnc_graph(const SideInfo& side_info, const WeightFn& weights = {});

/// ln(rate / (erasure_prob * N)). Throws std::domain_error when the erasure
/// probability is not positive.
double decisive_weight(double rate, double erasure_prob, double msg_size_bits);

/// Vertex weight for the anticipated-completion objective: zero unless the
/// user is decisive at the vertex rate; then ln(r/N) under perfect
/// estimation, else decisive_weight(r, eps_u(r, R_u), N).
double vertex_weight(const Vertex& v, const CompletionOutlook& outlook,
                     const ErasureModel& erasure, double user_capacity);

WeightFn objective_weights(const CompletionOutlook& outlook, const ErasureModel& erasure,
                           std::span<const double> capacities);

/// Vertices of `graph` at the clique's rate whose users lie in critical
/// layer `layer`, and which are adjacent to every clique member. All
/// weights are set to ln(R/N). Throws std::invalid_argument when `clique`
/// is not a non-empty clique of `graph`.
RaIdncGraph build_layer_graph(const RaIdncGraph& graph, std::span<const std::size_t> clique,
                              std::size_t layer, const CompletionOutlook& outlook);

/// Line-based dump:
///   rates <r0> <r1> ...
///   vertex <id> <user> <message> <rate> <weight>
///   edge <a> <b>          (a < b)
/// Users are printed 1-based.
void write_graph(std::ostream& out, const RaIdncGraph& graph);

}  // namespace raidnc
