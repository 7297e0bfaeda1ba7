#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace raidnc {

using VertexSet = boost::dynamic_bitset<>;

/// Undirected vertex-weighted graph with bitset adjacency rows.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }

  double weight(std::size_t v) const { return weights_[v]; }
  std::span<const double> weights() const { return weights_; }
  void set_weight(std::size_t v, double w) { weights_[v] = w; }

  /// Self-loops are rejected.
  void add_edge(std::size_t a, std::size_t b);
  bool adjacent(std::size_t a, std::size_t b) const { return adj_[a].test(b); }
  const VertexSet& neighbors(std::size_t v) const { return adj_[v]; }
  std::size_t degree(std::size_t v) const { return adj_[v].count(); }

  VertexSet empty_set() const { return VertexSet(size()); }
  VertexSet full_set() const { return VertexSet(size()).set(); }

  /// Subgraph induced by `vertices` (in the given order).
  WeightedGraph induced(std::span<const std::size_t> vertices) const;

 private:
  std::vector<double> weights_;
  std::vector<VertexSet> adj_;
};

}  // namespace raidnc
