#include "raidnc/graph.hpp"

#include <stdexcept>

namespace raidnc {

WeightedGraph::WeightedGraph(std::vector<double> weights)
    : weights_(std::move(weights)), adj_(weights_.size(), VertexSet(weights_.size())) {}

void WeightedGraph::add_edge(std::size_t a, std::size_t b) {
  if (a >= size() || b >= size()) throw std::out_of_range("edge endpoint out of range");
  if (a == b) throw std::invalid_argument("self-loops are not allowed");
  adj_[a].set(b);
  adj_[b].set(a);
}

WeightedGraph WeightedGraph::induced(std::span<const std::size_t> vertices) const {
  std::vector<double> w;
  w.reserve(vertices.size());
  for (std::size_t v : vertices) w.push_back(weights_.at(v));
  WeightedGraph out(std::move(w));
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      if (adjacent(vertices[i], vertices[j])) {
        out.adj_[i].set(j);
        out.adj_[j].set(i);
      }
    }
  }
  return out;
}

}  // namespace raidnc
