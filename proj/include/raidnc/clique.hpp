#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "raidnc/graph.hpp"
#include "raidnc/ra_graph.hpp"

namespace raidnc {

struct Clique {
  /// Sorted vertex ids.
  std::vector<std::size_t> vertices;
  double weight = 0.0;
  /// False when the heuristic produced it.
  bool exact = true;
  /// Rate group for RA-IDNC graphs; 0 otherwise.
  std::size_t rate_index = 0;

  bool empty() const { return vertices.empty(); }
  std::size_t size() const { return vertices.size(); }
};

struct SolverOptions {
  /// Rate groups (or plain graphs) up to this many vertices are solved
  /// exactly.
  std::size_t exact_threshold = 64;
  /// Weights closer than this are tied.
  double tie_eps = 1e-9;
  /// Greedy restarts of the heuristic.
  std::size_t greedy_starts = 32;
  /// Drop-and-refill passes of the heuristic's local search.
  std::size_t local_search_rounds = 4;
};

bool is_clique(const WeightedGraph& g, std::span<const std::size_t> vertices);
bool is_maximal_clique(const WeightedGraph& g, std::span<const std::size_t> vertices);
bool is_clique(const RaIdncGraph& g, std::span<const std::size_t> vertices);
bool is_maximal_clique(const RaIdncGraph& g, std::span<const std::size_t> vertices);

/// Deterministic preference order among maximal cliques: larger weight
/// (beyond `eps`), then higher rate (lower rate_index), then more vertices,
/// then lexicographically smaller sorted id list.
bool ranks_before(const Clique& a, const Clique& b, double eps);

/// Maximum-weight maximal clique. Exact branch and bound when the graph has
/// at most `exact_threshold` vertices, otherwise greedy with local search.
/// The empty graph yields an empty clique of weight 0.
Clique max_weight_clique(const WeightedGraph& g, const SolverOptions& options = {});
Clique max_weight_clique_exact(const WeightedGraph& g, double eps = 1e-9);
Clique max_weight_clique_heuristic(const WeightedGraph& g, const SolverOptions& options = {});

/// Maximum-cardinality maximal clique, same tie-breaking. Throws
/// std::invalid_argument unless all weights are equal; the reported weight
/// is the sum of the (common) vertex weights.
Clique max_clique_equal_weights(const WeightedGraph& g, const SolverOptions& options = {});

/// Solves each rate group independently and keeps the best by
/// ranks_before. Vertex ids in the result are global.
Clique max_weight_clique(const RaIdncGraph& g, const SolverOptions& options = {});
Clique max_clique_equal_weights(const RaIdncGraph& g, const SolverOptions& options = {});

/// Bron-Kerbosch with pivoting; the callback receives sorted ids. Visits
/// nothing on the empty graph.
void for_each_maximal_clique(const WeightedGraph& g,
                             const std::function<void(const std::vector<std::size_t>&)>& visit);
void for_each_maximal_clique(const RaIdncGraph& g,
                             const std::function<void(const std::vector<std::size_t>&)>& visit);

}  // namespace raidnc
