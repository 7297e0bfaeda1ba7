#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "raidnc/model.hpp"
#include "raidnc/schedulers.hpp"

namespace raidnc {

/// A small scheduling instance: side information, per-user statistics and a
/// capacity snapshot drawn from a pool of at most `max_rates` distinct rates.
struct Instance {
  NetworkState state;
  std::vector<double> capacities;
};

struct InstanceShape {
  std::size_t max_users = 4;
  std::size_t max_messages = 4;
  std::size_t max_rates = 3;
  /// Rates are integers in [min_rate, max_rate]; with N = 1 and rates >= 1
  /// every decisive weight is non-negative.
  int min_rate = 1;
  int max_rate = 8;
  double msg_size_bits = 1.0;
};

/// At least one user still wants something. Statistics are randomized so
/// that decisive sets vary.
Instance random_instance(std::mt19937_64& rng, const InstanceShape& shape = {});

struct SuiteReport {
  std::size_t instances = 0;
  std::size_t violations = 0;
  std::vector<std::string> details;  // first few only
  double seconds = 0.0;
  bool ok() const { return violations == 0; }
};

/// select_ra_idnc objective against brute_force_best, |diff| <= tol.
SuiteReport oracle_equivalence_suite(std::size_t instances, std::uint64_t seed,
                                     double tol = 1e-9);

struct BijectionReport {
  std::size_t instances = 0;
  std::size_t maximal_cliques = 0;
  std::size_t feasible_transmissions = 0;
  /// A maximal clique whose induced transmission has a different decoder set.
  std::size_t forward_violations = 0;
  /// A feasible (combo, rate) whose decoder vertex set is not found exactly
  /// once among the maximal cliques.
  std::size_t converse_violations = 0;
  /// Same, restricted to decoder vertex sets that are themselves maximal
  /// cliques; non-maximal ones must not be listed.
  std::size_t maximal_converse_violations = 0;
  std::vector<std::string> details;
  double seconds = 0.0;
  bool ok() const { return forward_violations == 0 && converse_violations == 0; }
};

BijectionReport bijection_suite(std::size_t instances, std::uint64_t seed);

}  // namespace raidnc
