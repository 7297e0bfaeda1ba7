#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "raidnc/channel.hpp"
#include "raidnc/clique.hpp"
#include "raidnc/metrics.hpp"
#include "raidnc/model.hpp"

namespace raidnc {

enum class SchedulerKind { ra_idnc, ra_idnc_multilayer, classical_idnc, broadcast, unicast, oracle };

SchedulerKind parse_scheduler(std::string_view name);
const char* to_string(SchedulerKind kind);
std::vector<SchedulerKind> all_schedulers();

/// What stands in for the harmonic-mean rate before a user's first
/// instantly decodable reception.
enum class RateBootstrap { capacity, mean_candidate };

RateBootstrap parse_bootstrap(std::string_view name);
const char* to_string(RateBootstrap b);

struct SchedulerContext {
  ErasureModel erasure;
  SolverOptions solver;
  RateBootstrap bootstrap = RateBootstrap::capacity;
  /// Multi-layer: among equally good first-layer cliques, keep the one whose
  /// layered extension is best. Off reproduces a plain first-found choice.
  bool multilayer_tie_lookahead = true;
  std::size_t multilayer_max_ties = 64;
  /// Enumeration guard for brute_force_best.
  std::size_t oracle_max_messages = 12;
};

struct Decision {
  Transmission tx;
  /// Users for which tx is instantly decodable, ascending.
  std::vector<UserId> targets;
  /// Anticipated-completion objective (clique weight for the graph-based
  /// selectors; first-layer weight for multi-layer).
  double objective = 0.0;
  /// Graph layers merged by the multi-layer selector.
  std::size_t layers = 0;
  bool exact = true;
  bool uncoded_round = false;
};

/// Raised by a selector when every Wants set is empty.
class NothingToSend : public std::logic_error {
 public:
  NothingToSend() : std::logic_error("all users are complete") {}
};

CompletionOutlook make_outlook(const NetworkState& state, std::span<const double> capacities,
                               RateBootstrap bootstrap = RateBootstrap::capacity);

/// Users for which (combo, rate) is instantly decodable, straight from the
/// side information.
std::vector<UserId> decoder_set(const SideInfo& side_info, MessageSet combo, double rate,
                                std::span<const double> capacities);

/// Anticipated-completion objective of (combo, rate): sum over decisive
/// decoders of ln(R / (eps_u N)), with the perfect-estimation form ln(R/N).
double transmission_objective(const NetworkState& state, std::span<const double> capacities,
                              const CompletionOutlook& outlook, const Transmission& tx,
                              const ErasureModel& erasure);

Decision select_ra_idnc(const NetworkState& state, std::span<const double> capacities,
                        const SchedulerContext& ctx = {});
Decision select_multilayer(const NetworkState& state, std::span<const double> capacities,
                           const SchedulerContext& ctx = {});
Decision select_broadcast(const NetworkState& state, std::span<const double> capacities,
                          const SchedulerContext& ctx = {});
Decision select_unicast(const NetworkState& state, std::span<const double> capacities,
                        const SchedulerContext& ctx = {});
Decision select_classical_idnc(const NetworkState& state, std::span<const double> capacities,
                               const SchedulerContext& ctx = {});
/// Exhaustive search over every non-empty combination and candidate rate.
/// Throws std::invalid_argument above ctx.oracle_max_messages messages.
Decision brute_force_best(const NetworkState& state, std::span<const double> capacities,
                          const SchedulerContext& ctx = {});

/// Dispatches to the named selector, running the uncoded first round first
/// when the state still has it pending.
Decision select(SchedulerKind kind, const NetworkState& state, std::span<const double> capacities,
                const SchedulerContext& ctx = {});

}  // namespace raidnc
