#include "raidnc/schedulers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "raidnc/ra_graph.hpp"

namespace raidnc {

SchedulerKind parse_scheduler(std::string_view name) {
  for (SchedulerKind k : all_schedulers()) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument(
      "unknown scheduler '" + std::string(name) +
      "' (ra_idnc|ra_idnc_multilayer|classical_idnc|broadcast|unicast|oracle)");
}

const char* to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::ra_idnc: return "ra_idnc";
    case SchedulerKind::ra_idnc_multilayer: return "ra_idnc_multilayer";
    case SchedulerKind::classical_idnc: return "classical_idnc";
    case SchedulerKind::broadcast: return "broadcast";
    case SchedulerKind::unicast: return "unicast";
    case SchedulerKind::oracle: return "oracle";
  }
  return "?";
}

std::vector<SchedulerKind> all_schedulers() {
  return {SchedulerKind::ra_idnc,   SchedulerKind::ra_idnc_multilayer, SchedulerKind::classical_idnc,
          SchedulerKind::broadcast, SchedulerKind::unicast,            SchedulerKind::oracle};
}

RateBootstrap parse_bootstrap(std::string_view name) {
  if (name == "capacity") return RateBootstrap::capacity;
  if (name == "mean_candidate") return RateBootstrap::mean_candidate;
  throw std::invalid_argument("unknown rate bootstrap '" + std::string(name) +
                              "' (capacity|mean_candidate)");
}

const char* to_string(RateBootstrap b) {
  return b == RateBootstrap::capacity ? "capacity" : "mean_candidate";
}

CompletionOutlook make_outlook(const NetworkState& state, std::span<const double> capacities,
                               RateBootstrap bootstrap) {
  if (capacities.size() != state.users()) {
    throw std::invalid_argument("one capacity per user required");
  }
  double mean_candidate = 0.0;
  if (bootstrap == RateBootstrap::mean_candidate) {
    const auto pool = candidate_rates(capacities);
    mean_candidate = std::accumulate(pool.begin(), pool.end(), 0.0) / static_cast<double>(pool.size());
  }
  std::vector<double> anticipated(state.users());
  for (UserId u = 0; u < state.users(); ++u) {
    const UserStats& st = state.stats(u);
    const double boot = bootstrap == RateBootstrap::capacity ? capacities[u] : mean_candidate;
    anticipated[u] = st.erasure_avg >= 1.0
                         ? std::numeric_limits<double>::infinity()
                         : anticipated_completion(st, state.msg_size_bits(), state.messages(), boot);
  }
  return CompletionOutlook(std::move(anticipated), state.side_info().wanting(),
                           state.msg_size_bits());
}

std::vector<UserId> decoder_set(const SideInfo& side_info, MessageSet combo, double rate,
                                std::span<const double> capacities) {
  std::vector<UserId> out;
  for (UserId u = 0; u < side_info.users(); ++u) {
    if (rate <= capacities[u] && decoded_message(side_info[u], combo)) out.push_back(u);
  }
  return out;
}

namespace {

double user_weight(const CompletionOutlook& outlook, UserId u, double rate, double capacity,
                   const ErasureModel& erasure) {
  Vertex v{u, 0, 0, rate};
  return vertex_weight(v, outlook, erasure, capacity);
}

void require_work(const NetworkState& state) {
  if (state.side_info().all_complete()) throw NothingToSend();
}

Decision from_clique(const RaIdncGraph& g, const Clique& c, std::span<const double> capacities) {
  Decision d;
  for (std::size_t id : c.vertices) {
    const Vertex& v = g.vertex(id);
    d.tx.combo.insert(v.message);
    d.targets.push_back(v.user);
  }
  const Vertex& first = g.vertex(c.vertices.front());
  d.tx.rate = first.rate;
  (void)capacities;
  std::sort(d.targets.begin(), d.targets.end());
  d.objective = c.weight;
  d.exact = c.exact;
  d.layers = 1;
  return d;
}

}  // namespace

double transmission_objective(const NetworkState& state, std::span<const double> capacities,
                              const CompletionOutlook& outlook, const Transmission& tx,
                              const ErasureModel& erasure) {
  double total = 0.0;
  for (UserId u : decoder_set(state.side_info(), tx.combo, tx.rate, capacities)) {
    total += user_weight(outlook, u, tx.rate, capacities[u], erasure);
  }
  return total;
}

Decision select_ra_idnc(const NetworkState& state, std::span<const double> capacities,
                        const SchedulerContext& ctx) {
  require_work(state);
  const CompletionOutlook outlook = make_outlook(state, capacities, ctx.bootstrap);
  const RaIdncGraph g = build_graph(state.side_info(), capacities,
                                    objective_weights(outlook, ctx.erasure, capacities));
  return from_clique(g, max_weight_clique(g, ctx.solver), capacities);
}

namespace {

struct Extension {
  std::vector<std::size_t> clique;  // ids in the full graph
  std::size_t layers = 1;
  std::map<std::size_t, std::size_t> users_per_layer;
  bool exact = true;
};

// Algorithm 1 after the first layer: repeatedly add the maximum clique of
// the lowest critical layer still adjacent to everything chosen so far.
Extension extend_by_layers(const RaIdncGraph& full, std::vector<std::size_t> clique,
                           const CompletionOutlook& outlook, const SolverOptions& solver) {
  Extension ext;
  const Vertex anchor = full.vertex(clique.front());
  for (;;) {
    const std::vector<std::size_t> cand = full.common_neighbors(clique);
    if (cand.empty()) break;
    std::size_t next_layer = std::numeric_limits<std::size_t>::max();
    for (std::size_t id : cand) {
      const Vertex& v = full.vertex(id);
      next_layer = std::min(next_layer, outlook.layer(v.user, anchor.rate));
    }
    const RaIdncGraph layer_graph = build_layer_graph(full, clique, next_layer, outlook);
    const Clique mk = max_clique_equal_weights(layer_graph, solver);
    ext.exact = ext.exact && mk.exact;
    for (std::size_t id : mk.vertices) clique.push_back(layer_graph.origin(id));
    std::sort(clique.begin(), clique.end());
    ++ext.layers;
  }
  for (std::size_t id : clique) {
    ++ext.users_per_layer[outlook.layer(full.vertex(id).user, anchor.rate)];
  }
  ext.clique = std::move(clique);
  return ext;
}

// More users in lower layers first, then more users overall.
bool better_extension(const Extension& a, const Extension& b) {
  auto ia = a.users_per_layer.begin();
  auto ib = b.users_per_layer.begin();
  while (ia != a.users_per_layer.end() && ib != b.users_per_layer.end()) {
    if (ia->first != ib->first) return ia->first < ib->first;
    if (ia->second != ib->second) return ia->second > ib->second;
    ++ia;
    ++ib;
  }
  if (ia != a.users_per_layer.end()) return true;
  return false;
}

}  // namespace

Decision select_multilayer(const NetworkState& state, std::span<const double> capacities,
                           const SchedulerContext& ctx) {
  require_work(state);
  const CompletionOutlook outlook = make_outlook(state, capacities, ctx.bootstrap);
  const WeightFn weights = objective_weights(outlook, ctx.erasure, capacities);
  const RaIdncGraph full = build_graph(state.side_info(), capacities, weights);

  std::vector<bool> first_layer(state.users(), false);
  for (UserId u = 0; u < state.users(); ++u) {
    for (double r : full.rates()) {
      if (r <= capacities[u] && outlook.layer(u, r) == 1) first_layer[u] = true;
    }
  }
  const RaIdncGraph g1 = build_graph(state.side_info(), capacities, weights, &first_layer);
  const Clique m1 = max_weight_clique(g1, ctx.solver);

  // Optimal first-layer cliques to try.
  std::vector<std::vector<std::size_t>> starts{m1.vertices};
  if (ctx.multilayer_tie_lookahead && m1.exact && !m1.empty()) {
    const WeightedGraph& grp_check = g1.group(m1.rate_index);
    (void)grp_check;
    for (std::size_t ri = 0; ri < g1.group_count(); ++ri) {
      if (g1.group(ri).size() > ctx.solver.exact_threshold) continue;
      const std::size_t first = g1.group_range(ri).first;
      bool stop = false;
      for_each_maximal_clique(g1.group(ri), [&](const std::vector<std::size_t>& local) {
        if (stop) return;
        double w = 0.0;
        for (std::size_t l : local) w += g1.group(ri).weight(l);
        if (std::abs(w - m1.weight) > ctx.solver.tie_eps) return;
        std::vector<std::size_t> ids;
        for (std::size_t l : local) ids.push_back(first + l);
        if (ids != m1.vertices) starts.push_back(std::move(ids));
        if (starts.size() >= ctx.multilayer_max_ties) stop = true;
      });
    }
  }

  std::optional<Extension> best;
  for (const auto& start : starts) {
    std::vector<std::size_t> mapped;
    for (std::size_t id : start) {
      const Vertex& v = g1.vertex(id);
      mapped.push_back(*full.find(v.user, v.message, v.rate_index));
    }
    Extension ext = extend_by_layers(full, std::move(mapped), outlook, ctx.solver);
    if (!best || better_extension(ext, *best)) best = std::move(ext);
  }

  Clique chosen;
  chosen.vertices = best->clique;
  chosen.weight = m1.weight;
  chosen.exact = m1.exact && best->exact;
  Decision d = from_clique(full, chosen, capacities);
  d.layers = best->layers;
  return d;
}

Decision select_broadcast(const NetworkState& state, std::span<const double> capacities,
                          const SchedulerContext& ctx) {
  require_work(state);
  (void)ctx;
  const SideInfo& si = state.side_info();
  MessageSet wanted;
  double rate = std::numeric_limits<double>::infinity();
  for (UserId u = 0; u < si.users(); ++u) {
    if (si.complete(u)) continue;
    wanted = wanted | si[u].wants;
    rate = std::min(rate, capacities[u]);
  }
  Decision d;
  d.tx = {MessageSet{wanted.first()}, rate};
  d.targets = decoder_set(si, d.tx.combo, rate, capacities);
  return d;
}

Decision select_unicast(const NetworkState& state, std::span<const double> capacities,
                        const SchedulerContext& ctx) {
  require_work(state);
  (void)ctx;
  const SideInfo& si = state.side_info();
  std::optional<UserId> best;
  for (UserId u = 0; u < si.users(); ++u) {
    if (si.complete(u)) continue;
    if (!best || capacities[u] > capacities[*best]) best = u;
  }
  Decision d;
  d.tx = {MessageSet{si[*best].wants.first()}, capacities[*best]};
  d.targets = decoder_set(si, d.tx.combo, d.tx.rate, capacities);
  return d;
}

Decision select_classical_idnc(const NetworkState& state, std::span<const double> capacities,
                               const SchedulerContext& ctx) {
  require_work(state);
  const SideInfo& si = state.side_info();
  double nominal = std::numeric_limits<double>::infinity();
  for (UserId u = 0; u < si.users(); ++u) {
    if (!si.complete(u)) nominal = std::min(nominal, capacities[u]);
  }
  const CompletionOutlook outlook = make_outlook(state, capacities, ctx.bootstrap);
  const RaIdncGraph g = build_idnc_graph(si, [&](const Vertex& v) {
    return outlook.decisive(v.user, nominal) ? 1.0 : 0.0;
  });
  const Clique c = max_weight_clique(g, ctx.solver);
  Decision d;
  double rate = std::numeric_limits<double>::infinity();
  for (std::size_t id : c.vertices) {
    const Vertex& v = g.vertex(id);
    d.tx.combo.insert(v.message);
    rate = std::min(rate, capacities[v.user]);
  }
  d.tx.rate = rate;
  d.targets = decoder_set(si, d.tx.combo, rate, capacities);
  d.objective = c.weight;
  d.exact = c.exact;
  d.layers = 1;
  return d;
}

Decision brute_force_best(const NetworkState& state, std::span<const double> capacities,
                          const SchedulerContext& ctx) {
  require_work(state);
  const SideInfo& si = state.side_info();
  const std::size_t f_count = si.messages();
  if (f_count > ctx.oracle_max_messages) {
    throw std::invalid_argument("brute_force_best: " + std::to_string(f_count) +
                                " messages exceeds the enumeration guard of " +
                                std::to_string(ctx.oracle_max_messages));
  }
  const CompletionOutlook outlook = make_outlook(state, capacities, ctx.bootstrap);
  const std::vector<double> pool = candidate_rates(capacities);

  struct Candidate {
    MessageSet combo;
    double rate = 0.0;
    std::size_t rate_index = 0;
    double objective = 0.0;
    // (user, decoded message) sorted by user; mirrors graph vertex order.
    std::vector<std::pair<UserId, MessageId>> served;
  };
  auto ranks_before_cand = [&](const Candidate& a, const Candidate& b) {
    const double eps = ctx.solver.tie_eps;
    if (a.objective > b.objective + eps) return true;
    if (b.objective > a.objective + eps) return false;
    if (a.rate_index != b.rate_index) return a.rate_index < b.rate_index;
    if (a.served.size() != b.served.size()) return a.served.size() > b.served.size();
    return a.served < b.served;
  };

  std::optional<Candidate> best;
  const std::uint64_t limit = std::uint64_t{1} << f_count;
  for (std::uint64_t bits = 1; bits < limit; ++bits) {
    const MessageSet combo = MessageSet::from_bits(bits);
    for (std::size_t ri = 0; ri < pool.size(); ++ri) {
      Candidate c{combo, pool[ri], ri, 0.0, {}};
      for (UserId u = 0; u < si.users(); ++u) {
        if (pool[ri] > capacities[u]) continue;
        const MessageSet unknown = combo & si[u].wants;
        if (unknown.size() != 1 || !(combo - si[u].wants).is_subset_of(si[u].has)) continue;
        c.served.emplace_back(u, unknown.first());
        c.objective += user_weight(outlook, u, pool[ri], capacities[u], ctx.erasure);
      }
      if (c.served.empty()) continue;
      if (!best || ranks_before_cand(c, *best)) best = std::move(c);
    }
  }

  Decision d;
  MessageSet canonical;
  for (const auto& [u, f] : best->served) canonical.insert(f);
  const auto canonical_targets = decoder_set(si, canonical, best->rate, capacities);
  d.tx = {canonical, best->rate};
  d.targets = canonical_targets;
  if (canonical_targets.size() != best->served.size()) {
    d.tx.combo = best->combo;
    d.targets.clear();
    for (const auto& [u, f] : best->served) d.targets.push_back(u);
  }
  d.objective = best->objective;
  return d;
}

namespace {

Decision uncoded_round(SchedulerKind kind, const NetworkState& state,
                       std::span<const double> capacities, MessageId f) {
  const SideInfo& si = state.side_info();
  Decision d;
  d.uncoded_round = true;
  d.tx.combo = MessageSet{f};
  if (kind == SchedulerKind::classical_idnc) {
    double rate = std::numeric_limits<double>::infinity();
    for (UserId u = 0; u < si.users(); ++u) {
      if (si[u].wants.contains(f)) rate = std::min(rate, capacities[u]);
    }
    d.tx.rate = rate;
  } else {
    // Rate maximizing rate x (users able to decode at that rate).
    double best_score = -1.0;
    for (double r : candidate_rates(capacities)) {
      std::size_t n = 0;
      for (UserId u = 0; u < si.users(); ++u) {
        if (si[u].wants.contains(f) && r <= capacities[u]) ++n;
      }
      const double score = r * static_cast<double>(n);
      if (score > best_score) {
        best_score = score;
        d.tx.rate = r;
      }
    }
  }
  d.targets = decoder_set(si, d.tx.combo, d.tx.rate, capacities);
  return d;
}

}  // namespace

Decision select(SchedulerKind kind, const NetworkState& state, std::span<const double> capacities,
                const SchedulerContext& ctx) {
  require_work(state);
  if (kind != SchedulerKind::unicast && kind != SchedulerKind::broadcast) {
    if (auto f = state.uncoded_round_message()) {
      bool someone_wants = false;
      for (UserId u = 0; u < state.users(); ++u) {
        someone_wants = someone_wants || state.side_info()[u].wants.contains(*f);
      }
      if (someone_wants) return uncoded_round(kind, state, capacities, *f);
    }
  }
  switch (kind) {
    case SchedulerKind::ra_idnc: return select_ra_idnc(state, capacities, ctx);
    case SchedulerKind::ra_idnc_multilayer: return select_multilayer(state, capacities, ctx);
    case SchedulerKind::classical_idnc: return select_classical_idnc(state, capacities, ctx);
    case SchedulerKind::broadcast: return select_broadcast(state, capacities, ctx);
    case SchedulerKind::unicast: return select_unicast(state, capacities, ctx);
    case SchedulerKind::oracle: return brute_force_best(state, capacities, ctx);
  }
  throw std::logic_error("unhandled scheduler kind");
}

}  // namespace raidnc
