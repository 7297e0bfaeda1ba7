#include "raidnc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "raidnc/clique.hpp"
#include "raidnc/ra_graph.hpp"

namespace raidnc {

namespace {

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

constexpr std::size_t kMaxDetails = 5;

void note(std::vector<std::string>& details, const std::string& s) {
  if (details.size() < kMaxDetails) details.push_back(s);
}

std::string describe(const Instance& inst) {
  std::ostringstream os;
  const SideInfo& si = inst.state.side_info();
  os << "U=" << si.users() << " F=" << si.messages();
  for (UserId u = 0; u < si.users(); ++u) {
    os << " | u" << u + 1 << " H=" << si[u].has.to_string() << " cap=" << inst.capacities[u];
  }
  return os.str();
}

}  // namespace

Instance random_instance(std::mt19937_64& rng, const InstanceShape& shape) {
  std::uniform_int_distribution<std::size_t> users_d(1, shape.max_users);
  std::uniform_int_distribution<std::size_t> msgs_d(1, shape.max_messages);
  std::uniform_int_distribution<std::size_t> nrates_d(1, shape.max_rates);
  std::uniform_int_distribution<int> rate_d(shape.min_rate, shape.max_rate);
  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> delay_d(0.0, 3.0);

  const std::size_t users = users_d(rng);
  const std::size_t messages = msgs_d(rng);
  std::vector<double> pool;
  const std::size_t n_rates = nrates_d(rng);
  for (std::size_t i = 0; i < n_rates; ++i) pool.push_back(static_cast<double>(rate_d(rng)));
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);

  std::vector<MessageSet> has(users);
  for (auto& h : has) {
    for (MessageId f = 1; f <= messages; ++f) {
      if (coin(rng)) h.insert(f);
    }
  }
  // Someone must want something.
  if (std::all_of(has.begin(), has.end(),
                  [&](const MessageSet& h) { return h == MessageSet::full(messages); })) {
    std::uniform_int_distribution<MessageId> f_d(1, static_cast<MessageId>(messages));
    has[0].erase(f_d(rng));
  }

  std::vector<double> caps(users);
  for (auto& c : caps) c = pool[pick(rng)];

  NetworkState state(SideInfo::from_has(messages, has), shape.msg_size_bits);
  for (UserId u = 0; u < users; ++u) {
    UserStats& st = state.stats(u);
    st.n_decodable = has[u].size();
    if (st.n_decodable > 0) st.harmonic_rate = pool[pick(rng)];
    st.delay_s = delay_d(rng);
  }
  return Instance{std::move(state), std::move(caps)};
}

SuiteReport oracle_equivalence_suite(std::size_t instances, std::uint64_t seed, double tol) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  SchedulerContext ctx;
  ctx.erasure.kind = ErasureKind::perfect;
  SuiteReport report;
  for (std::size_t i = 0; i < instances; ++i) {
    const Instance inst = random_instance(rng);
    const Decision graph = select_ra_idnc(inst.state, inst.capacities, ctx);
    const Decision brute = brute_force_best(inst.state, inst.capacities, ctx);
    ++report.instances;
    if (!(std::abs(graph.objective - brute.objective) <= tol)) {
      ++report.violations;
      std::ostringstream os;
      os.precision(17);
      os << "instance " << i << ": clique " << graph.objective << " vs enumeration "
         << brute.objective << " (" << describe(inst) << ")";
      note(report.details, os.str());
    }
  }
  report.seconds = elapsed_since(t0);
  return report;
}

BijectionReport bijection_suite(std::size_t instances, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  BijectionReport report;
  for (std::size_t i = 0; i < instances; ++i) {
    const Instance inst = random_instance(rng);
    const SideInfo& si = inst.state.side_info();
    const RaIdncGraph g = build_graph(si, inst.capacities);
    ++report.instances;

    std::map<std::vector<std::size_t>, std::size_t> seen;
    for_each_maximal_clique(g, [&](const std::vector<std::size_t>& clique) {
      ++report.maximal_cliques;
      ++seen[clique];
      MessageSet combo;
      std::vector<UserId> users;
      for (std::size_t id : clique) {
        combo.insert(g.vertex(id).message);
        users.push_back(g.vertex(id).user);
      }
      const double rate = g.vertex(clique.front()).rate;
      std::sort(users.begin(), users.end());
      if (decoder_set(si, combo, rate, inst.capacities) != users) {
        ++report.forward_violations;
        note(report.details, "instance " + std::to_string(i) + ": clique on " + combo.to_string() +
                                 " has a different decoder set (" + describe(inst) + ")");
      }
    });

    const std::vector<double> pool = candidate_rates(inst.capacities);
    const std::uint64_t limit = std::uint64_t{1} << si.messages();
    // Each distinct decoder vertex set once; many combos can map to it.
    std::set<std::vector<std::size_t>> checked;
    for (std::size_t ri = 0; ri < pool.size(); ++ri) {
      for (std::uint64_t bits = 1; bits < limit; ++bits) {
        const MessageSet combo = MessageSet::from_bits(bits);
        std::vector<std::size_t> ids;
        for (UserId u = 0; u < si.users(); ++u) {
          if (pool[ri] > inst.capacities[u]) continue;
          if (const auto f = decoded_message(si[u], combo)) ids.push_back(*g.find(u, *f, ri));
        }
        if (ids.empty()) continue;
        ++report.feasible_transmissions;
        const auto it = seen.find(ids);
        const std::size_t count = it == seen.end() ? 0 : it->second;
        if (count != 1) {
          ++report.converse_violations;
          note(report.details, "instance " + std::to_string(i) + ": transmission " +
                                   combo.to_string() + " at rate " + std::to_string(pool[ri]) +
                                   " appears " + std::to_string(count) +
                                   " times among maximal cliques (" + describe(inst) + ")");
        }
        if (!checked.insert(ids).second) continue;
        const bool maximal = is_maximal_clique(g, ids);
        if ((maximal && count != 1) || (!maximal && count != 0)) ++report.maximal_converse_violations;
      }
    }
  }
  report.seconds = elapsed_since(t0);
  return report;
}

}  // namespace raidnc
