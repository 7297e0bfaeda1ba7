#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "raidnc/clique.hpp"
#include "raidnc/ra_graph.hpp"
#include "raidnc/schedulers.hpp"
#include "raidnc/verify.hpp"

using namespace raidnc;

namespace {

SchedulerContext perfect_ctx() {
  SchedulerContext ctx;
  ctx.erasure.kind = ErasureKind::perfect;
  return ctx;
}

// Every user has the same anticipated completion.
void equalize(NetworkState& s) {
  for (UserId u = 0; u < s.users(); ++u) {
    s.stats(u).n_decodable = 1;
    s.stats(u).harmonic_rate = 1.0;
    s.stats(u).delay_s = 0.0;
  }
}

// Decoder set straight from the definition.
std::vector<UserId> alpha(const SideInfo& si, MessageSet combo, double rate,
                          const std::vector<double>& caps) {
  std::vector<UserId> out;
  for (UserId u = 0; u < si.users(); ++u) {
    const MessageSet unknown = combo & si[u].wants;
    if (rate <= caps[u] && unknown.size() == 1 && (combo - unknown).is_subset_of(si[u].has)) {
      out.push_back(u);
    }
  }
  return out;
}

NetworkState fixture_state() { return NetworkState(SideInfo::from_has(3, {{2, 3}, {1}, {3}}), 1.0); }
const std::vector<double> kCaps{4, 2, 2};

}  // namespace

TEST_CASE("scheduler names") {
  for (SchedulerKind k : all_schedulers()) CHECK(parse_scheduler(to_string(k)) == k);
  CHECK_THROWS_AS(parse_scheduler("greedy"), std::invalid_argument);
  CHECK(parse_bootstrap("mean_candidate") == RateBootstrap::mean_candidate);
  CHECK_THROWS(parse_bootstrap("zero"));
}

TEST_CASE("fixture: all users decisive") {
  NetworkState s = fixture_state();
  equalize(s);
  const Decision d = select_ra_idnc(s, kCaps, perfect_ctx());
  CHECK(d.tx.combo == MessageSet{1, 3});
  CHECK(d.tx.rate == 2.0);
  CHECK(d.targets == std::vector<UserId>{0, 1, 2});
  CHECK(d.objective == doctest::Approx(3 * std::log(2.0)));

  const Decision b = brute_force_best(s, kCaps, perfect_ctx());
  CHECK(b.objective == doctest::Approx(3 * std::log(2.0)));
  CHECK(b.tx.combo == MessageSet{1, 3});
  CHECK(b.tx.rate == 2.0);
}

TEST_CASE("fixture: fresh statistics bootstrap to capacity") {
  NetworkState s = fixture_state();
  const CompletionOutlook o = make_outlook(s, kCaps);
  CHECK(o.anticipated(0) == doctest::Approx(0.75));
  CHECK(o.anticipated(1) == doctest::Approx(1.5));
  CHECK(o.anticipated(2) == doctest::Approx(1.5));
  CHECK(o.decisive_set(2.0) == std::vector<UserId>{1, 2});

  const Decision d = select_ra_idnc(s, kCaps);
  CHECK(d.tx.combo == MessageSet{1, 3});
  CHECK(d.tx.rate == 2.0);
  CHECK(d.targets == std::vector<UserId>{0, 1, 2});
  CHECK(d.objective == doctest::Approx(2 * std::log(2.0)));

  const Decision m = select_multilayer(s, kCaps);
  CHECK(m.tx.combo == MessageSet{1, 3});
  CHECK(m.targets == std::vector<UserId>{0, 1, 2});
}

TEST_CASE("fixture: only user 1 critical") {
  NetworkState s = fixture_state();
  equalize(s);
  s.stats(0).delay_s = 10.0;
  const Decision m = select_multilayer(s, kCaps, perfect_ctx());
  CHECK(m.tx.combo == MessageSet{1});
  CHECK(m.tx.rate == 4.0);
  CHECK(m.targets == std::vector<UserId>{0});
  CHECK(m.objective == doctest::Approx(std::log(4.0)));
  CHECK(select_ra_idnc(s, kCaps, perfect_ctx()).tx.rate == 4.0);
}

namespace {

// u1 H={3}; u2 complete; u3 H={1,3}; u4 H={1,2}; one capacity 4; N = 1.
// C = (2.75, -, 2.35, 2.1) puts u3 in layer 2 and u4 in layer 3 at rate 4.
NetworkState tie_state() {
  NetworkState s(SideInfo::from_has(3, {{3}, {1, 2, 3}, {1, 3}, {1, 2}}), 1.0);
  const double delays[] = {2.0, 0.0, 1.6, 1.35};
  for (UserId u = 0; u < 4; ++u) {
    s.stats(u).n_decodable = s.side_info()[u].has.size();
    s.stats(u).harmonic_rate = 4.0;
    s.stats(u).delay_s = delays[u];
  }
  return s;
}

// Among maximal cliques whose first-layer part attains the best first-layer
// weight, the user set with the most layer-1 users, then layer-2, ...
std::vector<UserId> exhaustive_layer_search(const NetworkState& s, const std::vector<double>& caps) {
  const CompletionOutlook o = make_outlook(s, caps);
  const RaIdncGraph g = build_graph(s.side_info(), caps);
  struct Best {
    double w1 = -1e300;
    std::vector<std::size_t> profile;
    std::vector<UserId> users;
  };
  std::vector<std::tuple<double, std::vector<std::size_t>, std::vector<UserId>>> all;
  const std::size_t n = g.size();
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    std::vector<std::size_t> ids;
    for (std::size_t v = 0; v < n; ++v) {
      if (mask >> v & 1U) ids.push_back(v);
    }
    if (!is_maximal_clique(g, ids)) continue;
    const double rate = g.vertex(ids[0]).rate;
    double w1 = 0;
    std::vector<std::size_t> profile(s.users() + 2, 0);
    std::vector<UserId> users;
    bool any_first = false;
    for (auto id : ids) {
      const auto& v = g.vertex(id);
      const std::size_t k = o.layer(v.user, rate);
      if (k == 1) {
        w1 += std::log(rate);
        any_first = true;
      }
      if (k < profile.size()) ++profile[k];
      users.push_back(v.user);
    }
    if (!any_first) continue;
    all.emplace_back(w1, profile, users);
  }
  double best_w1 = -1e300;
  for (auto& [w, p, u] : all) best_w1 = std::max(best_w1, w);
  std::vector<std::size_t> best_profile;
  std::vector<UserId> best_users;
  for (auto& [w, p, u] : all) {
    if (std::abs(w - best_w1) > 1e-9) continue;
    // lexicographically larger counts from layer 1 upward
    std::vector<std::size_t> key(p.begin() + 1, p.end());
    if (best_users.empty() || key > best_profile) {
      best_profile = key;
      best_users = u;
    }
  }
  return best_users;
}

}  // namespace

TEST_CASE("multilayer resolves first-layer ties by looking ahead") {
  const NetworkState s = tie_state();
  const std::vector<double> caps(4, 4.0);
  const CompletionOutlook o = make_outlook(s, caps);
  REQUIRE(o.layer(0, 4.0) == 1);
  REQUIRE(o.layer(2, 4.0) == 2);
  REQUIRE(o.layer(3, 4.0) == 3);

  SchedulerContext ctx = perfect_ctx();
  const Decision look = select_multilayer(s, caps, ctx);
  CHECK(look.tx.combo == MessageSet{2, 3});
  CHECK(look.targets == std::vector<UserId>{0, 2, 3});
  CHECK(look.targets == exhaustive_layer_search(s, caps));
  CHECK(look.objective == doctest::Approx(std::log(4.0)));

  ctx.multilayer_tie_lookahead = false;
  const Decision naive = select_multilayer(s, caps, ctx);
  CHECK(naive.tx.combo == MessageSet{1, 3});
  CHECK(naive.targets == std::vector<UserId>{0, 3});
  CHECK(look.targets.size() > naive.targets.size());
}

TEST_CASE("fig. 2 regime: classical serves more users at a lower rate") {
  NetworkState s(SideInfo::from_has(3, {{2, 3}, {1, 3}, {1, 3}}), 1.0);
  equalize(s);
  const std::vector<double> caps{2, 1, 2};
  const Decision c = select_classical_idnc(s, caps, perfect_ctx());
  CHECK(c.targets.size() == 3);
  CHECK(c.tx.rate == 1.0);
  const Decision r = select_ra_idnc(s, caps, perfect_ctx());
  CHECK(r.targets == std::vector<UserId>{0, 2});
  CHECK(r.tx.rate == 2.0);
  CHECK(r.tx.rate * static_cast<double>(r.targets.size()) >
        c.tx.rate * static_cast<double>(c.targets.size()));
}

TEST_CASE("baselines") {
  NetworkState s(SideInfo::from_has(2, {{}, {}, {}}), 1.0);
  const Decision b = select_broadcast(s, kCaps);
  CHECK(b.tx.combo == MessageSet{1});
  CHECK(b.tx.rate == 2.0);
  CHECK(b.targets == std::vector<UserId>{0, 1, 2});

  const Decision u = select_unicast(s, kCaps);
  CHECK(u.tx.combo == MessageSet{1});
  CHECK(u.tx.rate == 4.0);
  CHECK(u.targets == std::vector<UserId>{0});

  NetworkState one(SideInfo::from_has(2, {{1}}), 1.0);
  const std::vector<double> c1{3.5};
  CHECK(select_broadcast(one, c1).tx.rate == 3.5);
  const Decision cl = select_classical_idnc(one, c1);
  CHECK(cl.tx.combo == MessageSet{2});
  CHECK(cl.tx.rate == 3.5);
  const Decision last = select_unicast(one, c1);
  CHECK(last.tx.combo == MessageSet{2});

  // broadcast skips complete users when picking the rate
  NetworkState partial(SideInfo::from_has(2, {{1, 2}, {}, {1}}), 1.0);
  const Decision pb = select_broadcast(partial, std::vector<double>{0.5, 3, 2});
  CHECK(pb.tx.rate == 2.0);
  CHECK(pb.tx.combo == MessageSet{1});
  // unicast targets the fastest user that still wants something
  const Decision pu = select_unicast(partial, std::vector<double>{9, 3, 2});
  CHECK(pu.targets == std::vector<UserId>{1});
}

TEST_CASE("simple selector cases") {
  NetworkState s(SideInfo::from_has(3, {{1, 2}, {1, 2, 3}}), 1.0);
  const std::vector<double> caps{3, 7};
  const Decision d = select_ra_idnc(s, caps);
  CHECK(d.tx.combo == MessageSet{3});
  CHECK(d.tx.rate == 3.0);

  NetworkState same(SideInfo::from_has(3, {{1}, {1}, {1}}), 1.0);
  const std::vector<double> eq(3, 5.0);
  const Decision e = select_ra_idnc(same, eq);
  CHECK(e.tx.combo.size() == 1);
  CHECK(e.tx.rate == 5.0);
  CHECK(e.targets.size() == 3);

  NetworkState done(SideInfo::from_has(1, {{1}}), 1.0);
  const std::vector<double> c{1};
  for (SchedulerKind k : all_schedulers()) CHECK_THROWS_AS(select(k, done, c), NothingToSend);

  NetworkState wide(1, 13, 1.0);
  CHECK_THROWS_AS(brute_force_best(wide, c), std::invalid_argument);
}

TEST_CASE("uncoded first round") {
  NetworkState s(3, 2, 1.0);
  const std::vector<double> caps{5, 4, 1};
  const Decision ra = select(SchedulerKind::ra_idnc, s, caps);
  CHECK(ra.uncoded_round);
  CHECK(ra.tx.combo == MessageSet{1});
  CHECK(ra.tx.rate == 4.0);
  CHECK(select(SchedulerKind::ra_idnc_multilayer, s, caps).tx.rate == 4.0);
  CHECK(select(SchedulerKind::oracle, s, caps).tx.rate == 4.0);
  CHECK(select(SchedulerKind::classical_idnc, s, caps).tx.rate == 1.0);
  CHECK(select(SchedulerKind::broadcast, s, caps).tx.rate == 1.0);
  const Decision uni = select(SchedulerKind::unicast, s, caps);
  CHECK_FALSE(uni.uncoded_round);
  CHECK(uni.tx.rate == 5.0);

  s.apply(ra.tx, caps, {true, true, false});
  const Decision second = select(SchedulerKind::ra_idnc, s, caps);
  CHECK(second.uncoded_round);
  CHECK(second.tx.combo == MessageSet{2});
  s.apply(second.tx, caps, {true, true, true});
  CHECK_FALSE(select(SchedulerKind::ra_idnc, s, caps).uncoded_round);
}

TEST_CASE("equal capacities: classical and rate-aware serve the same users") {
  std::mt19937_64 rng(21);
  const SchedulerContext ctx = perfect_ctx();
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t U = 1 + rng() % 5, F = 1 + rng() % 5;
    std::vector<MessageSet> has(U);
    for (auto& h : has) h = MessageSet::from_bits(rng() & ((1ULL << F) - 1));
    if (std::all_of(has.begin(), has.end(), [&](auto h) { return h == MessageSet::full(F); })) continue;
    NetworkState s(SideInfo::from_has(F, has), 1.0);
    equalize(s);
    const std::vector<double> caps(U, 4.0);
    CHECK(select_classical_idnc(s, caps, ctx).targets == select_ra_idnc(s, caps, ctx).targets);
  }
}

TEST_CASE("every decision is instantly decodable for its targets") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    Instance inst = random_instance(rng);
    for (SchedulerKind k : all_schedulers()) {
      const Decision d = select(k, inst.state, inst.capacities);
      CHECK(d.targets == alpha(inst.state.side_info(), d.tx.combo, d.tx.rate, inst.capacities));
      CHECK_FALSE(d.targets.empty());
      for (UserId u : d.targets) {
        CHECK(is_instantly_decodable(inst.state.side_info()[u], d.tx.combo, d.tx.rate,
                                     inst.capacities[u]));
      }
    }
  }
}

TEST_CASE("rate-aware objective matches enumeration, multilayer keeps it") {
  std::mt19937_64 rng(123);
  const SchedulerContext ctx = perfect_ctx();
  for (int trial = 0; trial < 300; ++trial) {
    const Instance inst = random_instance(rng);
    const Decision ra = select_ra_idnc(inst.state, inst.capacities, ctx);
    const Decision bf = brute_force_best(inst.state, inst.capacities, ctx);
    CHECK(ra.objective == doctest::Approx(bf.objective).epsilon(1e-12));
    const CompletionOutlook o = make_outlook(inst.state, inst.capacities);
    CHECK(transmission_objective(inst.state, inst.capacities, o, ra.tx, ctx.erasure) ==
          doctest::Approx(ra.objective));
    const Decision ml = select_multilayer(inst.state, inst.capacities, ctx);
    CHECK(transmission_objective(inst.state, inst.capacities, o, ml.tx, ctx.erasure) ==
          doctest::Approx(ra.objective));
  }
}

TEST_CASE("offset erasure weights") {
  NetworkState s = fixture_state();
  equalize(s);
  SchedulerContext ctx;
  ctx.erasure = {ErasureKind::offset, 0.1};
  const Decision d = select_ra_idnc(s, kCaps, ctx);
  CHECK(d.objective == doctest::Approx(3 * std::log(20.0)));
  CHECK(brute_force_best(s, kCaps, ctx).objective == doctest::Approx(d.objective));
}

TEST_CASE("mean-candidate bootstrap") {
  NetworkState s = fixture_state();
  const CompletionOutlook o = make_outlook(s, kCaps, RateBootstrap::mean_candidate);
  for (UserId u = 0; u < 3; ++u) CHECK(o.anticipated(u) == doctest::Approx(1.0));
}
