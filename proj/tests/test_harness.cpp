#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "raidnc/harness.hpp"

using namespace raidnc;
namespace fs = std::filesystem;

namespace {

EpisodeConfig small(SchedulerKind k, std::uint64_t seed = 1) {
  EpisodeConfig c;
  c.users = 3;
  c.messages = 5;
  c.msg_size_bits = 1e6;
  c.scheduler = k;
  c.seed = seed;
  c.erasure.kind = ErasureKind::perfect;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "raidnc_harness_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string row_text(const EpisodeConfig& c, const EpisodeResult& r) {
  std::ostringstream os;
  write_csv_row(os, make_row(c, r, 0));
  return os.str();
}

}  // namespace

TEST_CASE("baseline transmission counts") {
  const EpisodeResult b = run_episode(small(SchedulerKind::broadcast));
  CHECK(b.completed);
  CHECK(b.transmissions == 5);
  const EpisodeResult u = run_episode(small(SchedulerKind::unicast));
  CHECK(u.completed);
  CHECK(u.transmissions == 15);
}

TEST_CASE("episode invariants and the completion identity") {
  for (SchedulerKind k : all_schedulers()) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      for (double eps : {0.0, 0.1}) {
        EpisodeConfig c = small(k, seed);
        c.users = 6;
        c.messages = 6;
        c.erasure = {ErasureKind::offset, eps};
        const EpisodeResult r = run_episode(c);
        CAPTURE(to_string(k));
        CAPTURE(seed);
        CAPTURE(eps);
        REQUIRE(r.completed);
        CHECK(r.log.size() == r.transmissions);
        double mx = 0;
        for (double cu : r.user_completion_s) {
          CHECK(cu <= r.completion_s);
          mx = std::max(mx, cu);
        }
        CHECK(mx == r.completion_s);
        const IdentityReport rep = check_completion_identity(r, c.messages, c.msg_size_bits);
        CHECK(rep.ok());
        CHECK(rep.max_rel_error <= 1e-6);
        if (eps == 0.0) {
          for (const auto& st : r.final_stats) CHECK(st.erased_time_s == 0.0);
        }
      }
    }
  }
}

TEST_CASE("identity check catches a tampered result") {
  EpisodeConfig c = small(SchedulerKind::ra_idnc);
  EpisodeResult r = run_episode(c);
  CHECK(check_completion_identity(r, c.messages, c.msg_size_bits).ok());
  r.user_completion_s[1] *= 1.001;
  CHECK_FALSE(check_completion_identity(r, c.messages, c.msg_size_bits).ok());
}

TEST_CASE("determinism") {
  for (SchedulerKind k : all_schedulers()) {
    const EpisodeConfig c = small(k, 9);
    const EpisodeResult a = run_episode(c);
    const EpisodeResult b = run_episode(c);
    CHECK(row_text(c, a) == row_text(c, b));
    REQUIRE(a.log.size() == b.log.size());
    for (std::size_t i = 0; i < a.log.size(); ++i) {
      CHECK(a.log[i].tx.combo == b.log[i].tx.combo);
      CHECK(a.log[i].tx.rate == b.log[i].tx.rate);
      CHECK(a.log[i].received == b.log[i].received);
      CHECK(a.log[i].capacities == b.log[i].capacities);
    }
  }
}

TEST_CASE("schemes see the same channel at a seed") {
  const EpisodeResult a = run_episode(small(SchedulerKind::broadcast, 4));
  const EpisodeResult b = run_episode(small(SchedulerKind::unicast, 4));
  for (std::size_t i = 0; i < a.log.size(); ++i) CHECK(a.log[i].capacities == b.log[i].capacities);
}

TEST_CASE("static channel keeps capacities fixed within an episode") {
  EpisodeConfig c = small(SchedulerKind::unicast, 2);
  c.channel.fading = FadingKind::none;
  c.channel.shadowing_std_db = 0;
  const EpisodeResult r = run_episode(c);
  for (const auto& e : r.log) CHECK(e.capacities == r.log.front().capacities);
  // positions are per seed, so another seed sees other capacities
  c.seed = 3;
  CHECK(run_episode(c).log.front().capacities != r.log.front().capacities);
}

TEST_CASE("guard exhaustion is reported, not thrown") {
  EpisodeConfig c = small(SchedulerKind::unicast);
  c.max_transmissions = 4;
  const EpisodeResult r = run_episode(c);
  CHECK_FALSE(r.completed);
  CHECK(r.transmissions == 4);
  CHECK(std::isnan(r.user_completion_s[2]));
  CHECK(small(SchedulerKind::unicast).guard() == 50 * 3 * 5);
}

TEST_CASE("config validation") {
  EpisodeConfig c;
  c.users = 0;
  CHECK_THROWS(run_episode(c));
  c = {};
  c.msg_size_bits = 0.5;
  CHECK_THROWS(c.validate());
  c = {};
  c.messages = 65;
  CHECK_THROWS(c.validate());
}

TEST_CASE("sweeps") {
  SweepSpec spec;
  spec.axis = SweepAxis::users;
  spec.values = {2, 4};
  spec.seeds = 3;
  spec.base = small(SchedulerKind::ra_idnc);
  spec.schedulers = {SchedulerKind::ra_idnc, SchedulerKind::broadcast};
  const SweepTable seq = run_sweep(spec);
  CHECK(seq.rows.size() == 12);
  CHECK(seq.points.size() == 4);
  CHECK(seq.rows[0].users == 2);
  CHECK(seq.rows[0].scheme == "ra_idnc");
  CHECK(seq.rows[0].seed == 1);
  CHECK(seq.rows[2].seed == 3);
  CHECK(seq.rows[3].scheme == "broadcast");

  const SweepPoint& p = seq.point(4, "broadcast");
  double mean = 0;
  for (const auto& r : seq.rows) {
    if (r.users == 4 && r.scheme == "broadcast") mean += r.completion_s / 3;
  }
  CHECK(p.mean_completion_s == doctest::Approx(mean));
  CHECK(p.episodes == 3);

  spec.threads = 3;
  const SweepTable par = run_sweep(spec);
  std::ostringstream a, b;
  for (const auto& r : seq.rows) write_csv_row(a, r);
  for (const auto& r : par.rows) write_csv_row(b, r);
  CHECK(a.str() == b.str());

  SweepSpec bad = spec;
  bad.values.clear();
  CHECK_THROWS(run_sweep(bad));
  bad = spec;
  bad.seeds = 0;
  CHECK_THROWS(run_sweep(bad));
}

TEST_CASE("failing episodes become rows") {
  SweepSpec spec;
  spec.axis = SweepAxis::messages;
  spec.values = {3, 13};
  spec.seeds = 1;
  spec.base = small(SchedulerKind::oracle);
  spec.schedulers = {SchedulerKind::oracle};
  const SweepTable t = run_sweep(spec);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].error.empty());
  CHECK(t.rows[0].completed);
  CHECK_FALSE(t.rows[1].error.empty());
  CHECK_FALSE(t.rows[1].completed);
  CHECK(t.point(13, "oracle").failures == 1);
}

TEST_CASE("csv output") {
  SweepTable empty;
  const fs::path p0 = scratch("empty.csv");
  emit_csv(empty, p0);
  CHECK(slurp(p0) ==
        "scheme,seed,users,messages,msg_size_bits,shadowing_std_db,completion_s,mean_delay_s,"
        "max_delay_s,transmissions,completed\n");

  SweepTable one;
  const EpisodeConfig c = small(SchedulerKind::broadcast, 3);
  one.rows.push_back(make_row(c, run_episode(c), 3));
  const fs::path p1 = scratch("one.csv");
  emit_csv(one, p1);
  const std::string text = slurp(p1);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(text.find("\nbroadcast,3,3,5,1000000,0,") != std::string::npos);

  SweepTable again;
  again.rows.push_back(make_row(c, run_episode(c), 3));
  const fs::path p2 = scratch("again.csv");
  emit_csv(again, p2);
  CHECK(slurp(p2) == text);

  CHECK_THROWS_AS(emit_csv(one, fs::path("/nonexistent/dir/x.csv")), std::runtime_error);

  std::ostringstream os;
  SweepRow r;
  r.scheme = "x";
  r.completion_s = 1.0 / 3.0;
  write_csv_row(os, r);
  CHECK(os.str().find("0.333333333,") != std::string::npos);
}

TEST_CASE("plot scripts") {
  SweepSpec spec;
  spec.axis = SweepAxis::users;
  spec.values = {2, 3};
  spec.seeds = 2;
  spec.base = small(SchedulerKind::ra_idnc);
  spec.schedulers = {SchedulerKind::ra_idnc, SchedulerKind::unicast};
  const SweepTable t = run_sweep(spec);
  const fs::path dir = scratch("plots");
  fs::create_directories(dir);
  emit_csv(t, dir / "sweep_users.csv");
  const auto scripts = emit_plot_scripts({t}, dir);
  REQUIRE(scripts.size() == 1);
  const std::string body = slurp(scripts[0]);
  CHECK(body.find("sweep_users.csv") != std::string::npos);
  CHECK(body.find("for scheme in sorted(series)") != std::string::npos);
  if (std::system("python3 -c 'import matplotlib' >/dev/null 2>&1") == 0) {
    fs::remove(dir / "sweep_users.png");
    CHECK(std::system(("python3 " + scripts[0].string() + " >/dev/null").c_str()) == 0);
    CHECK(fs::exists(dir / "sweep_users.png"));
  }

  SweepTable empty;
  const fs::path es = scratch("plot_empty.py");
  emit_plot_script(empty, scratch("nothing.csv"), es);
  CHECK(slurp(es).find("nothing to plot") != std::string::npos);
  if (std::system("python3 -c 'pass' >/dev/null 2>&1") == 0) {
    CHECK(std::system(("python3 " + es.string() + " >/dev/null").c_str()) == 0);
  }

  std::vector<SweepTable> four(4);
  four[0].axis = SweepAxis::users;
  four[1].axis = SweepAxis::messages;
  four[2].axis = SweepAxis::msg_size;
  four[3].axis = SweepAxis::shadowing_std;
  const auto many = emit_plot_scripts(four, dir);
  CHECK(many.size() == 4);
  CHECK(many[3].filename() == "plot_shadowing_std.py");
}

TEST_CASE("config files") {
  std::istringstream in(
      "# comment\n"
      "users = 7\n"
      "messages=9   # trailing\n"
      "scheduler = unicast\n"
      "shadowing_std_db = 4\n"
      "fading = none\n"
      "erasure = offset\n"
      "erasure_base = 0.2\n"
      "rate_bootstrap = mean_candidate\n");
  EpisodeConfig c;
  apply_config(c, in);
  CHECK(c.users == 7);
  CHECK(c.messages == 9);
  CHECK(c.scheduler == SchedulerKind::unicast);
  CHECK(c.channel.shadowing_std_db == 4.0);
  CHECK(c.channel.fading == FadingKind::none);
  CHECK(c.erasure.base == doctest::Approx(0.2));
  CHECK(c.bootstrap == RateBootstrap::mean_candidate);

  std::istringstream unknown("colour = blue\n");
  CHECK_THROWS_WITH_AS(apply_config(c, unknown, "f"), doctest::Contains("f:1"), ConfigError);
  std::istringstream bad("users = many\n");
  CHECK_THROWS_AS(apply_config(c, bad), ConfigError);
  std::istringstream noeq("users 3\n");
  CHECK_THROWS_AS(apply_config(c, noeq), ConfigError);
  std::istringstream invalid("erasure_base = 1.5\n");
  CHECK_THROWS_AS(apply_config(c, invalid), ConfigError);
  CHECK_THROWS(load_config("/nonexistent.cfg"));
}

TEST_CASE("linear fit") {
  CHECK(linear_r2({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0));
  CHECK(linear_r2({1, 2, 3, 4}, {1, 3, 2, 4}) < 1.0);
  CHECK_THROWS(linear_r2({1}, {1}));
  CHECK_THROWS(linear_r2({1, 1}, {1, 2}));
}
