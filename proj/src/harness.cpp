#include "raidnc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

namespace raidnc {

void EpisodeConfig::validate() const {
  if (users < 1) throw std::invalid_argument("users must be >= 1");
  if (messages < 1 || messages > MessageSet::kMaxMessages) {
    throw std::invalid_argument("messages must be in [1, 64]");
  }
  if (!(msg_size_bits >= 1.0) || !std::isfinite(msg_size_bits)) {
    throw std::invalid_argument("msg_size_bits must be >= 1");
  }
  channel.validate();
  erasure.validate();
}

double EpisodeResult::mean_delay_s() const {
  if (user_delay_s.empty()) return 0.0;
  return std::accumulate(user_delay_s.begin(), user_delay_s.end(), 0.0) /
         static_cast<double>(user_delay_s.size());
}

double EpisodeResult::max_delay_s() const {
  if (user_delay_s.empty()) return 0.0;
  return *std::max_element(user_delay_s.begin(), user_delay_s.end());
}

std::mt19937_64 make_stream(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

EpisodeResult run_episode(const EpisodeConfig& config) {
  config.validate();
  std::mt19937_64 channel_rng = make_stream(config.seed, Stream::channel);
  std::mt19937_64 erasure_rng = make_stream(config.seed, Stream::erasure);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const std::vector<Position> positions = place_users(config.channel, config.users, channel_rng);
  NetworkState state(config.users, config.messages, config.msg_size_bits);
  SchedulerContext ctx;
  ctx.erasure = config.erasure;
  ctx.solver = config.solver;
  ctx.bootstrap = config.bootstrap;

  EpisodeResult result;
  const std::size_t guard = config.guard();
  while (!state.side_info().all_complete() && result.transmissions < guard) {
    const CapacitySnapshot caps = sample_snapshot(config.channel, positions, channel_rng);
    Decision d = select(config.scheduler, state, caps, ctx);
    std::vector<bool> received(config.users);
    for (UserId u = 0; u < config.users; ++u) {
      const double eps = erasure_probability(config.erasure, d.tx.rate, caps[u]);
      received[u] = unit(erasure_rng) < 1.0 - eps;
    }
    LogEntry entry{d.tx, std::move(d.targets), caps, received, {}, d.uncoded_round};
    entry.outcomes = state.apply(d.tx, caps, received);
    result.log.push_back(std::move(entry));
    ++result.transmissions;
  }

  result.completed = state.side_info().all_complete();
  result.final_stats.assign(state.all_stats().begin(), state.all_stats().end());
  double overall = 0.0;
  for (UserId u = 0; u < config.users; ++u) {
    const auto c = state.completion(u);
    result.user_completion_s.push_back(c ? *c : std::numeric_limits<double>::quiet_NaN());
    result.user_delay_s.push_back(state.stats(u).delay_s);
    if (c) overall = std::max(overall, *c);
  }
  result.completion_s = result.completed ? overall : state.clock();
  return result;
}

namespace {

double rel_error(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace

IdentityReport check_completion_identity(const EpisodeResult& result, std::size_t messages,
                                         double msg_size_bits, double rel_tol) {
  IdentityReport report;
  const std::size_t users = result.user_completion_s.size();
  auto record = [&](UserId u, const char* what, double lhs, double rhs) {
    const double e = rel_error(lhs, rhs);
    report.max_rel_error = std::max(report.max_rel_error, e);
    if (!(e <= rel_tol)) {
      ++report.violations;
      std::ostringstream os;
      os.precision(17);
      os << "user " << u + 1 << ' ' << what << ": " << lhs << " vs " << rhs;
      report.messages.push_back(os.str());
    }
  };

  // Replay from the log with an independent side-information table.
  SideInfo side(users, messages);
  std::vector<double> alpha(users, 0.0), beta(users, 0.0), gamma(users, 0.0), inv_rate(users, 0.0);
  std::vector<std::size_t> alpha_count(users, 0);
  for (const LogEntry& e : result.log) {
    const double airtime = msg_size_bits / e.tx.rate;
    for (UserId u = 0; u < users; ++u) {
      if (side.complete(u)) continue;
      if (e.tx.rate > e.capacities[u]) {
        beta[u] += airtime;
      } else if (!e.received[u]) {
        gamma[u] += airtime;
      } else if (const auto f = decoded_message(side[u], e.tx.combo)) {
        alpha[u] += airtime;
        inv_rate[u] += 1.0 / e.tx.rate;
        ++alpha_count[u];
        side.deliver(u, *f);
      } else {
        beta[u] += airtime;
      }
    }
  }

  for (UserId u = 0; u < users; ++u) {
    const double c = result.user_completion_s[u];
    if (std::isnan(c)) continue;
    const UserStats& st = result.final_stats[u];
    if (st.n_decodable != messages || alpha_count[u] != messages) {
      ++report.violations;
      report.messages.push_back("user " + std::to_string(u + 1) + ": decoded " +
                                std::to_string(alpha_count[u]) + " of " + std::to_string(messages));
      continue;
    }
    const double tracked = msg_size_bits * static_cast<double>(messages) / st.harmonic_rate +
                           st.delay_s + st.erased_time_s;
    record(u, "tracked", c, tracked);
    record(u, "replayed", c, alpha[u] + beta[u] + gamma[u]);
    record(u, "harmonic rate", st.harmonic_rate, static_cast<double>(messages) / inv_rate[u]);
  }
  return report;
}

SweepAxis parse_axis(std::string_view name) {
  if (name == "users") return SweepAxis::users;
  if (name == "messages") return SweepAxis::messages;
  if (name == "msg_size") return SweepAxis::msg_size;
  if (name == "shadowing_std") return SweepAxis::shadowing_std;
  throw std::invalid_argument("unknown axis '" + std::string(name) +
                              "' (users|messages|msg_size|shadowing_std)");
}

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::users: return "users";
    case SweepAxis::messages: return "messages";
    case SweepAxis::msg_size: return "msg_size";
    case SweepAxis::shadowing_std: return "shadowing_std";
  }
  return "?";
}

const char* axis_column(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::users: return "users";
    case SweepAxis::messages: return "messages";
    case SweepAxis::msg_size: return "msg_size_bits";
    case SweepAxis::shadowing_std: return "shadowing_std_db";
  }
  return "?";
}

void SweepSpec::validate() const {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one axis value");
  if (seeds < 1) throw std::invalid_argument("sweep needs at least one seed");
  if (schedulers.empty()) throw std::invalid_argument("sweep needs at least one scheduler");
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite axis value");
    if ((axis == SweepAxis::users || axis == SweepAxis::messages) &&
        (v < 1.0 || v != std::floor(v))) {
      throw std::invalid_argument("users/messages axis values must be positive integers");
    }
  }
}

const SweepPoint& SweepTable::point(double axis_value, std::string_view scheme) const {
  for (const SweepPoint& p : points) {
    if (p.axis_value == axis_value && p.scheme == scheme) return p;
  }
  throw std::out_of_range("no sweep point for " + std::string(scheme));
}

EpisodeConfig config_for(const SweepSpec& spec, double axis_value, SchedulerKind scheme,
                         std::uint64_t seed) {
  EpisodeConfig c = spec.base;
  c.scheduler = scheme;
  c.seed = seed;
  switch (spec.axis) {
    case SweepAxis::users: c.users = static_cast<std::size_t>(axis_value); break;
    case SweepAxis::messages: c.messages = static_cast<std::size_t>(axis_value); break;
    case SweepAxis::msg_size: c.msg_size_bits = axis_value; break;
    case SweepAxis::shadowing_std: c.channel.shadowing_std_db = axis_value; break;
  }
  return c;
}

SweepRow make_row(const EpisodeConfig& config, const EpisodeResult& result, double axis_value) {
  SweepRow row;
  row.scheme = to_string(config.scheduler);
  row.seed = config.seed;
  row.users = config.users;
  row.messages = config.messages;
  row.msg_size_bits = config.msg_size_bits;
  row.shadowing_std_db = config.channel.shadowing_std_db;
  row.completion_s = result.completion_s;
  row.mean_delay_s = result.mean_delay_s();
  row.max_delay_s = result.max_delay_s();
  row.transmissions = result.transmissions;
  row.completed = result.completed;
  row.axis_value = axis_value;
  return row;
}

SweepTable run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<EpisodeConfig> jobs;
  std::vector<double> job_axis;
  for (double v : spec.values) {
    for (SchedulerKind s : spec.schedulers) {
      for (std::size_t i = 0; i < spec.seeds; ++i) {
        jobs.push_back(config_for(spec, v, s, spec.first_seed + i));
        job_axis.push_back(v);
      }
    }
  }

  std::vector<SweepRow> rows(jobs.size());
  auto run_one = [&](std::size_t i) {
    try {
      rows[i] = make_row(jobs[i], run_episode(jobs[i]), job_axis[i]);
    } catch (const std::exception& e) {
      SweepRow r = make_row(jobs[i], EpisodeResult{}, job_axis[i]);
      r.completion_s = std::numeric_limits<double>::quiet_NaN();
      r.error = e.what();
      rows[i] = std::move(r);
    }
  };

  const std::size_t workers = std::min(spec.threads, jobs.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) run_one(i);
      });
    }
  }

  SweepTable table;
  table.axis = spec.axis;
  table.rows = std::move(rows);
  table.points = aggregate(table.rows);
  return table;
}

std::vector<SweepPoint> aggregate(const std::vector<SweepRow>& rows) {
  std::vector<SweepPoint> points;
  std::vector<std::vector<double>> samples;
  for (const SweepRow& r : rows) {
    auto it = std::find_if(points.begin(), points.end(), [&](const SweepPoint& p) {
      return p.axis_value == r.axis_value && p.scheme == r.scheme;
    });
    if (it == points.end()) {
      points.push_back({r.axis_value, r.scheme, 0.0, 0.0, 0, 0});
      samples.emplace_back();
      it = points.end() - 1;
    }
    const auto idx = static_cast<std::size_t>(it - points.begin());
    if (!r.error.empty() || !r.completed) {
      ++it->failures;
      continue;
    }
    samples[idx].push_back(r.completion_s);
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& s = samples[i];
    points[i].episodes = s.size();
    if (s.empty()) {
      points[i].mean_completion_s = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
    double ss = 0.0;
    for (double x : s) ss += (x - mean) * (x - mean);
    points[i].mean_completion_s = mean;
    points[i].std_completion_s = s.size() > 1 ? std::sqrt(ss / static_cast<double>(s.size() - 1)) : 0.0;
  }
  return points;
}

namespace {

std::string g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed on " + path.string());
}

}  // namespace

void write_csv_header(std::ostream& out) {
  out << "scheme,seed,users,messages,msg_size_bits,shadowing_std_db,completion_s,mean_delay_s,"
         "max_delay_s,transmissions,completed\n";
}

void write_csv_row(std::ostream& out, const SweepRow& r) {
  out << r.scheme << ',' << r.seed << ',' << r.users << ',' << r.messages << ','
      << g9(r.msg_size_bits) << ',' << g9(r.shadowing_std_db) << ',' << g9(r.completion_s) << ','
      << g9(r.mean_delay_s) << ',' << g9(r.max_delay_s) << ',' << r.transmissions << ','
      << (r.completed ? 1 : 0) << '\n';
}

void emit_csv(const SweepTable& table, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  write_csv_header(out);
  for (const SweepRow& r : table.rows) write_csv_row(out, r);
  finish(out, path);
}

void emit_plot_script(const SweepTable& table, const std::filesystem::path& csv_path,
                      const std::filesystem::path& script_path) {
  std::ofstream out = open_out(script_path);
  const std::string column = axis_column(table.axis);
  out << "#!/usr/bin/env python3\n"
         "import csv\nimport os\nimport sys\nfrom collections import defaultdict\n\n"
         "CSV = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(os.path.abspath(__file__)), "
      << '"' << csv_path.filename().string() << "\")\n"
      << "AXIS = \"" << column << "\"\n\n";
  if (table.rows.empty()) {
    out << "print(\"no episodes in \" + CSV + \", nothing to plot\")\nsys.exit(0)\n";
    finish(out, script_path);
    return;
  }
  out << "import matplotlib\nmatplotlib.use(\"Agg\")\nimport matplotlib.pyplot as plt\n\n"
         "series = defaultdict(lambda: defaultdict(list))\n"
         "with open(CSV, newline=\"\") as fh:\n"
         "    for row in csv.DictReader(fh):\n"
         "        if row[\"completed\"] != \"1\":\n"
         "            continue\n"
         "        series[row[\"scheme\"]][float(row[AXIS])].append(float(row[\"completion_s\"]))\n\n"
         "if not series:\n"
         "    print(\"no completed episodes in \" + CSV)\n"
         "    sys.exit(0)\n\n"
         "fig, ax = plt.subplots()\n"
         "for scheme in sorted(series):\n"
         "    xs = sorted(series[scheme])\n"
         "    ys = [sum(series[scheme][x]) / len(series[scheme][x]) for x in xs]\n"
         "    ax.plot(xs, ys, marker=\"o\", label=scheme)\n"
         "ax.set_xlabel(AXIS)\n"
         "ax.set_ylabel(\"mean completion time (s)\")\n"
         "ax.grid(True, alpha=0.3)\n"
         "ax.legend()\n"
         "png = os.path.splitext(CSV)[0] + \".png\"\n"
         "fig.savefig(png, dpi=120, bbox_inches=\"tight\")\n"
         "print(\"wrote \" + png)\n";
  finish(out, script_path);
}

std::vector<std::filesystem::path> emit_plot_scripts(const std::vector<SweepTable>& tables,
                                                     const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  for (const SweepTable& t : tables) {
    const std::string axis = to_string(t.axis);
    const auto script = dir / ("plot_" + axis + ".py");
    emit_plot_script(t, dir / ("sweep_" + axis + ".csv"), script);
    written.push_back(script);
  }
  return written;
}

double linear_r2(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("linear_r2 needs two or more paired samples");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_r2: x values are all equal");
  if (syy == 0.0) return 1.0;
  return sxy * sxy / (sxx * syy);
}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
  std::size_t used = 0;
  const double d = std::stod(v, &used);
  if (used != v.size()) throw std::invalid_argument("trailing characters");
  return d;
}

std::uint64_t to_uint(const std::string& v) {
  if (v.empty() || v[0] == '-') throw std::invalid_argument("expected a non-negative integer");
  std::size_t used = 0;
  const unsigned long long u = std::stoull(v, &used);
  if (used != v.size()) throw std::invalid_argument("trailing characters");
  return u;
}

}  // namespace

void apply_config(EpisodeConfig& c, std::istream& in, const std::string& origin) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    try {
      if (key == "users") c.users = to_uint(val);
      else if (key == "messages") c.messages = to_uint(val);
      else if (key == "msg_size_bits") c.msg_size_bits = to_double(val);
      else if (key == "scheduler") c.scheduler = parse_scheduler(val);
      else if (key == "seed") c.seed = to_uint(val);
      else if (key == "max_transmissions") c.max_transmissions = to_uint(val);
      else if (key == "tx_power_dbm_per_hz") c.channel.tx_power_dbm_per_hz = to_double(val);
      else if (key == "noise_dbm_per_hz") c.channel.noise_dbm_per_hz = to_double(val);
      else if (key == "sinr_gap_db") c.channel.sinr_gap_db = to_double(val);
      else if (key == "bandwidth_hz") c.channel.bandwidth_hz = to_double(val);
      else if (key == "cell_diameter_m") c.channel.cell_diameter_m = to_double(val);
      else if (key == "shadowing_std_db") c.channel.shadowing_std_db = to_double(val);
      else if (key == "pathloss_exponent") c.channel.pathloss_exponent = to_double(val);
      else if (key == "pathloss_ref_db") c.channel.pathloss_ref_db = to_double(val);
      else if (key == "pathloss_ref_distance_m") c.channel.pathloss_ref_distance_m = to_double(val);
      else if (key == "min_distance_m") c.channel.min_distance_m = to_double(val);
      else if (key == "fading") c.channel.fading = parse_fading(val);
      else if (key == "erasure") c.erasure.kind = parse_erasure(val);
      else if (key == "erasure_base") c.erasure.base = to_double(val);
      else if (key == "exact_threshold") c.solver.exact_threshold = to_uint(val);
      else if (key == "rate_bootstrap") c.bootstrap = parse_bootstrap(val);
      else throw ConfigError(where + ": unknown key '" + key + "'");
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(where + ": bad value for '" + key + "': " + e.what());
    }
  }
  try {
    c.validate();
  } catch (const std::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

EpisodeConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  EpisodeConfig c;
  apply_config(c, in, path.string());
  return c;
}

}  // namespace raidnc
