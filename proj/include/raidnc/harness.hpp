#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "raidnc/channel.hpp"
#include "raidnc/metrics.hpp"
#include "raidnc/model.hpp"
#include "raidnc/schedulers.hpp"

namespace raidnc {

struct EpisodeConfig {
  std::size_t users = 10;
  std::size_t messages = 20;
  double msg_size_bits = 1e6;
  ChannelParams channel;
  ErasureModel erasure;
  SchedulerKind scheduler = SchedulerKind::ra_idnc;
  std::uint64_t seed = 1;
  /// 0 means 50 * users * messages.
  std::size_t max_transmissions = 0;
  SolverOptions solver;
  RateBootstrap bootstrap = RateBootstrap::capacity;

  std::size_t guard() const { return max_transmissions ? max_transmissions : 50 * users * messages; }
  void validate() const;
};

struct LogEntry {
  Transmission tx;
  std::vector<UserId> targets;
  std::vector<double> capacities;
  std::vector<bool> received;
  std::vector<Outcome> outcomes;
  bool uncoded_round = false;
};

struct EpisodeResult {
  bool completed = false;
  double completion_s = 0.0;
  /// NaN for users still wanting when the guard fired.
  std::vector<double> user_completion_s;
  std::vector<double> user_delay_s;
  std::vector<UserStats> final_stats;
  std::size_t transmissions = 0;
  std::vector<LogEntry> log;

  double mean_delay_s() const;
  double max_delay_s() const;
};

/// Thrown by the CLI path when the guard fires; run_episode itself reports it
/// through EpisodeResult::completed.
class EpisodeIncomplete : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

EpisodeResult run_episode(const EpisodeConfig& config);

/// Per-episode random streams; channel and erasure draws never share state.
enum class Stream : std::uint64_t { channel = 1, erasure = 2 };
std::mt19937_64 make_stream(std::uint64_t seed, Stream stream);

struct IdentityReport {
  /// Largest |lhs - rhs| / max(|lhs|, tiny) over users and both checks.
  double max_rel_error = 0.0;
  std::size_t violations = 0;
  std::vector<std::string> messages;
  bool ok() const { return violations == 0; }
};

/// Checks C_u = N F / Rh_u + T_u + erased time for every completed user,
/// once from the tracked statistics and once by replaying the log from
/// scratch (decoded count must equal F there).
IdentityReport check_completion_identity(const EpisodeResult& result, std::size_t messages,
                                         double msg_size_bits, double rel_tol = 1e-6);

enum class SweepAxis { users, messages, msg_size, shadowing_std };

SweepAxis parse_axis(std::string_view name);
const char* to_string(SweepAxis axis);
/// CSV column holding the axis value.
const char* axis_column(SweepAxis axis);

struct SweepSpec {
  SweepAxis axis = SweepAxis::users;
  std::vector<double> values;
  std::size_t seeds = 20;
  /// Seeds used are first_seed, first_seed + 1, ...
  std::uint64_t first_seed = 1;
  EpisodeConfig base;
  std::vector<SchedulerKind> schedulers;
  /// 0 or 1: sequential.
  std::size_t threads = 1;

  void validate() const;
};

struct SweepRow {
  std::string scheme;
  std::uint64_t seed = 0;
  std::size_t users = 0;
  std::size_t messages = 0;
  double msg_size_bits = 0.0;
  double shadowing_std_db = 0.0;
  double completion_s = 0.0;
  double mean_delay_s = 0.0;
  double max_delay_s = 0.0;
  std::size_t transmissions = 0;
  bool completed = false;
  double axis_value = 0.0;
  /// Non-empty when the episode threw.
  std::string error;
};

struct SweepPoint {
  double axis_value = 0.0;
  std::string scheme;
  double mean_completion_s = 0.0;
  double std_completion_s = 0.0;
  std::size_t episodes = 0;
  std::size_t failures = 0;
};

struct SweepTable {
  SweepAxis axis = SweepAxis::users;
  std::vector<SweepRow> rows;
  std::vector<SweepPoint> points;

  const SweepPoint& point(double axis_value, std::string_view scheme) const;
};

EpisodeConfig config_for(const SweepSpec& spec, double axis_value, SchedulerKind scheme,
                         std::uint64_t seed);
SweepRow make_row(const EpisodeConfig& config, const EpisodeResult& result, double axis_value);
SweepTable run_sweep(const SweepSpec& spec);

/// Mean and sample standard deviation per (axis value, scheme), in row order.
std::vector<SweepPoint> aggregate(const std::vector<SweepRow>& rows);

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const SweepRow& row);
void emit_csv(const SweepTable& table, const std::filesystem::path& path);
void emit_plot_script(const SweepTable& table, const std::filesystem::path& csv_path,
                      const std::filesystem::path& script_path);
/// One script per table, named plot_<axis>.py inside `dir`, reading
/// sweep_<axis>.csv from the same directory.
std::vector<std::filesystem::path> emit_plot_scripts(const std::vector<SweepTable>& tables,
                                                     const std::filesystem::path& dir);

/// Coefficient of determination of the least-squares line through (x, y).
double linear_r2(const std::vector<double>& x, const std::vector<double>& y);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` text, '#' starts a comment. Unknown keys and bad
/// values raise ConfigError naming the line.
void apply_config(EpisodeConfig& config, std::istream& in, const std::string& origin = "config");
EpisodeConfig load_config(const std::filesystem::path& path);

}  // namespace raidnc
