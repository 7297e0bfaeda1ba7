// raidnc: run single episodes, parameter sweeps and the self-checks.
//
// exit codes: 0 ok, 2 usage/config, 3 I/O, 4 episode did not complete,
// 5 verification failed, 1 anything else.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "raidnc/harness.hpp"
#include "raidnc/verify.hpp"

namespace {

enum Exit { kOk = 0, kOther = 1, kUsage = 2, kIo = 3, kIncomplete = 4, kVerify = 5 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad axis value '" + item + "'");
  }
  return out;
}

std::vector<raidnc::SchedulerKind> parse_schemes(const std::string& text) {
  std::vector<raidnc::SchedulerKind> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(raidnc::parse_scheduler(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rate-aware instantly decodable network coding simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::size_t users = 0, messages = 0;
  double msg_size = 0.0;
  std::string scheduler;
  std::uint64_t seed = 0;
  bool identity = true;
  std::string log_path;

  auto* run = app.add_subcommand("run", "simulate one episode and print its CSV row");
  run->add_option("--config", config_path, "key = value file")->check(CLI::ExistingFile);
  run->add_option("--users", users, "number of users");
  run->add_option("--messages", messages, "number of messages");
  run->add_option("--msg-size", msg_size, "message size in bits");
  run->add_option("--scheduler", scheduler, "ra_idnc|ra_idnc_multilayer|classical_idnc|broadcast|unicast|oracle");
  run->add_option("--seed", seed, "episode seed");
  run->add_option("--log", log_path, "write the per-transmission log here");
  run->add_flag("!--no-identity-check", identity, "skip the completion-time identity check");

  std::string axis = "users", values, schemes = "ra_idnc,classical_idnc,broadcast,unicast";
  std::size_t seeds = 20, threads = 1;
  std::string out_dir = ".";
  auto* sweep = app.add_subcommand("sweep", "sweep one axis over schemes and seeds");
  sweep->add_option("--config", config_path, "base episode config")->check(CLI::ExistingFile);
  sweep->add_option("--axis", axis, "users|messages|msg_size|shadowing_std");
  sweep->add_option("--values", values, "comma-separated axis values")->required();
  sweep->add_option("--seeds", seeds, "seeds per point");
  sweep->add_option("--schemes", schemes, "comma-separated schedulers");
  sweep->add_option("--threads", threads, "worker threads");
  sweep->add_option("--users", users, "base number of users");
  sweep->add_option("--messages", messages, "base number of messages");
  sweep->add_option("--msg-size", msg_size, "base message size in bits");
  sweep->add_option("--out", out_dir, "output directory");

  std::size_t oracle_n = 1000, bijection_n = 200;
  auto* verify = app.add_subcommand("verify", "oracle-equivalence and bijection suites");
  verify->add_option("--oracle-instances", oracle_n);
  verify->add_option("--bijection-instances", bijection_n);
  verify->add_option("--seed", seed, "suite seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    raidnc::EpisodeConfig cfg;
    if (!config_path.empty()) cfg = raidnc::load_config(config_path);
    if (users) cfg.users = users;
    if (messages) cfg.messages = messages;
    if (msg_size > 0.0) cfg.msg_size_bits = msg_size;
    if (!scheduler.empty()) cfg.scheduler = raidnc::parse_scheduler(scheduler);

    if (*run) {
      if (run->count("--seed")) cfg.seed = seed;
      cfg.validate();
      const raidnc::EpisodeResult r = raidnc::run_episode(cfg);
      raidnc::write_csv_header(std::cout);
      raidnc::write_csv_row(std::cout, raidnc::make_row(cfg, r, 0.0));
      if (!log_path.empty()) {
        std::ofstream log(log_path);
        if (!log) throw IoError("cannot open " + log_path);
        std::size_t t = 1;
        for (const auto& e : r.log) {
          log << t++ << ' ' << e.tx.combo.to_string() << ' ' << e.tx.rate << " targets";
          for (auto u : e.targets) log << ' ' << u + 1;
          log << " outcomes";
          for (auto o : e.outcomes) log << ' ' << raidnc::to_string(o);
          log << '\n';
        }
        if (!log) throw IoError("write failed on " + log_path);
      }
      if (identity && r.completed) {
        const auto rep = raidnc::check_completion_identity(r, cfg.messages, cfg.msg_size_bits);
        if (!rep.ok()) {
          for (const auto& m : rep.messages) std::cerr << "identity: " << m << '\n';
          return kVerify;
        }
      }
      if (!r.completed) {
        std::cerr << "episode stopped after " << r.transmissions << " transmissions\n";
        return kIncomplete;
      }
      return kOk;
    }

    if (*sweep) {
      raidnc::SweepSpec spec;
      spec.axis = raidnc::parse_axis(axis);
      spec.values = parse_values(values);
      spec.seeds = seeds;
      spec.first_seed = cfg.seed;
      spec.base = cfg;
      spec.schedulers = parse_schemes(schemes);
      spec.threads = threads;
      const raidnc::SweepTable table = raidnc::run_sweep(spec);
      std::filesystem::create_directories(out_dir);
      const auto csv = std::filesystem::path(out_dir) / ("sweep_" + axis + ".csv");
      try {
        raidnc::emit_csv(table, csv);
        raidnc::emit_plot_scripts({table}, out_dir);
      } catch (const std::runtime_error& e) {
        throw IoError(e.what());
      }
      for (const auto& p : table.points) {
        std::printf("%s=%g %-20s mean %.6g s  std %.3g  (%zu ok, %zu failed)\n", axis.c_str(),
                    p.axis_value, p.scheme.c_str(), p.mean_completion_s, p.std_completion_s,
                    p.episodes, p.failures);
      }
      std::printf("wrote %s\n", csv.string().c_str());
      return kOk;
    }

    if (*verify) {
      const std::uint64_t s = verify->count("--seed") ? seed : 2024;
      const auto oracle = raidnc::oracle_equivalence_suite(oracle_n, s);
      std::printf("oracle equivalence: %zu instances, %zu mismatches, %.2f s\n", oracle.instances,
                  oracle.violations, oracle.seconds);
      for (const auto& d : oracle.details) std::printf("  %s\n", d.c_str());
      const auto bij = raidnc::bijection_suite(bijection_n, s + 1);
      std::printf(
          "bijection: %zu instances, %zu maximal cliques, %zu feasible transmissions\n"
          "  clique -> transmission violations: %zu\n"
          "  transmission -> clique violations: %zu (of which %zu among maximal decoder sets)\n",
          bij.instances, bij.maximal_cliques, bij.feasible_transmissions, bij.forward_violations,
          bij.converse_violations, bij.maximal_converse_violations);
      for (const auto& d : bij.details) std::printf("  %s\n", d.c_str());
      return oracle.ok() && bij.ok() ? kOk : kVerify;
    }
  } catch (const raidnc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOk;
}
