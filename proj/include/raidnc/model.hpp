#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "raidnc/message_set.hpp"
#include "raidnc/metrics.hpp"

namespace raidnc {

/// Has/Wants of one user. Wants is always the complement of Has in 1..F.
struct UserSideInfo {
  MessageSet has;
  MessageSet wants;
};

/// The base station's side-information matrix, one row per user.
class SideInfo {
 public:
  /// Nobody has anything yet.
  SideInfo(std::size_t users, std::size_t messages);
  /// Explicit Has sets; Wants are derived as complements.
  static SideInfo from_has(std::size_t messages, const std::vector<MessageSet>& has);

  std::size_t users() const { return rows_.size(); }
  std::size_t messages() const { return messages_; }
  const UserSideInfo& operator[](UserId u) const { return rows_.at(u); }
  MessageSet all_messages() const { return MessageSet::full(messages_); }

  /// Moves `f` from Wants to Has for user `u`.
  void deliver(UserId u, MessageId f);

  bool complete(UserId u) const { return rows_.at(u).wants.empty(); }
  bool all_complete() const;
  std::vector<bool> wanting() const;

 private:
  std::size_t messages_;
  std::vector<UserSideInfo> rows_;
};

/// A coded combination sent at a single physical-layer rate.
struct Transmission {
  MessageSet combo;
  double rate = 0.0;  // bits/s
};

/// Throws std::invalid_argument on an empty combo or a non-positive rate.
void validate(const Transmission& tx);

/// Exactly one wanted message in the combo and a rate the user can support.
bool is_instantly_decodable(const UserSideInfo& user, MessageSet combo, double rate,
                            double capacity);

/// The message a user recovers from `combo`, ignoring rate.
std::optional<MessageId> decoded_message(const UserSideInfo& user, MessageSet combo);

/// What one transmission did to one user.
enum class Outcome {
  idle,     // Wants already empty
  decoded,  // received and instantly decodable
  delayed,  // received but not instantly decodable
  outage,   // rate above the user's capacity while Wants non-empty
  erased,   // erased although the rate was supportable
};

const char* to_string(Outcome o);

/// Everything a scheduler and the episode loop need to know.
class NetworkState {
 public:
  /// Fresh episode: every user wants every message and the uncoded first
  /// round is pending.
  NetworkState(std::size_t users, std::size_t messages, double msg_size_bits);
  /// Mid-episode state with explicit side information; no uncoded round.
  NetworkState(SideInfo side_info, double msg_size_bits);

  const SideInfo& side_info() const { return side_info_; }
  std::size_t users() const { return side_info_.users(); }
  std::size_t messages() const { return side_info_.messages(); }
  double msg_size_bits() const { return msg_size_; }
  double clock() const { return clock_; }
  /// 1-based index of the next transmission.
  std::size_t transmission_index() const { return next_index_; }

  const UserStats& stats(UserId u) const { return stats_.at(u); }
  UserStats& stats(UserId u) { return stats_.at(u); }
  std::span<const UserStats> all_stats() const { return stats_; }

  /// Absolute time at which the user's Wants emptied.
  std::optional<double> completion(UserId u) const { return completion_.at(u); }

  /// Next message due in the uncoded first round, if that round is still
  /// in progress.
  std::optional<MessageId> uncoded_round_message() const;

  std::vector<Outcome> apply(const Transmission& tx, std::span<const double> capacities,
                             const std::vector<bool>& received);

 private:
  SideInfo side_info_;
  double msg_size_;
  std::vector<UserStats> stats_;
  std::vector<std::optional<double>> completion_;
  double clock_ = 0.0;
  std::size_t next_index_ = 1;
  MessageId uncoded_next_ = 0;  // 0: round not pending
};

/// Advances the state by one transmission.
///
/// Per user with non-empty Wants: an instantly decodable reception moves
/// the decoded message to Has and feeds the harmonic-rate tracker; a
/// received but useless combination, or a rate above capacity, adds N/R of
/// delay; an erasure at a supportable rate is charged to erased time.
/// Supportable-rate transmissions also feed the running erasure average.
/// Throws std::invalid_argument when `capacities` or `received` does not
/// have one entry per user.
std::vector<Outcome> apply_transmission(NetworkState& state, const Transmission& tx,
                                        std::span<const double> capacities,
                                        const std::vector<bool>& received);

}  // namespace raidnc
