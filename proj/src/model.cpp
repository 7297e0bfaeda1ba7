#include "raidnc/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace raidnc {

SideInfo::SideInfo(std::size_t users, std::size_t messages) : messages_(messages) {
  if (users == 0) throw std::invalid_argument("need at least one user");
  if (messages == 0) throw std::invalid_argument("need at least one message");
  rows_.assign(users, UserSideInfo{MessageSet{}, MessageSet::full(messages)});
}

SideInfo SideInfo::from_has(std::size_t messages, const std::vector<MessageSet>& has) {
  SideInfo out(has.size(), messages);
  const MessageSet all = MessageSet::full(messages);
  for (UserId u = 0; u < has.size(); ++u) {
    if (!has[u].is_subset_of(all)) {
      throw std::invalid_argument("Has set of user " + std::to_string(u + 1) +
                                  " references messages outside 1.." + std::to_string(messages));
    }
    out.rows_[u] = UserSideInfo{has[u], all - has[u]};
  }
  return out;
}

void SideInfo::deliver(UserId u, MessageId f) {
  auto& row = rows_.at(u);
  if (!row.wants.contains(f)) {
    throw std::logic_error("user " + std::to_string(u + 1) + " does not want message " +
                           std::to_string(f));
  }
  row.wants.erase(f);
  row.has.insert(f);
}

bool SideInfo::all_complete() const {
  for (const auto& row : rows_) {
    if (!row.wants.empty()) return false;
  }
  return true;
}

std::vector<bool> SideInfo::wanting() const {
  std::vector<bool> out(rows_.size());
  for (std::size_t u = 0; u < rows_.size(); ++u) out[u] = !rows_[u].wants.empty();
  return out;
}

void validate(const Transmission& tx) {
  if (tx.combo.empty()) throw std::invalid_argument("transmission combo is empty");
  if (!(tx.rate > 0.0) || !std::isfinite(tx.rate)) {
    throw std::invalid_argument("transmission rate must be positive and finite");
  }
}

bool is_instantly_decodable(const UserSideInfo& user, MessageSet combo, double rate,
                            double capacity) {
  return rate <= capacity && (combo & user.wants).size() == 1;
}

std::optional<MessageId> decoded_message(const UserSideInfo& user, MessageSet combo) {
  const MessageSet unknown = combo & user.wants;
  if (unknown.size() != 1) return std::nullopt;
  if (!(combo - user.wants).is_subset_of(user.has)) return std::nullopt;
  return unknown.first();
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::idle: return "idle";
    case Outcome::decoded: return "decoded";
    case Outcome::delayed: return "delayed";
    case Outcome::outage: return "outage";
    case Outcome::erased: return "erased";
  }
  return "?";
}

NetworkState::NetworkState(std::size_t users, std::size_t messages, double msg_size_bits)
    : NetworkState(SideInfo(users, messages), msg_size_bits) {
  uncoded_next_ = 1;
}

NetworkState::NetworkState(SideInfo side_info, double msg_size_bits)
    : side_info_(std::move(side_info)),
      msg_size_(msg_size_bits),
      stats_(side_info_.users()),
      completion_(side_info_.users()) {
  if (!(msg_size_bits > 0.0)) throw std::invalid_argument("message size must be positive");
  for (UserId u = 0; u < users(); ++u) {
    if (side_info_.complete(u)) completion_[u] = 0.0;
  }
}

std::optional<MessageId> NetworkState::uncoded_round_message() const {
  if (uncoded_next_ == 0 || uncoded_next_ > messages()) return std::nullopt;
  return uncoded_next_;
}

std::vector<Outcome> NetworkState::apply(const Transmission& tx,
                                         std::span<const double> capacities,
                                         const std::vector<bool>& received) {
  validate(tx);
  if (capacities.size() != users()) {
    throw std::invalid_argument("capacity snapshot has " + std::to_string(capacities.size()) +
                                " entries for " + std::to_string(users()) + " users");
  }
  if (received.size() != users()) {
    throw std::invalid_argument("reception flags have " + std::to_string(received.size()) +
                                " entries for " + std::to_string(users()) + " users");
  }

  const double airtime = msg_size_ / tx.rate;
  const double end_clock = clock_ + airtime;
  std::vector<Outcome> outcomes(users(), Outcome::idle);

  for (UserId u = 0; u < users(); ++u) {
    const UserSideInfo& row = side_info_[u];
    if (row.wants.empty()) continue;
    UserStats& st = stats_[u];
    const bool supportable = tx.rate <= capacities[u];

    if (!supportable) {
      st.delay_s += airtime;
      outcomes[u] = Outcome::outage;
      continue;
    }
    update_erasure_avg(st, !received[u]);
    if (!received[u]) {
      st.erased_time_s += airtime;
      outcomes[u] = Outcome::erased;
      continue;
    }
    if (auto f = decoded_message(row, tx.combo)) {
      side_info_.deliver(u, *f);
      update_harmonic(st, tx.rate);
      outcomes[u] = Outcome::decoded;
      if (side_info_.complete(u)) completion_[u] = end_clock;
    } else {
      st.delay_s += airtime;
      outcomes[u] = Outcome::delayed;
    }
  }

  clock_ = end_clock;
  ++next_index_;
  if (uncoded_next_ != 0 && uncoded_next_ <= messages() &&
      tx.combo == MessageSet{uncoded_next_}) {
    ++uncoded_next_;
  }
  return outcomes;
}

std::vector<Outcome> apply_transmission(NetworkState& state, const Transmission& tx,
                                        std::span<const double> capacities,
                                        const std::vector<bool>& received) {
  return state.apply(tx, capacities, received);
}

}  // namespace raidnc
