#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace raidnc {

/// Messages are numbered 1..F.
using MessageId = std::uint32_t;

/// A set of message indices. Because coding is over GF(2), an XOR
/// combination is fully described by the set of messages it mixes, so the
/// same type serves for Has/Wants sets and for coded combinations.
class MessageSet {
 public:
  static constexpr std::size_t kMaxMessages = 64;

  constexpr MessageSet() = default;
  MessageSet(std::initializer_list<MessageId> ids);

  /// {1, ..., count}
  static MessageSet full(std::size_t count);
  static constexpr MessageSet from_bits(std::uint64_t bits) {
    MessageSet s;
    s.bits_ = bits;
    return s;
  }

  bool contains(MessageId id) const {
    return id >= 1 && id <= kMaxMessages && ((bits_ >> (id - 1)) & 1U) != 0;
  }
  void insert(MessageId id);
  void erase(MessageId id);

  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  bool empty() const { return bits_ == 0; }
  std::uint64_t bits() const { return bits_; }

  /// Lowest index in the set; 0 when empty.
  MessageId first() const {
    return empty() ? 0 : static_cast<MessageId>(std::countr_zero(bits_) + 1);
  }

  bool is_subset_of(MessageSet other) const { return (bits_ & ~other.bits_) == 0; }

  friend MessageSet operator|(MessageSet a, MessageSet b) { return from_bits(a.bits_ | b.bits_); }
  friend MessageSet operator&(MessageSet a, MessageSet b) { return from_bits(a.bits_ & b.bits_); }
  friend MessageSet operator^(MessageSet a, MessageSet b) { return from_bits(a.bits_ ^ b.bits_); }
  /// Set difference.
  friend MessageSet operator-(MessageSet a, MessageSet b) { return from_bits(a.bits_ & ~b.bits_); }

  friend bool operator==(MessageSet, MessageSet) = default;
  friend auto operator<=>(MessageSet a, MessageSet b) { return a.bits_ <=> b.bits_; }

  std::vector<MessageId> to_vector() const;
  /// "1^3" style; "{}" for the empty set.
  std::string to_string() const;

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace raidnc
