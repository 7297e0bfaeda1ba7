#include "raidnc/message_set.hpp"

#include <stdexcept>

namespace raidnc {

namespace {

void check_id(MessageId id) {
  if (id < 1 || id > MessageSet::kMaxMessages) {
    throw std::out_of_range("message index " + std::to_string(id) + " outside 1.." +
                            std::to_string(MessageSet::kMaxMessages));
  }
}

}  // namespace

MessageSet::MessageSet(std::initializer_list<MessageId> ids) {
  for (MessageId id : ids) insert(id);
}

MessageSet MessageSet::full(std::size_t count) {
  if (count > kMaxMessages) {
    throw std::out_of_range("at most " + std::to_string(kMaxMessages) + " messages supported");
  }
  return from_bits(count == kMaxMessages ? ~std::uint64_t{0}
                                         : ((std::uint64_t{1} << count) - 1));
}

void MessageSet::insert(MessageId id) {
  check_id(id);
  bits_ |= std::uint64_t{1} << (id - 1);
}

void MessageSet::erase(MessageId id) {
  check_id(id);
  bits_ &= ~(std::uint64_t{1} << (id - 1));
}

std::vector<MessageId> MessageSet::to_vector() const {
  std::vector<MessageId> out;
  out.reserve(size());
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
    out.push_back(static_cast<MessageId>(std::countr_zero(b) + 1));
  }
  return out;
}

std::string MessageSet::to_string() const {
  if (empty()) return "{}";
  std::string out;
  for (MessageId id : to_vector()) {
    if (!out.empty()) out += '^';
    out += std::to_string(id);
  }
  return out;
}

}  // namespace raidnc
