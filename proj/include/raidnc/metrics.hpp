#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace raidnc {

using UserId = std::size_t;  // 0-based

/// Running per-user statistics used by the anticipated completion time.
struct UserStats {
  /// Instantly decodable receptions so far.
  std::size_t n_decodable = 0;
  /// Harmonic mean of the rates of those receptions (bits/s); 0 until the
  /// first one.
  double harmonic_rate = 0.0;
  /// Accumulated time delay (s).
  double delay_s = 0.0;
  /// Running mean of erasure indicators over transmissions sent at a rate
  /// the user could support.
  double erasure_avg = 0.0;
  std::size_t erasure_samples = 0;
  /// Airtime of erased transmissions at supportable rates (s).
  double erased_time_s = 0.0;

  bool has_rate() const { return n_decodable > 0; }
};

/// Raised when the anticipated completion time is unbounded (every
/// supportable transmission so far was erased).
class DivergentCompletion : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

void update_harmonic(UserStats& stats, double new_rate);
void update_erasure_avg(UserStats& stats, bool erased);

/// (N*F / R~ + T) / (1 - eps~). `bootstrap_rate` stands in for R~ before the
/// first instantly decodable reception.
double anticipated_completion(const UserStats& stats, double msg_size_bits,
                              std::size_t num_messages, double bootstrap_rate);

struct DecisiveQuery {
  double rate = 0.0;
  std::size_t layer = 1;
  double msg_size_bits = 0.0;
};

/// Anticipated completion times of all users at the start of a
/// transmission, and the k-th critical layering they induce.
///
/// For a rate R the layer of a user u with non-empty Wants is the smallest
/// k >= 1 with C_u + k*N/R >= C*, where C* is the maximum over users with
/// non-empty Wants (ties to the lowest index). Layer 1 is the decisive set.
/// Users with empty Wants have no layer.
class CompletionOutlook {
 public:
  static constexpr std::size_t kNoLayer = 0;
  /// Layer of a finite user when C* is unbounded.
  static constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

  CompletionOutlook(std::vector<double> anticipated, std::vector<bool> wanting,
                    double msg_size_bits);

  std::size_t users() const { return anticipated_.size(); }
  double anticipated(UserId u) const { return anticipated_[u]; }
  bool wanting(UserId u) const { return wanting_[u]; }
  double max() const { return max_; }
  /// argmax user; only meaningful when some user is wanting.
  UserId argmax() const { return argmax_; }
  bool any_wanting() const { return any_wanting_; }
  double msg_size_bits() const { return msg_size_; }

  std::size_t layer(UserId u, double rate) const;
  bool decisive(UserId u, double rate) const { return layer(u, rate) == 1; }
  std::vector<UserId> decisive_set(double rate, std::size_t layer = 1) const;

 private:
  std::vector<double> anticipated_;
  std::vector<bool> wanting_;
  double msg_size_;
  double max_ = 0.0;
  UserId argmax_ = 0;
  bool any_wanting_ = false;
};

/// K^k_R from explicit anticipated completion times.
std::vector<UserId> decisive_set(std::span<const double> anticipated,
                                 const std::vector<bool>& wanting,
                                 const DecisiveQuery& query);

}  // namespace raidnc
