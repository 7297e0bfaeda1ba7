#include "raidnc/metrics.hpp"

#include <cmath>

namespace raidnc {

void update_harmonic(UserStats& stats, double new_rate) {
  if (!(new_rate > 0.0) || !std::isfinite(new_rate)) {
    throw std::invalid_argument("harmonic update needs a positive finite rate");
  }
  const double n = static_cast<double>(stats.n_decodable + 1);
  const double inv_prev = stats.n_decodable == 0 ? 0.0 : 1.0 / stats.harmonic_rate;
  const double inv = (n - 1.0) / n * inv_prev + 1.0 / (n * new_rate);
  stats.harmonic_rate = 1.0 / inv;
  ++stats.n_decodable;
}

void update_erasure_avg(UserStats& stats, bool erased) {
  const double n = static_cast<double>(stats.erasure_samples + 1);
  stats.erasure_avg = (n - 1.0) / n * stats.erasure_avg + (erased ? 1.0 : 0.0) / n;
  ++stats.erasure_samples;
}

double anticipated_completion(const UserStats& stats, double msg_size_bits,
                              std::size_t num_messages, double bootstrap_rate) {
  if (stats.erasure_avg >= 1.0) {
    throw DivergentCompletion("anticipated completion diverges: erasure average is 1");
  }
  const double rate = stats.has_rate() ? stats.harmonic_rate : bootstrap_rate;
  if (!(rate > 0.0)) {
    throw std::invalid_argument("anticipated completion needs a positive rate");
  }
  const double base = msg_size_bits * static_cast<double>(num_messages) / rate + stats.delay_s;
  return base / (1.0 - stats.erasure_avg);
}

CompletionOutlook::CompletionOutlook(std::vector<double> anticipated, std::vector<bool> wanting,
                                     double msg_size_bits)
    : anticipated_(std::move(anticipated)), wanting_(std::move(wanting)), msg_size_(msg_size_bits) {
  if (anticipated_.size() != wanting_.size()) {
    throw std::invalid_argument("outlook: anticipated/wanting size mismatch");
  }
  if (anticipated_.empty()) throw std::invalid_argument("outlook: no users");
  for (UserId u = 0; u < anticipated_.size(); ++u) {
    if (!wanting_[u]) continue;
    if (!any_wanting_ || anticipated_[u] > max_) {
      max_ = anticipated_[u];
      argmax_ = u;
      any_wanting_ = true;
    }
  }
}

std::size_t CompletionOutlook::layer(UserId u, double rate) const {
  if (!wanting_[u]) return kNoLayer;
  const double c = anticipated_[u];
  if (std::isinf(c)) return 1;
  if (std::isinf(max_)) return kUnreachable;
  const double step = msg_size_ / rate;
  // Closed form, then nudged so the defining inequality holds exactly.
  double guess = std::ceil((max_ - c) / step);
  std::size_t k = guess < 1.0 ? 1 : static_cast<std::size_t>(guess);
  while (k > 1 && c + static_cast<double>(k - 1) * step >= max_) --k;
  while (c + static_cast<double>(k) * step < max_) ++k;
  return k;
}

std::vector<UserId> CompletionOutlook::decisive_set(double rate, std::size_t layer_k) const {
  std::vector<UserId> out;
  for (UserId u = 0; u < users(); ++u) {
    if (wanting_[u] && layer(u, rate) == layer_k) out.push_back(u);
  }
  return out;
}

std::vector<UserId> decisive_set(std::span<const double> anticipated,
                                 const std::vector<bool>& wanting,
                                 const DecisiveQuery& query) {
  if (!(query.rate > 0.0) || query.layer < 1) {
    throw std::invalid_argument("decisive query needs rate > 0 and layer >= 1");
  }
  CompletionOutlook outlook({anticipated.begin(), anticipated.end()},
                            wanting, query.msg_size_bits);
  return outlook.decisive_set(query.rate, query.layer);
}

}  // namespace raidnc
