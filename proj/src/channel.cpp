#include "raidnc/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace raidnc {

void ChannelParams::validate() const {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth_hz must be > 0");
  if (!(cell_diameter_m > 0.0)) throw std::invalid_argument("cell_diameter_m must be > 0");
  if (!(shadowing_std_db >= 0.0)) throw std::invalid_argument("shadowing_std_db must be >= 0");
  if (!(pathloss_ref_distance_m > 0.0)) {
    throw std::invalid_argument("pathloss_ref_distance_m must be > 0");
  }
  if (!(min_distance_m > 0.0) || min_distance_m > cell_diameter_m / 2.0) {
    throw std::invalid_argument("min_distance_m must lie in (0, cell radius]");
  }
  if (!std::isfinite(tx_power_dbm_per_hz) || !std::isfinite(noise_dbm_per_hz) ||
      !std::isfinite(sinr_gap_db) || !std::isfinite(pathloss_exponent) ||
      !std::isfinite(pathloss_ref_db)) {
    throw std::invalid_argument("channel parameters must be finite");
  }
}

void ErasureModel::validate() const {
  if (!(base >= 0.0 && base < 1.0)) throw std::invalid_argument("erasure base must lie in [0,1)");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double capacity(double linear_snr, double gap_linear, double bandwidth_hz) {
  if (!(linear_snr >= 0.0)) throw std::invalid_argument("snr must be non-negative");
  if (!(gap_linear > 0.0)) throw std::invalid_argument("capacity gap must be positive");
  return bandwidth_hz * std::log2(1.0 + linear_snr / gap_linear);
}

double pathloss_db(const ChannelParams& params, double distance_m) {
  return params.pathloss_ref_db +
         10.0 * params.pathloss_exponent * std::log10(distance_m / params.pathloss_ref_distance_m);
}

double Position::distance() const { return std::hypot(x, y); }

std::vector<Position> place_users(const ChannelParams& params, std::size_t users,
                                  std::mt19937_64& rng) {
  params.validate();
  const double r_max = params.cell_diameter_m / 2.0;
  const double r_min = params.min_distance_m;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Position> out;
  out.reserve(users);
  for (std::size_t i = 0; i < users; ++i) {
    // Area-uniform radius on the annulus.
    const double r = std::sqrt(r_min * r_min + unit(rng) * (r_max * r_max - r_min * r_min));
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    out.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
  return out;
}

CapacitySnapshot sample_snapshot(const ChannelParams& params,
                                 std::span<const Position> positions, std::mt19937_64& rng) {
  if (positions.empty()) throw std::invalid_argument("snapshot needs at least one user");
  params.validate();
  const double r_max = params.cell_diameter_m / 2.0;
  const double snr_ref_db = params.tx_power_dbm_per_hz - params.noise_dbm_per_hz;
  const double gap = db_to_linear(params.sinr_gap_db);

  std::normal_distribution<double> shadow(0.0, 1.0);
  std::exponential_distribution<double> rayleigh_power(1.0);

  CapacitySnapshot out;
  out.reserve(positions.size());
  for (const Position& p : positions) {
    const double d = p.distance();
    if (d > r_max * (1.0 + 1e-12)) throw std::invalid_argument("user outside the cell");
    double gain_db = -pathloss_db(params, std::max(d, params.min_distance_m));
    // Draws happen unconditionally so the stream layout does not depend on
    // the configuration.
    const double z = shadow(rng);
    const double h2 = rayleigh_power(rng);
    gain_db += params.shadowing_std_db * z;
    double snr = db_to_linear(snr_ref_db + gain_db);
    if (params.fading == FadingKind::rayleigh) snr *= h2;
    double c = capacity(snr, gap, params.bandwidth_hz);
    if (!(c > 0.0)) c = std::numeric_limits<double>::min();
    out.push_back(c);
  }
  return out;
}

double erasure_probability(const ErasureModel& model, double rate, double capacity) {
  if (rate > capacity) return 1.0;
  return model.kind == ErasureKind::perfect ? 0.0 : model.base;
}

FadingKind parse_fading(const std::string& name) {
  if (name == "rayleigh") return FadingKind::rayleigh;
  if (name == "none") return FadingKind::none;
  throw std::invalid_argument("unknown fading kind '" + name + "' (rayleigh|none)");
}

ErasureKind parse_erasure(const std::string& name) {
  if (name == "perfect") return ErasureKind::perfect;
  if (name == "offset") return ErasureKind::offset;
  throw std::invalid_argument("unknown erasure kind '" + name + "' (perfect|offset)");
}

const char* to_string(FadingKind kind) {
  return kind == FadingKind::rayleigh ? "rayleigh" : "none";
}

const char* to_string(ErasureKind kind) {
  return kind == ErasureKind::perfect ? "perfect" : "offset";
}

}  // namespace raidnc
