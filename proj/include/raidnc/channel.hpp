#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

namespace raidnc {

enum class FadingKind { rayleigh, none };

/// Downlink budget and propagation. Power and noise are spectral densities
/// (dBm/Hz); integrating both over the band leaves their ratio unchanged.
///
/// Large-scale loss is log-distance:
///   PL(d) = pathloss_ref_db + 10 * pathloss_exponent * log10(d / pathloss_ref_distance_m)
/// plus zero-mean Gaussian shadowing (dB), times |h|^2 ~ Exp(1) under
/// Rayleigh fading.
struct ChannelParams {
  double tx_power_dbm_per_hz = -42.60;
  double noise_dbm_per_hz = -168.60;
  double sinr_gap_db = 0.0;
  double bandwidth_hz = 10e6;
  double cell_diameter_m = 500.0;
  double shadowing_std_db = 0.0;
  double pathloss_exponent = 3.5;
  double pathloss_ref_db = 90.5;
  double pathloss_ref_distance_m = 100.0;
  /// Users are kept at least this far from the base station.
  double min_distance_m = 10.0;
  FadingKind fading = FadingKind::rayleigh;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// Per-user capacities (bits/s) for one transmission.
using CapacitySnapshot = std::vector<double>;

enum class ErasureKind { perfect, offset };

/// kind=perfect: erased iff rate > capacity. kind=offset: erased with
/// probability `base` at supportable rates, always above capacity.
struct ErasureModel {
  ErasureKind kind = ErasureKind::offset;
  double base = 0.0;

  /// Offset with a zero base behaves exactly like perfect estimation.
  bool perfect_estimation() const { return kind == ErasureKind::perfect || base == 0.0; }
  void validate() const;
};

double db_to_linear(double db);

/// bandwidth * log2(1 + snr / gap). Throws on negative snr or non-positive
/// gap.
double capacity(double linear_snr, double gap_linear, double bandwidth_hz = 1.0);

double pathloss_db(const ChannelParams& params, double distance_m);

struct Position {
  double x = 0.0;
  double y = 0.0;
  double distance() const;
};

/// Uniform over the annulus min_distance_m <= r <= cell_diameter_m / 2.
std::vector<Position> place_users(const ChannelParams& params, std::size_t users,
                                  std::mt19937_64& rng);

/// Independent block-fading draw for every user. Throws on an empty user
/// list or a position outside the cell.
CapacitySnapshot sample_snapshot(const ChannelParams& params,
                                 std::span<const Position> positions, std::mt19937_64& rng);

double erasure_probability(const ErasureModel& model, double rate, double capacity);

FadingKind parse_fading(const std::string& name);
ErasureKind parse_erasure(const std::string& name);
const char* to_string(FadingKind kind);
const char* to_string(ErasureKind kind);

}  // namespace raidnc
