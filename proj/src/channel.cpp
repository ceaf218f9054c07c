#include "lain/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lain/errors.hpp"

namespace lain {

void AirGroundParams::validate() const {
  if (!(zeta_los_db >= 0.0)) throw ConfigError("channel.zeta_los_db", "must be >= 0");
  if (!(zeta_nlos_db > zeta_los_db))
    throw ConfigError("channel.zeta_nlos_db", "must exceed zeta_los_db");
  if (!(carrier_hz > 0.0)) throw ConfigError("channel.carrier_hz", "must be > 0");
  if (!(light_speed > 0.0)) throw ConfigError("channel.light_speed", "must be > 0");
  if (!std::isfinite(sigmoid_a) || !std::isfinite(sigmoid_b))
    throw ConfigError("channel.sigmoid", "a and b must be finite");
}

void GroundLinkParams::validate() const {
  if (!(g0 > 0.0)) throw ConfigError("channel.g0", "must be > 0");
  if (!(noise_power_w > 0.0)) throw ConfigError("channel.noise_dbm", "noise power must be > 0");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("channel.bandwidth_hz", "must be > 0");
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double default_noise_power_w() { return dbm_to_watts(-114.0); }

double elevation_angle_deg(const Position3& uav, const Position3& abs_pos) {
  const double horizontal = horizontal_distance(uav, abs_pos);
  const double vertical = std::abs(abs_pos.z - uav.z);
  if (horizontal == 0.0 && vertical == 0.0)
    throw GeometryError("elevation angle undefined for coincident positions");
  return std::atan2(vertical, horizontal) * 180.0 / std::numbers::pi;
}

double air_ground_pathloss_db(const Position3& uav, const Position3& abs_pos,
                              const AirGroundParams& p) {
  const double d = distance(uav, abs_pos);
  if (d == 0.0) throw GeometryError("air-ground path loss at zero distance");
  const double elevation = elevation_angle_deg(uav, abs_pos);
  const double excess = (p.zeta_los_db - p.zeta_nlos_db) /
                        (1.0 + p.sigmoid_a * std::exp(-p.sigmoid_b * (elevation - p.sigmoid_a)));
  const double fspl = 20.0 * std::log10(4.0 * std::numbers::pi * p.carrier_hz * d / p.light_speed);
  return excess + fspl + p.zeta_nlos_db;
}

double rate_uav_abs(const Position3& uav, const Position3& abs_pos,
                    double tx_power_w, double bandwidth_hz,
                    const AirGroundParams& p, double noise_w) {
  if (!(bandwidth_hz > 0.0)) throw DomainError("bandwidth must be > 0");
  const double gain = db_to_linear(-air_ground_pathloss_db(uav, abs_pos, p));
  return bandwidth_hz * std::log2(1.0 + tx_power_w * gain / noise_w);
}

double ground_gain(const Position3& a, const Position3& b, double g0) {
  const double d = distance(a, b);
  if (d == 0.0) throw GeometryError("ground link gain at zero distance");
  return g0 / (d * d);
}

double rate_uav_node(const Position3& uav, const Position3& node,
                     double tx_power_w, double bandwidth_hz,
                     const GroundLinkParams& g) {
  if (!(bandwidth_hz > 0.0)) throw DomainError("bandwidth must be > 0");
  const double gain = ground_gain(uav, node, g.g0);
  return bandwidth_hz * std::log2(1.0 + tx_power_w * gain / g.noise_power_w);
}

}  // namespace lain
