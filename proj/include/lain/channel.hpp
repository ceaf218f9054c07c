#ifndef LAIN_CHANNEL_HPP_
#define LAIN_CHANNEL_HPP_

#include "lain/geometry.hpp"

namespace lain {

constexpr double kSpeedOfLight = 3.0e8;

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double linear);

// Default noise floor, -114 dBm.
double default_noise_power_w();

// Sigmoid line-of-sight air-to-ground model. Defaults are the usual
// dense-urban constants.
struct AirGroundParams {
  double zeta_los_db = 1.0;
  double zeta_nlos_db = 20.0;
  double sigmoid_a = 9.61;
  double sigmoid_b = 0.16;
  double carrier_hz = 2.4e9;
  double light_speed = kSpeedOfLight;

  void validate() const;
  bool operator==(const AirGroundParams&) const = default;
};

// Inverse-square ground/peer link.
struct GroundLinkParams {
  double g0 = 1e-4;               // linear gain at 1 m
  double noise_power_w = default_noise_power_w();
  double bandwidth_hz = 10e6;     // total, shared among concurrent links

  void validate() const;
  bool operator==(const GroundLinkParams&) const = default;
};

// Elevation of `uav` as seen from `abs_pos`, degrees in [0, 90].
// Throws GeometryError for coincident positions.
double elevation_angle_deg(const Position3& uav, const Position3& abs_pos);

// Mean air-to-ground path loss in dB; the sigmoid argument is in degrees.
double air_ground_pathloss_db(const Position3& uav, const Position3& abs_pos,
                              const AirGroundParams& p);

// Shannon rate of the UAV-to-ABS link. The dB path loss is turned into a
// linear gain 10^(-L/10) before forming the SNR.
double rate_uav_abs(const Position3& uav, const Position3& abs_pos,
                    double tx_power_w, double bandwidth_hz,
                    const AirGroundParams& p, double noise_w);

// G0 * d^-2. Throws GeometryError when d == 0.
double ground_gain(const Position3& a, const Position3& b, double g0);

// Shannon rate of a UAV-to-TBS or UAV-to-UAV link.
double rate_uav_node(const Position3& uav, const Position3& node,
                     double tx_power_w, double bandwidth_hz,
                     const GroundLinkParams& g);

}  // namespace lain

#endif  // LAIN_CHANNEL_HPP_
