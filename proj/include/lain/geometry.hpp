#ifndef LAIN_GEOMETRY_HPP_
#define LAIN_GEOMETRY_HPP_

#include <cmath>

namespace lain {

// Meters. z is altitude above ground.
struct Position3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Position3&) const = default;
};

inline double horizontal_distance(const Position3& a, const Position3& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance(const Position3& a, const Position3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace lain

#endif  // LAIN_GEOMETRY_HPP_
