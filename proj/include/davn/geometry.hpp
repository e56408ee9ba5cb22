#pragma once

#include <cmath>

namespace davn {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Vec2&) const = default;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec2 horizontal() const { return {x, y}; }
    bool operator==(const Vec3&) const = default;
};

inline double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline double distance(const Vec3& a, const Vec3& b) {
    return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

inline constexpr double kmh_to_ms(double kmh) { return kmh / 3.6; }

}  // namespace davn
