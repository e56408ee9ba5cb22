#include "davn/propulsion.hpp"

#include <cmath>
#include <string>

#include "davn/error.hpp"

namespace davn::propulsion {

void PropulsionParams::validate() const {
    for (double v : {blade_profile_power, induced_power, tip_speed, hover_induced_velocity,
                     fuselage_drag_ratio, rotor_solidity, air_density, rotor_disc_area}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidParameter("propulsion parameters must be strictly positive");
        }
    }
}

double motion_power(double v, const PropulsionParams& p) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InvalidParameter("speed must be non-negative, got " + std::to_string(v));
    }
    const double v2 = v * v;
    const double v0_2 = p.hover_induced_velocity * p.hover_induced_velocity;

    const double blade = p.blade_profile_power * (1.0 + 3.0 * v2 / (p.tip_speed * p.tip_speed));
    // sqrt(1 + x^2) - x with x = v^2 / (2 v0^2), written as 1 / (sqrt(1 + x^2) + x)
    // so it stays accurate when x is large.
    const double x = v2 / (2.0 * v0_2);
    const double induced = p.induced_power * std::sqrt(1.0 / (std::sqrt(1.0 + x * x) + x));
    const double parasite =
        0.5 * p.fuselage_drag_ratio * p.air_density * p.rotor_solidity * p.rotor_disc_area * v2 * v;
    return blade + induced + parasite;
}

double movement_energy(const Vec3& from, const Vec3& to, double v, const PropulsionParams& p) {
    const double d = distance(from, to);
    if (d == 0.0) {
        return 0.0;
    }
    if (!(v > 0.0)) {
        throw InvalidParameter("movement between distinct points needs a positive speed");
    }
    return d / v * motion_power(v, p);
}

}  // namespace davn::propulsion
