#pragma once

#include "davn/geometry.hpp"

namespace davn::propulsion {

/// Rotary-wing power model constants.
struct PropulsionParams {
    double blade_profile_power = 84.14;   ///< P0, W
    double induced_power = 88.63;         ///< P1, W
    double tip_speed = 120.0;             ///< U_tip, m/s
    double hover_induced_velocity = 4.03; ///< v0, m/s
    double fuselage_drag_ratio = 0.6;     ///< d0
    double rotor_solidity = 0.05;         ///< s
    double air_density = 1.225;           ///< kg/m^3
    double rotor_disc_area = 0.503;       ///< m^2

    void validate() const;
};

/// Power drawn when flying level at speed `v` (m/s). At v = 0 this is the
/// hover power P0 + P1.
double motion_power(double v, const PropulsionParams& p = {});

/// Energy to fly the straight leg `from` -> `to` at speed `v`.
double movement_energy(const Vec3& from, const Vec3& to, double v, const PropulsionParams& p = {});

}  // namespace davn::propulsion
