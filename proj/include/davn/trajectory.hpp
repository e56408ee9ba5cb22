#pragma once

// UAV trajectories: constant-speed motion along an ellipse in the horizontal
// plane, bounded random walk in altitude.

#include <cstdint>
#include <vector>

#include "davn/geometry.hpp"

namespace davn::trajectory {

struct EllipseSpec {
    Vec2 center;
    double semi_major = 637.0;  ///< along x
    double semi_minor = 318.5;  ///< along y
    int direction = +1;         ///< +1 counter-clockwise, -1 clockwise

    void validate() const;
};

enum class HorizontalMode {
    ellipse,       ///< constant tangential speed along the ellipse
    paper_literal  ///< x = v_hor * dt * s, y = v_vrt * dt * s
};

struct TrajectoryConfig {
    double horizontal_speed = 30.0 / 3.6;  // m/s
    double vertical_speed = 10.0 / 3.6;    // m/s
    double step_period = 0.4;              // s
    double z_min = 100.0;
    double z_max = 150.0;
    double vertical_step = 0.0;  ///< m; 0 means vertical_speed * step_period
    double p_up = 0.5;
    double initial_altitude = 125.0;
    double initial_phase = 0.0;  // rad
    int initial_heading = +1;
    HorizontalMode horizontal = HorizontalMode::ellipse;

    double effective_vertical_step() const {
        return vertical_step > 0.0 ? vertical_step : vertical_speed * step_period;
    }
    void validate() const;
};

struct UavState {
    int uav_id = 0;
    Vec3 position;
    int heading = +1;  ///< +1 last vertical move up, -1 down
    double phase = 0.0;

    bool operator==(const UavState&) const = default;
};

Vec2 ellipse_position(const EllipseSpec& spec, double phase);

/// Local speed |d(position)/d(phase)| of the parametric ellipse.
double local_radius(const EllipseSpec& spec, double phase);

/// Phase after travelling `speed * dt` along the ellipse. The curve speed is
/// sampled at the midpoint of the step so chord lengths track the commanded
/// speed to second order.
double advance_phase(const EllipseSpec& spec, double phase, double speed, double dt);

struct AltitudeTrack {
    std::vector<double> z;     ///< steps + 1 values, z[0] = initial altitude
    std::vector<int> heading;  ///< heading after each step, heading[0] = initial
};

AltitudeTrack random_walk_z(std::size_t steps, const TrajectoryConfig& config, std::uint64_t seed);

/// Returns steps + 1 states including the initial one.
std::vector<UavState> generate_trajectory(int uav_id, const TrajectoryConfig& config,
                                          const EllipseSpec& spec, std::size_t steps,
                                          std::uint64_t seed);

/// The four-UAV layout: ellipses centred on a circle of radius `ring`, speeds
/// 5/10/20/30 km/h, phases staggered by a quarter turn.
struct FleetLayout {
    std::vector<EllipseSpec> ellipses;
    std::vector<TrajectoryConfig> configs;
};

FleetLayout default_fleet(double ring = 637.0);

/// Trajectories for every UAV in the layout; UAV ids start at 1 and each UAV
/// draws from its own RNG stream.
std::vector<std::vector<UavState>> generate_fleet(const FleetLayout& fleet, std::size_t steps,
                                                  std::uint64_t seed);

}  // namespace davn::trajectory

#include <iosfwd>
#include <string_view>

namespace davn::trajectory {

inline constexpr std::string_view trajectory_header = "step,uav_id,x,y,z,heading";

/// One row per (step, uav) in the dataset float dialect.
void write_trajectories(std::ostream& out, const std::vector<std::vector<UavState>>& fleet);

}  // namespace davn::trajectory
