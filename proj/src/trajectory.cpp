#include "davn/trajectory.hpp"

#include <cmath>
#include <numbers>

#include "davn/error.hpp"
#include "davn/rng.hpp"

namespace davn::trajectory {

void EllipseSpec::validate() const {
    if (!(semi_major > 0.0) || !(semi_minor > 0.0)) {
        throw InvalidParameter("ellipse semi-axes must be positive");
    }
    if (direction != 1 && direction != -1) {
        throw InvalidParameter("ellipse direction must be +1 or -1");
    }
}

void TrajectoryConfig::validate() const {
    if (!(z_min < z_max)) throw InvalidParameter("altitude range must satisfy z_min < z_max");
    if (!(step_period > 0.0)) throw InvalidParameter("step period must be positive");
    if (!(effective_vertical_step() > 0.0)) throw InvalidParameter("vertical step must be positive");
    if (!(p_up >= 0.0 && p_up <= 1.0)) throw InvalidParameter("p_up must lie in [0, 1]");
    if (!(horizontal_speed > 0.0)) throw InvalidParameter("horizontal speed must be positive");
    if (!(initial_altitude >= z_min && initial_altitude <= z_max)) {
        throw InvalidParameter("initial altitude outside the altitude range");
    }
    if (initial_heading != 1 && initial_heading != -1) {
        throw InvalidParameter("initial heading must be +1 or -1");
    }
}

Vec2 ellipse_position(const EllipseSpec& spec, double phase) {
    return {spec.center.x + spec.semi_major * std::cos(phase),
            spec.center.y + spec.semi_minor * std::sin(phase)};
}

double local_radius(const EllipseSpec& spec, double phase) {
    return std::hypot(spec.semi_major * std::sin(phase), spec.semi_minor * std::cos(phase));
}

double advance_phase(const EllipseSpec& spec, double phase, double speed, double dt) {
    if (!(speed > 0.0)) {
        throw InvalidParameter("horizontal speed must be positive");
    }
    const double arc = speed * dt;
    const double half = phase + spec.direction * 0.5 * arc / local_radius(spec, phase);
    return phase + spec.direction * arc / local_radius(spec, half);
}

AltitudeTrack random_walk_z(std::size_t steps, const TrajectoryConfig& config, std::uint64_t seed) {
    config.validate();
    const double dz = config.effective_vertical_step();
    Rng rng(seed);

    AltitudeTrack track;
    track.z.reserve(steps + 1);
    track.heading.reserve(steps + 1);

    // Altitude is kept as an integer number of steps from z0 so it never
    // drifts off the lattice z0 + k dz.
    long level = 0;
    int heading = config.initial_heading;
    track.z.push_back(config.initial_altitude);
    track.heading.push_back(heading);
    for (std::size_t i = 0; i < steps; ++i) {
        const int dir = rng.bernoulli(config.p_up) ? +1 : -1;
        const double candidate = config.initial_altitude + static_cast<double>(level + dir) * dz;
        if (candidate >= config.z_min && candidate <= config.z_max) {
            level += dir;
            heading = dir;
        }
        track.z.push_back(config.initial_altitude + static_cast<double>(level) * dz);
        track.heading.push_back(heading);
    }
    return track;
}

std::vector<UavState> generate_trajectory(int uav_id, const TrajectoryConfig& config,
                                          const EllipseSpec& spec, std::size_t steps,
                                          std::uint64_t seed) {
    spec.validate();
    const AltitudeTrack alt = random_walk_z(steps, config, seed);

    std::vector<UavState> out;
    out.reserve(steps + 1);
    double phase = config.initial_phase;
    for (std::size_t s = 0; s <= steps; ++s) {
        Vec2 xy;
        if (config.horizontal == HorizontalMode::paper_literal) {
            const double t = static_cast<double>(s) * config.step_period;
            xy = {config.horizontal_speed * t, config.vertical_speed * t};
        } else {
            xy = ellipse_position(spec, phase);
        }
        out.push_back(UavState{uav_id, {xy.x, xy.y, alt.z[s]}, alt.heading[s], phase});
        phase = advance_phase(spec, phase, config.horizontal_speed, config.step_period);
    }
    return out;
}

FleetLayout default_fleet(double ring) {
    const Vec2 centers[4] = {{0.0, ring}, {ring, 0.0}, {0.0, -ring}, {-ring, 0.0}};
    const double speeds_kmh[4] = {5.0, 10.0, 20.0, 30.0};
    FleetLayout fleet;
    for (int i = 0; i < 4; ++i) {
        EllipseSpec e;
        e.center = centers[i];
        e.semi_major = ring;
        e.semi_minor = ring / 2.0;
        fleet.ellipses.push_back(e);

        TrajectoryConfig c;
        c.horizontal_speed = kmh_to_ms(speeds_kmh[i]);
        c.initial_phase = i * std::numbers::pi / 2.0;
        fleet.configs.push_back(c);
    }
    return fleet;
}

std::vector<std::vector<UavState>> generate_fleet(const FleetLayout& fleet, std::size_t steps,
                                                  std::uint64_t seed) {
    if (fleet.ellipses.size() != fleet.configs.size()) {
        throw InvalidParameter("fleet layout needs one ellipse per trajectory config");
    }
    std::vector<std::vector<UavState>> out;
    for (std::size_t i = 0; i < fleet.configs.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        out.push_back(generate_trajectory(id, fleet.configs[i], fleet.ellipses[i], steps,
                                          stream_seed(seed, 100 + i)));
    }
    return out;
}

}  // namespace davn::trajectory

#include <ostream>

#include "davn/csv.hpp"

namespace davn::trajectory {

void write_trajectories(std::ostream& out, const std::vector<std::vector<UavState>>& fleet) {
    std::string buf;
    buf.append(trajectory_header).push_back('\n');
    const std::size_t steps = fleet.empty() ? 0 : fleet.front().size();
    for (std::size_t s = 0; s < steps; ++s) {
        for (const auto& track : fleet) {
            const UavState& u = track.at(s);
            buf += std::to_string(s) + ',' + std::to_string(u.uav_id) + ',' +
                   csv::number(u.position.x) + ',' + csv::number(u.position.y) + ',' +
                   csv::number(u.position.z) + ',' + std::to_string(u.heading) + '\n';
        }
    }
    out << buf;
}

}  // namespace davn::trajectory
