#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "davn/error.hpp"
#include "davn/mobility.hpp"
#include "davn/rng.hpp"

namespace davn::mobility {

void HighwayConfig::validate() const {
    if (!(radius > 0.0)) throw InvalidParameter("highway radius must be positive");
    if (lanes < 1) throw InvalidParameter("highway needs at least one lane");
    if (!(lane_spacing >= 0.0)) throw InvalidParameter("lane spacing must be non-negative");
    if (radius - lane_spacing * (lanes - 1) / 2.0 <= 0.0) {
        throw InvalidParameter("innermost lane has non-positive radius");
    }
    if (!(min_speed_kmh > 0.0 && min_speed_kmh <= max_speed_kmh)) {
        throw InvalidParameter("speed range must satisfy 0 < min <= max");
    }
    if (!(aggressive_fraction >= 0.0 && emergency_fraction >= 0.0 &&
          aggressive_fraction + emergency_fraction <= 1.0)) {
        throw InvalidParameter("vehicle kind fractions must be non-negative and sum to <= 1");
    }
    if (!(aggressive_overspeed >= 0.0)) throw InvalidParameter("overspeed must be non-negative");
    if (!(step_period > 0.0)) throw InvalidParameter("step period must be positive");
    if (!(risky_headway >= 0.0 && blocking_distance >= 0.0 && collision_spacing >= 0.0)) {
        throw InvalidParameter("interaction thresholds must be non-negative");
    }
}

namespace {

struct Car {
    std::string id;
    int lane;
    double lane_radius;
    double arc;    // position along the lane, [0, circumference)
    double speed;  // m/s
    VehicleKind kind;
    double risky = 0.0;
    double blocking = 0.0;
    bool collided = false;

    double circumference() const { return 2.0 * std::numbers::pi * lane_radius; }
};

double wrap(double arc, double length) {
    double r = std::fmod(arc, length);
    if (r < 0.0) r += length;
    return r;
}

VehicleState snapshot(const Car& c) {
    const double angle = c.arc / c.lane_radius;
    return VehicleState{c.id,
                        {c.lane_radius * std::cos(angle), c.lane_radius * std::sin(angle)},
                        c.speed,
                        c.kind,
                        c.risky,
                        c.blocking,
                        c.collided};
}

// Applies one step of lane interactions to the cars of a single lane.
void interact(std::vector<Car*>& lane, const HighwayConfig& cfg) {
    const std::size_t n = lane.size();
    if (n < 2) return;
    std::sort(lane.begin(), lane.end(), [](const Car* a, const Car* b) {
        return a->arc != b->arc ? a->arc < b->arc : a->id < b->id;
    });
    const double length = lane.front()->circumference();
    auto gap_to_leader = [&](std::size_t i) {
        return wrap(lane[(i + 1) % n]->arc - lane[i]->arc, length);
    };

    // Collisions are judged on the positions reached this step, then
    // followers are pushed back to the minimum spacing and slowed down.
    std::vector<bool> hit(n, false);
    std::vector<double> respaced(n);
    std::vector<bool> follower(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (gap_to_leader(i) < cfg.collision_spacing) {
            hit[i] = true;
            hit[(i + 1) % n] = true;
            follower[i] = true;
            respaced[i] = wrap(lane[(i + 1) % n]->arc - cfg.collision_spacing, length);
        }
    }
    std::vector<double> leader_speed(n);
    for (std::size_t i = 0; i < n; ++i) leader_speed[i] = lane[(i + 1) % n]->speed;
    for (std::size_t i = 0; i < n; ++i) {
        lane[i]->collided = hit[i];
        if (follower[i]) {
            lane[i]->arc = respaced[i];
            lane[i]->speed = std::min(lane[i]->speed, 0.9 * leader_speed[i]);
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        Car& car = *lane[i];
        const std::size_t leader = (i + 1) % n;
        const double gap = wrap(lane[leader]->arc - car.arc, length);
        if (car.speed > 0.0 && gap / car.speed < cfg.risky_headway) {
            car.risky += cfg.step_period;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || lane[j]->kind != VehicleKind::emergency) continue;
            const double behind = wrap(car.arc - lane[j]->arc, length);
            if (behind > 0.0 && behind <= cfg.blocking_distance) {
                car.blocking += cfg.step_period;
                break;
            }
        }
    }
}

}  // namespace

Trace synth_highway(const HighwayConfig& cfg, std::size_t density, std::uint64_t seed,
                    std::size_t steps) {
    cfg.validate();
    if (density == 0 || steps == 0) {
        return Trace{};
    }
    Rng rng(seed, 7);

    std::vector<Car> cars;
    cars.reserve(density);
    const double offset = rng.uniform();
    const double vmin = cfg.min_speed_kmh / 3.6;
    const double vmax = cfg.max_speed_kmh / 3.6;
    for (std::size_t k = 0; k < density; ++k) {
        Car c;
        c.id = "veh" + std::to_string(k);
        c.lane = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.lanes)));
        c.lane_radius = cfg.radius + (c.lane - (cfg.lanes - 1) / 2.0) * cfg.lane_spacing;
        const double angle = 2.0 * std::numbers::pi * (static_cast<double>(k) + offset) /
                             static_cast<double>(density);
        c.arc = angle * c.lane_radius;

        const double u = rng.uniform();
        if (u < cfg.emergency_fraction) {
            c.kind = VehicleKind::emergency;
            c.speed = rng.uniform(vmin, vmax);
        } else if (u < cfg.emergency_fraction + cfg.aggressive_fraction) {
            c.kind = VehicleKind::aggressive;
            c.speed = rng.uniform(vmin, vmax * (1.0 + cfg.aggressive_overspeed));
        } else {
            c.kind = VehicleKind::ordinary;
            c.speed = rng.uniform(vmin, vmax);
        }
        cars.push_back(std::move(c));
    }

    std::vector<std::vector<VehicleState>> out(steps);
    auto record = [&](std::size_t s) {
        out[s].reserve(cars.size());
        for (const auto& c : cars) out[s].push_back(snapshot(c));
    };
    record(0);

    std::vector<std::vector<Car*>> lanes(static_cast<std::size_t>(cfg.lanes));
    for (std::size_t s = 1; s < steps; ++s) {
        for (auto& lane : lanes) lane.clear();
        for (auto& c : cars) {
            c.arc = wrap(c.arc + c.speed * cfg.step_period, c.circumference());
            lanes[static_cast<std::size_t>(c.lane)].push_back(&c);
        }
        for (auto& lane : lanes) interact(lane, cfg);
        record(s);
    }
    return Trace(std::move(out));
}

}  // namespace davn::mobility
