#pragma once

// Per-step vehicle states, either ingested from a trace file or produced by
// a synthetic circular three-lane highway.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "davn/geometry.hpp"

namespace davn::mobility {

enum class VehicleKind { ordinary, aggressive, emergency };

std::string_view to_string(VehicleKind k);
VehicleKind parse_kind(std::string_view s);  // throws InvalidParameter

struct VehicleState {
    std::string id;
    Vec2 position;
    double speed = 0.0;  // m/s
    VehicleKind kind = VehicleKind::ordinary;
    double risky_time = 0.0;     // s, cumulative
    double blocking_time = 0.0;  // s, cumulative
    bool collided = false;

    bool operator==(const VehicleState&) const = default;
};

/// Number of collisions at a step: every collision involves a pair of
/// flagged vehicles, so this is ceil(flagged / 2).
std::size_t collision_count(std::span<const VehicleState> vehicles);

/// Immutable step -> vehicles index. Steps without records are empty.
class Trace {
public:
    Trace() = default;
    explicit Trace(std::vector<std::vector<VehicleState>> steps) : steps_(std::move(steps)) {}

    std::size_t step_count() const { return steps_.size(); }
    std::span<const VehicleState> at(std::size_t step) const;
    bool operator==(const Trace&) const = default;

private:
    std::vector<std::vector<VehicleState>> steps_;
};

inline constexpr std::string_view trace_header = "step,vehicle_id,x,y,speed,kind,t_r,t_b,collided";

/// Parses the trace CSV dialect. Errors carry the offending line number.
Trace ingest_trace(std::istream& in);
Trace ingest_trace_file(const std::filesystem::path& path);

void write_trace(std::ostream& out, const Trace& trace);
void write_trace_file(const std::filesystem::path& path, const Trace& trace);

struct HighwayConfig {
    double radius = 637.0;  // m, centre lane
    int lanes = 3;
    double lane_spacing = 3.5;         // m
    double min_speed_kmh = 60.0;
    double max_speed_kmh = 100.0;
    double aggressive_fraction = 0.10;
    double emergency_fraction = 0.02;
    double aggressive_overspeed = 0.10;  ///< aggressive drivers exceed the cap by up to this
    double step_period = 0.4;            // s
    double risky_headway = 1.0;          // s
    double blocking_distance = 100.0;    // m
    double collision_spacing = 5.0;      // m

    void validate() const;
};

/// Synthetic stand-in for a microscopic traffic simulator: `density`
/// vehicles at constant speed around a circular road. Produces `steps`
/// steps (0 .. steps-1), step 0 being the initial placement.
Trace synth_highway(const HighwayConfig& config, std::size_t density, std::uint64_t seed,
                    std::size_t steps);

}  // namespace davn::mobility
