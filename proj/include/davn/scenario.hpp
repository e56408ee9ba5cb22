#pragma once

// Dataset generation: per step, associate vehicles with UAVs, evaluate
// request delays and UAV energy, and emit one observation per UAV.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "davn/link.hpp"
#include "davn/mobility.hpp"
#include "davn/propulsion.hpp"
#include "davn/queueing.hpp"
#include "davn/trajectory.hpp"

namespace davn::scenario {

inline constexpr std::size_t fleet_size = 4;

/// Request classes and how their arrival rates scale with the number of
/// vehicles served by a UAV.
struct QueueParams {
    double cpu_frequency = 2.15e9;  // Hz
    int cpu_cores = 4;
    double safety_message_bits = 512.0 * 8.0;
    double state_message_bits = 32.0 * 8.0;
    bool paper_moments = false;  ///< use the published table moments verbatim
    double lambda1_per_vehicle = 0.2;
    double lambda2 = 2.5;
    bool lambda2_aggregate = false;  ///< lambda2 is the UAV total, not per vehicle
    double max_wait_safety = 0.2;
    double max_wait_state = 0.2;

    /// Exponential service, rate = cores * frequency / message bits.
    queueing::Moments safety_moments() const;
    /// Constant service of message bits / (cores * frequency).
    queueing::Moments state_moments() const;
    void validate() const;
};

struct Arrivals {
    double high = 0.0;  ///< class-1 rate, Poisson aggregate
    double low = 0.0;   ///< class-2 total rate
};

Arrivals build_arrivals(std::size_t vehicles, const QueueParams& q);

struct D2dTransfer {
    int source = 0;  ///< uav id
    int target = 0;
    double messages = 1.0;  ///< per step
};

struct RunConfig {
    std::size_t steps = 500;
    std::uint64_t seed = 1;
    std::filesystem::path trace;        ///< empty: synthetic highway
    std::vector<std::size_t> densities; ///< synthetic sweep members
    trajectory::FleetLayout fleet = trajectory::default_fleet();
    link::LinkBudget link;
    double vehicle_tx_power = 0.280;    ///< W, uplink
    double interference_radius = 0.0;   ///< m; <= 0 means unlimited
    propulsion::PropulsionParams propulsion;
    bool hover_charging = true;
    QueueParams queue;
    double association_radius = 500.0;
    link::DelayMode delay_mode = link::DelayMode::paper_literal;
    bool include_expired_capped = false;
    std::vector<D2dTransfer> d2d;
    mobility::HighwayConfig highway;
    std::filesystem::path output_dir = ".";
    std::filesystem::path request_log;  ///< optional per-request component log

    void validate() const;
};

/// Nearest UAV by horizontal distance among those within `radius`; ties go
/// to the lower index. Returns an index into `uavs` per vehicle.
std::vector<std::optional<std::size_t>> associate(std::span<const mobility::VehicleState> vehicles,
                                                  std::span<const trajectory::UavState> uavs,
                                                  double radius);

struct PropagationContext {
    double uplink_distance = 0.0;  // m
    double uplink_rate = 0.0;      // bit/s
    double uplink_bits = 0.0;
    double downlink_distance = 0.0;
    double downlink_rate = 0.0;
    double downlink_bits = 0.0;
};

struct RequestDelay {
    double uplink = 0.0;
    double queueing = 0.0;
    double downlink = 0.0;
    double total = 0.0;
    bool expired = false;
};

/// Uplink propagation + mean sojourn at the UAV + downlink propagation.
/// Throws ZeroCapacity when either link has zero rate.
RequestDelay request_delay(const PropagationContext& ctx, double sojourn, double max_wait,
                           link::DelayMode mode);

struct PeerTransfer {
    double capacity = 0.0;  // bit/s
    double messages = 0.0;
};

struct MovementLeg {
    Vec3 from;
    Vec3 to;
    double duration = 0.0;  // s
};

struct EnergyBreakdown {
    double d2v = 0.0;
    double d2d = 0.0;
    double movement = 0.0;

    double total() const { return d2v + d2d + movement; }
};

/// Energy of one UAV over one step: one message per served vehicle, the
/// configured UAV-to-UAV transfers, and the movement leg flown at
/// displacement / duration. A zero-length leg costs hover power when
/// `hover_charging` is set.
EnergyBreakdown uav_step_energy(std::span<const double> d2v_capacities,
                                std::span<const PeerTransfer> peers, const MovementLeg& leg,
                                const link::LinkBudget& budget,
                                const propulsion::PropulsionParams& prop, bool hover_charging);

struct Observation {
    int uav_id = 0;
    Vec3 position;
    int heading = 1;
    std::size_t vehicles = 0;
    std::optional<double> mean_wait;  ///< empty: unstable queue or every request expired
    double mean_energy = 0.0;
    double mean_risky_time = 0.0;
    double mean_blocking_time = 0.0;
};

struct Sample {
    std::size_t step = 0;
    std::vector<Observation> observations;
    std::size_t collisions = 0;
};

struct StepStats {
    std::size_t step = 0;
    std::size_t vehicles = 0;
    std::size_t associated = 0;
    std::size_t unassociated = 0;
    std::size_t collisions = 0;
    std::size_t requests = 0;
    std::size_t expired = 0;
    std::size_t link_unusable = 0;
    std::size_t unstable_uavs = 0;
};

struct Summary {
    std::size_t steps = 0;
    std::size_t requests = 0;
    std::size_t expired = 0;
    std::size_t link_unusable = 0;
    std::size_t unstable_uav_steps = 0;
    std::vector<double> energy_total;  ///< per UAV, J

    double expired_fraction() const {
        return requests == 0 ? 0.0 : static_cast<double>(expired) / static_cast<double>(requests);
    }
};

struct RunResult {
    std::vector<Sample> samples;
    std::vector<StepStats> step_stats;
    Summary summary;
};

/// Runs the pipeline over a given vehicle trace. `seed` drives the UAV
/// altitude walks. When `request_log` is non-null every evaluated request
/// is written there with its delay components.
RunResult run(const RunConfig& config, const mobility::Trace& vehicles, std::uint64_t seed,
              std::ostream* request_log = nullptr);

inline constexpr std::string_view dataset_header =
    "step,uav_id,x,y,z,theta,rho,mean_wait,mean_energy,mean_risky_time,mean_blocking_time,"
    "collisions";
inline constexpr std::string_view step_stats_header =
    "step,vehicles,associated,unassociated,collisions,requests,expired,link_unusable,unstable_uavs";
inline constexpr std::string_view request_log_header =
    "step,uav_id,vehicle_id,class,uplink,queueing,downlink,total,expired";

void write_dataset(std::ostream& out, std::span<const Sample> samples);
void write_step_stats(std::ostream& out, std::span<const StepStats> stats);
void write_summary(std::ostream& out, const Summary& summary);

struct OutputFiles {
    std::filesystem::path dataset;
    std::filesystem::path summary;
    std::filesystem::path step_stats;
};

/// Output file names for a sweep member (`density`) or a trace run.
OutputFiles output_files(const std::filesystem::path& dir, std::optional<std::size_t> density);

/// Runs the configured source: the trace if one is set, otherwise one
/// synthetic member per density (members run concurrently; member k uses
/// seed ^ k). Writes the files and returns their paths.
std::vector<OutputFiles> run_and_write(const RunConfig& config);

}  // namespace davn::scenario
