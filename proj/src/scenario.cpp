#include "davn/scenario.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <unordered_map>

#include "davn/csv.hpp"
#include "davn/error.hpp"

namespace davn::scenario {

using mobility::VehicleState;
using queueing::ServiceClass;
using trajectory::UavState;

queueing::Moments QueueParams::safety_moments() const {
    if (paper_moments) {
        return {4.763e-7, 2.269e-13, true};
    }
    return queueing::exp_moments(cpu_frequency * cpu_cores / safety_message_bits);
}

queueing::Moments QueueParams::state_moments() const {
    if (paper_moments) {
        return {2.977e-8, 0.0, true};
    }
    return queueing::det_moments(state_message_bits / (cpu_frequency * cpu_cores));
}

void QueueParams::validate() const {
    if (!(cpu_frequency > 0.0) || cpu_cores < 1) {
        throw InvalidParameter("processor frequency and core count must be positive");
    }
    if (!(safety_message_bits > 0.0) || !(state_message_bits > 0.0)) {
        throw InvalidParameter("message sizes must be positive");
    }
    if (!(lambda1_per_vehicle >= 0.0) || !(lambda2 >= 0.0)) {
        throw InvalidParameter("arrival rates must be non-negative");
    }
    if (!(max_wait_safety > 0.0) || !(max_wait_state > 0.0)) {
        throw InvalidParameter("maximum waiting times must be positive");
    }
}

Arrivals build_arrivals(std::size_t vehicles, const QueueParams& q) {
    const double n = static_cast<double>(vehicles);
    Arrivals a;
    a.high = q.lambda1_per_vehicle * n;
    a.low = q.lambda2_aggregate ? (vehicles > 0 ? q.lambda2 : 0.0) : q.lambda2 * n;
    return a;
}

void RunConfig::validate() const {
    if (steps < 1) throw InvalidParameter("steps must be at least 1");
    if (!(association_radius > 0.0)) throw InvalidParameter("association radius must be positive");
    if (fleet.ellipses.size() != fleet_size || fleet.configs.size() != fleet_size) {
        throw InvalidParameter("the scenario needs exactly four UAVs");
    }
    for (std::size_t i = 0; i < fleet_size; ++i) {
        fleet.ellipses[i].validate();
        fleet.configs[i].validate();
    }
    link.validate();
    propulsion.validate();
    queue.validate();
    highway.validate();
    if (!(vehicle_tx_power > 0.0)) throw InvalidParameter("vehicle transmit power must be positive");
    for (const auto& t : d2d) {
        const auto valid = [](int id) { return id >= 1 && id <= static_cast<int>(fleet_size); };
        if (!valid(t.source) || !valid(t.target) || t.source == t.target) {
            throw InvalidParameter("D2D transfer needs two distinct UAV ids in 1..4");
        }
        if (!(t.messages >= 0.0)) throw InvalidParameter("D2D message count must be non-negative");
    }
}

std::vector<std::optional<std::size_t>> associate(std::span<const VehicleState> vehicles,
                                                  std::span<const UavState> uavs, double radius) {
    std::vector<std::optional<std::size_t>> out(vehicles.size());
    for (std::size_t j = 0; j < vehicles.size(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < uavs.size(); ++i) {
            const double d = distance(uavs[i].position.horizontal(), vehicles[j].position);
            if (d <= radius && d < best) {
                best = d;
                out[j] = i;
            }
        }
    }
    return out;
}

RequestDelay request_delay(const PropagationContext& ctx, double sojourn, double max_wait,
                           link::DelayMode mode) {
    RequestDelay r;
    r.uplink = link::propagation_delay(ctx.uplink_distance, ctx.uplink_rate, ctx.uplink_bits, mode);
    r.queueing = sojourn;
    r.downlink =
        link::propagation_delay(ctx.downlink_distance, ctx.downlink_rate, ctx.downlink_bits, mode);
    r.total = r.uplink + r.queueing + r.downlink;
    r.expired = r.total > max_wait;
    return r;
}

EnergyBreakdown uav_step_energy(std::span<const double> d2v_capacities,
                                std::span<const PeerTransfer> peers, const MovementLeg& leg,
                                const link::LinkBudget& budget,
                                const propulsion::PropulsionParams& prop, bool hover_charging) {
    EnergyBreakdown e;
    for (double c : d2v_capacities) {
        e.d2v += link::transmit_energy(budget.message_bits, c, budget.tx_power);
    }
    for (const auto& p : peers) {
        if (p.messages > 0.0) {
            e.d2d += p.messages * link::transmit_energy(budget.message_bits, p.capacity, budget.tx_power);
        }
    }
    const double d = distance(leg.from, leg.to);
    if (d > 0.0) {
        if (!(leg.duration > 0.0)) throw InvalidParameter("movement leg needs a positive duration");
        e.movement = propulsion::movement_energy(leg.from, leg.to, d / leg.duration, prop);
    } else if (hover_charging) {
        e.movement = leg.duration * propulsion::motion_power(0.0, prop);
    }
    return e;
}

namespace {

struct RequestClass {
    ServiceClass id;
    double weight;  // per-vehicle arrival rate
    double uplink_bits;
    double max_wait;
};

class StepEvaluator {
public:
    explicit StepEvaluator(const RunConfig& cfg) : cfg_(cfg) {}

    // Downlink SINR at `pos` from UAV `serving`, interfered by the other
    // transmitting UAVs within the interference radius of the receiver.
    double downlink_rate(std::span<const UavState> uavs, std::size_t serving, Vec2 pos,
                         const std::vector<bool>& transmitting) const {
        std::vector<link::Interferer> interferers;
        for (std::size_t k = 0; k < uavs.size(); ++k) {
            if (k == serving || !transmitting[k]) continue;
            if (cfg_.interference_radius > 0.0 &&
                distance(uavs[k].position.horizontal(), pos) > cfg_.interference_radius) {
                continue;
            }
            interferers.push_back({cfg_.link.tx_power, gain({uavs[k].position, pos})});
        }
        const double s = link::sinr(cfg_.link.tx_power, gain({uavs[serving].position, pos}),
                                    interferers, cfg_.link);
        return link::capacity(s, cfg_.link.bandwidth);
    }

    double uplink_rate(const UavState& uav, Vec2 pos) const {
        const double s = link::sinr(cfg_.vehicle_tx_power, gain({uav.position, pos}), {}, cfg_.link);
        return link::capacity(s, cfg_.link.bandwidth);
    }

    double d2d_rate(std::span<const UavState> uavs, std::size_t src, std::size_t dst,
                    const std::vector<bool>& transmitting) const {
        std::vector<link::Interferer> interferers;
        for (std::size_t k = 0; k < uavs.size(); ++k) {
            if (k == src || k == dst || !transmitting[k]) continue;
            const double pl = link::path_loss_d2d(uavs[k].position, uavs[dst].position, cfg_.link);
            interferers.push_back({cfg_.link.tx_power, link::channel_gain(pl, cfg_.link.gain)});
        }
        const double pl = link::path_loss_d2d(uavs[src].position, uavs[dst].position, cfg_.link);
        const double s = link::sinr(cfg_.link.tx_power, link::channel_gain(pl, cfg_.link.gain),
                                    interferers, cfg_.link);
        return link::capacity(s, cfg_.link.bandwidth);
    }

private:
    double gain(const link::LinkGeometry& g) const {
        return link::channel_gain(link::mean_path_loss_d2v(g, cfg_.link), cfg_.link.gain);
    }

    const RunConfig& cfg_;
};

}  // namespace

RunResult run(const RunConfig& config, const mobility::Trace& vehicles, std::uint64_t seed,
              std::ostream* request_log) {
    config.validate();
    const auto tracks = trajectory::generate_fleet(config.fleet, config.steps, seed);
    const StepEvaluator eval(config);

    const auto safety = config.queue.safety_moments();
    const auto state = config.queue.state_moments();
    const double dt = config.fleet.configs.front().step_period;

    RunResult result;
    result.samples.reserve(config.steps);
    result.step_stats.reserve(config.steps);
    result.summary.steps = config.steps;
    result.summary.energy_total.assign(fleet_size, 0.0);

    if (request_log) *request_log << request_log_header << '\n';

    std::vector<UavState> now(fleet_size);
    std::vector<UavState> next(fleet_size);
    for (std::size_t t = 0; t < config.steps; ++t) {
        for (std::size_t i = 0; i < fleet_size; ++i) {
            now[i] = tracks[i][t];
            next[i] = tracks[i][t + 1];
        }
        const auto cars = vehicles.at(t);
        const auto upcoming = vehicles.at(t + 1);
        std::unordered_map<std::string_view, Vec2> next_pos;
        next_pos.reserve(upcoming.size());
        for (const auto& v : upcoming) next_pos.emplace(v.id, v.position);

        const auto assoc = associate(cars, now, config.association_radius);
        std::vector<std::vector<std::size_t>> served(fleet_size);
        StepStats st;
        st.step = t;
        st.vehicles = cars.size();
        for (std::size_t j = 0; j < cars.size(); ++j) {
            if (assoc[j]) {
                served[*assoc[j]].push_back(j);
            } else {
                ++st.unassociated;
            }
        }
        st.associated = st.vehicles - st.unassociated;
        st.collisions = mobility::collision_count(cars);

        std::vector<bool> transmitting(fleet_size);
        for (std::size_t i = 0; i < fleet_size; ++i) transmitting[i] = !served[i].empty();

        Sample sample;
        sample.step = t;
        sample.collisions = st.collisions;

        for (std::size_t i = 0; i < fleet_size; ++i) {
            const auto& members = served[i];
            const std::size_t n = members.size();
            Observation obs;
            obs.uav_id = now[i].uav_id;
            obs.position = now[i].position;
            obs.heading = now[i].heading;
            obs.vehicles = n;

            const Arrivals arr = build_arrivals(n, config.queue);
            std::optional<queueing::QueueAnalysis> qa;
            try {
                qa = queueing::analyze_priority_queue(
                    {ServiceClass::safety, arr.high, safety, config.queue.max_wait_safety},
                    {ServiceClass::state, arr.low, state, config.queue.max_wait_state});
            } catch (const UnstableQueue&) {
                ++st.unstable_uavs;
            }

            const double w2 = n == 0 ? 0.0 : arr.low / static_cast<double>(n);
            const RequestClass classes[2] = {
                {ServiceClass::safety, config.queue.lambda1_per_vehicle,
                 config.queue.safety_message_bits, config.queue.max_wait_safety},
                {ServiceClass::state, w2, config.queue.state_message_bits,
                 config.queue.max_wait_state}};

            std::vector<double> capacities;
            capacities.reserve(n);
            double weighted_sum = 0.0;
            double weight_total = 0.0;
            double risky = 0.0;
            double blocking = 0.0;
            for (std::size_t j : members) {
                const VehicleState& car = cars[j];
                risky += car.risky_time;
                blocking += car.blocking_time;

                const auto it = next_pos.find(car.id);
                const Vec2 later = it != next_pos.end() ? it->second : car.position;
                const double up_rate = eval.uplink_rate(now[i], car.position);
                const double down_rate = eval.downlink_rate(next, i, later, transmitting);
                if (!(up_rate > 0.0) || !(down_rate > 0.0)) {
                    st.link_unusable += 2;
                    continue;
                }
                capacities.push_back(down_rate);
                if (!qa) continue;

                PropagationContext ctx;
                ctx.uplink_distance = link::LinkGeometry{now[i].position, car.position}.euclidean_distance();
                ctx.uplink_rate = up_rate;
                ctx.downlink_distance = link::LinkGeometry{next[i].position, later}.euclidean_distance();
                ctx.downlink_rate = down_rate;
                ctx.downlink_bits = config.link.message_bits;
                for (const auto& cls : classes) {
                    ctx.uplink_bits = cls.uplink_bits;
                    const RequestDelay d = request_delay(ctx, qa->of(cls.id).sojourn, cls.max_wait,
                                                         config.delay_mode);
                    ++st.requests;
                    if (d.expired) {
                        ++st.expired;
                        if (config.include_expired_capped) {
                            weighted_sum += cls.weight * cls.max_wait;
                            weight_total += cls.weight;
                        }
                    } else {
                        weighted_sum += cls.weight * d.total;
                        weight_total += cls.weight;
                    }
                    if (request_log) {
                        *request_log << t << ',' << obs.uav_id << ',' << car.id << ','
                                     << static_cast<int>(cls.id) << ',' << csv::number(d.uplink)
                                     << ',' << csv::number(d.queueing) << ','
                                     << csv::number(d.downlink) << ',' << csv::number(d.total) << ','
                                     << (d.expired ? 1 : 0) << '\n';
                    }
                }
            }

            std::vector<PeerTransfer> peers;
            for (const auto& tr : config.d2d) {
                if (tr.source != obs.uav_id) continue;
                const double c = eval.d2d_rate(now, static_cast<std::size_t>(tr.source - 1),
                                               static_cast<std::size_t>(tr.target - 1), transmitting);
                if (c > 0.0) {
                    peers.push_back({c, tr.messages});
                } else {
                    ++st.link_unusable;
                }
            }

            const EnergyBreakdown energy =
                uav_step_energy(capacities, peers, {now[i].position, next[i].position, dt},
                                config.link, config.propulsion, config.hover_charging);
            result.summary.energy_total[i] += energy.total();

            if (n > 0) {
                const double count = static_cast<double>(n);
                obs.mean_energy = energy.total() / count;
                obs.mean_risky_time = risky / count;
                obs.mean_blocking_time = blocking / count;
                if (qa && weight_total > 0.0) obs.mean_wait = weighted_sum / weight_total;
            } else {
                obs.mean_wait = 0.0;
            }
            sample.observations.push_back(obs);
        }

        result.summary.requests += st.requests;
        result.summary.expired += st.expired;
        result.summary.link_unusable += st.link_unusable;
        result.summary.unstable_uav_steps += st.unstable_uavs;
        result.samples.push_back(std::move(sample));
        result.step_stats.push_back(st);
    }
    return result;
}

}  // namespace davn::scenario
