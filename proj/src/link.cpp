#include "davn/link.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "davn/error.hpp"

namespace davn::link {

void LinkBudget::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidParameter(std::string(name) + " must be positive");
        }
    };
    positive(carrier_frequency, "carrier frequency");
    positive(bandwidth, "bandwidth");
    positive(los_a, "LoS parameter a");
    positive(los_b, "LoS parameter b");
    positive(eta_los, "eta_los");
    positive(eta_nlos, "eta_nlos");
    positive(eta_los_d2d, "eta_los_d2d");
    positive(tx_power, "transmit power");
    positive(message_bits, "message size");
    if (eta_nlos < eta_los) {
        throw InvalidParameter("eta_nlos must not be below eta_los");
    }
}

double elevation_angle(const LinkGeometry& g) {
    if (!(g.uav.z > 0.0)) {
        throw DegenerateGeometry("UAV altitude must be positive, got " + std::to_string(g.uav.z));
    }
    const double deg = std::atan2(g.uav.z, g.horizontal_distance()) * 180.0 / std::numbers::pi;
    return std::min(deg, 90.0);
}

double los_probability(double elevation_deg, double a, double b) {
    if (!(elevation_deg >= 0.0 && elevation_deg <= 90.0)) {
        throw InvalidParameter("elevation angle outside [0, 90] degrees");
    }
    return 1.0 / (1.0 + a * std::exp(-b * (elevation_deg - a)));
}

double nlos_probability(double elevation_deg, double a, double b) {
    return 1.0 - los_probability(elevation_deg, a, b);
}

double free_space_loss_db(double distance_m, double frequency_hz) {
    if (!(distance_m > 0.0)) {
        throw DegenerateGeometry("path loss needs a positive distance");
    }
    return 20.0 * std::log10(4.0 * std::numbers::pi * frequency_hz * distance_m / speed_of_light);
}

double path_loss_d2v(const LinkGeometry& g, const LinkBudget& budget, Visibility v) {
    const double fspl = free_space_loss_db(g.euclidean_distance(), budget.carrier_frequency);
    return fspl + (v == Visibility::los ? budget.eta_los : budget.eta_nlos);
}

double mean_path_loss_d2v(const LinkGeometry& g, const LinkBudget& budget) {
    const double p = los_probability(elevation_angle(g), budget.los_a, budget.los_b);
    return p * path_loss_d2v(g, budget, Visibility::los) +
           (1.0 - p) * path_loss_d2v(g, budget, Visibility::nlos);
}

double d2d_distance(const Vec3& a, const Vec3& b, const LinkBudget& budget) {
    return budget.d2d_planar ? distance(a.horizontal(), b.horizontal()) : distance(a, b);
}

double path_loss_d2d(const Vec3& a, const Vec3& b, const LinkBudget& budget) {
    const double d = d2d_distance(a, b, budget);
    if (!(d > 0.0)) {
        throw DegenerateGeometry("D2D endpoints coincide");
    }
    return free_space_loss_db(d, budget.carrier_frequency) + budget.eta_los_d2d;
}

double channel_gain(double path_loss_db, GainConvention convention) {
    if (convention == GainConvention::paper_literal) {
        return 1.0 / path_loss_db;
    }
    return std::pow(10.0, -path_loss_db / 10.0);
}

double noise_power_w(const LinkBudget& budget) {
    const double dbm = budget.noise_density_dbm + 10.0 * std::log10(budget.bandwidth);
    return std::pow(10.0, dbm / 10.0) * 1e-3;
}

double sinr(double signal_power_w, double signal_gain, std::span<const Interferer> interferers,
            const LinkBudget& budget) {
    double denom = noise_power_w(budget);
    for (const auto& i : interferers) {
        denom += i.power_w * i.gain;
    }
    return signal_power_w * signal_gain / denom;
}

double capacity(double sinr_linear, double bandwidth_hz) {
    if (!(sinr_linear >= 0.0)) {
        throw InvalidParameter("SINR must be non-negative");
    }
    return bandwidth_hz * std::log2(1.0 + sinr_linear);
}

double transmit_energy(double bits, double capacity_bps, double power_w) {
    if (!(capacity_bps > 0.0)) {
        throw ZeroCapacity("link has zero capacity");
    }
    return bits / capacity_bps * power_w;
}

double propagation_delay(double distance_m, double rate_bps, double bits, DelayMode mode) {
    if (!(rate_bps > 0.0)) {
        throw ZeroCapacity("link has zero rate");
    }
    if (mode == DelayMode::paper_literal) {
        return distance_m / rate_bps;
    }
    return bits / rate_bps + distance_m / speed_of_light;
}

}  // namespace davn::link
