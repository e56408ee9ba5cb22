#pragma once

// Air-to-ground (D2V) and air-to-air (D2D) link budgets.

#include <span>

#include "davn/geometry.hpp"

namespace davn::link {

inline constexpr double speed_of_light = 3.0e8;  // m/s

/// How a path loss in dB is turned into a channel gain.
enum class GainConvention {
    linear,        ///< 10^(-PL/10)
    paper_literal  ///< 1 / PL taken on the dB number itself
};

enum class DelayMode {
    paper_literal,  ///< distance / rate
    physical        ///< bits / rate + distance / c
};

enum class Visibility { los, nlos };

struct LinkBudget {
    double carrier_frequency = 2.4e9;  // Hz
    double bandwidth = 1.0e8;          // Hz
    double noise_density_dbm = -174.0; // dBm/Hz
    double los_a = 14.39;
    double los_b = 0.13;
    double eta_los = 1.0;              // dB
    double eta_nlos = 20.0;            // dB
    double eta_los_d2d = 1.0;          // dB
    double tx_power = 0.280;           // W
    double message_bits = 4096.0;
    GainConvention gain = GainConvention::linear;
    bool d2d_planar = false;

    void validate() const;
};

/// UAV at (x, y, h) above a ground node at (x, y, 0).
struct LinkGeometry {
    Vec3 uav;
    Vec2 ground;

    double horizontal_distance() const { return distance(uav.horizontal(), ground); }
    double euclidean_distance() const { return std::hypot(uav.z, horizontal_distance()); }
};

/// Elevation angle in degrees; 90 when the UAV is directly overhead.
double elevation_angle(const LinkGeometry& g);

double los_probability(double elevation_deg, double a, double b);
double nlos_probability(double elevation_deg, double a, double b);

/// 20 log10(4 pi f d / c).
double free_space_loss_db(double distance_m, double frequency_hz);

double path_loss_d2v(const LinkGeometry& g, const LinkBudget& budget, Visibility v);

/// LoS/NLoS losses weighted by the LoS probability.
double mean_path_loss_d2v(const LinkGeometry& g, const LinkBudget& budget);

/// Distance between two UAVs honours `budget.d2d_planar`.
double d2d_distance(const Vec3& a, const Vec3& b, const LinkBudget& budget);
double path_loss_d2d(const Vec3& a, const Vec3& b, const LinkBudget& budget);

double channel_gain(double path_loss_db, GainConvention convention = GainConvention::linear);

/// Thermal noise integrated over the bandwidth, in watts.
double noise_power_w(const LinkBudget& budget);

struct Interferer {
    double power_w;
    double gain;
};

double sinr(double signal_power_w, double signal_gain, std::span<const Interferer> interferers,
            const LinkBudget& budget);

/// Shannon rate in bit/s.
double capacity(double sinr_linear, double bandwidth_hz);

/// Energy spent sending `bits` at `capacity_bps` with `power_w`.
double transmit_energy(double bits, double capacity_bps, double power_w);

double propagation_delay(double distance_m, double rate_bps, double bits, DelayMode mode);

}  // namespace davn::link
