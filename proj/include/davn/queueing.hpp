#pragma once

// Two-class M/G/1 queue with preemptive-resume priority: closed-form mean
// delays and a discrete-event simulation used to check them.

#include <array>
#include <cstdint>
#include <span>
#include <utility>

namespace davn::queueing {

enum class ServiceClass : int { safety = 1, state = 2 };

/// First and second raw moments of a service-time distribution (s, s^2).
struct Moments {
    double mean = 0.0;
    double second = 0.0;
    /// Values copied verbatim from a published table rather than derived
    /// from a distribution; the Jensen check is skipped for these.
    bool literal = false;
};

/// Exponential service with the given rate.
Moments exp_moments(double rate);

/// Constant service time.
Moments det_moments(double value);

/// Arrival and service description of one request class.
struct ServiceClassSpec {
    ServiceClass id = ServiceClass::safety;
    double arrival_rate = 0.0;  ///< requests per second
    Moments service;
    double max_wait = 0.2;      ///< expiry deadline T_i (s)

    /// Throws InvalidParameter when an invariant is violated.
    void validate() const;
};

/// Mean residual service time E[B^2] / (2 E[B]).
double residual_mean(const ServiceClassSpec& spec);

/// Occupation rate lambda * E[B].
double occupation(const ServiceClassSpec& spec);

struct AggregateTraffic {
    double arrival_rate = 0.0;
    double mean_service = 0.0;
    double occupation = 0.0;
};

AggregateTraffic aggregate_traffic(std::span<const ServiceClassSpec> specs);

struct ClassMetrics {
    double occupation = 0.0;
    double residual = 0.0;
    double wait = 0.0;
    double sojourn = 0.0;
    double queue_length = 0.0;
};

struct QueueAnalysis {
    ClassMetrics high;
    ClassMetrics low;
    AggregateTraffic total;

    const ClassMetrics& of(ServiceClass c) const { return c == ServiceClass::safety ? high : low; }
};

/// Closed-form mean delays. Throws UnstableQueue when rho1 + rho2 >= 1.
QueueAnalysis analyze_priority_queue(const ServiceClassSpec& high, const ServiceClassSpec& low);

// --- discrete-event oracle -------------------------------------------------

struct DesClassResult {
    double mean_wait = 0.0;     ///< departure - arrival - own service
    double mean_sojourn = 0.0;  ///< departure - arrival
    double expired_fraction = 0.0;
    std::uint64_t arrivals = 0;
    std::uint64_t completed = 0;
    std::uint64_t expired = 0;

    bool operator==(const DesClassResult&) const = default;
};

struct DesResult {
    DesClassResult high;
    DesClassResult low;
    std::uint64_t seed = 0;

    bool operator==(const DesResult&) const = default;
};

/// Simulates `horizon` arrivals (both classes together) on a single
/// preemptive-resume server, then drains the queue. High-priority arrivals
/// are Poisson with exponential service; low-priority arrivals are periodic
/// with a uniform random phase and constant service. When `expiry_enabled`
/// a request not completed within its class deadline leaves the system.
DesResult simulate_priority_queue(const ServiceClassSpec& high, const ServiceClassSpec& low,
                                  std::uint64_t horizon, std::uint64_t seed, bool expiry_enabled);

}  // namespace davn::queueing
