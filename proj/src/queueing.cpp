#include "davn/queueing.hpp"

#include <cmath>

#include "davn/error.hpp"

namespace davn::queueing {

Moments exp_moments(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw InvalidParameter("exponential rate must be positive, got " + std::to_string(rate));
    }
    return {1.0 / rate, 2.0 / (rate * rate)};
}

Moments det_moments(double value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw InvalidParameter("deterministic service time must be positive, got " +
                               std::to_string(value));
    }
    return {value, value * value};
}

void ServiceClassSpec::validate() const {
    if (id != ServiceClass::safety && id != ServiceClass::state) {
        throw InvalidParameter("class id must be 1 or 2");
    }
    if (!(arrival_rate >= 0.0) || !std::isfinite(arrival_rate)) {
        throw InvalidParameter("arrival rate must be non-negative");
    }
    if (!(service.mean > 0.0)) {
        throw InvalidParameter("mean service time must be positive");
    }
    if (!(service.second >= 0.0)) {
        throw InvalidParameter("second moment must be non-negative");
    }
    // Literal table moments may break Jensen's inequality (E[B^2] = 0 for a
    // constant service); everything else must satisfy it.
    if (!service.literal && service.second < service.mean * service.mean * (1.0 - 1e-12)) {
        throw InvalidParameter("second moment below squared mean (Jensen)");
    }
    if (!(max_wait > 0.0)) {
        throw InvalidParameter("maximum waiting time must be positive");
    }
}

double residual_mean(const ServiceClassSpec& spec) {
    if (!(spec.service.mean > 0.0)) {
        throw InvalidParameter("residual time needs a positive mean service time");
    }
    return spec.service.second / (2.0 * spec.service.mean);
}

double occupation(const ServiceClassSpec& spec) {
    spec.validate();
    return spec.arrival_rate * spec.service.mean;
}

AggregateTraffic aggregate_traffic(std::span<const ServiceClassSpec> specs) {
    if (specs.empty()) {
        throw InvalidParameter("aggregate traffic needs at least one class");
    }
    AggregateTraffic out;
    for (const auto& s : specs) {
        s.validate();
        out.arrival_rate += s.arrival_rate;
    }
    if (out.arrival_rate == 0.0) {
        return {};
    }
    for (const auto& s : specs) {
        out.mean_service += s.arrival_rate / out.arrival_rate * s.service.mean;
    }
    out.occupation = out.arrival_rate * out.mean_service;
    return out;
}

QueueAnalysis analyze_priority_queue(const ServiceClassSpec& high, const ServiceClassSpec& low) {
    high.validate();
    low.validate();

    QueueAnalysis qa;
    qa.high.occupation = occupation(high);
    qa.low.occupation = occupation(low);
    qa.high.residual = residual_mean(high);
    qa.low.residual = residual_mean(low);

    const double rho1 = qa.high.occupation;
    const double rho2 = qa.low.occupation;
    if (!(rho1 < 1.0) || !(rho1 + rho2 < 1.0)) {
        throw UnstableQueue(rho1, rho2);
    }

    const std::array<ServiceClassSpec, 2> both{high, low};
    qa.total = aggregate_traffic(both);

    qa.high.wait = rho1 * qa.high.residual / (1.0 - rho1);
    qa.high.sojourn = qa.high.wait + high.service.mean;

    const double weighted_residual = rho1 * qa.high.residual + rho2 * qa.low.residual;
    qa.low.wait = weighted_residual / ((1.0 - (rho1 + rho2)) * (1.0 - rho1));
    qa.low.sojourn = qa.low.wait + low.service.mean;

    qa.high.queue_length = high.arrival_rate * qa.high.wait;
    qa.low.queue_length = low.arrival_rate * qa.low.wait;
    return qa;
}

}  // namespace davn::queueing
