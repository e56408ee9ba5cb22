#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <queue>
#include <vector>

#include "davn/error.hpp"
#include "davn/queueing.hpp"
#include "davn/rng.hpp"

namespace davn::queueing {
namespace {

// Declaration order is the tie-break for simultaneous events.
enum class EventKind : std::uint8_t { arrival_high, arrival_low, departure, expiry };

struct Event {
    double time;
    EventKind kind;
    std::uint64_t seq;
    std::uint32_t job;      // departure / expiry
    std::uint64_t version;  // departure only

    bool operator>(const Event& o) const {
        if (time != o.time) return time > o.time;
        if (kind != o.kind) return kind > o.kind;
        return seq > o.seq;
    }
};

enum class JobState : std::uint8_t { waiting, in_service, done, expired };

struct Job {
    ServiceClass cls;
    double arrival;
    double service;
    double remaining;
    JobState state;
    double ready_since;  // last time the job joined a queue
    double waited = 0.0; // time spent queued, accumulated per service segment
};

class PrioritySim {
public:
    PrioritySim(const ServiceClassSpec& high, const ServiceClassSpec& low, std::uint64_t horizon,
                std::uint64_t seed, bool expiry)
        : high_(high), low_(low), horizon_(horizon), expiry_(expiry),
          arrivals_high_(seed, 1), service_high_(seed, 2), phase_low_(seed, 3) {
        result_.seed = seed;
    }

    DesResult run() {
        if (high_.arrival_rate > 0.0) {
            push(arrivals_high_.exponential(high_.arrival_rate), EventKind::arrival_high);
        }
        if (low_.arrival_rate > 0.0) {
            push(phase_low_.uniform() / low_.arrival_rate, EventKind::arrival_low);
        }

        while (!events_.empty()) {
            const Event ev = events_.top();
            events_.pop();
            now_ = ev.time;
            switch (ev.kind) {
                case EventKind::arrival_high:
                case EventKind::arrival_low:
                    on_arrival(ev.kind);
                    break;
                case EventKind::departure:
                    on_departure(ev);
                    break;
                case EventKind::expiry:
                    on_expiry(ev.job);
                    break;
            }
        }
        finish(result_.high, sums_[0]);
        finish(result_.low, sums_[1]);
        return result_;
    }

private:
    struct Sums {
        double wait = 0.0;
        double sojourn = 0.0;
    };

    void push(double time, EventKind kind, std::uint32_t job = 0, std::uint64_t version = 0) {
        events_.push(Event{time, kind, seq_++, job, version});
    }

    void on_arrival(EventKind kind) {
        if (arrivals_seen_ >= horizon_) {
            return;
        }
        ++arrivals_seen_;
        const bool is_high = kind == EventKind::arrival_high;
        const ServiceClassSpec& spec = is_high ? high_ : low_;
        const double service =
            is_high ? service_high_.exponential(1.0 / spec.service.mean) : spec.service.mean;

        const auto id = static_cast<std::uint32_t>(jobs_.size());
        jobs_.push_back(Job{spec.id, now_, service, service, JobState::waiting, now_});
        (is_high ? result_.high : result_.low).arrivals++;

        if (expiry_) {
            push(now_ + spec.max_wait, EventKind::expiry, id);
        }
        if (is_high) {
            push(now_ + arrivals_high_.exponential(spec.arrival_rate), EventKind::arrival_high);
        } else {
            push(now_ + 1.0 / spec.arrival_rate, EventKind::arrival_low);
        }

        if (!current_) {
            start(id);
        } else if (is_high && jobs_[*current_].cls == ServiceClass::state) {
            preempt();
            start(id);
        } else {
            (is_high ? queue_high_ : queue_low_).push_back(id);
        }
    }

    void on_departure(const Event& ev) {
        if (!current_ || *current_ != ev.job || ev.version != version_) {
            return;  // superseded by a preemption or expiry
        }
        Job& job = jobs_[ev.job];
        job.state = JobState::done;
        job.remaining = 0.0;
        Sums& s = sums_[job.cls == ServiceClass::safety ? 0 : 1];
        const double sojourn = now_ - job.arrival;
        s.sojourn += sojourn;
        s.wait += job.waited;
        (job.cls == ServiceClass::safety ? result_.high : result_.low).completed++;
        current_.reset();
        start_next();
    }

    void on_expiry(std::uint32_t id) {
        Job& job = jobs_[id];
        if (job.state == JobState::done || job.state == JobState::expired) {
            return;
        }
        const bool was_serving = job.state == JobState::in_service;
        job.state = JobState::expired;
        (job.cls == ServiceClass::safety ? result_.high : result_.low).expired++;
        if (was_serving) {
            ++version_;
            current_.reset();
            start_next();
        }
    }

    void start(std::uint32_t id) {
        Job& job = jobs_[id];
        job.state = JobState::in_service;
        job.waited += now_ - job.ready_since;
        current_ = id;
        service_start_ = now_;
        ++version_;
        push(now_ + job.remaining, EventKind::departure, id, version_);
    }

    // Interrupted low-priority work resumes first among its class.
    void preempt() {
        Job& job = jobs_[*current_];
        job.remaining = std::max(0.0, job.remaining - (now_ - service_start_));
        job.state = JobState::waiting;
        job.ready_since = now_;
        queue_low_.push_front(*current_);
        current_.reset();
        ++version_;
    }

    void start_next() {
        for (auto* q : {&queue_high_, &queue_low_}) {
            while (!q->empty()) {
                const std::uint32_t id = q->front();
                q->pop_front();
                if (jobs_[id].state == JobState::waiting) {
                    start(id);
                    return;
                }
            }
        }
    }

    static void finish(DesClassResult& r, const Sums& s) {
        if (r.completed > 0) {
            r.mean_wait = s.wait / static_cast<double>(r.completed);
            r.mean_sojourn = s.sojourn / static_cast<double>(r.completed);
        }
        if (r.arrivals > 0) {
            r.expired_fraction = static_cast<double>(r.expired) / static_cast<double>(r.arrivals);
        }
    }

    ServiceClassSpec high_;
    ServiceClassSpec low_;
    std::uint64_t horizon_;
    bool expiry_;
    Rng arrivals_high_;
    Rng service_high_;
    Rng phase_low_;

    std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
    std::vector<Job> jobs_;
    std::deque<std::uint32_t> queue_high_;
    std::deque<std::uint32_t> queue_low_;
    std::optional<std::uint32_t> current_;
    double service_start_ = 0.0;
    double now_ = 0.0;
    std::uint64_t version_ = 0;
    std::uint64_t seq_ = 0;
    std::uint64_t arrivals_seen_ = 0;
    Sums sums_[2];
    DesResult result_;
};

}  // namespace

DesResult simulate_priority_queue(const ServiceClassSpec& high, const ServiceClassSpec& low,
                                  std::uint64_t horizon, std::uint64_t seed, bool expiry_enabled) {
    if (horizon == 0) {
        throw InvalidParameter("simulation horizon must be at least one arrival");
    }
    high.validate();
    low.validate();
    if (high.arrival_rate == 0.0 && low.arrival_rate == 0.0) {
        throw InvalidParameter("simulation needs a positive arrival rate in some class");
    }
    return PrioritySim(high, low, horizon, seed, expiry_enabled).run();
}

}  // namespace davn::queueing
