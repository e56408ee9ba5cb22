#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include "davn/csv.hpp"
#include "davn/error.hpp"
#include "davn/scenario.hpp"

namespace davn::scenario {

void write_dataset(std::ostream& out, std::span<const Sample> samples) {
    std::string buf;
    buf.append(dataset_header).push_back('\n');
    for (const auto& s : samples) {
        const std::string step = std::to_string(s.step);
        const std::string collisions = std::to_string(s.collisions);
        for (const auto& o : s.observations) {
            buf += step + ',' + std::to_string(o.uav_id) + ',' + csv::number(o.position.x) + ',' +
                   csv::number(o.position.y) + ',' + csv::number(o.position.z) + ',' +
                   std::to_string(o.heading) + ',' + std::to_string(o.vehicles) + ',' +
                   csv::number(o.mean_wait) + ',' + csv::number(o.mean_energy) + ',' +
                   csv::number(o.mean_risky_time) + ',' + csv::number(o.mean_blocking_time) + ',' +
                   collisions + '\n';
        }
    }
    out << buf;
}

void write_step_stats(std::ostream& out, std::span<const StepStats> stats) {
    out << step_stats_header << '\n';
    for (const auto& s : stats) {
        out << s.step << ',' << s.vehicles << ',' << s.associated << ',' << s.unassociated << ','
            << s.collisions << ',' << s.requests << ',' << s.expired << ',' << s.link_unusable
            << ',' << s.unstable_uavs << '\n';
    }
}

void write_summary(std::ostream& out, const Summary& s) {
    out << "key,value\n";
    out << "steps," << s.steps << '\n';
    out << "requests," << s.requests << '\n';
    out << "expired_requests," << s.expired << '\n';
    out << "expired_fraction," << csv::number(s.expired_fraction()) << '\n';
    out << "link_unusable_requests," << s.link_unusable << '\n';
    out << "unstable_uav_steps," << s.unstable_uav_steps << '\n';
    for (std::size_t i = 0; i < s.energy_total.size(); ++i) {
        out << "energy_total_uav" << (i + 1) << ',' << csv::number(s.energy_total[i]) << '\n';
    }
}

OutputFiles output_files(const std::filesystem::path& dir, std::optional<std::size_t> density) {
    const std::string suffix = density ? "_rho" + std::to_string(*density) : std::string();
    return {dir / ("dataset" + suffix + ".csv"), dir / ("summary" + suffix + ".csv"),
            dir / ("steps" + suffix + ".csv")};
}

namespace {

template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    fn(out);
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

OutputFiles run_member(const RunConfig& config, const mobility::Trace& trace, std::uint64_t seed,
                       std::optional<std::size_t> density) {
    const OutputFiles files = output_files(config.output_dir, density);
    RunResult result;
    if (config.request_log.empty()) {
        result = run(config, trace, seed);
    } else {
        auto log_path = config.request_log;
        if (density) {
            log_path.replace_filename(log_path.stem().string() + "_rho" + std::to_string(*density) +
                                      log_path.extension().string());
        }
        write_file(log_path, [&](std::ostream& out) { result = run(config, trace, seed, &out); });
    }
    write_file(files.dataset, [&](std::ostream& out) { write_dataset(out, result.samples); });
    write_file(files.summary, [&](std::ostream& out) { write_summary(out, result.summary); });
    write_file(files.step_stats, [&](std::ostream& out) { write_step_stats(out, result.step_stats); });
    return files;
}

}  // namespace

std::vector<OutputFiles> run_and_write(const RunConfig& config) {
    config.validate();
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) throw IoError("cannot create output directory " + config.output_dir.string());

    if (!config.trace.empty()) {
        const auto trace = mobility::ingest_trace_file(config.trace);
        return {run_member(config, trace, config.seed, std::nullopt)};
    }
    if (config.densities.empty()) {
        throw InvalidParameter("no vehicle source: set a trace file or at least one density");
    }

    std::vector<std::future<OutputFiles>> members;
    for (std::size_t k = 0; k < config.densities.size(); ++k) {
        members.push_back(std::async(std::launch::async, [&config, k] {
            const std::uint64_t seed = config.seed ^ static_cast<std::uint64_t>(k);
            const std::size_t density = config.densities[k];
            // One step past the horizon so downlink geometry can look ahead.
            const auto trace = mobility::synth_highway(config.highway, density, seed, config.steps + 1);
            return run_member(config, trace, seed, density);
        }));
    }
    std::vector<OutputFiles> out;
    for (auto& m : members) out.push_back(m.get());
    return out;
}

}  // namespace davn::scenario
