#include "davn/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include "davn/config.hpp"
#include "davn/csv.hpp"
#include "davn/error.hpp"
#include "davn/scenario.hpp"

extern char** environ;

namespace davn::cli {
namespace {

struct Overrides {
    std::map<std::string, std::string> text;
    std::map<std::string, bool> flags;
    std::map<std::string, CLI::Option*> options;
};

void add_config_flags(CLI::App& cmd, Overrides& o, std::string& config_path) {
    cmd.add_option("--config", config_path, "configuration file (INI style)");
    for (const auto& p : config::parameters()) {
        const std::string key(p.key);
        const std::string help = std::string(p.help) + " [" + std::string(p.section) + "." + key +
                                 ", env " + p.env_name() + ", default " +
                                 (p.default_value.empty() ? "empty" : std::string(p.default_value)) + "]";
        if (p.kind == config::Kind::boolean) {
            o.options[key] = cmd.add_flag(p.flag(), o.flags[key], help);
        } else {
            o.options[key] = cmd.add_option(p.flag(), o.text[key], help);
        }
    }
}

config::Settings resolve(const Overrides& o, const std::string& config_path,
                         const std::vector<std::string>& environment) {
    config::Settings s;
    if (!config_path.empty()) s.apply_file(config_path);
    s.apply_env(environment);
    for (const auto& [key, opt] : o.options) {
        if (opt->count() == 0) continue;
        if (const auto it = o.flags.find(key); it != o.flags.end()) {
            s.set(key, it->second ? "true" : "false");
        } else {
            s.set(key, o.text.at(key));
        }
    }
    return s;
}

double rel_error(double measured, double expected) {
    if (expected == 0.0) return measured == 0.0 ? 0.0 : INFINITY;
    return std::abs(measured - expected) / std::abs(expected);
}

int analyze_queue(const config::Settings& s, long long vehicles, long long validate,
                  std::ostream& out) {
    const auto cfg = config::to_run_config(s);
    if (vehicles < 0) throw ConfigError("--vehicles must be non-negative");
    const auto arr = scenario::build_arrivals(static_cast<std::size_t>(vehicles), cfg.queue);
    const queueing::ServiceClassSpec high{queueing::ServiceClass::safety, arr.high,
                                          cfg.queue.safety_moments(), cfg.queue.max_wait_safety};
    const queueing::ServiceClassSpec low{queueing::ServiceClass::state, arr.low,
                                         cfg.queue.state_moments(), cfg.queue.max_wait_state};
    const auto qa = queueing::analyze_priority_queue(high, low);

    auto row = [&](const char* name, double v) { out << name << ',' << csv::number(v) << '\n'; };
    out << "quantity,value\n";
    out << "vehicles," << vehicles << '\n';
    row("lambda1", arr.high);
    row("lambda2", arr.low);
    row("E[B1]", high.service.mean);
    row("E[B1^2]", high.service.second);
    row("E[B2]", low.service.mean);
    row("E[B2^2]", low.service.second);
    row("rho1", qa.high.occupation);
    row("rho2", qa.low.occupation);
    row("rho", qa.total.occupation);
    row("E[R1]", qa.high.residual);
    row("E[R2]", qa.low.residual);
    row("E[W1]", qa.high.wait);
    row("E[S1]", qa.high.sojourn);
    row("E[L1]", qa.high.queue_length);
    row("E[W2]", qa.low.wait);
    row("E[S2]", qa.low.sojourn);
    row("E[L2]", qa.low.queue_length);

    if (validate > 0) {
        const auto des = queueing::simulate_priority_queue(
            high, low, static_cast<std::uint64_t>(validate), cfg.seed, false);
        out << "\nquantity,analytic,simulated,relative_error\n";
        auto cmp = [&](const char* name, double a, double m) {
            out << name << ',' << csv::number(a) << ',' << csv::number(m) << ','
                << csv::number(rel_error(m, a)) << '\n';
        };
        cmp("E[W1]", qa.high.wait, des.high.mean_wait);
        cmp("E[S1]", qa.high.sojourn, des.high.mean_sojourn);
        cmp("E[W2]", qa.low.wait, des.low.mean_wait);
        cmp("E[S2]", qa.low.sojourn, des.low.mean_sojourn);
        out << "simulated_arrivals," << des.high.arrivals + des.low.arrivals << '\n';
    }
    return ok;
}

int gen_trajectory(const config::Settings& s, std::ostream& out) {
    const auto cfg = config::to_run_config(s);
    cfg.validate();
    const auto fleet = trajectory::generate_fleet(cfg.fleet, cfg.steps, cfg.seed);
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw IoError("cannot create output directory " + cfg.output_dir.string());
    const auto path = cfg.output_dir / "trajectory.csv";
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path.string() + " for writing");
    trajectory::write_trajectories(file, fleet);
    file.flush();
    if (!file) throw IoError("write failed for " + path.string());
    out << path.string() << '\n';
    return ok;
}

int simulate(const config::Settings& s, std::ostream& out) {
    const auto cfg = config::to_run_config(s);
    for (const auto& f : scenario::run_and_write(cfg)) {
        out << f.dataset.string() << '\n' << f.summary.string() << '\n' << f.step_stats.string() << '\n';
    }
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::vector<std::string>& environment) {
    CLI::App app{"Drone-assisted vehicular network simulator and dataset generator", "davn"};
    app.require_subcommand(1);
    app.footer("Every option can also be set in the config file (same key, '-' written as '_') or "
               "through an environment variable " + std::string(config::env_prefix) +
               "<KEY>. Precedence: defaults < file < environment < flags.");

    std::string config_path;
    Overrides ov_queue, ov_traj, ov_sim;
    long long vehicles = 10;
    long long validate = 0;

    auto* aq = app.add_subcommand("analyze-queue", "closed-form priority queue delays");
    add_config_flags(*aq, ov_queue, config_path);
    aq->add_option("--vehicles", vehicles, "vehicles served by the UAV")->capture_default_str();
    aq->add_option("--validate", validate, "also simulate this many arrivals and compare");

    auto* gt = app.add_subcommand("gen-trajectory", "write the four UAV trajectories");
    add_config_flags(*gt, ov_traj, config_path);

    auto* sim = app.add_subcommand("simulate", "generate the observation dataset");
    add_config_flags(*sim, ov_sim, config_path);

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help(app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name());
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return ok;
        }
        err << "error: " << e.what() << '\n';
        return io_or_config;
    }

    try {
        if (aq->parsed()) {
            return analyze_queue(resolve(ov_queue, config_path, environment), vehicles, validate, out);
        }
        if (gt->parsed()) return gen_trajectory(resolve(ov_traj, config_path, environment), out);
        return simulate(resolve(ov_sim, config_path, environment), out);
    } catch (const UnstableQueue& e) {
        err << "unstable: " << e.what() << '\n';
        return model_domain;
    } catch (const DomainError& e) {
        err << "model error: " << e.what() << '\n';
        return model_domain;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return io_or_config;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return io_or_config;
    }
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::vector<std::string> env;
    for (char** e = environ; e && *e; ++e) env.emplace_back(*e);
    return run(args, std::cout, std::cerr, env);
}

}  // namespace davn::cli
