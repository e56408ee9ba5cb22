#include "davn/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "davn/error.hpp"

namespace davn::config {

namespace {

// Defaults reproduce the published scenario constants.
const std::vector<Parameter> registry = {
    {"run", "steps", "500", Kind::integer, "number of simulation steps"},
    {"run", "seed", "1", Kind::integer, "seed for every random stream"},
    {"run", "trace", "", Kind::text, "vehicle trace CSV; empty uses the synthetic highway"},
    {"run", "density", "40,80,120", Kind::list, "synthetic sweep: vehicles per member"},
    {"run", "output", "out", Kind::text, "output directory"},
    {"run", "request_log", "", Kind::text, "optional per-request delay component log"},
    {"run", "step_period", "0.4", Kind::real, "seconds between samples"},

    {"queue", "cpu_frequency", "2.15e9", Kind::real, "UAV processor clock (Hz)"},
    {"queue", "cpu_cores", "4", Kind::integer, "UAV processor cores"},
    {"queue", "safety_message_bytes", "512", Kind::real, "mean safety message length (bytes)"},
    {"queue", "state_message_bytes", "32", Kind::real, "state message length (bytes)"},
    {"queue", "paper_moments", "false", Kind::boolean,
     "use the published service moments verbatim (E[B1^2]=2.269e-13, E[B2^2]=0)"},
    {"queue", "lambda1_per_vehicle", "0.2", Kind::real, "safety requests/s per served vehicle"},
    {"queue", "lambda2", "2.5", Kind::real, "state updates/s per vehicle"},
    {"queue", "lambda2_aggregate", "false", Kind::boolean, "lambda2 is the per-UAV total"},
    {"queue", "max_wait_safety", "0.2", Kind::real, "expiry deadline T1 (s)"},
    {"queue", "max_wait_state", "0.2", Kind::real, "expiry deadline T2 (s)"},

    {"link", "carrier_frequency", "2.4e9", Kind::real, "carrier frequency (Hz)"},
    {"link", "bandwidth", "1e8", Kind::real, "bandwidth (Hz)"},
    {"link", "noise_density", "-174", Kind::real, "noise power spectral density (dBm/Hz)"},
    {"link", "los_a", "14.39", Kind::real, "LoS environment constant a"},
    {"link", "los_b", "0.13", Kind::real, "LoS environment constant b"},
    {"link", "eta_los", "1", Kind::real, "additional LoS loss (dB)"},
    {"link", "eta_nlos", "20", Kind::real, "additional NLoS loss (dB)"},
    {"link", "eta_los_d2d", "1", Kind::real, "additional UAV-to-UAV loss (dB)"},
    {"link", "tx_power", "0.28", Kind::real, "UAV transmit power (W)"},
    {"link", "vehicle_tx_power", "0.28", Kind::real, "vehicle uplink transmit power (W)"},
    {"link", "message_bytes", "512", Kind::real, "UAV message size (bytes)"},
    {"link", "paper_literal_gain", "false", Kind::boolean, "channel gain as 1/PL on the dB value"},
    {"link", "d2d_planar", "false", Kind::boolean, "UAV-to-UAV distance ignores altitude"},
    {"link", "interference_radius", "0", Kind::real,
     "interferers must be within this range of the receiver (m); 0 = unlimited"},
    {"link", "delay_mode", "paper-literal", Kind::text,
     "propagation delay: paper-literal (d/r) or physical (S/C + d/c)"},

    {"propulsion", "blade_profile_power", "84.14", Kind::real, "P0 (W)"},
    {"propulsion", "induced_power", "88.63", Kind::real, "P1 (W)"},
    {"propulsion", "tip_speed", "120", Kind::real, "rotor blade tip speed (m/s)"},
    {"propulsion", "hover_induced_velocity", "4.03", Kind::real, "mean rotor induced velocity (m/s)"},
    {"propulsion", "fuselage_drag_ratio", "0.6", Kind::real, "fuselage drag ratio d0"},
    {"propulsion", "rotor_solidity", "0.05", Kind::real, "rotor solidity s"},
    {"propulsion", "air_density", "1.225", Kind::real, "air density (kg/m^3)"},
    {"propulsion", "rotor_disc_area", "0.503", Kind::real, "rotor disc area (m^2)"},
    {"propulsion", "hover_charging", "true", Kind::boolean, "charge hover power on zero-length legs"},

    {"trajectory", "ring_radius", "637", Kind::real, "distance of ellipse centres from the origin (m)"},
    {"trajectory", "semi_major", "637", Kind::real, "ellipse semi-axis along x (m)"},
    {"trajectory", "semi_minor", "318.5", Kind::real, "ellipse semi-axis along y (m)"},
    {"trajectory", "uav_speeds", "5,10,20,30", Kind::list, "horizontal speed per UAV (km/h)"},
    {"trajectory", "vertical_speed", "10", Kind::real, "vertical speed (km/h)"},
    {"trajectory", "z_min", "100", Kind::real, "lowest altitude (m)"},
    {"trajectory", "z_max", "150", Kind::real, "highest altitude (m)"},
    {"trajectory", "initial_altitude", "125", Kind::real, "starting altitude (m)"},
    {"trajectory", "vertical_step", "0", Kind::real,
     "altitude change per move (m); 0 = vertical speed x step period"},
    {"trajectory", "p_up", "0.5", Kind::real, "probability of choosing to move up"},
    {"trajectory", "initial_phases", "0,1.5707963267948966,3.141592653589793,4.71238898038469",
     Kind::list, "starting ellipse phase per UAV (rad)"},
    {"trajectory", "paper_literal_xy", "false", Kind::boolean,
     "x = v_hor*t, y = v_vrt*t instead of following the ellipse"},

    {"scenario", "association_radius", "500", Kind::real, "UAV coverage radius (m)"},
    {"scenario", "include_expired_capped", "false", Kind::boolean,
     "count expired requests in the mean wait, capped at their deadline"},
    {"scenario", "d2d_transfers", "", Kind::text,
     "UAV-to-UAV transfers as source-target:messages, comma separated"},

    {"highway", "highway_radius", "637", Kind::real, "radius of the circular highway (m)"},
    {"highway", "lanes", "3", Kind::integer, "number of lanes"},
    {"highway", "lane_spacing", "3.5", Kind::real, "lane offset (m)"},
    {"highway", "min_speed", "60", Kind::real, "slowest vehicle speed (km/h)"},
    {"highway", "max_speed", "100", Kind::real, "speed limit (km/h)"},
    {"highway", "aggressive_fraction", "0.1", Kind::real, "share of aggressive vehicles"},
    {"highway", "emergency_fraction", "0.02", Kind::real, "share of emergency vehicles"},
    {"highway", "aggressive_overspeed", "0.1", Kind::real, "how far aggressive drivers exceed the limit"},
    {"highway", "risky_headway", "1", Kind::real, "time headway below which risky time accrues (s)"},
    {"highway", "blocking_distance", "100", Kind::real,
     "emergency vehicle range behind a car that counts as blocking (m)"},
    {"highway", "collision_spacing", "5", Kind::real, "same-lane spacing that counts as a collision (m)"},
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool parse_real(std::string_view s, double& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty() && std::isfinite(out);
}

bool parse_int(std::string_view s, long long& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

bool parse_bool(std::string_view s, bool& out) {
    const std::string v = lower(std::string(s));
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        out = true;
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        out = false;
        return true;
    }
    return false;
}

bool parse_list(std::string_view s, std::vector<double>& out) {
    out.clear();
    if (trim(s).empty()) return true;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        double v = 0.0;
        if (!parse_real(trim(s.substr(start, comma - start)), v)) return false;
        out.push_back(v);
        if (comma == std::string_view::npos) return true;
        start = comma + 1;
    }
}

}  // namespace

std::string Parameter::flag() const {
    std::string f = "--" + std::string(key);
    std::replace(f.begin(), f.end(), '_', '-');
    return f;
}

std::string Parameter::env_name() const {
    std::string e(env_prefix);
    for (char c : key) e.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    return e;
}

const std::vector<Parameter>& parameters() { return registry; }

const Parameter* find(std::string_view key) {
    for (const auto& p : registry) {
        if (p.key == key) return &p;
    }
    return nullptr;
}

Settings::Settings() {
    for (const auto& p : registry) values_.emplace(std::string(p.key), std::string(p.default_value));
}

void Settings::set(std::string_view key, std::string value) {
    const Parameter* p = find(key);
    if (!p) throw ConfigError("unknown configuration key '" + std::string(key) + "'");
    value = trim(value);
    bool ok = true;
    switch (p->kind) {
        case Kind::integer: {
            long long v = 0;
            ok = parse_int(value, v);
            break;
        }
        case Kind::real: {
            double v = 0.0;
            ok = parse_real(value, v);
            break;
        }
        case Kind::boolean: {
            bool v = false;
            ok = parse_bool(value, v);
            break;
        }
        case Kind::list: {
            std::vector<double> v;
            ok = parse_list(value, v);
            break;
        }
        case Kind::text:
            break;
    }
    if (!ok) {
        throw ConfigError("invalid value '" + value + "' for '" + std::string(key) + "'");
    }
    values_[std::string(key)] = std::move(value);
}

const std::string& Settings::get(std::string_view key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown configuration key '" + std::string(key) + "'");
    return it->second;
}

long long Settings::integer(std::string_view key) const {
    long long v = 0;
    if (!parse_int(get(key), v)) throw ConfigError("'" + std::string(key) + "' is not an integer");
    return v;
}

double Settings::real(std::string_view key) const {
    double v = 0.0;
    if (!parse_real(get(key), v)) throw ConfigError("'" + std::string(key) + "' is not a number");
    return v;
}

bool Settings::boolean(std::string_view key) const {
    bool v = false;
    if (!parse_bool(get(key), v)) throw ConfigError("'" + std::string(key) + "' is not a boolean");
    return v;
}

std::vector<double> Settings::reals(std::string_view key) const {
    std::vector<double> v;
    if (!parse_list(get(key), v)) throw ConfigError("'" + std::string(key) + "' is not a list");
    return v;
}

void Settings::apply_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    apply_text(ss.str(), path.string());
}

void Settings::apply_text(std::string_view text, std::string_view origin) {
    std::string section;
    std::size_t lineno = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    auto fail = [&](const std::string& what) {
        return ConfigError(std::string(origin) + ":" + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw fail("malformed section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            const bool known = std::any_of(registry.begin(), registry.end(),
                                           [&](const Parameter& p) { return p.section == section; });
            if (!known) throw fail("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw fail("expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        const Parameter* p = find(key);
        if (!p) throw fail("unknown key '" + key + "'");
        if (p->section != section) {
            throw fail("key '" + key + "' belongs in section [" + std::string(p->section) + "]");
        }
        try {
            set(key, value);
        } catch (const ConfigError& e) {
            throw fail(e.what());
        }
    }
}

void Settings::apply_env(const std::vector<std::string>& environment) {
    for (const auto& entry : environment) {
        if (entry.rfind(env_prefix, 0) != 0) continue;
        const auto eq = entry.find('=');
        const std::string name = entry.substr(0, eq);
        const std::string value = eq == std::string::npos ? std::string() : entry.substr(eq + 1);
        const std::string key = lower(name.substr(env_prefix.size()));
        if (!find(key)) throw ConfigError("unknown environment override " + name);
        try {
            set(key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(name + ": " + e.what());
        }
    }
}

std::string Settings::render() const {
    std::string out;
    std::string_view section;
    for (const auto& p : registry) {
        if (p.section != section) {
            if (!section.empty()) out += '\n';
            section = p.section;
            out += "[" + std::string(section) + "]\n";
        }
        out += "# " + std::string(p.help) + "\n";
        const std::string& v = get(p.key);
        out += std::string(p.key) + (v.empty() ? " =" : " = " + v) + "\n";
    }
    return out;
}

std::vector<scenario::D2dTransfer> parse_d2d(std::string_view text) {
    std::vector<scenario::D2dTransfer> out;
    const std::string all = trim(text);
    if (all.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = all.find(',', start);
        const std::string item = trim(std::string_view(all).substr(start, comma - start));
        const auto dash = item.find('-');
        const auto colon = item.find(':');
        long long src = 0;
        long long dst = 0;
        double messages = 1.0;
        const std::string_view sv(item);
        const bool ok = dash != std::string::npos &&
                        parse_int(trim(sv.substr(0, dash)), src) &&
                        parse_int(trim(sv.substr(dash + 1, colon == std::string::npos
                                                               ? std::string::npos
                                                               : colon - dash - 1)),
                                  dst) &&
                        (colon == std::string::npos || parse_real(trim(sv.substr(colon + 1)), messages));
        if (!ok) throw ConfigError("malformed D2D transfer '" + item + "' (expected source-target:messages)");
        out.push_back({static_cast<int>(src), static_cast<int>(dst), messages});
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

scenario::RunConfig to_run_config(const Settings& s) {
    scenario::RunConfig c;
    auto require = [](bool cond, std::string_view key, const char* what) {
        if (!cond) throw ConfigError("'" + std::string(key) + "' " + what);
    };

    const long long steps = s.integer("steps");
    require(steps >= 1, "steps", "must be at least 1");
    c.steps = static_cast<std::size_t>(steps);
    const long long seed = s.integer("seed");
    require(seed >= 0, "seed", "must be non-negative");
    c.seed = static_cast<std::uint64_t>(seed);
    c.trace = s.get("trace");
    for (double d : s.reals("density")) {
        require(d >= 0.0 && d == std::floor(d), "density", "entries must be non-negative integers");
        const auto n = static_cast<std::size_t>(d);
        require(std::find(c.densities.begin(), c.densities.end(), n) == c.densities.end(), "density",
                "entries must be distinct");
        c.densities.push_back(n);
    }
    c.output_dir = s.get("output");
    c.request_log = s.get("request_log");
    const double dt = s.real("step_period");
    require(dt > 0.0, "step_period", "must be positive");

    auto& q = c.queue;
    q.cpu_frequency = s.real("cpu_frequency");
    q.cpu_cores = static_cast<int>(s.integer("cpu_cores"));
    q.safety_message_bits = s.real("safety_message_bytes") * 8.0;
    q.state_message_bits = s.real("state_message_bytes") * 8.0;
    q.paper_moments = s.boolean("paper_moments");
    q.lambda1_per_vehicle = s.real("lambda1_per_vehicle");
    q.lambda2 = s.real("lambda2");
    q.lambda2_aggregate = s.boolean("lambda2_aggregate");
    q.max_wait_safety = s.real("max_wait_safety");
    q.max_wait_state = s.real("max_wait_state");

    auto& l = c.link;
    l.carrier_frequency = s.real("carrier_frequency");
    l.bandwidth = s.real("bandwidth");
    l.noise_density_dbm = s.real("noise_density");
    l.los_a = s.real("los_a");
    l.los_b = s.real("los_b");
    l.eta_los = s.real("eta_los");
    l.eta_nlos = s.real("eta_nlos");
    l.eta_los_d2d = s.real("eta_los_d2d");
    l.tx_power = s.real("tx_power");
    l.message_bits = s.real("message_bytes") * 8.0;
    l.gain = s.boolean("paper_literal_gain") ? link::GainConvention::paper_literal
                                             : link::GainConvention::linear;
    l.d2d_planar = s.boolean("d2d_planar");
    c.vehicle_tx_power = s.real("vehicle_tx_power");
    c.interference_radius = s.real("interference_radius");
    const std::string mode = s.get("delay_mode");
    if (mode == "paper-literal") {
        c.delay_mode = link::DelayMode::paper_literal;
    } else if (mode == "physical") {
        c.delay_mode = link::DelayMode::physical;
    } else {
        throw ConfigError("'delay_mode' must be paper-literal or physical, got '" + mode + "'");
    }

    auto& p = c.propulsion;
    p.blade_profile_power = s.real("blade_profile_power");
    p.induced_power = s.real("induced_power");
    p.tip_speed = s.real("tip_speed");
    p.hover_induced_velocity = s.real("hover_induced_velocity");
    p.fuselage_drag_ratio = s.real("fuselage_drag_ratio");
    p.rotor_solidity = s.real("rotor_solidity");
    p.air_density = s.real("air_density");
    p.rotor_disc_area = s.real("rotor_disc_area");
    c.hover_charging = s.boolean("hover_charging");

    const auto speeds = s.reals("uav_speeds");
    const auto phases = s.reals("initial_phases");
    require(speeds.size() == scenario::fleet_size, "uav_speeds", "needs one entry per UAV (4)");
    require(phases.size() == scenario::fleet_size, "initial_phases", "needs one entry per UAV (4)");
    c.fleet = trajectory::default_fleet(s.real("ring_radius"));
    for (std::size_t i = 0; i < scenario::fleet_size; ++i) {
        auto& e = c.fleet.ellipses[i];
        e.semi_major = s.real("semi_major");
        e.semi_minor = s.real("semi_minor");
        auto& t = c.fleet.configs[i];
        t.horizontal_speed = kmh_to_ms(speeds[i]);
        t.vertical_speed = kmh_to_ms(s.real("vertical_speed"));
        t.step_period = dt;
        t.z_min = s.real("z_min");
        t.z_max = s.real("z_max");
        t.initial_altitude = s.real("initial_altitude");
        t.vertical_step = s.real("vertical_step");
        t.p_up = s.real("p_up");
        t.initial_phase = phases[i];
        t.horizontal = s.boolean("paper_literal_xy") ? trajectory::HorizontalMode::paper_literal
                                                     : trajectory::HorizontalMode::ellipse;
    }

    c.association_radius = s.real("association_radius");
    c.include_expired_capped = s.boolean("include_expired_capped");
    c.d2d = parse_d2d(s.get("d2d_transfers"));

    auto& h = c.highway;
    h.radius = s.real("highway_radius");
    const long long lanes = s.integer("lanes");
    require(lanes >= 1 && lanes <= 64, "lanes", "must be between 1 and 64");
    h.lanes = static_cast<int>(lanes);
    h.lane_spacing = s.real("lane_spacing");
    h.min_speed_kmh = s.real("min_speed");
    h.max_speed_kmh = s.real("max_speed");
    h.aggressive_fraction = s.real("aggressive_fraction");
    h.emergency_fraction = s.real("emergency_fraction");
    h.aggressive_overspeed = s.real("aggressive_overspeed");
    h.step_period = dt;
    h.risky_headway = s.real("risky_headway");
    h.blocking_distance = s.real("blocking_distance");
    h.collision_spacing = s.real("collision_spacing");
    return c;
}

}  // namespace davn::config
