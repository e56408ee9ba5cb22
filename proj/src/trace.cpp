#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <utility>

#include "davn/error.hpp"
#include "davn/mobility.hpp"

namespace davn::mobility {

std::string_view to_string(VehicleKind k) {
    switch (k) {
        case VehicleKind::ordinary: return "ordinary";
        case VehicleKind::aggressive: return "aggressive";
        case VehicleKind::emergency: return "emergency";
    }
    return "ordinary";
}

VehicleKind parse_kind(std::string_view s) {
    if (s == "ordinary") return VehicleKind::ordinary;
    if (s == "aggressive") return VehicleKind::aggressive;
    if (s == "emergency") return VehicleKind::emergency;
    throw InvalidParameter("unknown vehicle kind '" + std::string(s) + "'");
}

std::size_t collision_count(std::span<const VehicleState> vehicles) {
    std::size_t flagged = 0;
    for (const auto& v : vehicles) flagged += v.collided ? 1 : 0;
    return (flagged + 1) / 2;
}

std::span<const VehicleState> Trace::at(std::size_t step) const {
    if (step >= steps_.size()) return {};
    return steps_[step];
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double parse_double(std::string_view s, std::size_t line, const char* field) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
        throw IngestionError(line, std::string("bad number in field '") + field + "': '" +
                                       std::string(s) + "'");
    }
    return v;
}

std::size_t parse_step(std::string_view s, std::size_t line) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw IngestionError(line, "step must be a non-negative integer, got '" + std::string(s) + "'");
    }
    return v;
}

void append_number(std::string& out, double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
    if (ec != std::errc{}) {
        throw IoError("cannot format number");
    }
    out.append(buf, ptr);
}

}  // namespace

Trace ingest_trace(std::istream& in) {
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line)) {
        throw IngestionError(1, "missing header");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != trace_header) {
        throw IngestionError(1, "header must be '" + std::string(trace_header) + "'");
    }

    std::vector<std::vector<VehicleState>> steps;
    std::set<std::pair<std::size_t, std::string>> seen;
    std::map<std::string, std::size_t, std::less<>> last_step;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const auto f = split(line);
        if (f.size() != 9) {
            throw IngestionError(lineno, "expected 9 fields, found " + std::to_string(f.size()));
        }
        const std::size_t step = parse_step(f[0], lineno);
        VehicleState v;
        v.id = std::string(f[1]);
        if (v.id.empty()) throw IngestionError(lineno, "empty vehicle_id");
        v.position = {parse_double(f[2], lineno, "x"), parse_double(f[3], lineno, "y")};
        v.speed = parse_double(f[4], lineno, "speed");
        if (v.speed < 0.0) throw IngestionError(lineno, "negative speed");
        try {
            v.kind = parse_kind(f[5]);
        } catch (const InvalidParameter& e) {
            throw IngestionError(lineno, e.what());
        }
        v.risky_time = parse_double(f[6], lineno, "t_r");
        v.blocking_time = parse_double(f[7], lineno, "t_b");
        if (v.risky_time < 0.0 || v.blocking_time < 0.0) {
            throw IngestionError(lineno, "negative time field");
        }
        if (f[8] == "0") {
            v.collided = false;
        } else if (f[8] == "1") {
            v.collided = true;
        } else {
            throw IngestionError(lineno, "collided must be 0 or 1");
        }

        if (!seen.emplace(step, v.id).second) {
            throw IngestionError(lineno, "duplicate record for step " + std::to_string(step) +
                                             " vehicle " + v.id);
        }
        auto [it, inserted] = last_step.try_emplace(v.id, step);
        if (!inserted) {
            if (step < it->second) {
                throw IngestionError(lineno, "step decreases for vehicle " + v.id);
            }
            it->second = step;
        }
        if (steps.size() <= step) steps.resize(step + 1);
        steps[step].push_back(std::move(v));
    }
    return Trace(std::move(steps));
}

Trace ingest_trace_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open trace file " + path.string());
    }
    try {
        return ingest_trace(in);
    } catch (const IngestionError& e) {
        throw IngestionError(e.line(), path.string() + ": " + e.what());
    }
}

void write_trace(std::ostream& out, const Trace& trace) {
    std::string buf;
    buf.append(trace_header).push_back('\n');
    for (std::size_t s = 0; s < trace.step_count(); ++s) {
        for (const auto& v : trace.at(s)) {
            buf.append(std::to_string(s)).push_back(',');
            buf.append(v.id).push_back(',');
            append_number(buf, v.position.x);
            buf.push_back(',');
            append_number(buf, v.position.y);
            buf.push_back(',');
            append_number(buf, v.speed);
            buf.push_back(',');
            buf.append(to_string(v.kind)).push_back(',');
            append_number(buf, v.risky_time);
            buf.push_back(',');
            append_number(buf, v.blocking_time);
            buf.push_back(',');
            buf.push_back(v.collided ? '1' : '0');
            buf.push_back('\n');
        }
    }
    out << buf;
}

void write_trace_file(const std::filesystem::path& path, const Trace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write trace file " + path.string());
    }
    write_trace(out, trace);
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

}  // namespace davn::mobility
