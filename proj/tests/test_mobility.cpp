#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include "davn/error.hpp"
#include "davn/mobility.hpp"

using namespace davn::mobility;

namespace {

const std::string header = std::string(trace_header) + "\n";

Trace parse(const std::string& text) {
    std::istringstream in(text);
    return ingest_trace(in);
}

std::size_t error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const davn::IngestionError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST_CASE("trace ingestion") {
    SUBCASE("header only") {
        const Trace t = parse(header);
        CHECK(t.step_count() == 0);
        CHECK(t.at(0).empty());
    }
    SUBCASE("single row") {
        const Trace t = parse(header + "0,v1,637,0,20,ordinary,0,0,0\n");
        REQUIRE(t.step_count() == 1);
        REQUIRE(t.at(0).size() == 1);
        const auto& v = t.at(0)[0];
        CHECK(v.id == "v1");
        CHECK(v.position.x == 637.0);
        CHECK(v.speed == 20.0);
        CHECK(v.kind == VehicleKind::ordinary);
        CHECK_FALSE(v.collided);
    }
    SUBCASE("gaps and CRLF") {
        const Trace t = parse(header + "0,a,1,2,3,emergency,0.4,0,1\r\n\r\n2,a,1,2,3,aggressive,0.8,0.4,0\n");
        CHECK(t.step_count() == 3);
        CHECK(t.at(1).empty());
        CHECK(t.at(0)[0].kind == VehicleKind::emergency);
        CHECK(t.at(0)[0].collided);
        CHECK(t.at(2)[0].blocking_time == 0.4);
    }
    SUBCASE("errors carry line numbers") {
        CHECK(error_line("") == 1);
        CHECK(error_line("step,id\n") == 1);
        CHECK(error_line(header + "0,a,1,2,3,ordinary,0,0,0\n0,b,1,2\n") == 3);
        CHECK(error_line(header + "0,a,x,2,3,ordinary,0,0,0\n") == 2);
        CHECK(error_line(header + "0,a,1,2,-3,ordinary,0,0,0\n") == 2);
        CHECK(error_line(header + "0,a,1,2,3,truck,0,0,0\n") == 2);
        CHECK(error_line(header + "0,a,1,2,3,ordinary,-1,0,0\n") == 2);
        CHECK(error_line(header + "0,a,1,2,3,ordinary,0,0,2\n") == 2);
        CHECK(error_line(header + "0,a,1,2,3,ordinary,0,0,0\n0,a,1,2,3,ordinary,0,0,0\n") == 3);
        CHECK(error_line(header + "1,a,1,2,3,ordinary,0,0,0\n\n0,a,1,2,3,ordinary,0,0,0\n") == 4);
        CHECK(error_line(header + "-1,a,1,2,3,ordinary,0,0,0\n") == 2);
        CHECK(error_line(header + "0,a,1,2,nan,ordinary,0,0,0\n") == 2);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(ingest_trace_file("/nonexistent/trace.csv"), davn::IoError);
    }
}

TEST_CASE("trace round trip") {
    const Trace t = synth_highway({}, 60, 9, 25);
    std::ostringstream out;
    write_trace(out, t);
    const Trace back = parse(out.str());
    CHECK(back == t);

    const auto path = std::filesystem::temp_directory_path() / "davn_trace_roundtrip.csv";
    write_trace_file(path, t);
    CHECK(ingest_trace_file(path) == t);
    std::filesystem::remove(path);
}

TEST_CASE("collision count") {
    std::vector<VehicleState> v(5);
    CHECK(collision_count(v) == 0);
    v[0].collided = v[1].collided = true;
    CHECK(collision_count(v) == 1);
    v[2].collided = true;
    CHECK(collision_count(v) == 2);
}

TEST_CASE("synthetic highway") {
    const HighwayConfig cfg;
    SUBCASE("empty road") {
        CHECK(synth_highway(cfg, 0, 1, 100).step_count() == 0);
        CHECK(synth_highway(cfg, 10, 1, 0).step_count() == 0);
    }
    SUBCASE("single vehicle") {
        const Trace t = synth_highway(cfg, 1, 1, 50);
        REQUIRE(t.step_count() == 50);
        for (std::size_t s = 0; s < 50; ++s) {
            REQUIRE(t.at(s).size() == 1);
            CHECK_FALSE(t.at(s)[0].collided);
        }
    }
    SUBCASE("deterministic per seed") {
        CHECK(synth_highway(cfg, 80, 5, 40) == synth_highway(cfg, 80, 5, 40));
        CHECK_FALSE(synth_highway(cfg, 80, 5, 40) == synth_highway(cfg, 80, 6, 40));
    }
    SUBCASE("invariants") {
        const Trace t = synth_highway(cfg, 120, 3, 300);
        const double max_step = cfg.max_speed_kmh / 3.6 * (1.0 + cfg.aggressive_overspeed) * cfg.step_period;
        std::map<std::string, VehicleState> prev;
        for (std::size_t s = 0; s < t.step_count(); ++s) {
            CHECK(t.at(s).size() == 120);
            for (const auto& v : t.at(s)) {
                const double r = std::hypot(v.position.x, v.position.y);
                CHECK(r >= 637.0 - 3.5 - 1e-9);
                CHECK(r <= 637.0 + 3.5 + 1e-9);
                CHECK(v.speed >= 0.0);
                if (auto it = prev.find(v.id); it != prev.end()) {
                    CHECK(davn::distance(v.position, it->second.position) <= max_step + 1e-9);
                    CHECK(v.risky_time >= it->second.risky_time);
                    CHECK(v.blocking_time >= it->second.blocking_time);
                    CHECK(v.kind == it->second.kind);
                }
                prev[v.id] = v;
            }
        }
    }
    SUBCASE("kind mix roughly follows the configured fractions") {
        const Trace t = synth_highway(cfg, 5000, 11, 1);
        std::size_t aggressive = 0, emergency = 0;
        for (const auto& v : t.at(0)) {
            aggressive += v.kind == VehicleKind::aggressive;
            emergency += v.kind == VehicleKind::emergency;
        }
        CHECK(aggressive == doctest::Approx(500).epsilon(0.2));
        CHECK(emergency == doctest::Approx(100).epsilon(0.4));
    }
}
