#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "davn/error.hpp"
#include "davn/trajectory.hpp"

using namespace davn::trajectory;
using davn::Vec2;

namespace {

EllipseSpec uav1() {
    EllipseSpec e;
    e.center = {0.0, 637.0};
    return e;
}

double residual(const EllipseSpec& e, Vec2 p) {
    const double u = (p.x - e.center.x) / e.semi_major;
    const double v = (p.y - e.center.y) / e.semi_minor;
    return std::abs(u * u + v * v - 1.0);
}

double ramanujan_perimeter(double a, double b) {
    const double h = (a - b) * (a - b) / ((a + b) * (a + b));
    return std::numbers::pi * (a + b) * (1.0 + 3.0 * h / (10.0 + std::sqrt(4.0 - 3.0 * h)));
}

}  // namespace

TEST_CASE("ellipse position") {
    const auto e = uav1();
    const Vec2 p0 = ellipse_position(e, 0.0);
    CHECK(p0.x == 637.0);
    CHECK(p0.y == 637.0);
    const Vec2 p1 = ellipse_position(e, std::numbers::pi / 2);
    CHECK(p1.x == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(p1.y == doctest::Approx(955.5));
    for (double phi = -10.0; phi < 10.0; phi += 0.01) {
        CHECK(residual(e, ellipse_position(e, phi)) < 1e-9);
    }
}

TEST_CASE("phase advance") {
    SUBCASE("circle: arc length over radius") {
        EllipseSpec c;
        c.semi_major = c.semi_minor = 200.0;
        for (double phi = 0.0; phi < 7.0; phi += 0.7) {
            CHECK(advance_phase(c, phi, 5.0, 0.4) - phi == doctest::Approx(2.0 / 200.0).epsilon(1e-14));
        }
        c.direction = -1;
        CHECK(advance_phase(c, 1.0, 5.0, 0.4) == doctest::Approx(1.0 - 0.01));
    }
    SUBCASE("ellipse at phase 0 uses the minor axis as local radius") {
        const double dphi = advance_phase(uav1(), 0.0, 30.0 / 3.6, 0.4);
        CHECK(dphi == doctest::Approx(3.3333 / 318.5).epsilon(1e-4));
    }
    SUBCASE("a full lap matches the perimeter") {
        const auto e = uav1();
        const double speed = 30.0 / 3.6;
        double phi = 0.0;
        double length = 0.0;
        Vec2 prev = ellipse_position(e, phi);
        while (phi < 2.0 * std::numbers::pi) {
            phi = advance_phase(e, phi, speed, 0.4);
            const Vec2 p = ellipse_position(e, std::min(phi, 2.0 * std::numbers::pi));
            length += davn::distance(prev, p);
            prev = p;
        }
        const double perimeter = ramanujan_perimeter(637.0, 318.5);
        CHECK(perimeter == doctest::Approx(3085.770756837432).epsilon(1e-12));
        CHECK(std::abs(length - perimeter) / perimeter < 0.005);
    }
    CHECK_THROWS_AS(advance_phase(uav1(), 0.0, 0.0, 0.4), davn::InvalidParameter);
}

TEST_CASE("altitude random walk") {
    TrajectoryConfig c;
    SUBCASE("saturates at the ceiling") {
        c.p_up = 1.0;
        c.initial_altitude = 150.0;
        const auto t = random_walk_z(1000, c, 1);
        for (double z : t.z) CHECK(z == 150.0);
    }
    SUBCASE("climbs monotonically then holds") {
        c.p_up = 1.0;
        c.initial_altitude = 100.0;
        const auto t = random_walk_z(100, c, 1);
        const double dz = c.effective_vertical_step();
        CHECK(dz == doctest::Approx(1.1111111).epsilon(1e-6));
        std::size_t top = 1;
        while (top < t.z.size() && t.z[top] > t.z[top - 1]) ++top;
        --top;
        CHECK(top >= 44);
        CHECK(top <= 45);
        for (std::size_t i = top; i < t.z.size(); ++i) CHECK(t.z[i] == t.z[top]);
        CHECK(t.z[top] <= 150.0);
        CHECK(t.z[top] + dz > 150.0 - 1e-9);
        for (int h : t.heading) CHECK(h == 1);
    }
    SUBCASE("seeded and bounded") {
        const auto a = random_walk_z(50000, c, 77);
        const auto b = random_walk_z(50000, c, 77);
        CHECK(a.z == b.z);
        CHECK(a.heading == b.heading);
        const double dz = c.effective_vertical_step();
        for (std::size_t i = 1; i < a.z.size(); ++i) {
            CHECK(a.z[i] >= 100.0);
            CHECK(a.z[i] <= 150.0);
            const double step = std::abs(a.z[i] - a.z[i - 1]);
            CHECK((step < 1e-9 || std::abs(step - dz) < 1e-9));
        }
    }
    SUBCASE("blocked move keeps the heading") {
        c.p_up = 0.0;
        c.initial_altitude = 100.0;
        c.initial_heading = 1;
        const auto t = random_walk_z(10, c, 3);
        for (int h : t.heading) CHECK(h == 1);
    }
    SUBCASE("start outside the range") {
        c.initial_altitude = 99.0;
        CHECK_THROWS_AS(random_walk_z(10, c, 1), davn::InvalidParameter);
    }
}

TEST_CASE("generated trajectories") {
    const auto fleet = default_fleet();
    SUBCASE("zero steps") {
        const auto t = generate_trajectory(1, fleet.configs[0], fleet.ellipses[0], 0, 5);
        REQUIRE(t.size() == 1);
        CHECK(t[0].position.x == 637.0);
        CHECK(t[0].position.y == 637.0);
        CHECK(t[0].position.z == 125.0);
    }
    SUBCASE("invariants") {
        const auto all = generate_fleet(fleet, 20000, 42);
        REQUIRE(all.size() == 4);
        for (std::size_t u = 0; u < 4; ++u) {
            const auto& track = all[u];
            CHECK(track.size() == 20001);
            const double budget = fleet.configs[u].horizontal_speed * 0.4 * (1.0 + 1e-3);
            for (std::size_t s = 0; s < track.size(); ++s) {
                CHECK(track[s].uav_id == static_cast<int>(u) + 1);
                CHECK(residual(fleet.ellipses[u], track[s].position.horizontal()) < 1e-9);
                if (s > 0) {
                    CHECK(davn::distance(track[s].position.horizontal(),
                                         track[s - 1].position.horizontal()) <= budget);
                }
            }
        }
        for (std::size_t s = 0; s < all[0].size(); ++s) {
            for (std::size_t i = 0; i < 4; ++i) {
                for (std::size_t j = i + 1; j < 4; ++j) {
                    CHECK_FALSE(all[i][s].position.horizontal() == all[j][s].position.horizontal());
                }
            }
        }
        CHECK(generate_fleet(fleet, 20000, 42) == all);
    }
    SUBCASE("literal linear motion") {
        TrajectoryConfig c = fleet.configs[3];
        c.horizontal = HorizontalMode::paper_literal;
        const auto t = generate_trajectory(4, c, fleet.ellipses[3], 10, 1);
        CHECK(t[10].position.x == doctest::Approx(30.0 / 3.6 * 4.0));
        CHECK(t[10].position.y == doctest::Approx(10.0 / 3.6 * 4.0));
    }
}

TEST_CASE("trajectory export") {
    const auto all = generate_fleet(default_fleet(), 2, 1);
    std::ostringstream out;
    write_trajectories(out, all);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "step,uav_id,x,y,z,heading");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 12);
    CHECK(out.str().find("\n0,1,637,637,125,1\n") != std::string::npos);
}
