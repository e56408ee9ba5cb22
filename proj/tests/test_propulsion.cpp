#include <doctest.h>

#include <cmath>

#include "davn/error.hpp"
#include "davn/propulsion.hpp"
#include "davn/rng.hpp"
#include "propulsion_oracle.hpp"

using namespace davn::propulsion;
using davn::Vec3;

TEST_CASE("hover power") {
    const PropulsionParams p;
    CHECK(motion_power(0.0) == p.blade_profile_power + p.induced_power);
    CHECK(motion_power(0.0) == doctest::Approx(172.77).epsilon(1e-12));
}

TEST_CASE("power at 10 m/s") {
    const auto t = oracle::motion_power_terms(10.0);
    CHECK(t.blade == doctest::Approx(85.893).epsilon(1e-5));
    CHECK(t.induced == doctest::Approx(35.2673).epsilon(1e-5));
    CHECK(t.parasite == doctest::Approx(9.2426).epsilon(1e-4));
    CHECK(motion_power(10.0) == doctest::Approx(t.total()).epsilon(1e-12));
    CHECK(motion_power(10.0) == doctest::Approx(130.40285344038787).epsilon(1e-9));
}

TEST_CASE("matches the term-by-term formula over the speed range") {
    for (double v = 0.0; v <= 50.0; v += 0.05) {
        const auto t = oracle::motion_power_terms(v);
        CHECK(t.induced >= 0.0);
        CHECK(motion_power(v) == doctest::Approx(t.total()).epsilon(1e-9));
    }
}

TEST_CASE("blade drag dominates at high speed") {
    double prev = motion_power(40.0);
    for (double v = 41.0; v <= 200.0; v += 1.0) {
        const double now = motion_power(v);
        CHECK(now > prev);
        prev = now;
    }
    const auto t = oracle::motion_power_terms(200.0);
    CHECK(t.parasite > t.blade);
    CHECK(t.parasite > t.induced);
}

TEST_CASE("continuity near hover") {
    CHECK(motion_power(1e-9) == doctest::Approx(motion_power(0.0)).epsilon(1e-12));
}

TEST_CASE("negative speed rejected") {
    CHECK_THROWS_AS(motion_power(-1.0), davn::InvalidParameter);
}

TEST_CASE("movement energy") {
    const Vec3 a{1.0, 2.0, 100.0};
    CHECK(movement_energy(a, a, 0.0) == 0.0);
    const Vec3 b{101.0, 2.0, 100.0};
    CHECK(movement_energy(a, b, 10.0) == doctest::Approx(10.0 * 130.40285344038787).epsilon(1e-9));
    const Vec3 c{201.0, 2.0, 100.0};
    CHECK(movement_energy(a, c, 10.0) == doctest::Approx(2.0 * movement_energy(a, b, 10.0)));
    CHECK_THROWS_AS(movement_energy(a, b, 0.0), davn::InvalidParameter);

    davn::Rng rng(21);
    for (int i = 0; i < 500; ++i) {
        const Vec3 p{rng.uniform(-500, 500), rng.uniform(-500, 500), rng.uniform(100, 150)};
        const Vec3 q{rng.uniform(-500, 500), rng.uniform(-500, 500), rng.uniform(100, 150)};
        const Vec3 shift{rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3), rng.uniform(-50, 50)};
        const double v = rng.uniform(0.5, 30.0);
        const double e = movement_energy(p, q, v);
        CHECK(movement_energy(q, p, v) == e);
        CHECK(movement_energy({p.x + shift.x, p.y + shift.y, p.z + shift.z},
                              {q.x + shift.x, q.y + shift.y, q.z + shift.z}, v) ==
              doctest::Approx(e).epsilon(1e-9));
    }
}

TEST_CASE("parameter validation") {
    PropulsionParams p;
    CHECK_NOTHROW(p.validate());
    p.rotor_disc_area = 0.0;
    CHECK_THROWS_AS(p.validate(), davn::InvalidParameter);
}
