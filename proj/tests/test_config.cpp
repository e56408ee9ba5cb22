#include <doctest.h>

#include <filesystem>
#include <set>

#include "davn/config.hpp"
#include "davn/error.hpp"

using namespace davn;
using namespace davn::config;

TEST_CASE("registry") {
    std::set<std::string> keys, flags, envs;
    for (const auto& p : parameters()) {
        CHECK(keys.emplace(p.key).second);
        CHECK(flags.insert(p.flag()).second);
        CHECK(envs.insert(p.env_name()).second);
        CHECK(find(p.key) == &p);
    }
    CHECK(find("no_such_key") == nullptr);
    CHECK(find("cpu_frequency")->flag() == "--cpu-frequency");
    CHECK(find("cpu_frequency")->env_name() == "DAVN_CPU_FREQUENCY");
}

TEST_CASE("defaults reproduce the published constants") {
    const Settings s;
    const auto c = to_run_config(s);
    CHECK(c.steps == 500);
    CHECK(c.densities == std::vector<std::size_t>{40, 80, 120});
    CHECK(c.queue.cpu_frequency == 2.15e9);
    CHECK(c.queue.cpu_cores == 4);
    CHECK(c.queue.safety_message_bits == 4096.0);
    CHECK(c.queue.state_message_bits == 256.0);
    CHECK(c.queue.lambda1_per_vehicle == 0.2);
    CHECK(c.queue.lambda2 == 2.5);
    CHECK(c.queue.max_wait_safety == 0.2);
    CHECK(c.queue.max_wait_state == 0.2);
    CHECK(c.link.carrier_frequency == 2.4e9);
    CHECK(c.link.bandwidth == 1e8);
    CHECK(c.link.noise_density_dbm == -174.0);
    CHECK(c.link.los_a == 14.39);
    CHECK(c.link.los_b == 0.13);
    CHECK(c.link.eta_los == 1.0);
    CHECK(c.link.eta_nlos == 20.0);
    CHECK(c.link.tx_power == 0.28);
    CHECK(c.link.message_bits == 4096.0);
    CHECK(c.propulsion.blade_profile_power == 84.14);
    CHECK(c.propulsion.induced_power == 88.63);
    CHECK(c.propulsion.tip_speed == 120.0);
    CHECK(c.propulsion.hover_induced_velocity == 4.03);
    CHECK(c.propulsion.fuselage_drag_ratio == 0.6);
    CHECK(c.propulsion.rotor_solidity == 0.05);
    CHECK(c.propulsion.air_density == 1.225);
    CHECK(c.propulsion.rotor_disc_area == 0.503);
    REQUIRE(c.fleet.configs.size() == 4);
    CHECK(c.fleet.configs[0].horizontal_speed == doctest::Approx(5.0 / 3.6));
    CHECK(c.fleet.configs[3].horizontal_speed == doctest::Approx(30.0 / 3.6));
    CHECK(c.fleet.configs[0].z_min == 100.0);
    CHECK(c.fleet.configs[0].z_max == 150.0);
    CHECK(c.fleet.ellipses[0].semi_major == 637.0);
    CHECK(c.fleet.ellipses[0].semi_minor == 318.5);
    CHECK(c.association_radius == 500.0);
    CHECK(c.d2d.empty());
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("file parsing") {
    Settings s;
    s.apply_text("# comment\n[queue]\n; full-line comment\ncpu_cores = 2\n\n[run]\nseed=9\n");
    CHECK(s.integer("cpu_cores") == 2);
    CHECK(s.integer("seed") == 9);
    CHECK_THROWS_AS(s.apply_text("[queue]\nbogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(s.apply_text("[nowhere]\nseed = 1\n"), ConfigError);
    CHECK_THROWS_AS(s.apply_text("[link]\nseed = 1\n"), ConfigError);
    CHECK_THROWS_AS(s.apply_text("[run]\nseed\n"), ConfigError);
    CHECK_THROWS_AS(s.apply_text("[run]\nseed = many\n"), ConfigError);
    CHECK_THROWS_AS(s.apply_file("/nonexistent/davn.conf"), IoError);
}

TEST_CASE("environment overrides") {
    Settings s;
    s.apply_env({"PATH=/bin", "DAVN_SEED=17", "HOME=/root"});
    CHECK(s.integer("seed") == 17);
    CHECK_THROWS_AS(s.apply_env({"DAVN_NOT_A_KEY=1"}), ConfigError);
}

TEST_CASE("precedence: file then environment") {
    Settings s;
    s.apply_text("[run]\nseed = 5\nsteps = 7\n");
    s.apply_env({"DAVN_SEED=6"});
    CHECK(s.integer("seed") == 6);
    CHECK(s.integer("steps") == 7);
    s.set("seed", "8");
    CHECK(s.integer("seed") == 8);
}

TEST_CASE("render round trip") {
    Settings a;
    a.set("seed", "99");
    a.set("density", "5,10");
    a.set("paper_moments", "true");
    Settings b;
    b.apply_text(a.render());
    for (const auto& p : parameters()) CHECK(a.get(p.key) == b.get(p.key));
}

TEST_CASE("shipped config matches the defaults") {
    const auto path = std::filesystem::path(DAVN_SOURCE_DIR) / "configs" / "davn.conf";
    Settings s;
    s.apply_file(path);
    const Settings d;
    for (const auto& p : parameters()) CHECK(s.get(p.key) == d.get(p.key));
}

TEST_CASE("domain checks name the key") {
    Settings s;
    s.set("delay_mode", "sideways");
    try {
        to_run_config(s);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("delay_mode") != std::string::npos);
    }
    Settings t;
    t.set("uav_speeds", "1,2,3");
    CHECK_THROWS_AS(to_run_config(t), ConfigError);
}

TEST_CASE("d2d list") {
    const auto d = parse_d2d("1-2:3, 4-1:0.5");
    REQUIRE(d.size() == 2);
    CHECK(d[0].source == 1);
    CHECK(d[0].target == 2);
    CHECK(d[0].messages == 3.0);
    CHECK(d[1].messages == 0.5);
    CHECK(parse_d2d("").empty());
    CHECK_THROWS_AS(parse_d2d("1:2"), ConfigError);
}
