#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "ircard/experiments.hpp"

using namespace ircard;
using config::RunConfig;
using experiments::run_simulation;
using experiments::SimulationOutput;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(bool(in));
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RunConfig short_plate_run() {
    RunConfig cfg;
    cfg.sources.push_back(thermal::prescribed_source(
        radiation::Patch{0.0, 0.0, 0.100, 0.100, cfg.gap, 0.95}, 60.0));
    cfg.t_end = 30.0;
    cfg.dt = 0.1;
    cfg.record_every = 1.0;
    return cfg;
}

}  // namespace

TEST_CASE("a source-free run sits at ambient") {
    RunConfig cfg;
    cfg.t_end = 10.0;
    const SimulationOutput sim = run_simulation(cfg);
    REQUIRE(sim.plate_c.times.size() == 11);
    CHECK(sim.plate_c.values.rows() == 11);
    CHECK(sim.plate_c.values.cols() == 16);
    CHECK((sim.plate_c.values.array() - cfg.ambient).abs().maxCoeff() < 1e-9);
    // Sensed temperatures wobble only by chip noise (sigma 50 Hz ~ 0.02 degC).
    CHECK((sim.final_map_c.array() - cfg.ambient).abs().maxCoeff() < 0.2);
    CHECK(sim.final_rises.rise.cwiseAbs().maxCoeff() < 0.2);
    REQUIRE(sim.labels.size() == 16);
    CHECK(sim.labels.front() == "A1");
    CHECK(sim.labels.back() == "D4");
    CHECK(sim.frames.size() == 11u * 16u);
}

TEST_CASE("recording honors the requested cadence") {
    RunConfig cfg;
    cfg.t_end = 5.0;
    cfg.dt = 0.1;
    cfg.record_every = 0.5;
    const SimulationOutput sim = run_simulation(cfg);
    REQUIRE(sim.plate_c.times.size() == 11);
    CHECK(sim.plate_c.times[1] == doctest::Approx(0.5));
    CHECK(sim.plate_c.times.back() == doctest::Approx(5.0));
    CHECK(sim.frequency_hz.times == sim.plate_c.times);
    CHECK(sim.die_c.times == sim.plate_c.times);
    // Frame timestamps advance within each scan cycle without crossing into
    // the next recording slot.
    CHECK(sim.frames[0].timestamp == 0.0);
    CHECK(sim.frames[1].timestamp > 0.0);
    CHECK(sim.frames[15].timestamp < 0.5);
}

TEST_CASE("the same seed reproduces a run bit for bit") {
    const RunConfig cfg = short_plate_run();
    const SimulationOutput a = run_simulation(cfg);
    const SimulationOutput b = run_simulation(cfg);
    CHECK(a.frequency_hz.values == b.frequency_hz.values);
    CHECK(a.final_map_c == b.final_map_c);
    REQUIRE(a.frames.size() == b.frames.size());
    for (size_t i = 0; i < a.frames.size(); ++i)
        CHECK(a.frames[i].bytes == b.frames[i].bytes);

    RunConfig reseeded = cfg;
    reseeded.seed = 2;
    const SimulationOutput c = run_simulation(reseeded);
    CHECK(a.frequency_hz.values != c.frequency_hz.values);
    // Noise only perturbs readings; the underlying physics is unchanged.
    CHECK(a.plate_c.values == c.plate_c.values);
}

TEST_CASE("a heated plate warms the card center first") {
    const SimulationOutput sim = run_simulation(short_plate_run());
    // Everything rose, and an interior pixel beats a corner.
    CHECK(sim.final_rises.rise.minCoeff() > 0.0);
    const double corner = sim.final_rises.rise(0, 0);
    const double center = sim.final_rises.rise(1, 1);
    CHECK(center > corner);
    // Plate temperatures grow monotonically during a pure heat-up.
    const auto& plate = sim.plate_c.values;
    for (int k = 1; k < plate.rows(); ++k)
        CHECK(plate(k, 5) >= plate(k - 1, 5));
}

TEST_CASE("dead pixels never answer") {
    RunConfig cfg = short_plate_run();
    cfg.t_end = 5.0;
    cfg.dead = {{1, 2}};
    const SimulationOutput sim = run_simulation(cfg);
    const int flat = 1 * cfg.card.cols + 2;
    CHECK(sim.frequency_hz.values.col(flat).cwiseAbs().maxCoeff() == 0.0);
    CHECK(sim.frequency_hz.values.col(flat + 1).cwiseAbs().minCoeff() > 0.0);
    CHECK(sim.final_map_c(1, 2) == cfg.ambient);
    CHECK(sim.final_rises.rise(1, 2) == 0.0);
    REQUIRE(sim.final_rises.dead.size() == 16u);
    CHECK(sim.final_rises.dead[size_t(flat)]);
    CHECK_FALSE(sim.final_rises.dead[size_t(flat) + 1]);
    // Dead pixels consume their poll slot silently: no frame at all.
    CHECK(sim.frames.size() == sim.plate_c.times.size() * 15);
}

TEST_CASE("simulation outputs land on disk reproducibly") {
    RunConfig cfg = short_plate_run();
    cfg.t_end = 3.0;
    const SimulationOutput sim = run_simulation(cfg);

    const auto base = std::filesystem::temp_directory_path() /
                      ("ircard_exp_" + std::to_string(::getpid()));
    const std::string dir1 = (base / "one").string();
    const std::string dir2 = (base / "two").string();
    const auto paths1 = experiments::write_simulation_outputs(sim, dir1);
    const auto paths2 = experiments::write_simulation_outputs(sim, dir2);
    REQUIRE(paths1.size() == 8);

    const std::vector<std::string> names{
        "plate_temperature_c.csv", "die_temperature_c.csv", "frequency_hz.csv",
        "frames.hex",              "final_map_c.csv",       "final_map.pgm",
        "final_map.ppm",           "final_map_scale.txt"};
    for (size_t i = 0; i < names.size(); ++i) {
        const std::string p1 = dir1 + "/" + names[i];
        CHECK(paths1[i] == p1);
        CHECK(slurp(p1) == slurp(dir2 + "/" + names[i]));
    }
    // frames.hex has one line per frame, all decodable.
    std::ifstream frames(dir1 + "/frames.hex");
    std::string line;
    size_t lines = 0;
    while (std::getline(frames, line)) {
        ++lines;
        const auto bytes = io::from_hex(line);
        CHECK_NOTHROW(sensor::decode_response(bytes));
    }
    CHECK(lines == sim.frames.size());
    std::filesystem::remove_all(base);
}

TEST_CASE("replay configs reject unusable documents") {
    CHECK_THROWS_AS(
        experiments::parse_ramp_config(R"({"set_points_c": [30.0]})", "r.json"),
        ConfigError);
    CHECK_THROWS_AS(experiments::parse_ramp_config(
                        R"({"dwell_s": 100.0, "record_at_s": [50.0, 120.0]})",
                        "r.json"),
                    ConfigError);
    CHECK_THROWS_AS(experiments::parse_sweep_config(
                        R"({"distances_m": [0.01, 0.03]})", "s.json"),
                    ConfigError);
    CHECK_THROWS_AS(experiments::parse_sweep_config(
                        R"({"distances_m": [0.03, 0.01, 0.06]})", "s.json"),
                    ConfigError);
    CHECK_THROWS_AS(experiments::parse_sweep_config(
                        R"({"ambient_c": 50.0, "plate_c": 40.0})", "s.json"),
                    ConfigError);
}

TEST_CASE("replay A soaks, fits, and passes its own checks") {
    const auto report = experiments::replay_a("");
    CHECK(report.passed());
    REQUIRE(report.checks.size() >= 3);
    for (const auto& check : report.checks) {
        INFO(check.label, ": ", check.detail);
        CHECK(check.pass);
    }
    const std::string text = report.to_text();
    CHECK(text.find("replay A report") != std::string::npos);
    CHECK(text.find("overall: PASS") != std::string::npos);
}

TEST_CASE("replay B tabulates a falling distance curve") {
    const auto report = experiments::replay_b("");
    CHECK(report.passed());
    for (const auto& check : report.checks) {
        INFO(check.label, ": ", check.detail);
        CHECK(check.pass);
    }
    CHECK(report.to_text().find("overall: PASS") != std::string::npos);
}

TEST_CASE("replay C finds the planted hotspot") {
    const auto report = experiments::replay_c("");
    CHECK(report.passed());
    for (const auto& check : report.checks) {
        INFO(check.label, ": ", check.detail);
        CHECK(check.pass);
    }
    // Same seed, same story.
    const auto again = experiments::replay_c("");
    CHECK(again.to_text() == report.to_text());
}
