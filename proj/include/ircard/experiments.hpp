#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ircard/config.hpp"
#include "ircard/io.hpp"
#include "ircard/localization.hpp"
#include "ircard/sensor.hpp"

namespace ircard::experiments {

// Everything one simulated run produces, before anything touches disk.
struct SimulationOutput {
    std::vector<std::string> labels;         // pixel labels, row-major
    io::SeriesTable plate_c;                 // plate temperatures
    io::SeriesTable die_c;                   // die temperatures
    io::SeriesTable frequency_hz;            // scanned readings (0 = no answer)
    std::vector<sensor::TimedFrame> frames;  // one scan cycle per sample
    Eigen::MatrixXd final_map_c;             // sensed temperatures at t_end
    localization::RiseMap final_rises;       // sensed rises at t_end
};

SimulationOutput run_simulation(const config::RunConfig& cfg);

// Writes the standard file set (series CSVs, frame stream, final map CSV,
// rendered heatmaps + scale sidecar) into `out_dir`; returns the paths.
std::vector<std::string> write_simulation_outputs(const SimulationOutput& sim,
                                                  const std::string& out_dir);

struct CheckResult {
    std::string label;
    bool pass = false;
    std::string detail;
};

struct ReplayReport {
    std::string name;
    std::vector<std::string> summary;  // human-readable lines
    std::vector<CheckResult> checks;

    bool passed() const;
    std::string to_text() const;
};

// Canned scenarios. Each has a built-in default configuration mirrored by a
// fixture file; pass an empty out_dir to skip writing files.

// Calibration ramp: the card soaks with the blackbody plate at each
// set-point; per-pixel affine fits and the frequency span come out.
struct RampConfig {
    std::vector<double> set_points_c{21.0, 30.0, 40.0, 50.0, 60.0};
    double dwell_s = 600.0;
    double dt_s = 0.1;
    std::vector<double> record_at_s{480.0, 540.0, 600.0};  // within each dwell
    double plate_size_m = 0.100;
    double gap_m = 0.010;
    sensor::ChipModel chip;
    uint64_t seed = 1;
};
RampConfig parse_ramp_config(const std::string& text, const std::string& name);
RampConfig load_ramp_config(const std::string& path);
ReplayReport replay_a(const std::string& out_dir, const RampConfig& cfg = {});

// Distance sweep: room-temperature card, fixed plate set-point, steady
// sensed rise tabulated against gap distance.
struct SweepConfig {
    double ambient_c = 21.0;
    double plate_c = 50.0;
    double plate_size_m = 0.100;
    std::vector<double> distances_m{0.010, 0.030, 0.060, 0.100, 0.150};
};
SweepConfig parse_sweep_config(const std::string& text, const std::string& name);
SweepConfig load_sweep_config(const std::string& path);
ReplayReport replay_b(const std::string& out_dir, const SweepConfig& cfg = {});

// Hotspot: power-driven patch facing the space between two pixels, full
// transient with frame scanning, then argmax + refined localization.
config::RunConfig default_hotspot_config();
ReplayReport replay_c(const std::string& out_dir, const config::RunConfig& cfg,
                      double target_x, double target_y);
ReplayReport replay_c(const std::string& out_dir);

}  // namespace ircard::experiments
