#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ircard/calibration.hpp"
#include "ircard/sensor.hpp"
#include "ircard/thermal.hpp"

namespace ircard::config {

// Everything a simulation run needs, schema-checked. Unknown keys anywhere in
// the document are rejected with the offending file and key named.
struct RunConfig {
    thermal::CardSpec card;
    double ambient = 21.0;  // degC
    double gap = 0.010;     // m, sources/targets to card plane
    sensor::ChipModel chip;
    std::vector<thermal::HeatSource> sources;
    double t_end = 600.0;        // s
    double dt = 0.1;             // s
    double record_every = 1.0;   // s
    uint64_t seed = 1;
    double noise_floor = 0.2;                   // degC, detection threshold
    std::vector<std::pair<int, int>> dead;      // pixels that never answer

    void validate() const;  // throws ConfigError
};

RunConfig parse_run_config(const std::string& text, const std::string& name);
RunConfig load_run_config(const std::string& path);

// On-disk calibration document:
// { "reference_distance_m": n, "plate_size_m": n,
//   "pixels": [ { "row": i, "col": i, "a_c": n, "b_c_per_hz": n, "rms_c": n } ],
//   "distance_gain": n }
struct CalibrationFile {
    calibration::PixelCalibration pixels;
    double plate_size = 0.100;   // m
    double distance_gain = 1.0;

    calibration::DistanceModel distance_model(double pixel_size = 0.010) const;
};

std::string calibration_to_json(const CalibrationFile& cal);
CalibrationFile parse_calibration(const std::string& text, const std::string& name);
CalibrationFile load_calibration(const std::string& path);
void save_calibration(const std::string& path, const CalibrationFile& cal);

}  // namespace ircard::config
