#pragma once

#include <cstdint>
#include <string>

namespace ircard::cli {

struct SimulateOptions {
    std::string config_path;  // empty = built-in defaults (no sources)
    std::string out_dir = "out";
    bool has_seed = false;
    uint64_t seed = 0;
};
int cmd_simulate(const SimulateOptions& opt);

struct ReplayOptions {
    std::string experiment;   // A | B | C
    std::string config_path;  // optional override of the canned defaults
    std::string out_dir = "out";
    bool has_seed = false;
    uint64_t seed = 0;  // replay C only
};
int cmd_replay(const ReplayOptions& opt);

struct CalibrateFitOptions {
    std::string samples_path;
    std::string out_dir = "out";
    double ambient = 21.0;
    double plate_size = 0.100;
};
int cmd_calibrate_fit(const CalibrateFitOptions& opt);

struct IngestOptions {
    std::string stream_path;
    std::string calibration_path;
    std::string out_dir = "out";
    double ambient = 21.0;
    bool has_distance = false;
    double distance = 0.010;  // compensate the final map's rises at this gap
};
int cmd_ingest(const IngestOptions& opt);

struct LocateOptions {
    std::string map_path;
    double distance = 0.010;     // gap the map was taken at
    double noise_floor = 0.2;    // degC
    double source_size = 0.010;  // forward-model patch edge
    double ambient = 21.0;
    bool absolute = false;  // map holds absolute degC; subtract ambient
};
int cmd_locate(const LocateOptions& opt);

struct RenderOptions {
    std::string map_path;
    std::string out_dir = "out";
    int cell_size = 32;
};
int cmd_render(const RenderOptions& opt);

int run_cli(int argc, char** argv);

}  // namespace ircard::cli
