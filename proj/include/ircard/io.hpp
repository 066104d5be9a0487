#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ircard/calibration.hpp"
#include "ircard/errors.hpp"

namespace ircard::io {

// Time-series table as stored on disk: header `time_s,<col>,...`, one row per
// sample. Column labels never contain commas.
struct SeriesTable {
    std::vector<std::string> columns;  // data columns; the time column is implicit
    std::vector<double> times;         // s
    Eigen::MatrixXd values;            // times.size() x columns.size()
};

void write_series_csv(const std::string& path, const SeriesTable& table);
SeriesTable read_series_csv(const std::string& path);

// Bare rectangular grid of numbers, no header.
void write_map_csv(const std::string& path, const Eigen::MatrixXd& map);
Eigen::MatrixXd read_map_csv(const std::string& path);

// Calibration recordings: header
// `time_s,row,col,plate_c,distance_m,frequency_hz`, one sample per row.
void write_samples_csv(const std::string& path,
                       const std::vector<calibration::CalSample>& samples);
std::vector<calibration::CalSample> read_samples_csv(const std::string& path);

struct Heatmap {
    int cell_size = 32;
    int width = 0;   // px
    int height = 0;  // px
    double lo = 0.0;  // value mapped to 0
    double hi = 0.0;  // value mapped to full scale
    std::vector<uint8_t> gray;                 // row-major, width*height
    std::vector<std::array<uint8_t, 3>> rgb;   // row-major, width*height
};

// Linear scale between the map's min and max; a flat map renders at zero.
std::array<uint8_t, 3> hot_rgb(double v);
Heatmap render_heatmap(const Eigen::MatrixXd& map, int cell_size = 32);

void write_pgm(const std::string& path, const Heatmap& image);   // binary P5
void write_ppm(const std::string& path, const Heatmap& image);   // ASCII P3
void write_scale_sidecar(const std::string& path, const Heatmap& image);

// Frame streams on disk: one frame per line, lowercase hex, no separators.
std::string to_hex(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> from_hex(const std::string& text);  // FormatError on junk

std::string format_number(double value);  // the project-wide CSV number format

}  // namespace ircard::io
