#pragma once

#include <vector>

#include "ircard/radiation.hpp"

namespace ircard::calibration {

// One recorded reading during a calibration run.
struct CalSample {
    int row = 0;
    int col = 0;
    double plate_temperature = 0.0;  // set-point [degC]
    double distance = 0.010;         // plate-to-card gap [m]
    double frequency = 0.0;          // [Hz]
    double timestamp = 0.0;          // [s]
};

// Affine frequency -> apparent plate temperature map for one pixel, valid at
// the calibration reference distance.
struct PixelFit {
    int row = 0;
    int col = 0;
    double a = 0.0;    // [degC]
    double b = 0.0;    // [degC/Hz], never zero for a valid fit
    double rms = 0.0;  // fit residual [degC]
};

struct PixelCalibration {
    double reference_distance = 0.010;  // [m]
    std::vector<PixelFit> pixels;

    const PixelFit* find(int row, int col) const;
};

struct Reading {
    double celsius = 0.0;
    bool suspect = false;  // mapped outside the instrument's [0,150] degC range
};

// OLS affine fit T = a + b f over the settled sample of each set-point (the
// last reading per distinct plate temperature). All samples must be for one
// pixel at one distance.
PixelFit fit_pixel(const std::vector<CalSample>& samples);

// Affine evaluation; flags implausible results instead of refusing them.
Reading temperature_from_frequency(const PixelCalibration& cal, int row, int col,
                                   double frequency_hz);

// Physics-based distance attenuation: r(d) = F(d) / F(d_ref) for the
// pixel-vs-calibration-plate geometry, with one fitted scalar gain in
// dT_sensed(d) = gain * dT_plate * r(d).
struct DistanceModel {
    double reference_distance = 0.010;  // [m]
    double plate_size = 0.100;          // calibration plate edge [m]
    double pixel_size = 0.010;          // [m]
    double gain = 1.0;
    double rms = 0.0;               // fit residual [degC]
    bool monotone_warning = false;  // sensed data rose with distance somewhere

    double ratio(double distance) const;  // r(d); r(reference_distance) = 1
};

// Fit the scalar gain from sweep samples at a fixed plate set-point.
// Samples may span several pixels; each (pixel, distance) contributes its
// settled reading, converted through `cal`.
DistanceModel fit_distance(const std::vector<CalSample>& samples,
                           const PixelCalibration& cal, double ambient_c,
                           double plate_size = 0.100,
                           double noise_tolerance_c = 0.05);

// Refer a sensed rise at distance d back to the reference distance.
// d must lie in [reference_distance, 0.5 m].
double compensate_distance(const DistanceModel& model, double sensed_rise_c,
                           double distance);

}  // namespace ircard::calibration
