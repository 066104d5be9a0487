#include "ircard/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <tuple>

namespace ircard::calibration {

namespace rad = ircard::radiation;

const PixelFit* PixelCalibration::find(int row, int col) const {
    for (const auto& p : pixels)
        if (p.row == row && p.col == col) return &p;
    return nullptr;
}

namespace {

// Settled reading per key = the last sample recorded for that key.
template <typename Key, typename KeyOf>
std::map<Key, CalSample> settled_by(const std::vector<CalSample>& samples, KeyOf key_of) {
    std::map<Key, CalSample> settled;
    for (const auto& s : samples) {
        auto [it, inserted] = settled.try_emplace(key_of(s), s);
        if (!inserted && s.timestamp >= it->second.timestamp) it->second = s;
    }
    return settled;
}

}  // namespace

PixelFit fit_pixel(const std::vector<CalSample>& samples) {
    if (samples.empty()) throw FitError("no calibration samples");
    const int row = samples.front().row;
    const int col = samples.front().col;
    const double distance = samples.front().distance;
    for (const auto& s : samples) {
        if (s.frequency <= 0.0 || s.distance <= 0.0)
            throw DomainError("calibration sample with non-positive frequency or distance");
        if (s.row != row || s.col != col)
            throw DomainError("fit_pixel expects samples from a single pixel");
        if (s.distance != distance)
            throw DomainError("fit_pixel expects samples at the reference distance only");
    }

    const auto settled =
        settled_by<double>(samples, [](const CalSample& s) { return s.plate_temperature; });
    if (settled.size() < 2)
        throw FitError("need at least two distinct plate temperatures");

    const double n = static_cast<double>(settled.size());
    double mean_f = 0.0, mean_t = 0.0;
    for (const auto& [t, s] : settled) {
        mean_f += s.frequency;
        mean_t += t;
    }
    mean_f /= n;
    mean_t /= n;

    double sff = 0.0, sft = 0.0;
    for (const auto& [t, s] : settled) {
        const double df = s.frequency - mean_f;
        sff += df * df;
        sft += df * (t - mean_t);
    }
    if (sff == 0.0 || sft == 0.0)
        throw FitError("calibration samples are rank-deficient; slope is undefined");

    PixelFit fit;
    fit.row = row;
    fit.col = col;
    fit.b = sft / sff;
    fit.a = mean_t - fit.b * mean_f;

    double ss = 0.0;
    for (const auto& [t, s] : settled) {
        const double r = fit.a + fit.b * s.frequency - t;
        ss += r * r;
    }
    fit.rms = std::sqrt(ss / n);
    return fit;
}

Reading temperature_from_frequency(const PixelCalibration& cal, int row, int col,
                                   double frequency_hz) {
    const PixelFit* fit = cal.find(row, col);
    if (!fit) throw LookupError("pixel " + std::to_string(row) + "," +
                                std::to_string(col) + " has no calibration entry");
    Reading r;
    r.celsius = fit->a + fit->b * frequency_hz;
    r.suspect = r.celsius < 0.0 || r.celsius > 150.0;
    return r;
}

double DistanceModel::ratio(double distance) const {
    const rad::Patch pixel{0.0, 0.0, pixel_size, pixel_size, distance, 1.0};
    const rad::Patch plate{0.0, 0.0, plate_size, plate_size, distance, 1.0};
    rad::Patch pixel_ref = pixel, plate_ref = plate;
    pixel_ref.plane_gap = plate_ref.plane_gap = reference_distance;
    return rad::view_factor_cached(pixel, plate) /
           rad::view_factor_cached(pixel_ref, plate_ref);
}

DistanceModel fit_distance(const std::vector<CalSample>& samples,
                           const PixelCalibration& cal, double ambient_c,
                           double plate_size, double noise_tolerance_c) {
    if (samples.empty()) throw FitError("no sweep samples");
    const double plate_t = samples.front().plate_temperature;
    for (const auto& s : samples) {
        if (s.plate_temperature != plate_t)
            throw DomainError("distance sweep expects one fixed plate set-point");
        if (s.distance < cal.reference_distance)
            throw DomainError("sweep distance below the calibration reference");
    }
    if (plate_t <= ambient_c)
        throw DomainError("sweep plate set-point must exceed ambient");

    struct Key {
        int row, col;
        double distance;
        bool operator<(const Key& o) const {
            return std::tie(row, col, distance) < std::tie(o.row, o.col, o.distance);
        }
    };
    const auto settled = settled_by<Key>(
        samples, [](const CalSample& s) { return Key{s.row, s.col, s.distance}; });

    DistanceModel model;
    model.reference_distance = cal.reference_distance;
    model.plate_size = plate_size;

    std::map<double, std::pair<double, int>> rise_by_distance;  // sum, count
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [key, s] : settled) {
        const Reading reading = temperature_from_frequency(cal, key.row, key.col, s.frequency);
        const double y = reading.celsius - ambient_c;
        const double x = (plate_t - ambient_c) * model.ratio(key.distance);
        sxx += x * x;
        sxy += x * y;
        auto& acc = rise_by_distance[key.distance];
        acc.first += y;
        acc.second += 1;
    }
    if (rise_by_distance.size() < 3)
        throw FitError("need sweep samples at three or more distances");

    model.gain = sxy / sxx;

    double ss = 0.0;
    for (const auto& [key, s] : settled) {
        const Reading reading = temperature_from_frequency(cal, key.row, key.col, s.frequency);
        const double y = reading.celsius - ambient_c;
        const double x = (plate_t - ambient_c) * model.ratio(key.distance);
        const double r = y - model.gain * x;
        ss += r * r;
    }
    model.rms = std::sqrt(ss / static_cast<double>(settled.size()));

    double previous = std::numeric_limits<double>::infinity();
    for (const auto& [d, acc] : rise_by_distance) {
        const double mean_rise = acc.first / acc.second;
        if (mean_rise > previous + noise_tolerance_c) model.monotone_warning = true;
        previous = mean_rise;
    }
    return model;
}

double compensate_distance(const DistanceModel& model, double sensed_rise_c,
                           double distance) {
    if (distance < model.reference_distance)
        throw DomainError("distance below the calibration reference");
    if (distance > 0.5)
        throw DomainError("distance beyond the 0.5 m compensation range");
    return sensed_rise_c / model.ratio(distance);
}

}  // namespace ircard::calibration
