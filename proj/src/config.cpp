#include "ircard/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace ircard::config {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) {
                known = true;
                break;
            }
        if (!known) fail(where, "unknown key '" + it.key() + "'");
    }
}

double get_number(const json& obj, const std::string& where, const char* key,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(where + "." + key, "expected a number");
    return v.get<double>();
}

double require_number(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) fail(where, std::string("missing key '") + key + "'");
    return get_number(obj, where, key, 0.0);
}

int get_int(const json& obj, const std::string& where, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
    return v.get<int>();
}

int require_int(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) fail(where, std::string("missing key '") + key + "'");
    return get_int(obj, where, key, 0);
}

json parse_document(const std::string& text, const std::string& name) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(name + ": " + e.what());
    }
}

thermal::CardSpec parse_card(const json& obj, const std::string& where) {
    reject_unknown(obj, where,
                   {"rows", "cols", "pixel_size_m", "pitch_m", "copper_thickness_m",
                    "board_thickness_m", "attach_resistance_k_per_w",
                    "plate_emissivity", "film_coefficient_w_per_m2_k", "die_size_m"});
    thermal::CardSpec card;
    card.rows = get_int(obj, where, "rows", card.rows);
    card.cols = get_int(obj, where, "cols", card.cols);
    card.pixel_size = get_number(obj, where, "pixel_size_m", card.pixel_size);
    card.pitch = get_number(obj, where, "pitch_m", card.pitch);
    card.copper_thickness =
        get_number(obj, where, "copper_thickness_m", card.copper_thickness);
    card.board_thickness =
        get_number(obj, where, "board_thickness_m", card.board_thickness);
    card.attach_resistance =
        get_number(obj, where, "attach_resistance_k_per_w", card.attach_resistance);
    card.plate_emissivity =
        get_number(obj, where, "plate_emissivity", card.plate_emissivity);
    card.film_coefficient =
        get_number(obj, where, "film_coefficient_w_per_m2_k", card.film_coefficient);
    card.die_size = get_number(obj, where, "die_size_m", card.die_size);
    return card;
}

sensor::ChipModel parse_chip(const json& obj, const std::string& where) {
    reject_unknown(obj, where, {"base_frequency_hz", "slope_hz_per_c",
                                "reference_temperature_c", "noise_sigma_hz"});
    sensor::ChipModel chip;
    chip.base_frequency = get_number(obj, where, "base_frequency_hz", chip.base_frequency);
    chip.slope = get_number(obj, where, "slope_hz_per_c", chip.slope);
    chip.reference_temperature =
        get_number(obj, where, "reference_temperature_c", chip.reference_temperature);
    chip.noise_sigma = get_number(obj, where, "noise_sigma_hz", chip.noise_sigma);
    return chip;
}

thermal::HeatSource parse_source(const json& obj, const std::string& where, double gap) {
    reject_unknown(obj, where,
                   {"mode", "x_m", "y_m", "size_m", "emissivity", "temperature_c",
                    "power_w", "resistance_k_per_w", "capacitance_j_per_k",
                    "initial_temperature_c"});
    if (!obj.contains("mode") || !obj.at("mode").is_string())
        fail(where, "missing string key 'mode' ('prescribed' or 'power')");
    const std::string mode = obj.at("mode").get<std::string>();

    radiation::Patch patch;
    patch.center_x = get_number(obj, where, "x_m", 0.0);
    patch.center_y = get_number(obj, where, "y_m", 0.0);
    patch.width = patch.height = require_number(obj, where, "size_m");
    patch.emissivity = get_number(obj, where, "emissivity", 0.95);
    patch.plane_gap = gap;

    if (mode == "prescribed") {
        for (const char* key : {"power_w", "resistance_k_per_w", "capacitance_j_per_k",
                                "initial_temperature_c"})
            if (obj.contains(key))
                fail(where, std::string("key '") + key + "' is not valid in prescribed mode");
        return thermal::prescribed_source(patch, require_number(obj, where, "temperature_c"));
    }
    if (mode == "power") {
        if (obj.contains("temperature_c"))
            fail(where, "key 'temperature_c' is not valid in power mode "
                        "(use 'initial_temperature_c')");
        thermal::HeatSource src = thermal::power_source(
            patch, require_number(obj, where, "power_w"),
            get_number(obj, where, "resistance_k_per_w", 60.0),
            get_number(obj, where, "capacitance_j_per_k", 20.0),
            get_number(obj, where, "initial_temperature_c", 21.0));
        return src;
    }
    fail(where + ".mode", "expected 'prescribed' or 'power', got '" + mode + "'");
}

}  // namespace

void RunConfig::validate() const {
    try {
        card.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    for (size_t i = 0; i < sources.size(); ++i) {
        const radiation::Patch& patch = sources[i].patch;
        const std::string where = "config: sources[" + std::to_string(i) + "]";
        if (patch.width <= 0.0 || patch.height <= 0.0)
            throw ConfigError(where + ": size_m must be positive");
        if (patch.emissivity < 0.0 || patch.emissivity > 1.0)
            throw ConfigError(where + ": emissivity must lie in [0, 1]");
        if (sources[i].mode == thermal::HeatSource::Mode::kPower &&
            sources[i].power < 0.0)
            throw ConfigError(where + ": power_w must be non-negative");
    }
    if (gap < 0.010) throw ConfigError("config: environment.gap_m must be >= 0.01");
    if (dt <= 0.0) throw ConfigError("config: timing.dt_s must be positive");
    if (t_end < 0.0) throw ConfigError("config: timing.t_end_s must be non-negative");
    if (record_every <= 0.0)
        throw ConfigError("config: timing.record_every_s must be positive");
    if (noise_floor < 0.0)
        throw ConfigError("config: noise_floor_c must be non-negative");
    if (chip.base_frequency <= 0.0)
        throw ConfigError("config: chip.base_frequency_hz must be positive");
    if (chip.noise_sigma < 0.0)
        throw ConfigError("config: chip.noise_sigma_hz must be non-negative");
    for (const auto& [row, col] : dead)
        if (row < 0 || row >= card.rows || col < 0 || col >= card.cols)
            throw ConfigError("config: dead_pixels entry (" + std::to_string(row) +
                              ", " + std::to_string(col) + ") is outside the grid");
}

RunConfig parse_run_config(const std::string& text, const std::string& name) {
    const json doc = parse_document(text, name);
    reject_unknown(doc, name,
                   {"card", "environment", "chip", "sources", "timing", "seed",
                    "noise_floor_c", "dead_pixels"});

    RunConfig cfg;
    if (doc.contains("card")) cfg.card = parse_card(doc.at("card"), name + ": card");
    if (doc.contains("environment")) {
        const json& env = doc.at("environment");
        const std::string where = name + ": environment";
        reject_unknown(env, where, {"ambient_c", "gap_m"});
        cfg.ambient = get_number(env, where, "ambient_c", cfg.ambient);
        cfg.gap = get_number(env, where, "gap_m", cfg.gap);
    }
    if (doc.contains("chip")) cfg.chip = parse_chip(doc.at("chip"), name + ": chip");
    if (doc.contains("sources")) {
        const json& list = doc.at("sources");
        if (!list.is_array()) fail(name + ": sources", "expected an array");
        for (size_t i = 0; i < list.size(); ++i)
            cfg.sources.push_back(parse_source(
                list[i], name + ": sources[" + std::to_string(i) + "]", cfg.gap));
    }
    if (doc.contains("timing")) {
        const json& timing = doc.at("timing");
        const std::string where = name + ": timing";
        reject_unknown(timing, where, {"t_end_s", "dt_s", "record_every_s"});
        cfg.t_end = get_number(timing, where, "t_end_s", cfg.t_end);
        cfg.dt = get_number(timing, where, "dt_s", cfg.dt);
        cfg.record_every = get_number(timing, where, "record_every_s", cfg.record_every);
    }
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_integer() || doc.at("seed").get<int64_t>() < 0)
            fail(name + ": seed", "expected a non-negative integer");
        cfg.seed = doc.at("seed").get<uint64_t>();
    }
    cfg.noise_floor = get_number(doc, name, "noise_floor_c", cfg.noise_floor);
    if (doc.contains("dead_pixels")) {
        const json& list = doc.at("dead_pixels");
        const std::string where = name + ": dead_pixels";
        if (!list.is_array()) fail(where, "expected an array of [row, col] pairs");
        for (const json& entry : list) {
            if (!entry.is_array() || entry.size() != 2 ||
                !entry[0].is_number_integer() || !entry[1].is_number_integer())
                fail(where, "entries must be [row, col] integer pairs");
            cfg.dead.emplace_back(entry[0].get<int>(), entry[1].get<int>());
        }
    }

    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_run_config(text.str(), path);
}

calibration::DistanceModel CalibrationFile::distance_model(double pixel_size) const {
    calibration::DistanceModel model;
    model.reference_distance = pixels.reference_distance;
    model.plate_size = plate_size;
    model.pixel_size = pixel_size;
    model.gain = distance_gain;
    return model;
}

std::string calibration_to_json(const CalibrationFile& cal) {
    ordered_json doc;
    doc["reference_distance_m"] = cal.pixels.reference_distance;
    doc["plate_size_m"] = cal.plate_size;
    doc["pixels"] = ordered_json::array();
    for (const auto& fit : cal.pixels.pixels) {
        ordered_json entry;
        entry["row"] = fit.row;
        entry["col"] = fit.col;
        entry["a_c"] = fit.a;
        entry["b_c_per_hz"] = fit.b;
        entry["rms_c"] = fit.rms;
        doc["pixels"].push_back(std::move(entry));
    }
    doc["distance_gain"] = cal.distance_gain;
    return doc.dump(2) + "\n";
}

CalibrationFile parse_calibration(const std::string& text, const std::string& name) {
    const json doc = parse_document(text, name);
    reject_unknown(doc, name,
                   {"reference_distance_m", "plate_size_m", "pixels", "distance_gain"});

    CalibrationFile cal;
    cal.pixels.reference_distance = require_number(doc, name, "reference_distance_m");
    cal.plate_size = require_number(doc, name, "plate_size_m");
    cal.distance_gain = require_number(doc, name, "distance_gain");
    if (!doc.contains("pixels") || !doc.at("pixels").is_array())
        fail(name, "missing array key 'pixels'");
    for (size_t i = 0; i < doc.at("pixels").size(); ++i) {
        const json& entry = doc.at("pixels")[i];
        const std::string where = name + ": pixels[" + std::to_string(i) + "]";
        reject_unknown(entry, where, {"row", "col", "a_c", "b_c_per_hz", "rms_c"});
        calibration::PixelFit fit;
        fit.row = require_int(entry, where, "row");
        fit.col = require_int(entry, where, "col");
        fit.a = require_number(entry, where, "a_c");
        fit.b = require_number(entry, where, "b_c_per_hz");
        fit.rms = get_number(entry, where, "rms_c", 0.0);
        if (fit.b == 0.0) fail(where, "b_c_per_hz must be non-zero");
        cal.pixels.pixels.push_back(fit);
    }
    if (cal.pixels.reference_distance <= 0.0)
        fail(name, "reference_distance_m must be positive");
    if (cal.plate_size <= 0.0) fail(name, "plate_size_m must be positive");
    return cal;
}

CalibrationFile load_calibration(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open calibration file");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_calibration(text.str(), path);
}

void save_calibration(const std::string& path, const CalibrationFile& cal) {
    std::ofstream out(path);
    if (!out) throw FormatError(path + ": cannot open for writing");
    out << calibration_to_json(cal);
    if (!out) throw FormatError(path + ": write failed");
}

}  // namespace ircard::config
