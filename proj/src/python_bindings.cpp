#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "ircard/calibration.hpp"
#include "ircard/config.hpp"
#include "ircard/experiments.hpp"
#include "ircard/io.hpp"
#include "ircard/localization.hpp"
#include "ircard/radiation.hpp"
#include "ircard/sensor.hpp"
#include "ircard/thermal.hpp"

namespace py = pybind11;
using namespace ircard;

namespace {

std::vector<uint8_t> to_vector(const py::bytes& data) {
    const std::string str = data;
    return {str.begin(), str.end()};
}

template <size_t N>
py::bytes to_bytes(const std::array<uint8_t, N>& frame) {
    return py::bytes(reinterpret_cast<const char*>(frame.data()), frame.size());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Simulation and analysis core for the IR sensor-pixel card";

    // Translators run newest-first, so the specific types must come after
    // the base registration to win.
    py::register_exception<Error>(m, "IrcardError");
    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<NoDetectionError>(m, "NoDetectionError");

    // --- geometry & radiation -------------------------------------------
    py::class_<radiation::Patch>(m, "Patch")
        .def(py::init([](double cx, double cy, double w, double h, double gap,
                         double eps) {
                 return radiation::Patch{cx, cy, w, h, gap, eps};
             }),
             py::arg("center_x") = 0.0, py::arg("center_y") = 0.0,
             py::arg("width") = 0.010, py::arg("height") = 0.010,
             py::arg("plane_gap") = 0.010, py::arg("emissivity") = 0.95)
        .def_readwrite("center_x", &radiation::Patch::center_x)
        .def_readwrite("center_y", &radiation::Patch::center_y)
        .def_readwrite("width", &radiation::Patch::width)
        .def_readwrite("height", &radiation::Patch::height)
        .def_readwrite("plane_gap", &radiation::Patch::plane_gap)
        .def_readwrite("emissivity", &radiation::Patch::emissivity)
        .def("area", &radiation::Patch::area);

    m.def("view_factor", &radiation::view_factor, py::arg("a"), py::arg("b"),
          py::arg("order") = radiation::kDefaultQuadOrder,
          "Geometric view factor between parallel facing rectangles");
    m.def("exchange_power", &radiation::exchange_power, py::arg("a"),
          py::arg("t_a_kelvin"), py::arg("b"), py::arg("t_b_kelvin"),
          py::arg("order") = radiation::kDefaultQuadOrder,
          "Net gray-body power [W] from a to b");

    // --- thermal model ---------------------------------------------------
    py::class_<thermal::CardSpec>(m, "CardSpec")
        .def(py::init<>())
        .def_readwrite("rows", &thermal::CardSpec::rows)
        .def_readwrite("cols", &thermal::CardSpec::cols)
        .def_readwrite("pixel_size", &thermal::CardSpec::pixel_size)
        .def_readwrite("pitch", &thermal::CardSpec::pitch)
        .def_readwrite("copper_thickness", &thermal::CardSpec::copper_thickness)
        .def_readwrite("board_thickness", &thermal::CardSpec::board_thickness)
        .def_readwrite("attach_resistance", &thermal::CardSpec::attach_resistance)
        .def_readwrite("plate_emissivity", &thermal::CardSpec::plate_emissivity)
        .def_readwrite("film_coefficient", &thermal::CardSpec::film_coefficient)
        .def_readwrite("die_size", &thermal::CardSpec::die_size)
        .def("pixel_count", &thermal::CardSpec::pixel_count)
        .def("plate_capacitance", &thermal::CardSpec::plate_capacitance)
        .def("validate", &thermal::CardSpec::validate);

    py::class_<thermal::HeatSource>(m, "HeatSource")
        .def_readwrite("patch", &thermal::HeatSource::patch)
        .def_readwrite("temperature", &thermal::HeatSource::temperature)
        .def_readwrite("power", &thermal::HeatSource::power)
        .def_readwrite("source_resistance", &thermal::HeatSource::source_resistance)
        .def_readwrite("source_capacitance",
                       &thermal::HeatSource::source_capacitance)
        .def_property_readonly("prescribed", [](const thermal::HeatSource& s) {
            return s.mode == thermal::HeatSource::Mode::kPrescribed;
        });
    m.def("prescribed_source", &thermal::prescribed_source, py::arg("patch"),
          py::arg("temperature_c"));
    m.def("power_source", &thermal::power_source, py::arg("patch"),
          py::arg("watts"), py::arg("resistance_k_per_w"),
          py::arg("capacitance_j_per_k"), py::arg("initial_temperature_c"));

    // --- sensor chip & serial protocol ------------------------------------
    py::class_<sensor::ChipModel>(m, "ChipModel")
        .def(py::init<>())
        .def_readwrite("base_frequency", &sensor::ChipModel::base_frequency)
        .def_readwrite("slope", &sensor::ChipModel::slope)
        .def_readwrite("reference_temperature",
                       &sensor::ChipModel::reference_temperature)
        .def_readwrite("noise_sigma", &sensor::ChipModel::noise_sigma)
        .def_readwrite("seed", &sensor::ChipModel::seed);
    m.def(
        "frequency_of",
        [](sensor::ChipModel& chip, double die_c, bool noise) {
            return sensor::frequency_of(chip, die_c, noise);
        },
        py::arg("chip"), py::arg("die_temperature_c"), py::arg("draw_noise") = true);

    m.def(
        "crc8",
        [](const py::bytes& data) {
            const auto bytes = to_vector(data);
            return sensor::crc8(bytes);
        },
        py::arg("data"));
    m.def(
        "encode_request",
        [](int row, int col) { return to_bytes(sensor::encode_request(row, col)); },
        py::arg("row"), py::arg("col"));
    m.def(
        "encode_response",
        [](int row, int col, uint32_t hz) {
            return to_bytes(sensor::encode_response(row, col, hz));
        },
        py::arg("row"), py::arg("col"), py::arg("frequency_hz"));
    py::class_<sensor::Response>(m, "Response")
        .def_readonly("row", &sensor::Response::row)
        .def_readonly("col", &sensor::Response::col)
        .def_readonly("frequency_hz", &sensor::Response::frequency_hz);
    m.def(
        "decode_response",
        [](const py::bytes& data) {
            const auto bytes = to_vector(data);
            return sensor::decode_response(bytes);
        },
        py::arg("frame"));

    // --- calibration -------------------------------------------------------
    py::class_<calibration::CalSample>(m, "CalSample")
        .def(py::init([](int row, int col, double plate_c, double distance,
                         double frequency, double timestamp) {
                 return calibration::CalSample{row,      col,       plate_c,
                                               distance, frequency, timestamp};
             }),
             py::arg("row"), py::arg("col"), py::arg("plate_temperature"),
             py::arg("distance"), py::arg("frequency"), py::arg("timestamp") = 0.0)
        .def_readwrite("row", &calibration::CalSample::row)
        .def_readwrite("col", &calibration::CalSample::col)
        .def_readwrite("plate_temperature", &calibration::CalSample::plate_temperature)
        .def_readwrite("distance", &calibration::CalSample::distance)
        .def_readwrite("frequency", &calibration::CalSample::frequency)
        .def_readwrite("timestamp", &calibration::CalSample::timestamp);
    py::class_<calibration::PixelFit>(m, "PixelFit")
        .def_readonly("row", &calibration::PixelFit::row)
        .def_readonly("col", &calibration::PixelFit::col)
        .def_readonly("a", &calibration::PixelFit::a)
        .def_readonly("b", &calibration::PixelFit::b)
        .def_readonly("rms", &calibration::PixelFit::rms);
    m.def("fit_pixel", &calibration::fit_pixel, py::arg("samples"));

    // --- run configuration ---------------------------------------------------
    py::class_<config::RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("card", &config::RunConfig::card)
        .def_readwrite("ambient", &config::RunConfig::ambient)
        .def_readwrite("gap", &config::RunConfig::gap)
        .def_readwrite("chip", &config::RunConfig::chip)
        .def_readwrite("sources", &config::RunConfig::sources)
        .def_readwrite("t_end", &config::RunConfig::t_end)
        .def_readwrite("dt", &config::RunConfig::dt)
        .def_readwrite("record_every", &config::RunConfig::record_every)
        .def_readwrite("seed", &config::RunConfig::seed)
        .def_readwrite("noise_floor", &config::RunConfig::noise_floor)
        .def_readwrite("dead", &config::RunConfig::dead)
        .def("validate", &config::RunConfig::validate);
    m.def("parse_run_config", &config::parse_run_config, py::arg("text"),
          py::arg("name") = "<string>");
    m.def("load_run_config", &config::load_run_config, py::arg("path"));

    // --- simulation ------------------------------------------------------------
    py::class_<io::SeriesTable>(m, "SeriesTable")
        .def_readonly("columns", &io::SeriesTable::columns)
        .def_readonly("times", &io::SeriesTable::times)
        .def_readonly("values", &io::SeriesTable::values);

    py::class_<experiments::SimulationOutput>(m, "SimulationOutput")
        .def_readonly("labels", &experiments::SimulationOutput::labels)
        .def_readonly("plate_c", &experiments::SimulationOutput::plate_c)
        .def_readonly("die_c", &experiments::SimulationOutput::die_c)
        .def_readonly("frequency_hz", &experiments::SimulationOutput::frequency_hz)
        .def_readonly("final_map_c", &experiments::SimulationOutput::final_map_c)
        .def_readonly("final_rises", &experiments::SimulationOutput::final_rises)
        .def_property_readonly(
            "frames", [](const experiments::SimulationOutput& sim) {
                py::list out;
                for (const auto& frame : sim.frames)
                    out.append(py::make_tuple(
                        frame.timestamp,
                        py::bytes(reinterpret_cast<const char*>(frame.bytes.data()),
                                  frame.bytes.size())));
                return out;
            });
    m.def("run_simulation", &experiments::run_simulation, py::arg("config"));
    m.def("write_simulation_outputs", &experiments::write_simulation_outputs,
          py::arg("sim"), py::arg("out_dir"));

    // --- replays ------------------------------------------------------------
    py::class_<experiments::CheckResult>(m, "CheckResult")
        .def_readonly("label", &experiments::CheckResult::label)
        .def_readonly("pass_", &experiments::CheckResult::pass)
        .def_readonly("detail", &experiments::CheckResult::detail);
    py::class_<experiments::ReplayReport>(m, "ReplayReport")
        .def_readonly("name", &experiments::ReplayReport::name)
        .def_readonly("summary", &experiments::ReplayReport::summary)
        .def_readonly("checks", &experiments::ReplayReport::checks)
        .def("passed", &experiments::ReplayReport::passed)
        .def("to_text", &experiments::ReplayReport::to_text);
    m.def(
        "replay_a",
        [](const std::string& out_dir) { return experiments::replay_a(out_dir); },
        py::arg("out_dir") = "");
    m.def(
        "replay_b",
        [](const std::string& out_dir) { return experiments::replay_b(out_dir); },
        py::arg("out_dir") = "");
    m.def(
        "replay_c",
        [](const std::string& out_dir) { return experiments::replay_c(out_dir); },
        py::arg("out_dir") = "");
    m.def("default_hotspot_config", &experiments::default_hotspot_config);

    // --- localization ----------------------------------------------------------
    py::class_<localization::RiseMap>(m, "RiseMap")
        .def(py::init([](const Eigen::MatrixXd& rise, double gap,
                         const std::vector<bool>& dead) {
                 localization::RiseMap map;
                 map.rows = static_cast<int>(rise.rows());
                 map.cols = static_cast<int>(rise.cols());
                 map.gap = gap;
                 map.rise = rise;
                 map.dead.assign(dead.begin(), dead.end());
                 return map;
             }),
             py::arg("rise"), py::arg("gap") = 0.010,
             py::arg("dead") = std::vector<bool>{})
        .def_readonly("rows", &localization::RiseMap::rows)
        .def_readonly("cols", &localization::RiseMap::cols)
        .def_readonly("gap", &localization::RiseMap::gap)
        .def_readonly("rise", &localization::RiseMap::rise)
        .def("is_dead", &localization::RiseMap::is_dead, py::arg("row"),
             py::arg("col"));
    py::class_<localization::ArgmaxResult>(m, "ArgmaxResult")
        .def_readonly("row", &localization::ArgmaxResult::row)
        .def_readonly("col", &localization::ArgmaxResult::col)
        .def_readonly("rise", &localization::ArgmaxResult::rise)
        .def_readonly("tie", &localization::ArgmaxResult::tie);
    py::class_<localization::SourceEstimate>(m, "SourceEstimate")
        .def_readonly("x", &localization::SourceEstimate::x)
        .def_readonly("y", &localization::SourceEstimate::y)
        .def_readonly("strength", &localization::SourceEstimate::strength)
        .def_readonly("residual", &localization::SourceEstimate::residual)
        .def_readonly("covariance", &localization::SourceEstimate::covariance)
        .def_readonly("converged", &localization::SourceEstimate::converged)
        .def_readonly("iterations", &localization::SourceEstimate::iterations);

    m.def("forward_rise_map", &localization::forward_rise_map, py::arg("source"),
          py::arg("card"), py::arg("gap"), py::arg("ambient_c") = 21.0,
          py::arg("quad_order") = radiation::kDefaultQuadOrder);
    m.def("locate_argmax", &localization::locate_argmax, py::arg("map"),
          py::arg("noise_floor") = localization::kDefaultNoiseFloor);
    py::class_<localization::Localizer>(m, "Localizer")
        .def(py::init<const thermal::CardSpec&, double, double>(), py::arg("card"),
             py::arg("gap"), py::arg("source_size"))
        .def("forward_map", &localization::Localizer::forward_map, py::arg("x"),
             py::arg("y"), py::arg("strength_c"))
        .def("locate", &localization::Localizer::locate, py::arg("map"),
             py::arg("noise_floor") = localization::kDefaultNoiseFloor);
    m.def("locate_refined", &localization::locate_refined, py::arg("map"),
          py::arg("card"), py::arg("gap"), py::arg("source_size"),
          py::arg("noise_floor") = localization::kDefaultNoiseFloor);

    // --- calibration documents ----------------------------------------------
    py::class_<config::CalibrationFile>(m, "CalibrationFile")
        .def(py::init<>())
        .def_readwrite("plate_size", &config::CalibrationFile::plate_size)
        .def_readwrite("distance_gain", &config::CalibrationFile::distance_gain)
        .def_property_readonly(
            "pixels",
            [](const config::CalibrationFile& cal) { return cal.pixels.pixels; })
        .def_property_readonly("reference_distance",
                               [](const config::CalibrationFile& cal) {
                                   return cal.pixels.reference_distance;
                               });
    m.def("load_calibration", &config::load_calibration, py::arg("path"));
    m.def("save_calibration", &config::save_calibration, py::arg("path"),
          py::arg("cal"));
}
