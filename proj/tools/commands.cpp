#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "ircard/experiments.hpp"

namespace ircard::cli {

namespace {

std::string joined(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

std::string fmt(const char* spec, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, value);
    return buf;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

int cmd_simulate(const SimulateOptions& opt) {
    config::RunConfig cfg;
    if (!opt.config_path.empty()) cfg = config::load_run_config(opt.config_path);
    if (opt.has_seed) cfg.seed = opt.seed;

    const experiments::SimulationOutput sim = experiments::run_simulation(cfg);
    const std::vector<std::string> paths =
        experiments::write_simulation_outputs(sim, opt.out_dir);

    int max_row = 0, max_col = 0;
    sim.final_map_c.maxCoeff(&max_row, &max_col);
    std::cout << "simulated " << sim.plate_c.times.size() << " samples over "
              << io::format_number(cfg.t_end) << " s\n"
              << "hottest pixel " << thermal::pixel_label(max_row, max_col) << " at "
              << fmt("%.2f", sim.final_map_c(max_row, max_col)) << " C\n"
              << "wrote " << paths.size() << " files to " << opt.out_dir << "\n";
    return 0;
}

int cmd_replay(const ReplayOptions& opt) {
    std::string which = opt.experiment;
    std::transform(which.begin(), which.end(), which.begin(), ::toupper);

    experiments::ReplayReport report;
    if (which == "A") {
        experiments::RampConfig cfg;
        if (!opt.config_path.empty()) cfg = experiments::load_ramp_config(opt.config_path);
        if (opt.has_seed) cfg.seed = opt.seed;
        report = experiments::replay_a(opt.out_dir, cfg);
    } else if (which == "B") {
        experiments::SweepConfig cfg;
        if (!opt.config_path.empty())
            cfg = experiments::load_sweep_config(opt.config_path);
        report = experiments::replay_b(opt.out_dir, cfg);
    } else {
        config::RunConfig cfg = experiments::default_hotspot_config();
        if (!opt.config_path.empty()) cfg = config::load_run_config(opt.config_path);
        if (opt.has_seed) cfg.seed = opt.seed;
        if (cfg.sources.empty())
            throw ConfigError("replay C: the configuration needs at least one source");
        report = experiments::replay_c(opt.out_dir, cfg, cfg.sources[0].patch.center_x,
                                       cfg.sources[0].patch.center_y);
    }

    std::cout << report.to_text();
    return report.passed() ? 0 : 1;
}

int cmd_calibrate_fit(const CalibrateFitOptions& opt) {
    const std::vector<calibration::CalSample> samples =
        io::read_samples_csv(opt.samples_path);
    if (samples.empty()) throw FitError(opt.samples_path + ": no samples to fit");

    double ref_d = samples.front().distance;
    for (const auto& s : samples) ref_d = std::min(ref_d, s.distance);

    std::map<std::pair<int, int>, std::vector<calibration::CalSample>> by_pixel;
    for (const auto& s : samples)
        if (s.distance == ref_d) by_pixel[{s.row, s.col}].push_back(s);

    config::CalibrationFile cal;
    cal.pixels.reference_distance = ref_d;
    cal.plate_size = opt.plate_size;
    double worst_rms = 0.0;
    for (const auto& [key, mine] : by_pixel) {
        const calibration::PixelFit fit = calibration::fit_pixel(mine);
        cal.pixels.pixels.push_back(fit);
        worst_rms = std::max(worst_rms, fit.rms);
    }

    // A set-point swept over >= 3 distances also yields the attenuation gain;
    // the lowest qualifying set-point wins so reruns stay deterministic.
    std::map<double, std::set<double>> distances_by_setpoint;
    for (const auto& s : samples)
        distances_by_setpoint[s.plate_temperature].insert(s.distance);
    bool fitted_gain = false;
    for (const auto& [sp, dists] : distances_by_setpoint) {
        if (dists.size() < 3) continue;
        std::vector<calibration::CalSample> sweep;
        for (const auto& s : samples)
            if (s.plate_temperature == sp) sweep.push_back(s);
        const calibration::DistanceModel model = calibration::fit_distance(
            sweep, cal.pixels, opt.ambient, opt.plate_size);
        cal.distance_gain = model.gain;
        fitted_gain = true;
        std::cout << "distance gain " << fmt("%.4f", model.gain) << " from set-point "
                  << fmt("%.1f", sp) << " C (rms " << fmt("%.4f", model.rms) << " C)"
                  << (model.monotone_warning ? " [warning: non-monotone sweep]" : "")
                  << "\n";
        break;
    }
    if (!fitted_gain)
        std::cout << "no set-point swept over 3+ distances; distance gain left at 1\n";

    std::filesystem::create_directories(opt.out_dir);
    const std::string path = joined(opt.out_dir, "calibration.json");
    config::save_calibration(path, cal);
    std::cout << "fitted " << cal.pixels.pixels.size() << " pixels (worst rms "
              << fmt("%.4f", worst_rms) << " C) -> " << path << "\n";
    return 0;
}

int cmd_ingest(const IngestOptions& opt) {
    const config::CalibrationFile cal = config::load_calibration(opt.calibration_path);
    if (cal.pixels.pixels.empty())
        throw ConfigError(opt.calibration_path + ": calibration lists no pixels");
    int rows = 0, cols = 0;
    for (const auto& p : cal.pixels.pixels) {
        rows = std::max(rows, p.row + 1);
        cols = std::max(cols, p.col + 1);
    }

    std::ifstream in(opt.stream_path);
    if (!in) throw FormatError(opt.stream_path + ": cannot open stream");
    std::filesystem::create_directories(opt.out_dir);

    const int slots = rows * cols;
    Eigen::MatrixXd map = Eigen::MatrixXd::Zero(rows, cols);
    std::vector<char> seen(slots, 0), ever(slots, 0);
    size_t cycles = 0, dropped = 0, malformed_total = 0, suspect_total = 0;
    size_t cycle_malformed = 0;
    int last_index = -1;
    bool have_last_map = false;
    Eigen::MatrixXd last_map;

    auto flush_cycle = [&]() {
        if (std::none_of(seen.begin(), seen.end(), [](char s) { return s != 0; })) {
            cycle_malformed = 0;
            last_index = -1;
            return;
        }
        if (2 * cycle_malformed > static_cast<size_t>(slots)) {
            ++dropped;
            std::cerr << "warning: dropped a cycle with " << cycle_malformed << "/"
                      << slots << " malformed frames\n";
        } else {
            // Pixels that never answered carry their previous value; on the
            // first cycle they take the mean of what did answer.
            double mean = 0.0;
            int n_seen = 0;
            for (int i = 0; i < slots; ++i)
                if (seen[i]) {
                    mean += map(i / cols, i % cols);
                    ++n_seen;
                }
            mean /= n_seen;
            for (int i = 0; i < slots; ++i)
                if (!seen[i] && !ever[i]) map(i / cols, i % cols) = mean;
            char name[32];
            std::snprintf(name, sizeof name, "cycle_%04zu.csv", cycles);
            io::write_map_csv(joined(opt.out_dir, name), map);
            last_map = map;
            have_last_map = true;
            ++cycles;
        }
        for (int i = 0; i < slots; ++i) ever[i] = ever[i] || seen[i];
        std::fill(seen.begin(), seen.end(), 0);
        cycle_malformed = 0;
        last_index = -1;
    };

    std::string line;
    while (std::getline(in, line)) {
        line = strip_cr(line);
        if (line.empty()) continue;
        try {
            const std::vector<uint8_t> bytes = io::from_hex(line);
            const sensor::Response resp = sensor::decode_response(bytes);
            const calibration::PixelFit* fit = cal.pixels.find(resp.row, resp.col);
            if (resp.row >= rows || resp.col >= cols || fit == nullptr)
                throw LookupError("no calibration entry for the addressed pixel");
            const calibration::Reading reading = calibration::temperature_from_frequency(
                cal.pixels, resp.row, resp.col, resp.frequency_hz);
            if (reading.suspect) ++suspect_total;

            const int index = resp.row * cols + resp.col;
            if (index <= last_index) flush_cycle();
            map(resp.row, resp.col) = reading.celsius;
            seen[index] = 1;
            last_index = index;
        } catch (const Error&) {
            ++cycle_malformed;
            ++malformed_total;
        }
    }
    flush_cycle();

    if (have_last_map) {
        const io::Heatmap image = io::render_heatmap(last_map);
        io::write_pgm(joined(opt.out_dir, "last_cycle.pgm"), image);
        io::write_ppm(joined(opt.out_dir, "last_cycle.ppm"), image);
        io::write_scale_sidecar(joined(opt.out_dir, "last_cycle_scale.txt"), image);
        if (opt.has_distance) {
            const calibration::DistanceModel model = cal.distance_model();
            Eigen::MatrixXd rises = last_map.array() - opt.ambient;
            for (int row = 0; row < rows; ++row)
                for (int col = 0; col < cols; ++col)
                    rises(row, col) = calibration::compensate_distance(
                        model, rises(row, col), opt.distance);
            io::write_map_csv(joined(opt.out_dir, "last_cycle_rise_compensated.csv"),
                              rises);
        }
    }

    std::cout << "decoded " << cycles << " cycles (" << malformed_total
              << " malformed frames, " << dropped << " cycles dropped, "
              << suspect_total << " suspect readings) -> " << opt.out_dir << "\n";
    return 0;
}

int cmd_locate(const LocateOptions& opt) {
    const Eigen::MatrixXd grid = io::read_map_csv(opt.map_path);

    localization::RiseMap map;
    map.rows = static_cast<int>(grid.rows());
    map.cols = static_cast<int>(grid.cols());
    map.gap = opt.distance;
    map.rise = opt.absolute ? (grid.array() - opt.ambient).matrix() : grid;

    thermal::CardSpec card;
    card.rows = map.rows;
    card.cols = map.cols;

    const localization::ArgmaxResult peak = localization::locate_argmax(map, opt.noise_floor);
    std::cout << "argmax " << thermal::pixel_label(peak.row, peak.col) << " rise "
              << fmt("%.3f", peak.rise) << " C" << (peak.tie ? " (tie)" : "") << "\n";

    localization::Localizer::Options loc_opts;
    loc_opts.ambient = opt.ambient;
    const localization::Localizer localizer(card, opt.distance, opt.source_size,
                                            loc_opts);
    const localization::SourceEstimate est = localizer.locate(map, opt.noise_floor);
    std::cout << "estimate (" << fmt("%.2f", est.x * 1000.0) << ", "
              << fmt("%.2f", est.y * 1000.0) << ") mm, strength "
              << fmt("%.2f", est.strength) << " C, residual "
              << fmt("%.4f", est.residual) << " C rms, "
              << (est.converged ? "converged" : "not converged") << " in "
              << est.iterations << " iterations\n";
    return est.converged ? 0 : 1;
}

int cmd_render(const RenderOptions& opt) {
    const Eigen::MatrixXd map = io::read_map_csv(opt.map_path);
    const io::Heatmap image = io::render_heatmap(map, opt.cell_size);

    std::filesystem::create_directories(opt.out_dir);
    const std::string stem = std::filesystem::path(opt.map_path).stem().string();
    const std::string pgm = joined(opt.out_dir, stem + ".pgm");
    const std::string ppm = joined(opt.out_dir, stem + ".ppm");
    const std::string sidecar = joined(opt.out_dir, stem + "_scale.txt");
    io::write_pgm(pgm, image);
    io::write_ppm(ppm, image);
    io::write_scale_sidecar(sidecar, image);

    std::cout << "rendered " << image.width << "x" << image.height << " px, scale ["
              << io::format_number(image.lo) << ", " << io::format_number(image.hi)
              << "] C\n"
              << pgm << "\n" << ppm << "\n" << sidecar << "\n";
    return 0;
}

}  // namespace ircard::cli
