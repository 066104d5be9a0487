#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "ircard/errors.hpp"

namespace ircard::cli {

int run_cli(int argc, char** argv) {
    CLI::App app{"IR sensor-card simulator and measurement toolkit"};
    app.require_subcommand(1);
    int rc = 0;

    SimulateOptions sim;
    CLI::App* simulate = app.add_subcommand("simulate", "run a configured simulation");
    simulate->add_option("--config", sim.config_path, "run configuration (JSON)");
    simulate->add_option("--out-dir", sim.out_dir, "output directory")
        ->capture_default_str();
    CLI::Option* sim_seed = simulate->add_option("--seed", sim.seed, "noise seed");
    simulate->callback([&] {
        sim.has_seed = sim_seed->count() > 0;
        rc = cmd_simulate(sim);
    });

    ReplayOptions rep;
    CLI::App* replay = app.add_subcommand("replay", "run a canned experiment");
    replay->add_option("experiment", rep.experiment, "A (ramp), B (sweep) or C (hotspot)")
        ->required()
        ->check(CLI::IsMember({"A", "B", "C", "a", "b", "c"}));
    replay->add_option("--config", rep.config_path, "override the canned defaults");
    replay->add_option("--out-dir", rep.out_dir, "output directory")
        ->capture_default_str();
    CLI::Option* rep_seed = replay->add_option("--seed", rep.seed, "noise seed");
    replay->callback([&] {
        rep.has_seed = rep_seed->count() > 0;
        rc = cmd_replay(rep);
    });

    CalibrateFitOptions fit;
    CLI::App* calibrate =
        app.add_subcommand("calibrate-fit", "fit a calibration from recorded samples");
    calibrate->add_option("samples", fit.samples_path, "samples CSV")->required();
    calibrate->add_option("--out-dir", fit.out_dir, "output directory")
        ->capture_default_str();
    calibrate->add_option("--ambient", fit.ambient, "room temperature [C]")
        ->capture_default_str();
    calibrate->add_option("--plate-size", fit.plate_size, "calibration plate edge [m]")
        ->capture_default_str();
    calibrate->callback([&] { rc = cmd_calibrate_fit(fit); });

    IngestOptions ing;
    CLI::App* ingest = app.add_subcommand("ingest", "decode a frame stream into maps");
    ingest->add_option("stream", ing.stream_path, "frame stream (hex lines)")
        ->required();
    ingest->add_option("calibration", ing.calibration_path, "calibration JSON")
        ->required();
    ingest->add_option("--out-dir", ing.out_dir, "output directory")
        ->capture_default_str();
    ingest->add_option("--ambient", ing.ambient, "room temperature [C]")
        ->capture_default_str();
    CLI::Option* ing_dist = ingest->add_option(
        "--distance", ing.distance, "also compensate final rises for this gap [m]");
    ingest->callback([&] {
        ing.has_distance = ing_dist->count() > 0;
        rc = cmd_ingest(ing);
    });

    LocateOptions loc;
    CLI::App* locate = app.add_subcommand("locate", "localize a source from a rise map");
    locate->add_option("map", loc.map_path, "map CSV")->required();
    locate->add_option("--distance", loc.distance, "gap the map was taken at [m]")
        ->capture_default_str();
    locate->add_option("--noise-floor", loc.noise_floor, "detection floor [C]")
        ->capture_default_str();
    locate->add_option("--source-size", loc.source_size, "forward-model patch edge [m]")
        ->capture_default_str();
    locate->add_option("--ambient", loc.ambient, "room temperature [C]")
        ->capture_default_str();
    locate->add_flag("--absolute", loc.absolute,
                     "map holds absolute temperatures; subtract ambient first");
    locate->callback([&] { rc = cmd_locate(loc); });

    RenderOptions ren;
    CLI::App* render = app.add_subcommand("render", "render a map CSV as PGM/PPM");
    render->add_option("map", ren.map_path, "map CSV")->required();
    render->add_option("--out-dir", ren.out_dir, "output directory")
        ->capture_default_str();
    render->add_option("--cell-size", ren.cell_size, "pixels per map cell")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    render->callback([&] { rc = cmd_render(ren); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}

}  // namespace ircard::cli

int main(int argc, char** argv) { return ircard::cli::run_cli(argc, argv); }
