#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "ircard/radiation.hpp"

namespace ircard::thermal {

// Grid position as printed on the card: rows A.., columns 1.. ("B2").
std::string pixel_label(int row, int col);

// Geometry and material description of one sensor card.
struct CardSpec {
    int rows = 4;
    int cols = 4;
    double pixel_size = 0.010;        // copper plate side [m]
    double pitch = 0.0125;            // center-to-center spacing [m]
    double copper_thickness = 35e-6;  // plate foil [m]
    double board_thickness = 1.55e-3; // FR-4 core [m]
    double attach_resistance = 50.0;  // die glue path, non-conductive [K/W]
    double plate_emissivity = 0.95;   // black-painted plate surface
    double film_coefficient = 8.0;    // still-air convection [W/(m^2 K)]

    double die_size = 0.002;          // die footprint [m]
    double die_capacitance = 1e-3;    // die + solder [J/K]
    double copper_vol_heat = 3.45e6;  // [J/(m^3 K)]
    double board_vol_heat = 1.6e6;    // [J/(m^3 K)]
    double board_conductivity = 0.3;  // FR-4 in-plane [W/(m K)]

    int pixel_count() const { return rows * cols; }
    double plate_center_x(int col) const { return (col - 0.5 * (cols - 1)) * pitch; }
    double plate_center_y(int row) const { return (0.5 * (rows - 1) - row) * pitch; }
    double plate_capacitance() const;
    void validate() const;
};

// One lumped node. Plate nodes carry the radiating front face.
struct Node {
    std::string label;
    double capacitance = 0.0;   // [J/K]
    double temperature = 21.0;  // [degC]
    std::optional<radiation::Patch> face;
};

// Conductance link between two nodes, or from a node to ambient.
inline constexpr int kAmbientNode = -1;

struct Edge {
    int a = 0;
    int b = kAmbientNode;
    double conductance = 0.0;  // [W/K]
};

struct ThermalNetwork {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::vector<double> power_in;  // direct injection per node [W]
    double ambient = 21.0;         // [degC]
    int quad_order = radiation::kDefaultQuadOrder;

    int plate_index(int row, int col, int cols) const { return 2 * (row * cols + col); }
    int die_index(int row, int col, int cols) const { return 2 * (row * cols + col) + 1; }
    Eigen::VectorXd temperatures() const;
    void set_temperatures(const Eigen::VectorXd& t);
};

// A radiating surface facing the card: the calibration plate (prescribed
// temperature) or a dissipating component (power-driven, with its own small
// RC node whose state lives in `temperature`).
struct HeatSource {
    radiation::Patch patch;
    enum class Mode { kPrescribed, kPower } mode = Mode::kPrescribed;
    double temperature = 21.0;         // prescribed value, or evolving state [degC]
    double power = 0.0;                // drive [W], power mode
    double source_resistance = 60.0;   // to ambient [K/W], power mode
    double source_capacitance = 20.0;  // [J/K], power mode
};

HeatSource prescribed_source(const radiation::Patch& patch, double temperature_c);
HeatSource power_source(const radiation::Patch& patch, double watts,
                        double resistance_k_per_w, double capacitance_j_per_k,
                        double initial_temperature_c);

// Build the two-node-per-pixel card network: plate + die joined through the
// attach resistance, lateral board bridges between adjacent plates, and
// convective + ambient-linearized-radiation losses on every plate.
ThermalNetwork build_network(const CardSpec& card, double ambient_c);

// Net power [W] flowing into each node at the given state (conduction,
// ambient losses, direct injections, and source radiation at the sources'
// current temperatures).
Eigen::VectorXd net_power(const ThermalNetwork& net,
                          const std::vector<HeatSource>& sources,
                          const Eigen::VectorXd& temperatures);

struct PowerBalance {
    double injected = 0.0;    // drives + direct power + net radiation received [W]
    double dissipated = 0.0;  // ambient links, card and sources [W]
    double residual() const { return injected - dissipated; }
};

// Steady-state bookkeeping; meaningful after solve_steady.
PowerBalance power_balance(const ThermalNetwork& net,
                           const std::vector<HeatSource>& sources);

// Advance one semi-implicit Euler step of length dt [s]: conduction and
// ambient losses implicit, source radiation explicit at the old state.
// Power-driven sources advance their own node alongside.
void step_transient(ThermalNetwork& net, std::vector<HeatSource>& sources,
                    double dt);

struct TransientResult {
    std::vector<double> times;     // [s]
    Eigen::MatrixXd temperatures;  // sample x node [degC]

    int sample_count() const { return static_cast<int>(times.size()); }
};

// Integrate to t_end at fixed dt, recording every `record_every` seconds
// (sample 0 is the initial state, the last sample lands on t_end).
TransientResult run_transient(ThermalNetwork& net, std::vector<HeatSource>& sources,
                              double t_end, double dt, double record_every);

struct SteadyOptions {
    int max_iterations = 100;
    double power_tolerance = 1e-9;  // converged when max |residual| < this [W]
};

// Damped Newton solve of the nonlinear steady balance from the current state.
// Power-driven source temperatures are solved jointly; results are written
// back into the network and the sources.
Eigen::VectorXd solve_steady(ThermalNetwork& net, std::vector<HeatSource>& sources,
                             const SteadyOptions& opts = {});

}  // namespace ircard::thermal
