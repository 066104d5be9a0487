#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <vector>

#include "ircard/thermal.hpp"

namespace ircard::localization {

inline constexpr double kDefaultNoiseFloor = 0.2;  // degC

// Per-pixel temperature rises over ambient at a stated gap distance.
struct RiseMap {
    int rows = 0;
    int cols = 0;
    double gap = 0.010;         // m
    Eigen::MatrixXd rise;       // degC, rows x cols
    std::vector<char> dead;     // row-major mask; empty = all alive

    bool is_dead(int row, int col) const {
        return !dead.empty() && dead[static_cast<size_t>(row) * cols + col];
    }
};

struct ArgmaxResult {
    int row = 0;
    int col = 0;
    double rise = 0.0;
    bool tie = false;  // another unmasked pixel matches the maximum
};

struct SourceEstimate {
    double x = 0.0;         // m, board plane
    double y = 0.0;         // m
    double strength = 0.0;  // source surface temperature [degC]
    double residual = 0.0;  // degC RMS over unmasked pixels
    Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();  // position proxy
    bool converged = false;
    int iterations = 0;
};

// Steady-state plate rises under one source facing the card at `gap`.
RiseMap forward_rise_map(const thermal::HeatSource& source, const thermal::CardSpec& card,
                         double gap, double ambient_c = 21.0,
                         int quad_order = radiation::kDefaultQuadOrder);

// Hottest unmasked pixel; ties break toward the lowest row-major index and
// are reported. Throws NoDetectionError when nothing clears the floor.
ArgmaxResult locate_argmax(const RiseMap& map, double noise_floor = kDefaultNoiseFloor);

// Inverts rise maps for one fixed card/gap/source-size geometry. Building a
// Localizer precomputes the coarse search templates, so repeated locates are
// cheap; all evaluation orders are fixed and results deterministic.
class Localizer {
  public:
    struct Options {
        double ambient = 21.0;                // degC
        int quad_order = 8;                   // forward-model quadrature
        double nominal_strength = 51.0;       // degC used for templates
        double position_tolerance = 1e-4;     // m, Gauss-Newton stop
        int max_iterations = 50;
        double fd_position_step = 5e-4;       // m, central differences
        double fd_strength_fraction = 0.01;   // of the rise above ambient
    };

    Localizer(const thermal::CardSpec& card, double gap, double source_size,
              const Options& options);
    Localizer(const thermal::CardSpec& card, double gap, double source_size)
        : Localizer(card, gap, source_size, Options{}) {}

    // Rises (rows x cols) the forward model predicts for a prescribed-mode
    // source of edge `source_size` at (x, y).
    Eigen::MatrixXd forward_map(double x, double y, double strength_c) const;

    SourceEstimate locate(const RiseMap& map,
                          double noise_floor = kDefaultNoiseFloor) const;

  private:
    Eigen::VectorXd rises(double x, double y, double strength_c) const;

    thermal::CardSpec card_;
    double gap_;
    double source_size_;
    Options options_;
    thermal::ThermalNetwork base_;
    double bound_x_ = 0.0;  // |x| limit: card extent plus one pitch
    double bound_y_ = 0.0;
    std::vector<std::array<double, 2>> grid_;
    std::vector<Eigen::VectorXd> templates_;
};

// One-shot convenience wrapper around Localizer.
SourceEstimate locate_refined(const RiseMap& map, const thermal::CardSpec& card,
                              double gap, double source_size,
                              double noise_floor = kDefaultNoiseFloor);

}  // namespace ircard::localization
