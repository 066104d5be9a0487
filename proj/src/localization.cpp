#include "ircard/localization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ircard::localization {

namespace rad = ircard::radiation;
using thermal::HeatSource;
using thermal::ThermalNetwork;

namespace {

constexpr double kTieTolerance = 1e-6;  // degC

void check_map(const RiseMap& map) {
    if (map.rows < 1 || map.cols < 1 || map.rise.rows() != map.rows ||
        map.rise.cols() != map.cols)
        throw DomainError("rise map dimensions are inconsistent");
    if (!map.dead.empty() &&
        map.dead.size() != static_cast<size_t>(map.rows) * map.cols)
        throw DomainError("dead mask does not match the rise map");
}

}  // namespace

RiseMap forward_rise_map(const HeatSource& source, const thermal::CardSpec& card,
                         double gap, double ambient_c, int quad_order) {
    if (gap < 0.010) throw DomainError("measurement gap must be >= 10 mm");

    ThermalNetwork net = thermal::build_network(card, ambient_c);
    net.quad_order = quad_order;
    std::vector<HeatSource> sources{source};
    sources[0].patch.plane_gap = gap;
    thermal::solve_steady(net, sources);

    RiseMap map;
    map.rows = card.rows;
    map.cols = card.cols;
    map.gap = gap;
    map.rise.resize(card.rows, card.cols);
    for (int row = 0; row < card.rows; ++row)
        for (int col = 0; col < card.cols; ++col)
            map.rise(row, col) =
                net.nodes[net.plate_index(row, col, card.cols)].temperature - ambient_c;
    return map;
}

ArgmaxResult locate_argmax(const RiseMap& map, double noise_floor) {
    check_map(map);

    ArgmaxResult best;
    bool found = false;
    for (int row = 0; row < map.rows; ++row) {
        for (int col = 0; col < map.cols; ++col) {
            if (map.is_dead(row, col)) continue;
            const double rise = map.rise(row, col);
            if (!found || rise > best.rise) {
                best = {row, col, rise, false};
                found = true;
            }
        }
    }
    if (!found || best.rise <= noise_floor)
        throw NoDetectionError("no unmasked pixel rises above the noise floor");

    for (int row = 0; row < map.rows; ++row)
        for (int col = 0; col < map.cols; ++col)
            if (!map.is_dead(row, col) && !(row == best.row && col == best.col) &&
                best.rise - map.rise(row, col) <= kTieTolerance)
                best.tie = true;
    return best;
}

Localizer::Localizer(const thermal::CardSpec& card, double gap, double source_size,
                     const Options& options)
    : card_(card),
      gap_(gap),
      source_size_(source_size),
      options_(options),
      base_(thermal::build_network(card, options.ambient)) {
    if (gap < 0.010) throw DomainError("measurement gap must be >= 10 mm");
    if (source_size <= 0.0) throw DomainError("source size must be positive");
    base_.quad_order = options_.quad_order;

    bound_x_ = 0.5 * (card.cols - 1) * card.pitch + card.pitch;
    bound_y_ = 0.5 * (card.rows - 1) * card.pitch + card.pitch;

    // Coarse candidates at half-pitch resolution over the expanded bounds.
    const double step = 0.5 * card.pitch;
    const int nx = static_cast<int>(std::lround(2.0 * bound_x_ / step));
    const int ny = static_cast<int>(std::lround(2.0 * bound_y_ / step));
    for (int iy = 0; iy <= ny; ++iy) {
        for (int ix = 0; ix <= nx; ++ix) {
            grid_.push_back({-bound_x_ + ix * step, -bound_y_ + iy * step});
        }
    }
    templates_.reserve(grid_.size());
    for (const auto& g : grid_)
        templates_.push_back(rises(g[0], g[1], options_.nominal_strength));
}

Eigen::VectorXd Localizer::rises(double x, double y, double strength_c) const {
    ThermalNetwork net = base_;
    std::vector<HeatSource> sources{thermal::prescribed_source(
        rad::Patch{x, y, source_size_, source_size_, gap_, 0.95}, strength_c)};
    thermal::solve_steady(net, sources);

    Eigen::VectorXd out(card_.pixel_count());
    int k = 0;
    for (int row = 0; row < card_.rows; ++row)
        for (int col = 0; col < card_.cols; ++col)
            out[k++] = net.nodes[net.plate_index(row, col, card_.cols)].temperature -
                       options_.ambient;
    return out;
}

Eigen::MatrixXd Localizer::forward_map(double x, double y, double strength_c) const {
    const Eigen::VectorXd flat = rises(x, y, strength_c);
    Eigen::MatrixXd map(card_.rows, card_.cols);
    int k = 0;
    for (int row = 0; row < card_.rows; ++row)
        for (int col = 0; col < card_.cols; ++col) map(row, col) = flat[k++];
    return map;
}

SourceEstimate Localizer::locate(const RiseMap& map, double noise_floor) const {
    if (map.rows != card_.rows || map.cols != card_.cols)
        throw DomainError("rise map does not match the localizer's card grid");
    locate_argmax(map, noise_floor);  // detection gate

    const int n = card_.pixel_count();
    Eigen::VectorXd measured(n);
    std::vector<char> alive(n, 1);
    int n_alive = 0;
    {
        int k = 0;
        for (int row = 0; row < map.rows; ++row) {
            for (int col = 0; col < map.cols; ++col, ++k) {
                measured[k] = map.rise(row, col);
                alive[k] = map.is_dead(row, col) ? 0 : 1;
                n_alive += alive[k];
            }
        }
    }

    auto masked_dot = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            if (alive[i]) s += a[i] * b[i];
        return s;
    };
    const double mm = masked_dot(measured, measured);

    // Coarse matched filter over the cached templates.
    size_t best_cell = 0;
    double best_sse = std::numeric_limits<double>::infinity();
    double best_alpha = 1.0;
    for (size_t c = 0; c < grid_.size(); ++c) {
        const Eigen::VectorXd& t = templates_[c];
        const double tt = masked_dot(t, t);
        if (!(tt > 0.0)) continue;
        const double alpha = masked_dot(measured, t) / tt;
        if (!(alpha > 0.0)) continue;
        const double sse = mm - 2.0 * alpha * masked_dot(measured, t) + alpha * alpha * tt;
        if (sse < best_sse) {
            best_sse = sse;
            best_cell = c;
            best_alpha = alpha;
        }
    }

    // Template amplitude to an initial surface temperature via the T^4 scale.
    const double t_amb4 = std::pow(options_.ambient + rad::kCelsiusToKelvin, 4);
    const double t_nom4 = std::pow(options_.nominal_strength + rad::kCelsiusToKelvin, 4);
    const double alpha = std::max(best_alpha, 1e-3);
    const double strength0 =
        std::pow(t_amb4 + alpha * (t_nom4 - t_amb4), 0.25) - rad::kCelsiusToKelvin;

    const double strength_lo = options_.ambient - 49.0;
    const double strength_hi = options_.ambient + 1500.0;
    auto clamp_params = [&](Eigen::Vector3d p) {
        p[0] = std::clamp(p[0], -bound_x_, bound_x_);
        p[1] = std::clamp(p[1], -bound_y_, bound_y_);
        p[2] = std::clamp(p[2], strength_lo, strength_hi);
        return p;
    };

    Eigen::Vector3d p = clamp_params(
        {grid_[best_cell][0], grid_[best_cell][1], strength0});
    Eigen::VectorXd resid = rises(p[0], p[1], p[2]) - measured;
    double sse = masked_dot(resid, resid);

    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, 3);
    SourceEstimate est;
    int polish = 0;
    for (int it = 0; it < options_.max_iterations; ++it) {
        est.iterations = it + 1;

        const double hs =
            options_.fd_strength_fraction * std::max(p[2] - options_.ambient, 1.0);
        const Eigen::Vector3d steps{options_.fd_position_step, options_.fd_position_step,
                                    hs};
        for (int j = 0; j < 3; ++j) {
            Eigen::Vector3d hi = p, lo = p;
            hi[j] += steps[j];
            lo[j] -= steps[j];
            lo[2] = std::max(lo[2], strength_lo);
            jac.col(j) = (rises(hi[0], hi[1], hi[2]) - rises(lo[0], lo[1], lo[2])) /
                         (hi[j] - lo[j]);
        }
        for (int i = 0; i < n; ++i)
            if (!alive[i]) jac.row(i).setZero();
        Eigen::VectorXd resid_masked = resid;
        for (int i = 0; i < n; ++i)
            if (!alive[i]) resid_masked[i] = 0.0;

        const Eigen::Matrix3d jtj = jac.transpose() * jac;
        const Eigen::Vector3d delta = jtj.ldlt().solve(-jac.transpose() * resid_masked);
        if (!delta.allFinite()) break;

        // Damping: halve the step until the masked SSE improves.
        double lambda = 1.0;
        bool improved = false;
        Eigen::Vector3d accepted = p;
        for (int bt = 0; bt < 24; ++bt) {
            const Eigen::Vector3d cand = clamp_params(p + lambda * delta);
            const Eigen::VectorXd resid_cand = rises(cand[0], cand[1], cand[2]) - measured;
            const double sse_cand = masked_dot(resid_cand, resid_cand);
            if (sse_cand < sse) {
                accepted = cand;
                resid = resid_cand;
                sse = sse_cand;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) break;

        const double step_norm = (accepted.head<2>() - p.head<2>()).norm();
        p = accepted;
        if (step_norm < options_.position_tolerance) {
            est.converged = true;
            // A couple of polishing iterations drive the noiseless round trip
            // to machine level; the step criterion alone stops a hair early.
            if (++polish >= 3 || step_norm == 0.0) break;
        }
    }

    est.x = p[0];
    est.y = p[1];
    est.strength = p[2];
    est.residual = n_alive > 0 ? std::sqrt(sse / n_alive) : 0.0;

    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const double dof = std::max(1, n_alive - 3);
    const Eigen::Matrix3d cov3 = jtj.inverse() * (sse / dof);
    if (cov3.allFinite()) est.covariance = cov3.topLeftCorner<2, 2>();
    return est;
}

SourceEstimate locate_refined(const RiseMap& map, const thermal::CardSpec& card,
                              double gap, double source_size, double noise_floor) {
    const Localizer localizer(card, gap, source_size);
    return localizer.locate(map, noise_floor);
}

}  // namespace ircard::localization
