#include <cmath>
#include <random>

#include "doctest.h"
#include "ircard/localization.hpp"

using namespace ircard;
using namespace ircard::localization;
using thermal::CardSpec;

namespace {

thermal::HeatSource source_at(double x, double y, double temp_c, double size = 0.010) {
    return thermal::prescribed_source(
        radiation::Patch{x, y, size, size, 0.010, 0.95}, temp_c);
}

RiseMap map_from(const Eigen::MatrixXd& rise, double gap = 0.010) {
    RiseMap map;
    map.rows = static_cast<int>(rise.rows());
    map.cols = static_cast<int>(rise.cols());
    map.gap = gap;
    map.rise = rise;
    return map;
}

}  // namespace

TEST_CASE("forward rise maps reflect source placement") {
    const CardSpec card;

    // Centered on B2: that plate is the unique hottest pixel.
    const double bx = card.plate_center_x(1), by = card.plate_center_y(1);
    const RiseMap at_b2 = forward_rise_map(source_at(bx, by, 60.0), card, 0.010);
    REQUIRE(at_b2.rows == 4);
    REQUIRE(at_b2.cols == 4);
    CHECK(at_b2.gap == 0.010);
    const ArgmaxResult peak = locate_argmax(at_b2);
    CHECK(peak.row == 1);
    CHECK(peak.col == 1);
    CHECK_FALSE(peak.tie);
    CHECK(at_b2.rise.minCoeff() > 0.0);

    // Midway between A2 and B2 the pair is jointly maximal. The card edge
    // above row A skews conduction, so the pair is near-equal rather than
    // identical; on a two-row card the mirror symmetry is exact.
    const double mid_y = 0.5 * (card.plate_center_y(0) + card.plate_center_y(1));
    const RiseMap mid = forward_rise_map(source_at(bx, mid_y, 60.0), card, 0.010);
    const ArgmaxResult shared = locate_argmax(mid);
    CHECK(shared.col == 1);
    CHECK((shared.row == 0 || shared.row == 1));
    double third = 0.0;
    for (int row = 0; row < 4; ++row)
        for (int col = 0; col < 4; ++col)
            if (!(col == 1 && row < 2)) third = std::max(third, mid.rise(row, col));
    CHECK(std::min(mid.rise(0, 1), mid.rise(1, 1)) > third);
    CHECK(std::abs(mid.rise(0, 1) - mid.rise(1, 1)) < 0.08 * mid.rise.maxCoeff());

    CardSpec two_rows = card;
    two_rows.rows = 2;
    const double mid2_y =
        0.5 * (two_rows.plate_center_y(0) + two_rows.plate_center_y(1));
    const RiseMap mid2 = forward_rise_map(source_at(bx, mid2_y, 60.0), two_rows, 0.010);
    CHECK(std::abs(mid2.rise(0, 1) - mid2.rise(1, 1)) < 1e-9);
    CHECK(std::max(mid2.rise(0, 1), mid2.rise(1, 1)) == mid2.rise.maxCoeff());
    CHECK(locate_argmax(mid2).tie);

    // B2 and B3 are mirror-equivalent positions, so the two maps mirror.
    const RiseMap at_b3 =
        forward_rise_map(source_at(card.plate_center_x(2), by, 60.0), card, 0.010);
    for (int row = 0; row < 4; ++row)
        for (int col = 0; col < 4; ++col)
            CHECK(std::abs(at_b3.rise(row, col) - at_b2.rise(row, 3 - col)) < 1e-9);

    // A one-pitch translation shifts the map by one pixel; the comparison is
    // exact for mirror-equivalent interior pixels and drifts below 10% where
    // the shifted pattern samples closer to the card edge.
    for (int row = 1; row <= 2; ++row)
        for (int col = 1; col <= 2; ++col)
            CHECK(std::abs(at_b3.rise(row, col) - at_b2.rise(row, col - 1)) <
                  0.10 * at_b3.rise(row, col));

    CHECK_THROWS_AS(forward_rise_map(source_at(0.0, 0.0, 60.0), card, 0.005),
                    DomainError);
}

TEST_CASE("argmax handles floors, masks, and ties") {
    Eigen::MatrixXd rise(2, 2);
    rise << 1.0, 0.99, 0.5, 0.2;
    const RiseMap map = map_from(rise);

    const ArgmaxResult top = locate_argmax(map, 0.2);
    CHECK(top.row == 0);
    CHECK(top.col == 0);
    CHECK(top.rise == 1.0);
    CHECK_FALSE(top.tie);

    // Nothing above the floor -> no detection; a floor equal to the max is
    // still "not above".
    CHECK_THROWS_AS(locate_argmax(map, 2.0), NoDetectionError);
    CHECK_THROWS_AS(locate_argmax(map, 1.0), NoDetectionError);

    // Exact ties report the lowest row-major pixel and set the flag.
    Eigen::MatrixXd tied(2, 2);
    tied << 0.5, 1.0, 1.0, 0.1;
    const ArgmaxResult both = locate_argmax(map_from(tied), 0.2);
    CHECK(both.row == 0);
    CHECK(both.col == 1);
    CHECK(both.tie);

    // Masking the winner hands the result to the runner-up.
    RiseMap masked = map;
    masked.dead = {1, 0, 0, 0};
    const ArgmaxResult second = locate_argmax(masked, 0.2);
    CHECK(second.row == 0);
    CHECK(second.col == 1);
    masked.dead = {1, 1, 1, 1};
    CHECK_THROWS_AS(locate_argmax(masked, 0.2), NoDetectionError);

    RiseMap bad = map;
    bad.cols = 3;
    CHECK_THROWS_AS(locate_argmax(bad, 0.2), DomainError);
    bad = map;
    bad.dead = {0, 0};
    CHECK_THROWS_AS(locate_argmax(bad, 0.2), DomainError);
}

TEST_CASE("noiseless localization lands within a millimeter") {
    const CardSpec card;
    const Localizer localizer(card, 0.010, 0.010);

    const double targets[][2] = {
        {0.0031, -0.0074},    // off-grid, between pixels
        {-0.0125, 0.00625},   // on a pixel center
        {0.016, 0.016},       // toward a corner
    };
    for (const auto& t : targets) {
        const RiseMap map =
            forward_rise_map(source_at(t[0], t[1], 60.0), card, 0.010);
        const SourceEstimate est = localizer.locate(map);
        CHECK(est.converged);
        const double err = std::hypot(est.x - t[0], est.y - t[1]);
        CHECK(err < 1e-3);
        CHECK(est.strength > 21.0);
    }
}

TEST_CASE("self-consistent maps are reproduced to numerical noise") {
    const CardSpec card;
    const Localizer localizer(card, 0.010, 0.010);

    const double x0 = 0.004, y0 = -0.006, s0 = 55.0;
    const RiseMap map = map_from(localizer.forward_map(x0, y0, s0));
    const SourceEstimate est = localizer.locate(map);
    CHECK(est.converged);
    CHECK(std::hypot(est.x - x0, est.y - y0) < 1e-4);
    CHECK(std::abs(est.strength - s0) < 1e-3);
    CHECK(est.residual < 1e-6);
    CHECK(est.covariance.allFinite());
    CHECK(est.covariance(0, 0) >= 0.0);
    CHECK(est.covariance(1, 1) >= 0.0);
}

TEST_CASE("localization tolerates measurement noise") {
    const CardSpec card;
    const Localizer localizer(card, 0.010, 0.010);
    const double x0 = -0.0052, y0 = 0.0088;
    const RiseMap clean = forward_rise_map(source_at(x0, y0, 60.0), card, 0.010);

    double worst = 0.0, total = 0.0;
    const int trials = 20;
    for (int seed = 1; seed <= trials; ++seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> jitter(0.0, 0.02);
        RiseMap noisy = clean;
        for (int row = 0; row < noisy.rows; ++row)
            for (int col = 0; col < noisy.cols; ++col)
                noisy.rise(row, col) += jitter(rng);
        const SourceEstimate est = localizer.locate(noisy);
        const double err = std::hypot(est.x - x0, est.y - y0);
        worst = std::max(worst, err);
        total += err;
    }
    CHECK(worst < 5e-3);
    CHECK(total / trials < 2e-3);
}

TEST_CASE("mirrored maps give mirrored estimates") {
    const CardSpec card;
    const Localizer localizer(card, 0.010, 0.010);
    const RiseMap map = forward_rise_map(source_at(0.008, 0.003, 60.0), card, 0.010);

    RiseMap flipped = map;
    for (int row = 0; row < map.rows; ++row)
        for (int col = 0; col < map.cols; ++col)
            flipped.rise(row, col) = map.rise(row, map.cols - 1 - col);

    const SourceEstimate direct = localizer.locate(map);
    const SourceEstimate mirror = localizer.locate(flipped);
    CHECK(std::abs(mirror.x + direct.x) < 2e-4);
    CHECK(std::abs(mirror.y - direct.y) < 2e-4);
    CHECK(std::abs(mirror.strength - direct.strength) < 1e-2);
}

TEST_CASE("a dead pixel near the peak barely moves the estimate") {
    const CardSpec card;
    const Localizer localizer(card, 0.010, 0.010);
    const double x0 = 0.0031, y0 = -0.0074;
    RiseMap map = forward_rise_map(source_at(x0, y0, 60.0), card, 0.010);

    const ArgmaxResult peak = locate_argmax(map);
    map.dead.assign(static_cast<size_t>(map.rows) * map.cols, 0);
    map.dead[static_cast<size_t>(peak.row) * map.cols + peak.col] = 1;

    const SourceEstimate est = localizer.locate(map);
    CHECK(std::hypot(est.x - x0, est.y - y0) < 2e-3);
}

TEST_CASE("degenerate maps come back flagged instead of throwing") {
    const CardSpec card;
    const Localizer localizer(card, 0.010, 0.010);
    Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(4, 4, 3.0);

    const SourceEstimate est = localizer.locate(map_from(flat));
    CHECK(std::isfinite(est.x));
    CHECK(std::isfinite(est.y));
    CHECK(std::isfinite(est.strength));
    CHECK(std::abs(est.x) <= 0.0375 + 1e-12);
    CHECK(std::abs(est.y) <= 0.0375 + 1e-12);
}
