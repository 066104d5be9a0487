#include <cmath>

#include "doctest.h"
#include "ircard/thermal.hpp"

using namespace ircard::thermal;
using ircard::radiation::Patch;

namespace {

// Bare RC cell: one node, unit values, ambient 0 C, 1 W drive.
ThermalNetwork single_rc(double capacitance = 1.0, double conductance = 1.0,
                         double power = 1.0) {
    ThermalNetwork net;
    net.ambient = 0.0;
    Node node;
    node.label = "cell";
    node.capacitance = capacitance;
    node.temperature = 0.0;
    net.nodes.push_back(node);
    net.edges.push_back({0, kAmbientNode, conductance});
    net.power_in = {power};
    return net;
}

std::vector<HeatSource> no_sources;

Patch plate_patch(double size, double gap, double cx = 0.0, double cy = 0.0) {
    return Patch{cx, cy, size, size, gap, 0.95};
}

}  // namespace

TEST_CASE("network construction counts") {
    auto classify = [](const ThermalNetwork& net) {
        int attach = 0, lateral = 0, ambient = 0;
        for (const auto& e : net.edges) {
            if (e.b == kAmbientNode)
                ++ambient;
            else if (e.b == e.a + 1 && e.a % 2 == 0)
                ++attach;
            else
                ++lateral;
        }
        return std::tuple{attach, lateral, ambient};
    };

    CardSpec card;
    ThermalNetwork net = build_network(card, 21.0);
    CHECK(net.nodes.size() == 32);
    auto [attach, lateral, ambient] = classify(net);
    CHECK(attach == 16);
    CHECK(lateral == 24);
    CHECK(ambient == 16);

    card.rows = card.cols = 1;
    net = build_network(card, 21.0);
    CHECK(net.nodes.size() == 2);
    std::tie(attach, lateral, ambient) = classify(net);
    CHECK(attach == 1);
    CHECK(lateral == 0);
    CHECK(ambient == 1);

    card.rows = 2;
    card.cols = 4;
    net = build_network(card, 21.0);
    CHECK(net.nodes.size() == 16);
    std::tie(attach, lateral, ambient) = classify(net);
    CHECK(attach == 8);
    CHECK(lateral == 10);
}

TEST_CASE("card defaults give the expected lumped values") {
    const CardSpec card;
    CHECK(card.plate_capacitance() == doctest::Approx(0.260075).epsilon(1e-9));
    CHECK(pixel_label(0, 1) == "A2");
    CHECK(pixel_label(1, 1) == "B2");
    CHECK(pixel_label(3, 3) == "D4");

    const ThermalNetwork net = build_network(card, 21.0);
    CHECK(net.nodes[net.plate_index(1, 1, 4)].label == "B2.plate");
    CHECK(net.nodes[net.die_index(1, 1, 4)].label == "B2.die");
    // A2 and B2 sit in the upper-left quadrant, same column.
    const auto& a2 = *net.nodes[net.plate_index(0, 1, 4)].face;
    const auto& b2 = *net.nodes[net.plate_index(1, 1, 4)].face;
    CHECK(a2.center_x == doctest::Approx(-0.00625));
    CHECK(a2.center_y == doctest::Approx(0.01875));
    CHECK(b2.center_x == doctest::Approx(-0.00625));
    CHECK(b2.center_y == doctest::Approx(0.00625));
}

TEST_CASE("invalid card specs are rejected") {
    CardSpec card;
    card.rows = 0;
    CHECK_THROWS_AS(build_network(card, 21.0), ircard::InvalidGeometryError);
    card = CardSpec{};
    card.pitch = 0.009;  // below pixel size
    CHECK_THROWS_AS(build_network(card, 21.0), ircard::InvalidGeometryError);
    card = CardSpec{};
    card.attach_resistance = 0.0;
    CHECK_THROWS_AS(build_network(card, 21.0), ircard::InvalidGeometryError);
}

TEST_CASE("single-node step matches the analytic RC charge curve") {
    ThermalNetwork net = single_rc();
    const double dt = 1e-3;
    double t = 0.0;
    for (int k = 0; k < 1000; ++k) {
        step_transient(net, no_sources, dt);
        t += dt;
    }
    CHECK(std::abs(net.nodes[0].temperature - (1.0 - std::exp(-1.0))) < 1e-3);
    CHECK(std::abs(net.nodes[0].temperature - 0.6321) < 1e-3);
}

TEST_CASE("zero power keeps the network exactly at ambient") {
    CardSpec card;
    ThermalNetwork net = build_network(card, 21.0);
    for (int k = 0; k < 50; ++k) step_transient(net, no_sources, 0.1);
    for (const auto& node : net.nodes)
        CHECK(node.temperature == doctest::Approx(21.0).epsilon(1e-12));
}

TEST_CASE("symmetric pair stays identical under a centered source") {
    ThermalNetwork net;
    net.ambient = 21.0;
    for (int i = 0; i < 2; ++i) {
        Node node;
        node.label = i == 0 ? "left" : "right";
        node.capacitance = 0.26;
        node.temperature = 21.0;
        node.face = plate_patch(0.010, 0.010, i == 0 ? -0.0125 : 0.0125);
        net.nodes.push_back(node);
    }
    net.edges.push_back({0, 1, 3.7e-4});
    net.edges.push_back({0, kAmbientNode, 2.6e-3});
    net.edges.push_back({1, kAmbientNode, 2.6e-3});
    net.power_in = {0.0, 0.0};

    std::vector<HeatSource> sources{prescribed_source(plate_patch(0.05, 0.010), 60.0)};
    for (int k = 0; k < 200; ++k) {
        step_transient(net, sources, 0.1);
        CHECK(std::abs(net.nodes[0].temperature - net.nodes[1].temperature) < 1e-12);
    }
    CHECK(net.nodes[0].temperature > 21.0);
}

TEST_CASE("run_transient sampling and determinism") {
    CardSpec card;
    ThermalNetwork net = build_network(card, 21.0);
    std::vector<HeatSource> sources{prescribed_source(plate_patch(0.10, 0.010), 50.0)};
    TransientResult res = run_transient(net, sources, 600.0, 0.1, 1.0);
    CHECK(res.sample_count() == 601);
    CHECK(res.times.front() == 0.0);
    CHECK(res.times.back() == doctest::Approx(600.0));

    // Monotone step response under a constant positive source.
    for (int i = 1; i < res.sample_count(); ++i)
        for (int j = 0; j < res.temperatures.cols(); ++j)
            CHECK(res.temperatures(i, j) >= res.temperatures(i - 1, j) - 1e-12);

    // Maximum principle: between ambient and the source temperature.
    CHECK(res.temperatures.maxCoeff() < 50.0);
    CHECK(res.temperatures.minCoeff() >= 21.0 - 1e-12);

    // Bitwise reproducible.
    ThermalNetwork net2 = build_network(card, 21.0);
    std::vector<HeatSource> sources2{prescribed_source(plate_patch(0.10, 0.010), 50.0)};
    TransientResult res2 = run_transient(net2, sources2, 600.0, 0.1, 1.0);
    CHECK((res.temperatures - res2.temperatures).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("zero-power run stays flat") {
    CardSpec card;
    card.rows = card.cols = 2;
    ThermalNetwork net = build_network(card, 21.0);
    TransientResult res = run_transient(net, no_sources, 10.0, 0.1, 1.0);
    CHECK(res.sample_count() == 11);
    CHECK((res.temperatures.array() - 21.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("steady solve basics") {
    ThermalNetwork net = single_rc();
    solve_steady(net, no_sources);
    CHECK(net.nodes[0].temperature == doctest::Approx(1.0).epsilon(1e-12));

    // Doubling drive doubles the rise on a linear network.
    ThermalNetwork twice = single_rc(1.0, 1.0, 2.0);
    solve_steady(twice, no_sources);
    CHECK(twice.nodes[0].temperature == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("steady solve agrees with a long transient") {
    CardSpec card;
    ThermalNetwork net = build_network(card, 21.0);
    std::vector<HeatSource> sources{prescribed_source(plate_patch(0.10, 0.010), 60.0)};
    run_transient(net, sources, 1600.0, 0.1, 100.0);
    const Eigen::VectorXd late = net.temperatures();

    ThermalNetwork net2 = build_network(card, 21.0);
    std::vector<HeatSource> sources2 = sources;
    const Eigen::VectorXd steady = solve_steady(net2, sources2);
    CHECK((late - steady).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("steady energy balance closes") {
    CardSpec card;
    ThermalNetwork net = build_network(card, 21.0);
    std::vector<HeatSource> sources{prescribed_source(plate_patch(0.10, 0.010), 60.0)};
    solve_steady(net, sources);
    const PowerBalance bal = power_balance(net, sources);
    CHECK(bal.injected > 0.0);
    CHECK(std::abs(bal.residual()) / bal.injected < 1e-9);
}

TEST_CASE("near-linearity: doubled radiative drive about doubles small rises") {
    CardSpec card;
    card.rows = card.cols = 2;
    ThermalNetwork net = build_network(card, 21.0);
    std::vector<HeatSource> one{prescribed_source(plate_patch(0.05, 0.015), 23.0)};
    const Eigen::VectorXd rise1 = solve_steady(net, one).array() - 21.0;

    ThermalNetwork net2 = build_network(card, 21.0);
    // Double the injected power by doubling the T^4 difference, not the
    // temperature: solve for the plate temperature giving twice the flux.
    const double t1 = 23.0 + 273.15, t0 = 21.0 + 273.15;
    const double target = 2.0 * (std::pow(t1, 4) - std::pow(t0, 4)) + std::pow(t0, 4);
    std::vector<HeatSource> two{
        prescribed_source(plate_patch(0.05, 0.015), std::pow(target, 0.25) - 273.15)};
    const Eigen::VectorXd rise2 = solve_steady(net2, two).array() - 21.0;

    for (int i = 0; i < rise1.size(); ++i)
        CHECK(rise2[i] == doctest::Approx(2.0 * rise1[i]).epsilon(0.005));
}

TEST_CASE("centered source yields a fully symmetric map") {
    CardSpec card;
    ThermalNetwork net = build_network(card, 21.0);
    std::vector<HeatSource> sources{prescribed_source(plate_patch(0.06, 0.012), 55.0)};
    solve_steady(net, sources);

    auto plate_t = [&](int row, int col) {
        return net.nodes[net.plate_index(row, col, card.cols)].temperature;
    };
    for (int row = 0; row < 4; ++row) {
        for (int col = 0; col < 4; ++col) {
            const double t = plate_t(row, col);
            CHECK(std::abs(t - plate_t(3 - row, col)) < 1e-9);
            CHECK(std::abs(t - plate_t(row, 3 - col)) < 1e-9);
            CHECK(std::abs(t - plate_t(col, row)) < 1e-9);
        }
    }
}

TEST_CASE("default card settles close to steady within 240 s") {
    CardSpec card;
    ThermalNetwork net = build_network(card, 21.0);
    std::vector<HeatSource> sources{prescribed_source(plate_patch(0.10, 0.010), 60.0)};
    run_transient(net, sources, 240.0, 0.1, 60.0);
    const Eigen::VectorXd at_240 = net.temperatures();

    ThermalNetwork net2 = build_network(card, 21.0);
    std::vector<HeatSource> sources2 = sources;
    const Eigen::VectorXd steady = solve_steady(net2, sources2);

    int hottest = 0;
    steady.maxCoeff(&hottest);
    const double step_size = steady[hottest] - 21.0;
    CHECK(step_size > 3.0);
    CHECK(std::abs(at_240[hottest] - steady[hottest]) <= 0.10 * step_size);
}

TEST_CASE("power-driven source charges its own node and balances") {
    CardSpec card;
    card.rows = card.cols = 1;
    ThermalNetwork net = build_network(card, 21.0);
    std::vector<HeatSource> sources{
        power_source(plate_patch(0.015, 0.010), 0.7, 60.0, 20.0, 21.0)};

    double prev = sources[0].temperature;
    for (int k = 0; k < 100; ++k) {
        step_transient(net, sources, 0.1);
        CHECK(sources[0].temperature >= prev - 1e-12);
        prev = sources[0].temperature;
    }
    CHECK(sources[0].temperature > 21.0);

    ThermalNetwork net2 = build_network(card, 21.0);
    std::vector<HeatSource> sources2{
        power_source(plate_patch(0.015, 0.010), 0.7, 60.0, 20.0, 21.0)};
    solve_steady(net2, sources2);
    CHECK(sources2[0].temperature > net2.nodes[0].temperature);
    const PowerBalance bal = power_balance(net2, sources2);
    CHECK(bal.injected == doctest::Approx(0.7));
    CHECK(std::abs(bal.residual()) / bal.injected < 1e-9);
}

TEST_CASE("solver error paths") {
    ThermalNetwork net = single_rc();
    CHECK_THROWS_AS(step_transient(net, no_sources, 0.0), ircard::DomainError);

    net.nodes[0].capacitance = 0.0;
    try {
        step_transient(net, no_sources, 0.1);
        FAIL("expected SolverError");
    } catch (const ircard::SolverError& e) {
        CHECK(std::string(e.what()).find("cell") != std::string::npos);
    }

    // Disconnected from ambient.
    ThermalNetwork island;
    island.ambient = 21.0;
    island.nodes.resize(2);
    island.nodes[0].label = "a";
    island.nodes[0].capacitance = 1.0;
    island.nodes[1].label = "b";
    island.nodes[1].capacitance = 1.0;
    island.edges.push_back({0, 1, 1.0});
    island.power_in = {0.0, 0.0};
    CHECK_THROWS_AS(step_transient(island, no_sources, 0.1),
                    ircard::InvalidGeometryError);

    // Non-convergence report.
    ThermalNetwork rc = single_rc();
    SteadyOptions opts;
    opts.max_iterations = 0;
    CHECK_THROWS_AS(solve_steady(rc, no_sources, opts), ircard::SolverError);
}
