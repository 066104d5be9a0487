#include "ircard/thermal.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <string>

namespace ircard::thermal {

namespace rad = ircard::radiation;

namespace {

double to_kelvin(double celsius) { return celsius + rad::kCelsiusToKelvin; }

// Plate front face paired with a source patch lives at the source's gap.
rad::Patch facing(const rad::Patch& face, const rad::Patch& source) {
    rad::Patch p = face;
    p.plane_gap = source.plane_gap;
    return p;
}

void validate_sources(const std::vector<HeatSource>& sources, double ambient_c) {
    for (const auto& s : sources) {
        if (s.mode == HeatSource::Mode::kPower) {
            if (s.power < 0.0) throw DomainError("source power must be >= 0");
            if (s.source_resistance <= 0.0 || s.source_capacitance <= 0.0)
                throw DomainError("power source needs positive resistance and capacitance");
        } else if (s.temperature < ambient_c - 50.0) {
            throw DomainError("prescribed source temperature below ambient - 50 C");
        }
    }
}

void validate_network(const ThermalNetwork& net) {
    const int n = static_cast<int>(net.nodes.size());
    if (n == 0) throw InvalidGeometryError("network has no nodes");
    if (static_cast<int>(net.power_in.size()) != n)
        throw InvalidGeometryError("power_in size does not match node count");

    // Every node needs a conductance path to ambient; walk from the ambient
    // links inward.
    std::vector<char> reached(n, 0);
    std::vector<std::vector<int>> adjacency(n);
    std::deque<int> frontier;
    for (const auto& e : net.edges) {
        if (e.a < 0 || e.a >= n || e.b < kAmbientNode || e.b >= n)
            throw InvalidGeometryError("edge endpoint out of range");
        if (!(e.conductance >= 0.0) || !std::isfinite(e.conductance))
            throw InvalidGeometryError("edge conductance must be finite and >= 0");
        if (e.conductance == 0.0) continue;
        if (e.b == kAmbientNode) {
            if (!reached[e.a]) {
                reached[e.a] = 1;
                frontier.push_back(e.a);
            }
        } else {
            adjacency[e.a].push_back(e.b);
            adjacency[e.b].push_back(e.a);
        }
    }
    while (!frontier.empty()) {
        const int i = frontier.front();
        frontier.pop_front();
        for (int j : adjacency[i]) {
            if (!reached[j]) {
                reached[j] = 1;
                frontier.push_back(j);
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (!reached[i])
            throw InvalidGeometryError("node '" + net.nodes[i].label +
                                       "' has no conductance path to ambient");
    }
}

// Radiative power from every source into every radiating node at the given
// state; per_source collects each source's total outflow toward the card.
Eigen::VectorXd source_injections(const ThermalNetwork& net,
                                  const std::vector<HeatSource>& sources,
                                  const Eigen::VectorXd& t,
                                  std::vector<double>* per_source = nullptr) {
    const int n = static_cast<int>(net.nodes.size());
    Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
    if (per_source) per_source->assign(sources.size(), 0.0);
    for (size_t s = 0; s < sources.size(); ++s) {
        const HeatSource& src = sources[s];
        const double ts_k = to_kelvin(src.temperature);
        for (int i = 0; i < n; ++i) {
            if (!net.nodes[i].face) continue;
            const rad::Patch face = facing(*net.nodes[i].face, src.patch);
            const double f = rad::view_factor_cached(src.patch, face, net.quad_order);
            const double qi = rad::exchange_power_for_factor(
                src.patch.area(), f, src.patch.emissivity, face.emissivity, ts_k,
                to_kelvin(t[i]));
            q[i] += qi;
            if (per_source) (*per_source)[s] += qi;
        }
    }
    return q;
}

}  // namespace

std::string pixel_label(int row, int col) {
    return std::string(1, static_cast<char>('A' + row)) + std::to_string(col + 1);
}

double CardSpec::plate_capacitance() const {
    return pixel_size * pixel_size *
           (copper_thickness * copper_vol_heat + board_thickness * board_vol_heat);
}

void CardSpec::validate() const {
    if (rows < 1 || cols < 1) throw InvalidGeometryError("grid needs rows*cols >= 1");
    if (pixel_size <= 0.0 || pitch <= 0.0 || copper_thickness <= 0.0 ||
        board_thickness <= 0.0)
        throw InvalidGeometryError("card dimensions must be positive");
    if (pitch < pixel_size) throw InvalidGeometryError("pitch must be >= pixel_size");
    if (attach_resistance <= 0.0)
        throw InvalidGeometryError("attach_resistance must be positive");
    if (plate_emissivity < 0.0 || plate_emissivity > 1.0)
        throw InvalidGeometryError("plate emissivity outside [0,1]");
    if (film_coefficient < 0.0)
        throw InvalidGeometryError("film coefficient must be >= 0");
    if (die_size < 0.0 || die_size >= pixel_size)
        throw InvalidGeometryError("die must fit inside the pixel plate");
    if (die_capacitance <= 0.0 || copper_vol_heat <= 0.0 || board_vol_heat <= 0.0 ||
        board_conductivity <= 0.0)
        throw InvalidGeometryError("material parameters must be positive");
}

Eigen::VectorXd ThermalNetwork::temperatures() const {
    Eigen::VectorXd t(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) t[i] = nodes[i].temperature;
    return t;
}

void ThermalNetwork::set_temperatures(const Eigen::VectorXd& t) {
    for (size_t i = 0; i < nodes.size(); ++i) nodes[i].temperature = t[i];
}

HeatSource prescribed_source(const radiation::Patch& patch, double temperature_c) {
    HeatSource s;
    s.patch = patch;
    s.mode = HeatSource::Mode::kPrescribed;
    s.temperature = temperature_c;
    return s;
}

HeatSource power_source(const radiation::Patch& patch, double watts,
                        double resistance_k_per_w, double capacitance_j_per_k,
                        double initial_temperature_c) {
    if (watts < 0.0) throw DomainError("source power must be >= 0");
    if (resistance_k_per_w <= 0.0 || capacitance_j_per_k <= 0.0)
        throw DomainError("power source needs positive resistance and capacitance");
    HeatSource s;
    s.patch = patch;
    s.mode = HeatSource::Mode::kPower;
    s.temperature = initial_temperature_c;
    s.power = watts;
    s.source_resistance = resistance_k_per_w;
    s.source_capacitance = capacitance_j_per_k;
    return s;
}

ThermalNetwork build_network(const CardSpec& card, double ambient_c) {
    card.validate();

    ThermalNetwork net;
    net.ambient = ambient_c;
    const int n = 2 * card.pixel_count();
    net.nodes.reserve(n);
    net.power_in.assign(n, 0.0);

    const double plate_c = card.plate_capacitance();
    const double exposed =
        2.0 * card.pixel_size * card.pixel_size - card.die_size * card.die_size;
    const double t_amb_k = to_kelvin(ambient_c);
    // Ambient loss: convection plus radiation linearized around ambient.
    const double g_ambient =
        card.film_coefficient * exposed +
        4.0 * rad::kStefanBoltzmann * card.plate_emissivity * exposed * t_amb_k *
            t_amb_k * t_amb_k;
    const double g_attach = 1.0 / card.attach_resistance;
    const double g_lateral =
        card.board_conductivity * card.pixel_size * card.board_thickness / card.pitch;

    for (int row = 0; row < card.rows; ++row) {
        for (int col = 0; col < card.cols; ++col) {
            const std::string label = pixel_label(row, col);
            const int plate = net.plate_index(row, col, card.cols);
            const int die = net.die_index(row, col, card.cols);

            Node plate_node;
            plate_node.label = label + ".plate";
            plate_node.capacitance = plate_c;
            plate_node.temperature = ambient_c;
            plate_node.face = rad::Patch{card.plate_center_x(col), card.plate_center_y(row),
                                         card.pixel_size, card.pixel_size, 0.010,
                                         card.plate_emissivity};
            Node die_node;
            die_node.label = label + ".die";
            die_node.capacitance = card.die_capacitance;
            die_node.temperature = ambient_c;

            net.nodes.push_back(std::move(plate_node));
            net.nodes.push_back(std::move(die_node));
            net.edges.push_back({plate, die, g_attach});
            net.edges.push_back({plate, kAmbientNode, g_ambient});
        }
    }
    for (int row = 0; row < card.rows; ++row) {
        for (int col = 0; col < card.cols; ++col) {
            const int plate = net.plate_index(row, col, card.cols);
            if (col + 1 < card.cols)
                net.edges.push_back(
                    {plate, net.plate_index(row, col + 1, card.cols), g_lateral});
            if (row + 1 < card.rows)
                net.edges.push_back(
                    {plate, net.plate_index(row + 1, col, card.cols), g_lateral});
        }
    }

    validate_network(net);
    return net;
}

Eigen::VectorXd net_power(const ThermalNetwork& net, const std::vector<HeatSource>& sources,
                          const Eigen::VectorXd& temperatures) {
    const int n = static_cast<int>(net.nodes.size());
    if (temperatures.size() != n)
        throw DomainError("temperature vector size does not match node count");
    Eigen::VectorXd p = source_injections(net, sources, temperatures);
    for (int i = 0; i < n; ++i) p[i] += net.power_in[i];
    for (const auto& e : net.edges) {
        if (e.b == kAmbientNode) {
            p[e.a] += e.conductance * (net.ambient - temperatures[e.a]);
        } else {
            const double flow = e.conductance * (temperatures[e.b] - temperatures[e.a]);
            p[e.a] += flow;
            p[e.b] -= flow;
        }
    }
    return p;
}

PowerBalance power_balance(const ThermalNetwork& net,
                           const std::vector<HeatSource>& sources) {
    const Eigen::VectorXd t = net.temperatures();
    std::vector<double> per_source;
    source_injections(net, sources, t, &per_source);

    PowerBalance bal;
    for (double p : net.power_in) bal.injected += p;
    for (const auto& e : net.edges) {
        if (e.b == kAmbientNode)
            bal.dissipated += e.conductance * (t[e.a] - net.ambient);
    }
    for (size_t s = 0; s < sources.size(); ++s) {
        if (sources[s].mode == HeatSource::Mode::kPower) {
            // Drive power enters at the source; its radiation to the card is
            // an internal transfer.
            bal.injected += sources[s].power;
            bal.dissipated +=
                (sources[s].temperature - net.ambient) / sources[s].source_resistance;
        } else {
            bal.injected += per_source[s];
        }
    }
    return bal;
}

void step_transient(ThermalNetwork& net, std::vector<HeatSource>& sources, double dt) {
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    validate_network(net);
    validate_sources(sources, net.ambient);

    const int n = static_cast<int>(net.nodes.size());
    for (const auto& node : net.nodes) {
        if (!(node.capacitance > 0.0))
            throw SolverError("node '" + node.label + "' has non-positive capacitance");
    }

    const Eigen::VectorXd t_old = net.temperatures();
    std::vector<double> per_source;
    const Eigen::VectorXd q_src = source_injections(net, sources, t_old, &per_source);

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        const double c_dt = net.nodes[i].capacitance / dt;
        a(i, i) = c_dt;
        rhs[i] = c_dt * t_old[i] + net.power_in[i] + q_src[i];
    }
    for (const auto& e : net.edges) {
        if (e.b == kAmbientNode) {
            a(e.a, e.a) += e.conductance;
            rhs[e.a] += e.conductance * net.ambient;
        } else {
            a(e.a, e.a) += e.conductance;
            a(e.b, e.b) += e.conductance;
            a(e.a, e.b) -= e.conductance;
            a(e.b, e.a) -= e.conductance;
        }
    }

    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    if (ldlt.info() != Eigen::Success)
        throw SolverError("transient system factorization failed");
    const Eigen::VectorXd t_new = ldlt.solve(rhs);
    if (!t_new.allFinite()) throw SolverError("transient step produced non-finite state");
    net.set_temperatures(t_new);

    // Power-driven sources advance their own RC node; radiation to the card
    // stays explicit at the old state.
    for (size_t s = 0; s < sources.size(); ++s) {
        HeatSource& src = sources[s];
        if (src.mode != HeatSource::Mode::kPower) continue;
        const double c_dt = src.source_capacitance / dt;
        const double g_amb = 1.0 / src.source_resistance;
        src.temperature = (c_dt * src.temperature + src.power + g_amb * net.ambient -
                           per_source[s]) /
                          (c_dt + g_amb);
    }
}

TransientResult run_transient(ThermalNetwork& net, std::vector<HeatSource>& sources,
                              double t_end, double dt, double record_every) {
    if (!(dt > 0.0) || t_end < dt) throw DomainError("need t_end >= dt > 0");
    if (!(record_every > 0.0)) throw DomainError("record_every must be positive");

    const long steps = std::lround(t_end / dt);
    const long stride = std::max(1l, std::lround(record_every / dt));

    const int n = static_cast<int>(net.nodes.size());
    long count = steps / stride + 1;
    if (steps % stride != 0) ++count;

    TransientResult out;
    out.times.reserve(count);
    out.temperatures.resize(count, n);

    long sample = 0;
    auto record = [&](double time) {
        out.times.push_back(time);
        out.temperatures.row(sample) = net.temperatures().transpose();
        ++sample;
    };
    record(0.0);
    for (long k = 1; k <= steps; ++k) {
        step_transient(net, sources, dt);
        if (k % stride == 0 || k == steps) record(k * dt);
    }
    return out;
}

Eigen::VectorXd solve_steady(ThermalNetwork& net, std::vector<HeatSource>& sources,
                             const SteadyOptions& opts) {
    validate_network(net);
    validate_sources(sources, net.ambient);

    const int n = static_cast<int>(net.nodes.size());
    std::vector<int> power_sources;
    for (size_t s = 0; s < sources.size(); ++s)
        if (sources[s].mode == HeatSource::Mode::kPower)
            power_sources.push_back(static_cast<int>(s));
    const int m = static_cast<int>(power_sources.size());
    const int dim = n + m;

    // View factors are pure geometry; compute once per (source, face).
    std::vector<std::vector<double>> factors(sources.size(), std::vector<double>(n, 0.0));
    for (size_t s = 0; s < sources.size(); ++s) {
        for (int i = 0; i < n; ++i) {
            if (!net.nodes[i].face) continue;
            const rad::Patch face = facing(*net.nodes[i].face, sources[s].patch);
            factors[s][i] = rad::view_factor_cached(sources[s].patch, face, net.quad_order);
        }
    }

    std::vector<int> unknown_of_source(sources.size(), -1);
    for (int j = 0; j < m; ++j) unknown_of_source[power_sources[j]] = n + j;

    auto source_temp = [&](const Eigen::VectorXd& x, size_t s) {
        const int u = unknown_of_source[s];
        return u < 0 ? sources[s].temperature : x[u];
    };

    auto residual = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        if (to_kelvin(x.minCoeff()) <= 0.0)
            return Eigen::VectorXd::Constant(dim,
                                             std::numeric_limits<double>::infinity());
        Eigen::VectorXd r = Eigen::VectorXd::Zero(dim);
        for (int i = 0; i < n; ++i) r[i] += net.power_in[i];
        for (const auto& e : net.edges) {
            if (e.b == kAmbientNode) {
                r[e.a] += e.conductance * (net.ambient - x[e.a]);
            } else {
                const double flow = e.conductance * (x[e.b] - x[e.a]);
                r[e.a] += flow;
                r[e.b] -= flow;
            }
        }
        for (size_t s = 0; s < sources.size(); ++s) {
            const double ts_k = to_kelvin(source_temp(x, s));
            const int u = unknown_of_source[s];
            for (int i = 0; i < n; ++i) {
                if (factors[s][i] == 0.0) continue;
                const double q = rad::exchange_power_for_factor(
                    sources[s].patch.area(), factors[s][i], sources[s].patch.emissivity,
                    net.nodes[i].face->emissivity, ts_k, to_kelvin(x[i]));
                r[i] += q;
                if (u >= 0) r[u] -= q;
            }
        }
        for (int j = 0; j < m; ++j) {
            const HeatSource& src = sources[power_sources[j]];
            r[n + j] += src.power + (net.ambient - x[n + j]) / src.source_resistance;
        }
        return r;
    };

    auto jacobian = [&](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(dim, dim);
        for (const auto& e : net.edges) {
            if (e.b == kAmbientNode) {
                jac(e.a, e.a) -= e.conductance;
            } else {
                jac(e.a, e.a) -= e.conductance;
                jac(e.b, e.b) -= e.conductance;
                jac(e.a, e.b) += e.conductance;
                jac(e.b, e.a) += e.conductance;
            }
        }
        for (size_t s = 0; s < sources.size(); ++s) {
            const double ts_k = to_kelvin(source_temp(x, s));
            const int u = unknown_of_source[s];
            for (int i = 0; i < n; ++i) {
                if (factors[s][i] == 0.0) continue;
                const double scale = 4.0 * rad::kStefanBoltzmann *
                                     sources[s].patch.area() * factors[s][i] *
                                     sources[s].patch.emissivity *
                                     net.nodes[i].face->emissivity;
                const double ti_k = to_kelvin(x[i]);
                const double dq_dti = -scale * ti_k * ti_k * ti_k;
                const double dq_dts = scale * ts_k * ts_k * ts_k;
                jac(i, i) += dq_dti;
                if (u >= 0) {
                    jac(i, u) += dq_dts;
                    jac(u, i) -= dq_dti;
                    jac(u, u) -= dq_dts;
                }
            }
        }
        for (int j = 0; j < m; ++j)
            jac(n + j, n + j) -= 1.0 / sources[power_sources[j]].source_resistance;
        return jac;
    };

    // Damped Newton from the ambient-temperature guess. The stated tolerance
    // decides convergence; iteration continues toward machine level so the
    // steady energy balance closes far tighter than the acceptance bound.
    Eigen::VectorXd x = Eigen::VectorXd::Constant(dim, net.ambient);
    Eigen::VectorXd r = residual(x);
    double r_max = r.lpNorm<Eigen::Infinity>();
    const double polish = std::min(opts.power_tolerance, 1e-13);

    int iter = 0;
    for (; iter < opts.max_iterations && r_max > polish; ++iter) {
        const Eigen::MatrixXd jac = jacobian(x);
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
        const Eigen::VectorXd dx = lu.solve(-r);
        if (!dx.allFinite()) throw SolverError("steady solve produced non-finite step");

        double lambda = 1.0;
        bool improved = false;
        for (int bt = 0; bt < 30; ++bt) {
            const Eigen::VectorXd x_try = x + lambda * dx;
            const Eigen::VectorXd r_try = residual(x_try);
            const double r_try_max = r_try.lpNorm<Eigen::Infinity>();
            if (r_try_max < r_max) {
                x = x_try;
                r = r_try;
                r_max = r_try_max;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) break;  // stalled at numerical floor
    }

    if (!(r_max < opts.power_tolerance)) {
        char msg[128];
        std::snprintf(msg, sizeof(msg),
                      "steady solve did not converge: max residual %.3e W after %d iterations",
                      r_max, iter);
        throw SolverError(msg);
    }

    net.set_temperatures(x.head(n));
    for (int j = 0; j < m; ++j) sources[power_sources[j]].temperature = x[n + j];
    return x.head(n);
}

}  // namespace ircard::thermal
