#include "ircard/radiation.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <unordered_map>

namespace ircard::radiation {

namespace {

GaussRule compute_gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Roots are symmetric; solve the upper half with Newton iteration.
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence: (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
            double p0 = 1.0, p1 = x;
            for (int k = 1; k < n; ++k) {
                double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

void validate_pair(const Patch& a, const Patch& b) {
    if (a.width <= 0.0 || a.height <= 0.0 || b.width <= 0.0 || b.height <= 0.0)
        throw InvalidGeometryError("patch dimensions must be positive");
    if (!(a.plane_gap >= kMinPlaneGap) || !(b.plane_gap >= kMinPlaneGap))
        throw InvalidGeometryError("plane gap below 1 mm singular-kernel cutoff");
    if (a.plane_gap != b.plane_gap)
        throw InvalidGeometryError("patches disagree on plane separation");
    if (a.emissivity < 0.0 || a.emissivity > 1.0 || b.emissivity < 0.0 || b.emissivity > 1.0)
        throw InvalidGeometryError("emissivity outside [0,1]");
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1 || n > 256) throw DomainError("gauss_legendre order out of range");
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

double view_factor(const Patch& a, const Patch& b, int quad_order) {
    validate_pair(a, b);
    if (quad_order < 2) throw DomainError("quadrature order must be >= 2");

    const GaussRule& rule = gauss_legendre(quad_order);
    const double h = a.plane_gap;
    const double h2 = h * h;

    // Map nodes from [-1,1] onto each patch axis once.
    const int n = quad_order;
    std::vector<double> ax(n), ay(n), bx(n), by(n);
    for (int i = 0; i < n; ++i) {
        ax[i] = a.center_x + 0.5 * a.width * rule.nodes[i];
        ay[i] = a.center_y + 0.5 * a.height * rule.nodes[i];
        bx[i] = b.center_x + 0.5 * b.width * rule.nodes[i];
        by[i] = b.center_y + 0.5 * b.height * rule.nodes[i];
    }

    // For parallel planes cos(theta_a) = cos(theta_b) = h/s, so the kernel
    // is h^2 / (pi s^4). The Jacobian of all four axis maps times 1/area_a
    // collapses to area_b / 16.
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double wij = rule.weights[i] * rule.weights[j];
            const double xa = ax[i], ya = ay[j];
            double inner = 0.0;
            for (int k = 0; k < n; ++k) {
                const double dx2 = (xa - bx[k]) * (xa - bx[k]);
                for (int l = 0; l < n; ++l) {
                    const double dy = ya - by[l];
                    const double s2 = dx2 + dy * dy + h2;
                    inner += rule.weights[k] * rule.weights[l] / (s2 * s2);
                }
            }
            sum += wij * inner;
        }
    }
    return sum * h2 * b.area() / (16.0 * std::numbers::pi);
}

namespace {

// F is invariant under translation and axis reflection of the pair, so the
// memo keys on the absolute relative offset plus sizes, gap and order.
struct FactorKey {
    std::array<double, 7> geom;
    int order = 0;
    bool operator==(const FactorKey&) const = default;
};

struct FactorKeyHash {
    size_t operator()(const FactorKey& key) const {
        uint64_t h = 1469598103934665603ull;
        auto mix = [&h](uint64_t bits) {
            h ^= bits;
            h *= 1099511628211ull;
        };
        for (double v : key.geom) mix(std::bit_cast<uint64_t>(v));
        mix(static_cast<uint64_t>(key.order));
        return static_cast<size_t>(h);
    }
};

}  // namespace

double view_factor_cached(const Patch& a, const Patch& b, int quad_order) {
    validate_pair(a, b);
    const FactorKey key{{std::abs(b.center_x - a.center_x),
                         std::abs(b.center_y - a.center_y), a.width, a.height, b.width,
                         b.height, a.plane_gap},
                        quad_order};
    static std::mutex mutex;
    static std::unordered_map<FactorKey, double, FactorKeyHash> cache;
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const double f = view_factor(a, b, quad_order);
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(key, f);
    return f;
}

double exchange_power_for_factor(double area_a, double f_ab, double eps_a, double eps_b,
                                 double t_a_kelvin, double t_b_kelvin) {
    if (t_a_kelvin <= 0.0 || t_b_kelvin <= 0.0)
        throw DomainError("temperature must be positive kelvin");
    const double ta2 = t_a_kelvin * t_a_kelvin;
    const double tb2 = t_b_kelvin * t_b_kelvin;
    return kStefanBoltzmann * area_a * f_ab * eps_a * eps_b * (ta2 * ta2 - tb2 * tb2);
}

double exchange_power(const Patch& a, double t_a_kelvin, const Patch& b, double t_b_kelvin,
                      int quad_order) {
    const double f = view_factor(a, b, quad_order);
    return exchange_power_for_factor(a.area(), f, a.emissivity, b.emissivity, t_a_kelvin,
                                     t_b_kelvin);
}

double radiation_conductance(const Patch& a, const Patch& b, double t_mean_kelvin,
                             int quad_order) {
    if (t_mean_kelvin <= 0.0) throw DomainError("mean temperature must be positive kelvin");
    const double f = view_factor(a, b, quad_order);
    return 4.0 * kStefanBoltzmann * a.area() * f * a.emissivity * b.emissivity *
           t_mean_kelvin * t_mean_kelvin * t_mean_kelvin;
}

}  // namespace ircard::radiation
