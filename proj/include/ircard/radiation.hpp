#pragma once

#include <vector>

#include "ircard/errors.hpp"

namespace ircard::radiation {

/// Stefan-Boltzmann constant, W m^-2 K^-4. Fixed; never user-configurable.
inline constexpr double kStefanBoltzmann = 5.670374419e-8;

inline constexpr double kCelsiusToKelvin = 273.15;

/// Gap below which the exchange kernel is effectively singular for the
/// card's patch sizes; such geometries are rejected rather than regularized.
inline constexpr double kMinPlaneGap = 1e-3;

/// Default tensor-product Gauss-Legendre order per surface axis.
inline constexpr int kDefaultQuadOrder = 16;

/// Axis-aligned rectangle in one of two parallel planes. `plane_gap` is the
/// separation between the two planes a facing pair lives in; both members of
/// a pair must carry the same value.
struct Patch {
    double center_x = 0.0;    ///< m, in the card plane
    double center_y = 0.0;    ///< m
    double width = 0.010;     ///< m, > 0
    double height = 0.010;    ///< m, > 0
    double plane_gap = 0.010; ///< m, separation of the two parallel planes
    double emissivity = 0.95; ///< dimensionless, in [0,1]

    double area() const { return width * height; }
};

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1,1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Computes the n-point Gauss-Legendre rule by Newton iteration on the
/// Legendre recurrence. Deterministic; accurate to ~1e-15 for n <= 64.
const GaussRule& gauss_legendre(int n);

/// Geometric view factor F_ab between two parallel facing rectangles,
/// by fixed-order tensor-product Gauss-Legendre quadrature of
/// cos(theta_a) cos(theta_b) / (pi s^2) over both surfaces, divided by
/// the area of `a`.
///
/// Throws InvalidGeometryError on non-positive dimensions, a gap below
/// kMinPlaneGap, or patches that disagree on the plane separation.
double view_factor(const Patch& a, const Patch& b, int quad_order = kDefaultQuadOrder);

/// view_factor backed by a process-wide memo keyed on the pair's relative
/// geometry. Identical validation and value; meant for solver hot paths that
/// re-evaluate fixed geometries every step.
double view_factor_cached(const Patch& a, const Patch& b,
                          int quad_order = kDefaultQuadOrder);

/// Gray-body net exchange a -> b in watts for a precomputed view factor:
///   q = sigma * area_a * F_ab * eps_a * eps_b * (T_a^4 - T_b^4).
/// Temperatures in kelvin. Multiple inter-reflections are neglected (both
/// surfaces near-black).
double exchange_power_for_factor(double area_a, double f_ab, double eps_a, double eps_b,
                                 double t_a_kelvin, double t_b_kelvin);

/// Gray-body net exchange a -> b in watts; positive means net flow a -> b.
/// Throws DomainError for temperatures <= 0 K.
double exchange_power(const Patch& a, double t_a_kelvin, const Patch& b, double t_b_kelvin,
                      int quad_order = kDefaultQuadOrder);

/// Linearized exchange conductance 4 sigma area_a F_ab eps_a eps_b T_mean^3
/// in W/K; q ~= G_rad (T_a - T_b) to first order around T_mean.
double radiation_conductance(const Patch& a, const Patch& b, double t_mean_kelvin,
                             int quad_order = kDefaultQuadOrder);

}  // namespace ircard::radiation
