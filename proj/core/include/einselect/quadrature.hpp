#pragma once

#include <span>
#include <vector>

namespace einselect {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped onto [a, b]. Nodes never touch the endpoints.
QuadratureRule gauss_legendre(int n, double a, double b);

/// Running integral of uniformly sampled `y` with spacing `h`, starting at 0.
/// Even nodes use composite Simpson; odd nodes add one cubic panel on top of
/// the preceding even node, so every entry is exact for cubics.
std::vector<double> cumulative_simpson(std::span<const double> y, double h);

/// t_i = i * dt for i = 0..round(t_max / dt).
std::vector<double> uniform_grid(double t_max, double dt);

/// Spacing of a uniform grid; throws if the grid is not uniform or too short.
double uniform_spacing(std::span<const double> t);

} // namespace einselect
