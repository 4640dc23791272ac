#pragma once

// Derivative-free minimization: coarse grid scan followed by Nelder-Mead.

#include <functional>
#include <span>
#include <vector>

namespace einselect {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
    int max_evaluations = 400;
    /// Stop when the simplex spread in f and in x both fall below these.
    double f_tol = 1e-12;
    double x_tol = 1e-9;
};

struct MinimizeResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0, std::vector<double> step,
                           const NelderMeadOptions& options = {});

struct Bounds {
    double lo = 0.0;
    double hi = 0.0;
};

struct GridSearchOptions {
    int points_per_dim = 7;
    NelderMeadOptions refine;
    /// Grid values equal within this are reported as a flat (degenerate) landscape.
    double flat_tol = 1e-10;
};

struct GridRefineResult : MinimizeResult {
    bool degenerate = false;
    double grid_best = 0.0;
    double grid_worst = 0.0;
};

/// Scan a regular grid over the box, then refine the best point with Nelder-Mead
/// (initial simplex one grid cell wide). Evaluations include the scan.
GridRefineResult grid_then_nelder_mead(const Objective& f, const std::vector<Bounds>& box,
                                       const GridSearchOptions& options = {});

} // namespace einselect
