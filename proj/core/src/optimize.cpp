#include "einselect/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "einselect/error.hpp"

namespace einselect {

MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0, std::vector<double> step,
                           const NelderMeadOptions& opt) {
    const std::size_t n = x0.size();
    require(n >= 1 && step.size() == n, "nelder_mead: bad dimensions");
    MinimizeResult res;
    auto eval = [&](const std::vector<double>& x) {
        ++res.evaluations;
        const double v = f(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };

    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step[i];
    for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);

    std::vector<std::size_t> order(n + 1);
    auto point = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
        std::vector<double> p(n);
        for (std::size_t k = 0; k < n; ++k) p[k] = c[k] + t * (w[k] - c[k]);
        return p;
    };

    while (res.evaluations < opt.max_evaluations) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

        double xspread = 0.0;
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                xspread = std::max(xspread, std::abs(simplex[i][k] - simplex[best][k]));
        if (std::abs(fv[worst] - fv[best]) <= opt.f_tol && xspread <= opt.x_tol) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / n;
        }
        const auto xr = point(centroid, simplex[worst], -1.0);
        const double fr = eval(xr);
        if (fr < fv[best]) {
            const auto xe = point(centroid, simplex[worst], -2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            simplex[worst] = xr;
            fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            const auto xc = outside ? point(centroid, xr, 0.5) : point(centroid, simplex[worst], 0.5);
            const double fc = eval(xc);
            if (fc < std::min(fr, fv[worst])) {
                simplex[worst] = xc;
                fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    simplex[i] = point(simplex[best], simplex[i], 0.5);
                    fv[i] = eval(simplex[i]);
                }
            }
        }
    }
    const auto it = std::min_element(fv.begin(), fv.end());
    res.x = simplex[static_cast<std::size_t>(it - fv.begin())];
    res.value = *it;
    return res;
}

GridRefineResult grid_then_nelder_mead(const Objective& f, const std::vector<Bounds>& box,
                                       const GridSearchOptions& opt) {
    require(!box.empty(), "grid search needs at least one parameter");
    require(opt.points_per_dim >= 2, "grid search needs at least two points per dimension");
    const std::size_t n = box.size();
    const int g = opt.points_per_dim;
    std::vector<double> cell(n);
    for (std::size_t k = 0; k < n; ++k) {
        require(box[k].hi > box[k].lo, "grid search bounds must satisfy lo < hi");
        cell[k] = (box[k].hi - box[k].lo) / (g - 1);
    }

    GridRefineResult res;
    res.grid_best = std::numeric_limits<double>::infinity();
    res.grid_worst = -std::numeric_limits<double>::infinity();
    std::vector<double> best_x;
    std::vector<int> idx(n, 0);
    for (;;) {
        std::vector<double> x(n);
        for (std::size_t k = 0; k < n; ++k) x[k] = box[k].lo + idx[k] * cell[k];
        const double v = f(x);
        ++res.evaluations;
        if (v < res.grid_best) {
            res.grid_best = v;
            best_x = x;
        }
        if (std::isfinite(v)) res.grid_worst = std::max(res.grid_worst, v);
        std::size_t k = 0;
        while (k < n && ++idx[k] == g) idx[k++] = 0;
        if (k == n) break;
    }
    require(!best_x.empty() && std::isfinite(res.grid_best), "grid search found no finite objective value");
    res.degenerate = res.grid_worst - res.grid_best <= opt.flat_tol;
    if (res.degenerate) {
        res.x = best_x;
        res.value = res.grid_best;
        res.converged = true;
        return res;
    }

    NelderMeadOptions nm = opt.refine;
    nm.max_evaluations = std::max(1, nm.max_evaluations);
    const MinimizeResult local = nelder_mead(f, best_x, cell, nm);
    res.x = local.x;
    res.value = local.value;
    res.converged = local.converged;
    res.evaluations += local.evaluations;
    if (res.grid_best < res.value) {
        res.x = best_x;
        res.value = res.grid_best;
    }
    return res;
}

} // namespace einselect
