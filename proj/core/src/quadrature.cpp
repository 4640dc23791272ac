#include "einselect/quadrature.hpp"

#include <cmath>

#include "einselect/error.hpp"
#include "einselect/hilbert.hpp"

namespace einselect {

QuadratureRule gauss_legendre(int n, double a, double b) {
    require(n >= 1, "gauss_legendre: need at least one node");
    require(b > a, "gauss_legendre: empty interval");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Tricomi initial guess, then Newton on P_n
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        // recompute derivative at the converged root
        {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = mid - half * z;
        rule.nodes[n - 1 - i] = mid + half * z;
        rule.weights[i] = half * w;
        rule.weights[n - 1 - i] = half * w;
    }
    return rule;
}

std::vector<double> cumulative_simpson(std::span<const double> y, double h) {
    const std::size_t n = y.size();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    if (n == 2) {
        out[1] = 0.5 * h * (y[0] + y[1]);
        return out;
    }
    for (std::size_t i = 2; i < n; i += 2)
        out[i] = out[i - 2] + h / 3.0 * (y[i - 2] + 4.0 * y[i - 1] + y[i]);
    // Odd nodes: one cubic panel on top of the preceding even node, using
    // four neighbours so every entry is exact for cubics.
    for (std::size_t i = 1; i < n; i += 2) {
        if (i + 2 < n)
            out[i] = out[i - 1] + h / 24.0 * (9.0 * y[i - 1] + 19.0 * y[i] - 5.0 * y[i + 1] + y[i + 2]);
        else if (i >= 3)
            out[i] = out[i - 1] + h / 24.0 * (y[i - 3] - 5.0 * y[i - 2] + 19.0 * y[i - 1] + 9.0 * y[i]);
        else
            out[i] = out[i - 1] + h / 12.0 * (5.0 * y[i - 1] + 8.0 * y[i] - y[i + 1]);
    }
    return out;
}

std::vector<double> uniform_grid(double t_max, double dt) {
    require(dt > 0.0 && t_max >= 0.0, "uniform_grid: need dt > 0 and t_max >= 0");
    const auto steps = static_cast<long>(std::llround(t_max / dt));
    require(std::abs(steps * dt - t_max) <= 1e-9 * std::max(1.0, t_max),
            "uniform_grid: t_max is not a multiple of dt");
    std::vector<double> t(steps + 1);
    for (long i = 0; i <= steps; ++i) t[i] = i * dt;
    return t;
}

double uniform_spacing(std::span<const double> t) {
    require(t.size() >= 2, "time grid needs at least two points");
    require(t[0] == 0.0, "time grid must start at 0");
    const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    require(h > 0.0, "time grid must be ascending");
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * std::max(1.0, h) + 1e-12 * std::abs(t[i]))
            fail(ErrorCategory::invalid_argument, "time grid is not uniform");
    }
    return h;
}

} // namespace einselect
