#include <doctest.h>

#include <cmath>

#include "einselect/optimize.hpp"

using namespace einselect;

TEST_SUITE("optimize") {

TEST_CASE("Nelder-Mead recovers a quadratic minimizer") {
    auto f = [](std::span<const double> x) {
        return 3.0 * std::pow(x[0] - 0.3, 2) + std::pow(x[1] + 1.2, 2) + 0.5 * (x[0] - 0.3) * (x[1] + 1.2);
    };
    const auto r = nelder_mead(f, {2.0, 2.0}, {0.5, 0.5});
    CHECK(r.converged);
    CHECK(std::abs(r.x[0] - 0.3) < 1e-6);
    CHECK(std::abs(r.x[1] + 1.2) < 1e-6);
    CHECK(r.evaluations <= 400);
}

TEST_CASE("non-convergence returns the best point so far") {
    auto rosen = [](std::span<const double> x) {
        return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
    };
    NelderMeadOptions o;
    o.max_evaluations = 20;
    const auto r = nelder_mead(rosen, {-1.2, 1.0}, {0.1, 0.1}, o);
    CHECK_FALSE(r.converged);
    CHECK(r.evaluations <= 20);
    CHECK(r.value <= rosen(std::vector<double>{-1.2, 1.0}));
}

TEST_CASE("grid scan then refinement") {
    auto f = [](std::span<const double> x) { return std::pow(x[0] - 0.41, 2) + std::pow(x[1] - 0.07, 2); };
    const auto r = grid_then_nelder_mead(f, {{-1, 1}, {-1, 1}});
    CHECK_FALSE(r.degenerate);
    CHECK(std::abs(r.x[0] - 0.41) < 1e-6);
    CHECK(std::abs(r.x[1] - 0.07) < 1e-6);
    CHECK(r.grid_best <= r.grid_worst);
    CHECK(r.evaluations > 49);
}

TEST_CASE("flat landscapes are reported as degenerate") {
    auto flat = [](std::span<const double>) { return 0.0; };
    const auto r = grid_then_nelder_mead(flat, {{0, 1}, {0, 1}});
    CHECK(r.degenerate);
    CHECK(r.value == 0.0);
}

}
