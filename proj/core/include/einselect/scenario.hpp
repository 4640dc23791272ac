#pragma once

// Scenario documents: plain-text `section.key = value` lines, `#` comments.
// Every key has a documented default; the resolved document (all keys, all
// defaults filled in) is echoed next to the results and parses back to an
// identical scenario.

#include <string>
#include <utility>
#include <vector>

#include "einselect/bath.hpp"
#include "einselect/hilbert.hpp"
#include "einselect/oracle.hpp"
#include "einselect/secular.hpp"
#include "einselect/sieve.hpp"
#include "einselect/solvers.hpp"
#include "einselect/states.hpp"

namespace einselect {

enum class EngineKind { qbm, channels, secular };

EngineKind parse_engine_kind(const std::string& s);
std::string to_string(EngineKind e);

struct InitialSpec {
    FamilyKind kind = FamilyKind::number_states;
    CandidateParams params() const;

    int n = 0;
    int m = 1;
    double phase = 0.0;
    double alpha_re = 0.0;
    double alpha_im = 0.0;
    double r = 0.0;
    double theta = 0.0;
};

struct SieveSpec {
    std::vector<FamilyKind> families{FamilyKind::number_states, FamilyKind::coherent_grid,
                                     FamilyKind::two_state_superpositions};
    int n_max = 3;
    std::vector<double> alpha_re{0.5, 1.0};
    std::vector<double> alpha_im{0.0};
    /// Adds coherent states with |alpha|^2 = n for n = 1..n_max (mean energy of |n>).
    bool energy_matched = false;
    std::vector<std::pair<int, int>> pairs{{0, 1}};
    std::vector<double> phases{0.0, kPi};
    std::vector<double> squeeze_r{0.25, 0.5};
    std::vector<double> squeeze_theta{0.0};
    std::vector<double> checkpoints;  ///< resolved: Bohr periods within solver.t_max (at most 5)
    EntropyMeasure measure = EntropyMeasure::linear;
    double tie_tol = 1e-10;
    int workers = 0;
    /// Continuous minimization after the ranking: none | coherent | squeezed.
    std::string minimize = "none";
    double t_star = 0.0;  ///< resolved: solver.t_max
    double minimize_bound = 1.5;
    int grid_points = 7;
    int max_evaluations = 200;
};

struct OracleSpec {
    int system_dim = 8;
    std::vector<double> omegas{0.5, 1.7, 2.9};
    std::vector<double> g{1.0, 1.0, 1.0};
    std::vector<double> k{0.0, 0.0, 0.0};
    int truncation = 4;
    CouplingForm form = CouplingForm::linear;
    double e0 = 0.1;
    int levels = 3;
    double t_star = 2.0 * kPi;
    double temperature = 0.0;
    double alpha = 0.7;
    int steps = 400;
};

struct OutputSpec {
    std::string dir = "einselect_out";
    std::vector<std::pair<int, int>> elements{{0, 0}, {0, 1}, {1, 1}};
    bool plots = true;
};

struct Scenario {
    SystemParams system;
    BathModel bath;
    double kernel_dt = 0.0;     ///< resolved: solver.dt / 2
    double kernel_t_max = 0.0;  ///< resolved: solver.t_max
    EngineKind engine = EngineKind::qbm;
    SolverOptions solver;
    bool include_cross = false;
    BIndex cross_index = BIndex::nl;
    InitialSpec initial;
    SieveSpec sieve;
    OracleSpec oracle;
    OutputSpec output;
    std::string rng_seal = "none";
};

/// Parses, applies defaults, and validates cross-key consistency. All failures
/// are config errors naming the offending key(s).
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Resolved document: every key, in a fixed order, numbers at 17 significant digits.
std::string serialize_scenario(const Scenario& scenario);

/// Documented keys with their expected types, in serialization order.
std::vector<std::pair<std::string, std::string>> scenario_keys();

} // namespace einselect
