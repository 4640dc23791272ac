#pragma once

// Parametrized families of pure initial states for the predictability sieve.

#include <string>
#include <vector>

#include "einselect/hilbert.hpp"

namespace einselect {

enum class FamilyKind { number_states, coherent_grid, two_state_superpositions, squeezed_grid };

FamilyKind parse_family_kind(const std::string& s);
std::string to_string(FamilyKind k);

struct CandidateParams {
    FamilyKind kind = FamilyKind::number_states;
    int n = -1;            ///< number state / first superposition level
    int m = -1;            ///< second superposition level
    cplx alpha = 0.0;      ///< coherent / squeezed displacement
    double r = 0.0;        ///< squeezing magnitude
    double theta = 0.0;    ///< squeezing angle
    double phase = 0.0;    ///< relative superposition phase

    /// Stable, human-readable identifier; also the deterministic tie-break key.
    std::string label() const;
};

struct Candidate {
    CandidateParams params;
    DensityMatrix rho;
};

struct RejectedCandidate {
    CandidateParams params;
    std::string reason;
};

struct StateFamily {
    FamilyKind kind = FamilyKind::number_states;
    int dim = 16;
    int n_max = 3;                                    ///< number_states
    std::vector<cplx> alphas;                         ///< coherent_grid, squeezed_grid displacements
    std::vector<std::pair<int, int>> pairs;           ///< two_state_superpositions
    std::vector<double> phases;                       ///< two_state_superpositions
    std::vector<double> squeeze_r;                    ///< squeezed_grid
    std::vector<double> squeeze_theta;                ///< squeezed_grid
    double tail_tol = 1e-10;

    /// Complex grid re x im.
    static std::vector<cplx> grid(const std::vector<double>& re, const std::vector<double>& im);
};

struct FamilyResult {
    std::vector<Candidate> states;
    std::vector<RejectedCandidate> rejected;
};

/// Deterministic enumeration; truncation-unsafe members are rejected with a reason.
FamilyResult generate_family(const StateFamily& spec);

/// Pure state for one parameter set (throws a truncation error when unsafe).
DensityMatrix make_state(const CandidateParams& params, int dim, double tail_tol = 1e-10);

/// D(alpha) S(r e^{i theta}) |0>, computed in an enlarged space and truncated
/// to `dim` levels; the discarded weight must stay below `tail_tol`.
Vector squeezed_amplitudes(cplx alpha, double r, double theta, int dim, double tail_tol = 1e-10);

} // namespace einselect
