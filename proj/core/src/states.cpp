#include "einselect/states.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "einselect/error.hpp"

namespace einselect {

FamilyKind parse_family_kind(const std::string& s) {
    if (s == "number_states") return FamilyKind::number_states;
    if (s == "coherent_grid") return FamilyKind::coherent_grid;
    if (s == "two_state_superpositions") return FamilyKind::two_state_superpositions;
    if (s == "squeezed_grid") return FamilyKind::squeezed_grid;
    fail(ErrorCategory::config, "unknown state family '" + s +
                                    "' (expected number_states|coherent_grid|two_state_superpositions|squeezed_grid)");
}

std::string to_string(FamilyKind k) {
    switch (k) {
        case FamilyKind::number_states: return "number_states";
        case FamilyKind::coherent_grid: return "coherent_grid";
        case FamilyKind::two_state_superpositions: return "two_state_superpositions";
        case FamilyKind::squeezed_grid: return "squeezed_grid";
    }
    return "?";
}

std::string CandidateParams::label() const {
    char buf[160];
    switch (kind) {
        case FamilyKind::number_states: std::snprintf(buf, sizeof buf, "number(n=%d)", n); break;
        case FamilyKind::coherent_grid:
            std::snprintf(buf, sizeof buf, "coherent(alpha=%.6g%+.6gi)", alpha.real(), alpha.imag());
            break;
        case FamilyKind::two_state_superpositions:
            std::snprintf(buf, sizeof buf, "superposition(n=%d,m=%d,phase=%.6g)", n, m, phase);
            break;
        case FamilyKind::squeezed_grid:
            std::snprintf(buf, sizeof buf, "squeezed(alpha=%.6g%+.6gi,r=%.6g,theta=%.6g)", alpha.real(),
                          alpha.imag(), r, theta);
            break;
    }
    return buf;
}

std::vector<cplx> StateFamily::grid(const std::vector<double>& re, const std::vector<double>& im) {
    std::vector<cplx> out;
    for (double a : re)
        for (double b : im) out.emplace_back(a, b);
    return out;
}

Vector squeezed_amplitudes(cplx alpha, double r, double theta, int dim, double tail_tol) {
    require(dim >= 2, "dimension must be at least 2");
    require(r >= 0.0, "squeezing magnitude must be non-negative");
    const int big = std::max(4 * dim, dim + 60);
    Matrix a = Matrix::Zero(big, big);
    for (int n = 0; n + 1 < big; ++n) a(n, n + 1) = std::sqrt(n + 1.0);
    const Matrix ad = a.adjoint();
    const cplx zeta = std::polar(r, theta);
    const cplx i(0.0, 1.0);
    // S = exp(G), G = (conj(zeta) a^2 - zeta a^dag^2)/2 anti-Hermitian, G = i K
    const Matrix G = 0.5 * (std::conj(zeta) * a * a - zeta * ad * ad);
    const Matrix Dg = alpha * ad - std::conj(alpha) * a;
    Vector psi = Vector::Zero(big);
    psi(0) = 1.0;
    // the largest levels of the enlarged space are themselves truncated; the
    // tail check below is made against the requested dim, far from that edge
    if (r != 0.0) psi = matrix_exp_unitary(Matrix(-i * G), 1.0) * psi;
    if (alpha != cplx(0.0)) psi = matrix_exp_unitary(Matrix(-i * Dg), 1.0) * psi;
    const double kept = psi.head(dim).squaredNorm();
    const double tail = std::max(0.0, 1.0 - kept);
    if (tail > tail_tol) {
        std::ostringstream os;
        os << "squeezed state (alpha=" << alpha.real() << "," << alpha.imag() << ", r=" << r
           << ") loses weight " << tail << " beyond fock_dim=" << dim;
        fail(ErrorCategory::truncation, os.str());
    }
    return psi.head(dim) / std::sqrt(kept);
}

DensityMatrix make_state(const CandidateParams& p, int dim, double tail_tol) {
    switch (p.kind) {
        case FamilyKind::number_states:
            if (p.n < 0 || p.n >= dim) fail(ErrorCategory::truncation, "number state beyond fock_dim");
            return DensityMatrix::fock(p.n, dim);
        case FamilyKind::coherent_grid: return coherent_state(p.alpha, dim, tail_tol);
        case FamilyKind::two_state_superpositions: {
            if (p.n < 0 || p.m < 0 || p.n >= dim || p.m >= dim || p.n == p.m)
                fail(ErrorCategory::truncation, "superposition levels must be distinct and below fock_dim");
            Vector v = Vector::Zero(dim);
            v(p.n) = 1.0 / std::sqrt(2.0);
            v(p.m) = std::polar(1.0 / std::sqrt(2.0), p.phase);
            return DensityMatrix::pure(v);
        }
        case FamilyKind::squeezed_grid:
            return DensityMatrix::pure(squeezed_amplitudes(p.alpha, p.r, p.theta, dim, tail_tol));
    }
    fail(ErrorCategory::invalid_argument, "unknown family kind");
}

FamilyResult generate_family(const StateFamily& spec) {
    std::vector<CandidateParams> params;
    switch (spec.kind) {
        case FamilyKind::number_states:
            for (int n = 0; n <= spec.n_max; ++n) {
                CandidateParams p;
                p.kind = spec.kind;
                p.n = n;
                params.push_back(p);
            }
            break;
        case FamilyKind::coherent_grid:
            for (cplx a : spec.alphas) {
                CandidateParams p;
                p.kind = spec.kind;
                p.alpha = a;
                params.push_back(p);
            }
            break;
        case FamilyKind::two_state_superpositions:
            for (auto [n, m] : spec.pairs)
                for (double ph : spec.phases) {
                    CandidateParams p;
                    p.kind = spec.kind;
                    p.n = n;
                    p.m = m;
                    p.phase = ph;
                    params.push_back(p);
                }
            break;
        case FamilyKind::squeezed_grid: {
            const std::vector<cplx> alphas = spec.alphas.empty() ? std::vector<cplx>{0.0} : spec.alphas;
            for (cplx a : alphas)
                for (double r : spec.squeeze_r)
                    for (double th : spec.squeeze_theta) {
                        CandidateParams p;
                        p.kind = spec.kind;
                        p.alpha = a;
                        p.r = r;
                        p.theta = th;
                        params.push_back(p);
                    }
            break;
        }
    }
    FamilyResult out;
    for (const auto& p : params) {
        try {
            out.states.push_back({p, make_state(p, spec.dim, spec.tail_tol)});
        } catch (const Error& e) {
            out.rejected.push_back({p, e.what()});
        }
    }
    return out;
}

} // namespace einselect
