#include "einselect/secular.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "einselect/csv.hpp"
#include "integrator.hpp"

namespace einselect {

BIndex parse_b_index(const std::string& s) {
    if (s == "nl") return BIndex::nl;
    if (s == "ln") return BIndex::ln;
    if (s == "ml") return BIndex::ml;
    fail(ErrorCategory::config, "unknown cross-term index '" + s + "' (expected nl|ln|ml)");
}

std::string to_string(BIndex b) {
    switch (b) {
        case BIndex::nl: return "nl";
        case BIndex::ln: return "ln";
        case BIndex::ml: return "ml";
    }
    return "?";
}

double check_nondegenerate(const OperatorSet& ops, double tol) {
    const int d = ops.dim();
    double gap = std::numeric_limits<double>::infinity();
    std::ostringstream bad;
    int count = 0;
    for (int n = 0; n < d; ++n) {
        for (int m = n + 1; m < d; ++m) {
            const double g = std::abs(ops.energies(n) - ops.energies(m));
            gap = std::min(gap, g);
            if (g <= tol) {
                if (count++ < 8) bad << " (" << n << "," << m << ")";
            }
        }
    }
    if (count > 0) {
        std::ostringstream os;
        os << "degenerate spectrum: " << count << " level pair(s) closer than " << tol << ":" << bad.str();
        fail(ErrorCategory::degeneracy, os.str());
    }
    return gap;
}

RealMatrix gamma_sq_from_diagonals(const std::vector<Vector>& diagonals, const std::vector<double>& cbar) {
    require(diagonals.size() == cbar.size() && !diagonals.empty(), "one frozen weight per channel required");
    const Eigen::Index d = diagonals.front().size();
    RealMatrix g = RealMatrix::Zero(d, d);
    for (std::size_t c = 0; c < diagonals.size(); ++c)
        for (Eigen::Index n = 0; n < d; ++n)
            for (Eigen::Index m = 0; m < d; ++m) g(n, m) += cbar[c] * std::norm(diagonals[c](n) - diagonals[c](m));
    return g;
}

SecularRates secular_rates(const ChannelSet& channels, const OperatorSet& ops, double degeneracy_tol) {
    const double gap = check_nondegenerate(ops, degeneracy_tol);
    const int d = ops.dim();
    SecularRates r;
    r.dim = d;
    r.averaging_period = 2.0 * kPi / (gap / kHbar);
    r.gamma_sq = RealMatrix::Zero(d, d);
    const std::size_t d3 = static_cast<std::size_t>(d) * d * d;
    r.cross_A.assign(d3, cplx(0.0));
    r.cross_B.assign(d3, cplx(0.0));

    for (std::size_t j = 0; j < channels.size(); ++j) {
        const double cbar = channels.c(j, 0.0);
        const Matrix& Sp = channels.S[j];
        const Matrix Sm = Sp.adjoint();
        for (const Matrix* S : {&Sp, &Sm}) {
            const Vector diag = S->diagonal();
            const Vector sbar = diag.conjugate();
            for (int n = 0; n < d; ++n)
                for (int m = 0; m < d; ++m) r.gamma_sq(n, m) += cbar * std::norm(diag(n) - diag(m));
            for (int l = 0; l < d; ++l)
                for (int n = 0; n < d; ++n)
                    for (int m = 0; m < d; ++m) {
                        const std::size_t idx = (static_cast<std::size_t>(l) * d + n) * d + m;
                        r.cross_A[idx] += cbar * (*S)(n, l) * (sbar(l) - sbar(m));
                        r.cross_B[idx] -= cbar * (sbar(n) - sbar(l)) * (*S)(l, m);
                    }
        }
    }
    // exact symmetry and zero diagonal
    r.gamma_sq = 0.5 * (r.gamma_sq + r.gamma_sq.transpose()).eval();
    r.gamma_sq.diagonal().setZero();
    return r;
}

namespace {

// coupling part only; the Bohr rotation is handled by the interaction picture
Matrix secular_coupling(const Matrix& rho, double t, const SecularRates& r, bool cross, BIndex bi) {
    const int d = r.dim;
    Matrix out(d, d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            cplx v = -r.gamma_sq(n, m) * t * rho(n, m);
            if (cross) {
                cplx s = 0.0;
                for (int l = 0; l < d; ++l) {
                    if (l == n || l == m) continue;
                    const cplx other = bi == BIndex::nl ? rho(n, l) : bi == BIndex::ln ? rho(l, n) : rho(m, l);
                    s += r.A(l, n, m) * rho(l, m) + r.B(l, n, m) * other;
                }
                v -= t * s;
            }
            out(n, m) = v;
        }
    return out;
}

} // namespace

Trajectory evolve_secular(const DensityMatrix& rho0, const SecularRates& rates, const OperatorSet& ops,
                          const SolverOptions& options, bool include_cross, BIndex b_index) {
    require(rates.dim == ops.dim(), "secular rates do not match the system dimension");
    if (include_cross) {
        auto step = [&](const Matrix& rho_i, double t, double h) {
            const double ts[3] = {t, t + 0.5 * h, t + h};
            return detail::rk4_interaction(rho_i, t, h, ops.energies, [&](const Matrix& r, int stage) {
                return secular_coupling(r, ts[stage], rates, true, b_index);
            });
        };
        return detail::integrate(rho0, ops, options, "secular+cross", step);
    }

    // closed form in the interaction picture; the driver restores the Bohr phases
    const Matrix& r0 = rho0.matrix();
    const int d = rates.dim;
    auto step = [&](const Matrix&, double t, double h) {
        const double tn = t + h;
        Matrix out(d, d);
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n)
                out(n, m) = n == m ? r0(n, m) : r0(n, m) * std::exp(-0.5 * rates.gamma_sq(n, m) * tn * tn);
        return out;
    };
    return detail::integrate(rho0, ops, options, "secular", step);
}

void write_rates_csv(const SecularRates& rates, const std::string& path) {
    std::vector<std::string> header{"n"};
    for (int m = 0; m < rates.dim; ++m) header.push_back("m" + std::to_string(m));
    CsvWriter w(path, header);
    for (int n = 0; n < rates.dim; ++n) {
        w << n;
        for (int m = 0; m < rates.dim; ++m) w << rates.gamma_sq(n, m);
        w.end_row();
    }
}

} // namespace einselect
