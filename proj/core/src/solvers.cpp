#include "einselect/solvers.hpp"

#include <cmath>
#include <limits>

#include "integrator.hpp"

namespace einselect {

AnomalousSign parse_anomalous_sign(const std::string& s) {
    if (s == "plus") return AnomalousSign::plus;
    if (s == "minus") return AnomalousSign::minus;
    fail(ErrorCategory::config, "unknown anomalous sign '" + s + "' (expected plus|minus)");
}

std::string to_string(AnomalousSign s) { return s == AnomalousSign::plus ? "plus" : "minus"; }

int SolverOptions::steps() const {
    const double r = t_max / dt;
    const long n = std::lround(r);
    if (std::abs(r - static_cast<double>(n)) > 1e-6)
        fail(ErrorCategory::config, "solver.t_max must be an integer multiple of solver.dt");
    return static_cast<int>(n);
}

// ---------------------------------------------------------------------------

DensityMatrix Trajectory::state(std::size_t i) const { return DensityMatrix(rho.at(i), 1e-6, 1e-10); }

std::size_t Trajectory::index_near(double time) const {
    require(!t.empty(), "empty trajectory");
    std::size_t best = 0;
    for (std::size_t i = 1; i < t.size(); ++i)
        if (std::abs(t[i] - time) < std::abs(t[best] - time)) best = i;
    return best;
}

double Trajectory::max_trace_error() const {
    double m = 0.0;
    for (double v : trace_error) m = std::max(m, v);
    return m;
}

double Trajectory::max_hermiticity_error() const {
    double m = max_hermiticity_drift;
    for (const auto& r : rho) m = std::max(m, max_antihermitian(r));
    return m;
}

double Trajectory::min_min_eigenvalue() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : min_eigenvalue) m = std::min(m, v);
    return m;
}

void append_snapshot(Trajectory& traj, double time, const Matrix& rho, bool compute_spectra) {
    traj.t.push_back(time);
    traj.rho.push_back(rho);
    traj.trace_error.push_back(std::abs(rho.trace().real() - 1.0));
    traj.top_occupation.push_back(top_occupation(rho));
    traj.linear_entropy.push_back(1.0 - rho.squaredNorm());
    if (compute_spectra) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
        const RealVector& lam = es.eigenvalues();
        traj.entropy.push_back(entropy_from_eigenvalues(lam));
        traj.min_eigenvalue.push_back(lam.minCoeff());
    } else {
        traj.entropy.push_back(std::numeric_limits<double>::quiet_NaN());
        traj.min_eigenvalue.push_back(std::numeric_limits<double>::quiet_NaN());
    }
}

// ---------------------------------------------------------------------------
// QBM

namespace {

// -i [H, rho] for diagonal H
Matrix unitary_part(const Matrix& rho, const RealVector& E) {
    Matrix out(rho.rows(), rho.cols());
    for (Eigen::Index m = 0; m < rho.cols(); ++m)
        for (Eigen::Index n = 0; n < rho.rows(); ++n)
            out(n, m) = cplx(0.0, -(E(n) - E(m)) / kHbar) * rho(n, m);
    return out;
}

} // namespace

namespace {

// coupling part of the QBM generator (everything except -i[H, rho])
Matrix qbm_coupling(const Matrix& rho, const CoefficientTable::Sample& c, const OperatorSet& ops,
                    AnomalousSign sign) {
    const Matrix& x = ops.x;
    const Matrix& p = ops.p;
    const cplx I(0.0, 1.0);
    const Matrix cxr = x * rho - rho * x;  // [x, rho]
    const Matrix pr = p * rho;
    const Matrix rp = rho * p;
    const Matrix cpr = pr - rp;  // [p, rho]
    const Matrix apr = pr + rp;  // {p, rho}

    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    // -i [m W_ren^2 x^2 / 2, rho] = -i (m W_ren^2 / 2) (x [x,rho] + [x,rho] x)
    const double ren = 0.5 * ops.params.mass * c.omega_ren_sq / kHbar;
    if (ren != 0.0) out -= I * ren * (x * cxr + cxr * x);
    const double s = sign == AnomalousSign::plus ? 1.0 : -1.0;
    if (c.gamma != 0.0) out += 2.0 * I * c.gamma * (x * apr - apr * x);
    if (c.D != 0.0) out -= c.D * (x * cxr - cxr * x);
    if (c.f != 0.0) out += s * c.f * (x * cpr - cpr * x);
    return out;
}

} // namespace

Matrix qbm_rhs(const Matrix& rho, const CoefficientTable::Sample& c, const OperatorSet& ops, AnomalousSign sign) {
    return unitary_part(rho, ops.energies) + qbm_coupling(rho, c, ops, sign);
}

Trajectory evolve_qbm(const DensityMatrix& rho0, const CoefficientTable& coeffs, const OperatorSet& ops,
                      const SolverOptions& options) {
    if (coeffs.t_max() < options.t_max * (1.0 - 1e-12)) {
        std::ostringstream os;
        os << "coefficient table ends at t = " << coeffs.t_max() << " before solver.t_max = " << options.t_max;
        fail(ErrorCategory::config, os.str());
    }
    const AnomalousSign sign = options.anomalous_sign;
    auto step = [&](const Matrix& rho_i, double t, double h) {
        const CoefficientTable::Sample c[3] = {coeffs.at(t), coeffs.at(t + 0.5 * h), coeffs.at(t + h)};
        return detail::rk4_interaction(rho_i, t, h, ops.energies, [&](const Matrix& r, int stage) {
            return qbm_coupling(r, c[stage], ops, sign);
        });
    };
    return detail::integrate(rho0, ops, options, "qbm", step);
}

// ---------------------------------------------------------------------------
// Channel form
//
// For directional channel c with memory integrals I_c, I'_c the dissipator is
//   D(rho) = sum_c [S_c, A_c rho - rho B_c],  A = I - i I',  B = I + i I'.
// The mirrored channel S^dagger has I_{-} = I_{+}^dagger, hence A_{-} = B_{+}^dagger
// and B_{-} = A_{+}^dagger, and for Hermitian rho
//   D = Z + Z^dagger,  Z = P rho - sum_j (S_j rho B_j + A_j rho S_j),
//   P = sum_j (S_j A_j + S_j^dagger B_j^dagger).

namespace {

struct MemoryState {
    std::vector<Matrix> A;
    std::vector<Matrix> B;
    Matrix P;
};

class ChannelIntegrator {
public:
    ChannelIntegrator(const ChannelSet& ch, const OperatorSet& ops) : ch_(ch), E_(ops.energies) {
        const auto nk = ch.size();
        Sdag_.reserve(nk);
        for (const auto& s : ch.S) Sdag_.push_back(s.adjoint());
        I_.assign(nk, Matrix::Zero(ops.dim(), ops.dim()));
        Ip_ = I_;
        // Nodes with vanishing weight never contribute (e.g. e^2 = 0).
        for (std::size_t j = 0; j < nk; ++j)
            if (ch.amp_H[j] != 0.0 || ch.amp_R[j] != 0.0) active_.push_back(j);
    }

    MemoryState current() const {
        MemoryState m;
        const auto nk = ch_.size();
        const cplx i(0.0, 1.0);
        m.A.resize(nk);
        m.B.resize(nk);
        const Eigen::Index d = E_.size();
        m.P = Matrix::Zero(d, d);
        for (std::size_t j : active_) {
            m.A[j] = I_[j] - i * Ip_[j];
            m.B[j] = I_[j] + i * Ip_[j];
            m.P.noalias() += ch_.S[j] * m.A[j];
            m.P.noalias() += Sdag_[j] * m.B[j].adjoint();
        }
        return m;
    }

    // Simpson over [t0, t0 + h] for every node.
    void advance(double t0, double h) {
        const double ts[3] = {t0, t0 + 0.5 * h, t0 + h};
        const double wts[3] = {h / 6.0, 4.0 * h / 6.0, h / 6.0};
        const Eigen::Index d = E_.size();
        for (int q = 0; q < 3; ++q) {
            // S^dagger(-t1)_{nm} = S^dagger_{nm} exp(-i w_nm t1) = u_n S^dagger_{nm} conj(u_m)
            Vector u(d);
            for (Eigen::Index n = 0; n < d; ++n) u(n) = std::polar(1.0, -E_(n) * ts[q] / kHbar);
            for (std::size_t j : active_) {
                const double cw = wts[q] * ch_.c(j, ts[q]);
                const double cpw = wts[q] * ch_.c_prime(j, ts[q]);
                if (cw == 0.0 && cpw == 0.0) continue;
                const Matrix rotated = u.asDiagonal() * Sdag_[j] * u.conjugate().asDiagonal();
                I_[j] += cw * rotated;
                Ip_[j] += cpw * rotated;
            }
        }
    }

    Matrix rhs(const Matrix& rho, const MemoryState& m) const {
        Matrix Z = m.P * rho;
        Matrix tmp(rho.rows(), rho.cols());
        for (std::size_t j : active_) {
            tmp.noalias() = rho * m.B[j];
            Z.noalias() -= ch_.S[j] * tmp;
            tmp.noalias() = rho * ch_.S[j];
            Z.noalias() -= m.A[j] * tmp;
        }
        return Matrix(-(Z + Z.adjoint()));
    }

private:
    const ChannelSet& ch_;
    RealVector E_;
    std::vector<Matrix> Sdag_;
    std::vector<std::size_t> active_;
    std::vector<Matrix> I_;
    std::vector<Matrix> Ip_;
};

} // namespace

Trajectory evolve_channels(const DensityMatrix& rho0, const ChannelSet& channels, const OperatorSet& ops,
                           const SolverOptions& options) {
    for (const auto& s : channels.S)
        require(s.rows() == ops.dim(), "channel operators do not match the system dimension");
    ChannelIntegrator integ(channels, ops);
    MemoryState at_t = integ.current();
    auto step = [&](const Matrix& rho_i, double t, double h) {
        integ.advance(t, 0.5 * h);
        const MemoryState mid = integ.current();
        integ.advance(t + 0.5 * h, 0.5 * h);
        MemoryState end = integ.current();
        const MemoryState* m[3] = {&at_t, &mid, &end};
        Matrix next = detail::rk4_interaction(rho_i, t, h, ops.energies,
                                              [&](const Matrix& r, int stage) { return integ.rhs(r, *m[stage]); });
        at_t = std::move(end);
        return next;
    };
    return detail::integrate(rho0, ops, options, "channels", step);
}

// ---------------------------------------------------------------------------

double step_halving_ratio(const std::function<Matrix(double)>& final_state, double dt) {
    const Matrix r1 = final_state(dt);
    const Matrix r2 = final_state(0.5 * dt);
    const Matrix r4 = final_state(0.25 * dt);
    const double a = trace_distance(r1, r2);
    const double b = trace_distance(r2, r4);
    if (b == 0.0) return a == 0.0 ? std::numeric_limits<double>::quiet_NaN() : std::numeric_limits<double>::infinity();
    return a / b;
}

} // namespace einselect
