#include "einselect/hilbert.hpp"

#include <cmath>
#include <sstream>

#include "einselect/error.hpp"

namespace einselect {

void SystemParams::validate() const {
    require(mass > 0.0, "system.mass must be positive");
    require(frequency > 0.0, "system.frequency must be positive");
    require(fock_dim >= 2, "system.fock_dim must be at least 2");
}

double SystemParams::x_char() const { return std::sqrt(kHbar / (2.0 * mass * frequency)); }

OperatorSet build_operators(const SystemParams& params) {
    params.validate();
    const int d = params.fock_dim;
    OperatorSet ops;
    ops.params = params;
    ops.a = Matrix::Zero(d, d);
    for (int n = 0; n + 1 < d; ++n) ops.a(n, n + 1) = std::sqrt(static_cast<double>(n + 1));
    ops.a_dag = ops.a.adjoint();

    const double m = params.mass;
    const double w = params.frequency;
    ops.x = std::sqrt(kHbar / (2.0 * m * w)) * (ops.a + ops.a_dag);
    ops.p = cplx(0.0, std::sqrt(kHbar * m * w / 2.0)) * (ops.a_dag - ops.a);

    ops.energies.resize(d);
    for (int n = 0; n < d; ++n) ops.energies(n) = kHbar * w * (n + 0.5);
    ops.H = ops.energies.cast<cplx>().asDiagonal();
    return ops;
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix rho, double trace_tol, double hermitian_tol)
    : rho_(std::move(rho)) {
    require(rho_.rows() == rho_.cols() && rho_.rows() >= 1, "density matrix must be square");
    require(rho_.allFinite(), "density matrix has non-finite entries");
    if (trace_error() > trace_tol) {
        std::ostringstream os;
        os << "density matrix trace deviates from 1 by " << trace_error();
        fail(ErrorCategory::invalid_argument, os.str());
    }
    if (hermiticity_error() > hermitian_tol) {
        std::ostringstream os;
        os << "density matrix is not Hermitian (max deviation " << hermiticity_error() << ")";
        fail(ErrorCategory::invalid_argument, os.str());
    }
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
    const double norm = psi.norm();
    require(norm > 0.0, "state vector has zero norm");
    const Vector v = psi / norm;
    Matrix rho = v * v.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::fock(int n, int dim) {
    require(n >= 0 && n < dim, "Fock level outside the truncated space");
    Matrix rho = Matrix::Zero(dim, dim);
    rho(n, n) = 1.0;
    return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    require(dim >= 1, "dimension must be positive");
    return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityMatrix::trace_error() const { return std::abs(rho_.trace() - cplx(1.0, 0.0)); }

double DensityMatrix::hermiticity_error() const { return max_antihermitian(rho_); }

double DensityMatrix::purity() const {
    // Tr rho^2 = sum |rho_nm|^2 for Hermitian rho
    return rho_.squaredNorm();
}

DensityMatrix DensityMatrix::adjoint() const { return DensityMatrix(rho_.adjoint(), 1e300, 1e300); }

// ---------------------------------------------------------------------------

double coherent_tail_weight(cplx alpha, int dim) {
    const double mean = std::norm(alpha);
    if (mean == 0.0) return 0.0;
    // log of the Poisson pmf at n = dim, then sum the tail by recurrence
    double log_term = -mean + dim * std::log(mean) - std::lgamma(dim + 1.0);
    double term = std::exp(log_term);
    double tail = 0.0;
    for (int n = dim; n < dim + 2000; ++n) {
        tail += term;
        term *= mean / (n + 1.0);
        if (term < 1e-300 || (n > mean && term < 1e-18 * tail)) break;
    }
    return tail;
}

Vector coherent_amplitudes(cplx alpha, int dim, double tail_tol) {
    require(dim >= 1, "dimension must be positive");
    const double tail = coherent_tail_weight(alpha, dim);
    if (tail > tail_tol) {
        std::ostringstream os;
        os << "coherent state alpha=(" << alpha.real() << "," << alpha.imag()
           << ") loses Poisson weight " << tail << " beyond fock_dim=" << dim;
        fail(ErrorCategory::truncation, os.str());
    }
    Vector c(dim);
    cplx amp = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n < dim; ++n) {
        c(n) = amp;
        amp *= alpha / std::sqrt(n + 1.0);
    }
    return c / c.norm();
}

DensityMatrix coherent_state(cplx alpha, int dim, double tail_tol) {
    return DensityMatrix::pure(coherent_amplitudes(alpha, dim, tail_tol));
}

RealVector eigenvalues(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double min_eigenvalue(const DensityMatrix& rho) { return eigenvalues(rho).minCoeff(); }

double von_neumann_entropy(const DensityMatrix& rho) {
    const RealVector lam = eigenvalues(rho);
    if (lam.minCoeff() < -1e-9) {
        std::ostringstream os;
        os << "corrupted state: eigenvalue " << lam.minCoeff() << " below -1e-9";
        fail(ErrorCategory::invalid_argument, os.str());
    }
    return entropy_from_eigenvalues(lam);
}

double entropy_from_eigenvalues(const RealVector& lam) {
    double s = 0.0;
    for (double l : lam) {
        // 0 log 0 := 0; an eigenvalue within the same floor of 1 is a pure
        // state whose deficit sits in eigenvalues that are themselves floored
        if (l > 1e-14 && 1.0 - l > 1e-14) s -= l * std::log(l);
    }
    return s;
}

double linear_entropy(const DensityMatrix& rho) { return 1.0 - rho.purity(); }

double trace_distance(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "trace_distance: dimension mismatch");
    Matrix diff = a - b;
    diff = 0.5 * (diff + diff.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    return trace_distance(a.matrix(), b.matrix());
}

cplx expectation(const DensityMatrix& rho, const Matrix& op) {
    return (rho.matrix() * op).trace();
}

Matrix matrix_exp_unitary(const Matrix& generator, double scale) {
    require(generator.rows() == generator.cols(), "generator must be square");
    const double tol = 1e-10 * std::max(1.0, generator.cwiseAbs().maxCoeff());
    if (max_antihermitian(generator) > tol)
        fail(ErrorCategory::invalid_argument, "matrix_exp_unitary: generator is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(generator);
    if (es.info() != Eigen::Success)
        fail(ErrorCategory::invalid_argument, "matrix_exp_unitary: eigendecomposition failed");
    const RealVector& lam = es.eigenvalues();
    Vector phases(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) phases(i) = std::polar(1.0, scale * lam(i));
    const Matrix& v = es.eigenvectors();
    return v * phases.asDiagonal() * v.adjoint();
}

double top_occupation(const Matrix& rho, int levels) {
    const int d = static_cast<int>(rho.rows());
    double occ = 0.0;
    for (int n = std::max(0, d - levels); n < d; ++n) occ += rho(n, n).real();
    return occ;
}

double max_antihermitian(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

} // namespace einselect
