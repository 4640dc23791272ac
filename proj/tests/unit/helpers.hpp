#pragma once

#include <random>

#include "einselect/hilbert.hpp"

namespace einselect::test {

// Random mixed state: G G^dagger / Tr, G with complex Gaussian entries.
inline DensityMatrix random_state(int dim, std::mt19937& rng, int rank = -1) {
    std::normal_distribution<double> n(0.0, 1.0);
    const int r = rank > 0 ? rank : dim;
    Matrix g(dim, r);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < r; ++j) g(i, j) = cplx(n(rng), n(rng));
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(rho);
}

inline Vector basis_superposition(int dim, int n, int m, double phase = 0.0) {
    Vector v = Vector::Zero(dim);
    v(n) = 1.0 / std::sqrt(2.0);
    v(m) = std::polar(1.0 / std::sqrt(2.0), phase);
    return v;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace einselect::test
