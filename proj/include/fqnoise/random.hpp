#pragma once

#include <Eigen/Dense>
#include <random>

#include "gaussian_state.hpp"

namespace fqn {

using Rng = std::mt19937_64;

inline Mat gaussian_matrix(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = nd(rng);
    return m;
}

inline Mat random_antisymmetric(int n, Rng& rng) {
    Mat a = gaussian_matrix(n, n, rng);
    return (a - a.transpose()) * 0.5;
}

// Haar orthogonal via QR with sign fix.
inline Mat haar_orthogonal(int n, Rng& rng) {
    Mat g = gaussian_matrix(n, n, rng);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i)
        if (r(i, i) < 0) q.col(i) *= -1.0;
    return q;
}

// Gamma = O (+)_k nu_k J O^T; pure when every nu_k = 1.
inline CorrelationMatrix random_gaussian_state(const Lattice& lat, Rng& rng, bool pure = false) {
    const int n = lat.num_sites();
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    Mat blocks = Mat::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
        const double nu = pure ? 1.0 : ud(rng);
        blocks(2 * k, 2 * k + 1) = nu;
        blocks(2 * k + 1, 2 * k) = -nu;
    }
    const Mat o = haar_orthogonal(2 * n, rng);
    Mat g = o * blocks * o.transpose();
    g = (g - g.transpose()) * 0.5;
    return {lat, g};
}

// Random antisymmetric coefficient matrix with trace norm 1.
inline QuadraticObservable random_normalized_observable(int n_modes, Rng& rng, double offset = 0.0) {
    Mat a = random_antisymmetric(2 * n_modes, rng);
    a /= trace_norm(a);
    return {offset, a};
}

}  // namespace fqn
