#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "encodings.hpp"
#include "errors.hpp"
#include "gaussian_state.hpp"
#include "noise.hpp"

// Dense brute-force reference for a handful of modes under the 1D Jordan-Wigner encoding.
namespace fqn::oracle {

inline constexpr int default_max_modes = 4;
inline constexpr int hard_max_modes = 8;

inline CMat pauli(char c) {
    CMat m(2, 2);
    const cplx i(0, 1);
    switch (c) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, -i, i, 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: throw InputDomainError(std::string("unknown Pauli ") + c);
    }
    return m;
}

// Kronecker product of single-qubit factors; qubit 0 is the leftmost factor.
inline CMat pauli_string(const std::string& s) {
    CMat out = CMat::Identity(1, 1);
    for (char c : s) {
        CMat next = Eigen::kroneckerProduct(out, pauli(c)).eval();
        out = std::move(next);
    }
    return out;
}

struct DenseOperatorTable {
    int n_modes = 0;
    std::vector<CMat> gamma;  // index 2*site + flavor - 1

    int dim() const { return 1 << n_modes; }
};

inline DenseOperatorTable build_majoranas_jw1d(int n_modes, int max_modes = default_max_modes) {
    if (n_modes < 1) throw InputDomainError("need at least one mode");
    if (max_modes > hard_max_modes) max_modes = hard_max_modes;
    if (n_modes > max_modes)
        throw UnsupportedConfiguration("dense oracle limited to " + std::to_string(max_modes) + " modes");
    DenseOperatorTable t;
    t.n_modes = n_modes;
    for (int j = 0; j < n_modes; ++j)
        for (char f : {'X', 'Y'}) {
            std::string s(n_modes, 'I');
            for (int l = 0; l < j; ++l) s[l] = 'Z';
            s[j] = f;
            t.gamma.push_back(pauli_string(s));
        }
    const int d = t.dim();
    const CMat id = CMat::Identity(d, d);
    for (int a = 0; a < 2 * n_modes; ++a)
        for (int b = 0; b < 2 * n_modes; ++b) {
            const CMat ac = t.gamma[a] * t.gamma[b] + t.gamma[b] * t.gamma[a];
            const CMat expect = (a == b ? 2.0 : 0.0) * id;
            if ((ac - expect).cwiseAbs().maxCoeff() > 1e-12)
                throw NumericalInvariantError("Majorana anticommutation check failed");
        }
    return t;
}

// Pfaffian of a small complex antisymmetric matrix by expansion along the first row.
inline cplx pfaffian(const CMat& m) {
    const int n = int(m.rows());
    if (n == 0) return 1.0;
    if (n % 2) return 0.0;
    if (n == 2) return m(0, 1);
    cplx acc = 0.0;
    std::vector<int> rest;
    for (int j = 1; j < n; ++j) {
        rest.clear();
        for (int k = 1; k < n; ++k)
            if (k != j) rest.push_back(k);
        CMat sub(n - 2, n - 2);
        for (int a = 0; a < n - 2; ++a)
            for (int b = 0; b < n - 2; ++b) sub(a, b) = m(rest[a], rest[b]);
        const double sign = (j % 2) ? 1.0 : -1.0;
        acc += sign * m(0, j) * pfaffian(sub);
    }
    return acc;
}

inline CMat ordered_product(const DenseOperatorTable& t, const std::vector<int>& idx) {
    CMat out = CMat::Identity(t.dim(), t.dim());
    for (int a : idx) out = (out * t.gamma[a]).eval();
    return out;
}

// rho = 2^{-N} sum_S <gamma_S^dag> gamma_S with Wick: <gamma_S> = Pf((-i Gamma)_S).
inline CMat gaussian_state_to_dense(const CorrelationMatrix& st, const DenseOperatorTable& t) {
    const int n = t.n_modes;
    if (st.num_modes() != n) throw DimensionMismatch("state and operator table sizes differ");
    if (st.max_singular_value() > 1 + 1e-9) throw InputDomainError("unphysical correlation matrix");
    const int m = 2 * n;
    const int d = t.dim();
    const CMat minus_i_gamma = cplx(0, -1) * st.gamma.cast<cplx>();
    CMat rho = CMat::Zero(d, d);
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        std::vector<int> idx;
        for (int a = 0; a < m; ++a)
            if (mask & (1u << a)) idx.push_back(a);
        const int k = int(idx.size());
        if (k % 2) continue;
        CMat sub(k, k);
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) sub(a, b) = minus_i_gamma(idx[a], idx[b]);
        const cplx ev = pfaffian(sub);
        const double rev_sign = ((k * (k - 1) / 2) % 2) ? -1.0 : 1.0;  // gamma_S^dag = (-1)^{k(k-1)/2} gamma_S
        rho += (rev_sign * ev) * ordered_product(t, idx);
    }
    rho /= double(d);
    return rho;
}

inline CorrelationMatrix dense_to_correlation_matrix(const CMat& rho, const DenseOperatorTable& t, const Lattice& lat) {
    const int m = 2 * t.n_modes;
    if (rho.rows() != t.dim()) throw DimensionMismatch("density matrix has wrong size");
    CorrelationMatrix out{lat, Mat::Zero(m, m)};
    const cplx half_i(0, 0.5);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            const CMat comm = t.gamma[a] * t.gamma[b] - t.gamma[b] * t.gamma[a];
            out.gamma(a, b) = (half_i * (comm * rho).trace()).real();
        }
    return out;
}

inline void check_density_matrix(const CMat& rho, double tol = 1e-10) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) throw NumericalInvariantError("rho not Hermitian");
    if (std::abs(rho.trace() - cplx(1.0)) > tol) throw NumericalInvariantError("rho trace != 1");
    Eigen::SelfAdjointEigenSolver<CMat> es((rho + rho.adjoint()) * 0.5);
    if (es.eigenvalues().minCoeff() < -tol) throw NumericalInvariantError("rho not positive semidefinite");
}

// Single-qubit operator acting on `qubit` of an n-qubit register.
inline CMat embed(const CMat& op, int qubit, int n_qubits) {
    CMat out = CMat::Identity(1, 1);
    for (int q = 0; q < n_qubits; ++q) {
        const CMat f = q == qubit ? op : CMat::Identity(2, 2);
        CMat next = Eigen::kroneckerProduct(out, f).eval();
        out = std::move(next);
    }
    return out;
}

// T_p^{(x)N} by Kraus composition one qubit at a time. Pauli channels are self-adjoint, so the same
// map serves states (Schrodinger) and observables (Heisenberg).
inline CMat apply_pauli_channel_dense(const CMat& rho, const PauliNoiseParams& noise) {
    noise.validate();
    const int d = int(rho.rows());
    int n = 0;
    while ((1 << n) < d) ++n;
    if ((1 << n) != d) throw DimensionMismatch("matrix size is not a power of two");
    const double w0 = 1.0 - 0.75 * noise.p;
    const std::array<double, 3> w{0.75 * noise.p * noise.alpha_x, 0.75 * noise.p * noise.alpha_y,
                                  0.75 * noise.p * noise.alpha_z};
    const std::array<char, 3> names{'X', 'Y', 'Z'};
    CMat out = rho;
    for (int q = 0; q < n; ++q) {
        CMat next = w0 * out;
        for (int s = 0; s < 3; ++s) {
            if (w[s] == 0.0) continue;
            const CMat k = embed(pauli(names[s]), q, n);
            next += w[s] * (k * out * k);
        }
        out = std::move(next);
    }
    return out;
}

inline CMat observable_to_dense(const QuadraticObservable& obs, const DenseOperatorTable& t) {
    const int m = 2 * t.n_modes;
    if (obs.coeff.rows() != m) throw DimensionMismatch("observable size differs from operator table");
    CMat o = obs.offset * CMat::Identity(t.dim(), t.dim());
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (obs.coeff(a, b) != 0.0) o += cplx(0, obs.coeff(a, b)) * (t.gamma[a] * t.gamma[b]);
    return o;
}

inline double oracle_expectation(const CMat& rho, const CMat& obs_dense) {
    return (rho * obs_dense).trace().real();
}

// U = exp((1/4) sum_ab A_ab gamma_a gamma_b), so that U^dag gamma_c U = sum_b (e^A)_cb gamma_b.
inline CMat gaussian_unitary(const Mat& generator, const DenseOperatorTable& t) {
    const int m = 2 * t.n_modes;
    if (generator.rows() != m) throw DimensionMismatch("generator size differs from operator table");
    CMat g = CMat::Zero(t.dim(), t.dim());
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (generator(a, b) != 0.0) g += (0.25 * generator(a, b)) * (t.gamma[a] * t.gamma[b]);
    return g.exp();
}

// Bravyi-Kitaev reference via the recursive beta matrix (rows = qubits, columns = modes):
// beta_1 = [1], beta_{2n} = [[beta_n, 0], [A, beta_n]] with A zero except a bottom row of ones.
using BitMatrix = std::vector<std::vector<int>>;

inline BitMatrix bk_beta_matrix(int n) {
    if (!is_power_of_two(n)) throw UnsupportedConfiguration("beta matrix needs N a power of two");
    BitMatrix b{{1}};
    for (int size = 1; size < n; size *= 2) {
        BitMatrix next(2 * size, std::vector<int>(2 * size, 0));
        for (int i = 0; i < size; ++i)
            for (int j = 0; j < size; ++j) {
                next[i][j] = b[i][j];
                next[size + i][size + j] = b[i][j];
            }
        for (int j = 0; j < size; ++j) next[2 * size - 1][j] = 1;
        b = std::move(next);
    }
    return b;
}

// Gauss-Jordan over GF(2).
inline BitMatrix gf2_inverse(const BitMatrix& m) {
    const int n = int(m.size());
    BitMatrix a = m, inv(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) inv[i][i] = 1;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a[r][col]) {
                piv = r;
                break;
            }
        if (piv < 0) throw NumericalInvariantError("matrix is singular over GF(2)");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        for (int r = 0; r < n; ++r)
            if (r != col && a[r][col])
                for (int c = 0; c < n; ++c) {
                    a[r][c] ^= a[col][c];
                    inv[r][c] ^= inv[col][c];
                }
    }
    return inv;
}

// gamma1_j: X on column j of beta, Z on the XOR of rows 0..j-1 of beta^{-1}; gamma2_j also XORs row j.
inline std::vector<SymplecticPauli> bk_majorana_strings_beta(int n) {
    const BitMatrix beta = bk_beta_matrix(n);
    const BitMatrix inv = gf2_inverse(beta);
    std::vector<SymplecticPauli> out;
    std::vector<int> prefix(n, 0);
    for (int j = 0; j < n; ++j) {
        SymplecticPauli g1(n);
        for (int q = 0; q < n; ++q)
            if (beta[q][j]) g1.set_x(q);
        SymplecticPauli g2 = g1;
        for (int q = 0; q < n; ++q) {
            if (prefix[q]) g1.set_z(q);
            if (prefix[q] ^ inv[j][q]) g2.set_z(q);
        }
        for (int q = 0; q < n; ++q) prefix[q] ^= inv[j][q];
        out.push_back(g1);
        out.push_back(g2);
    }
    return out;
}

inline int bk_number_operator_weight_beta(int i, int n) {
    const auto s = bk_majorana_strings_beta(n);
    return (s[2 * i] * s[2 * i + 1]).weight();
}

// Dense check that the strings are a valid Majorana representation.
inline CMat symplectic_to_dense(const SymplecticPauli& p, int n) {
    std::string s(n, 'I');
    for (int q = 0; q < n; ++q) {
        const bool x = (p.x[q / 64] >> (q % 64)) & 1, z = (p.z[q / 64] >> (q % 64)) & 1;
        s[q] = x && z ? 'Y' : x ? 'X' : z ? 'Z' : 'I';
    }
    return pauli_string(s);
}

}  // namespace fqn::oracle
