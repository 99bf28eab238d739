#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"

namespace fqn {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

// Gamma_ab = (i/2) tr([gamma_a, gamma_b] rho), real antisymmetric 2N x 2N.
struct CorrelationMatrix {
    Lattice lat;
    Mat gamma;

    int num_modes() const { return int(gamma.rows()) / 2; }

    double antisymmetry_defect() const { return (gamma + gamma.transpose()).cwiseAbs().maxCoeff(); }
    double max_singular_value() const {
        if (gamma.size() == 0) return 0.0;
        Eigen::JacobiSVD<Mat> svd(gamma);
        return svd.singularValues()(0);
    }
    double purity_defect() const {
        return (gamma * gamma.transpose() - Mat::Identity(gamma.rows(), gamma.cols())).cwiseAbs().maxCoeff();
    }
    bool is_pure(double tol = 1e-9) const { return purity_defect() <= tol; }

    void check_physical(double tol_antisym = 1e-12, double tol_sv = 1e-9) const {
        if (gamma.rows() != gamma.cols() || gamma.rows() != 2 * lat.num_sites())
            throw DimensionMismatch("correlation matrix must be 2N x 2N");
        if (antisymmetry_defect() > tol_antisym) throw NumericalInvariantError("correlation matrix not antisymmetric");
        if (max_singular_value() > 1.0 + tol_sv) throw NumericalInvariantError("correlation matrix has singular value > 1");
    }
};

// O = offset + i sum_ab coeff_ab gamma_a gamma_b, coeff real antisymmetric.
struct QuadraticObservable {
    double offset = 0.0;
    Mat coeff;

    double antisymmetry_defect() const { return (coeff + coeff.transpose()).cwiseAbs().maxCoeff(); }
};

inline double trace_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues().sum();
}

inline double spectral_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

// C(x,y) = <c_x^dag c_y>; F(x,y) = <c_x c_y> (empty for number-conserving states)
struct ComplexCorrelations {
    CMat C;
    CMat F;

    bool number_conserving() const { return F.size() == 0 || F.cwiseAbs().maxCoeff() == 0.0; }
};

inline CorrelationMatrix complex_to_majorana(const ComplexCorrelations& cc, const Lattice& lat) {
    const int n = lat.num_sites();
    if (cc.C.rows() != n || cc.C.cols() != n) throw DimensionMismatch("C must be N x N");
    const bool has_f = cc.F.size() != 0;
    if (has_f && (cc.F.rows() != n || cc.F.cols() != n)) throw DimensionMismatch("F must be N x N");
    if ((cc.C - cc.C.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw InputDomainError("C is not Hermitian");
    if (has_f && (cc.F + cc.F.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw InputDomainError("anomalous block is not antisymmetric");

    CorrelationMatrix out{lat, Mat::Zero(2 * n, 2 * n)};
    Mat& g = out.gamma;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const cplx c = cc.C(x, y);
            const cplx f = has_f ? cc.F(x, y) : cplx(0.0);
            const double d = x == y ? 1.0 : 0.0;
            g(2 * x, 2 * y) = -2 * c.imag() - 2 * f.imag();
            g(2 * x + 1, 2 * y + 1) = -2 * c.imag() + 2 * f.imag();
            g(2 * x, 2 * y + 1) = 2 * c.real() + 2 * f.real() - d;
            g(2 * x + 1, 2 * y) = -2 * c.real() + 2 * f.real() + d;
        }
    for (int a = 0; a < 2 * n; ++a) g(a, a) = 0.0;
    if (!has_f) {
        Eigen::SelfAdjointEigenSolver<CMat> es(cc.C);
        const auto& ev = es.eigenvalues();
        if (ev.minCoeff() < -1e-9 || ev.maxCoeff() > 1 + 1e-9)
            throw InputDomainError("C has eigenvalues outside [0,1]");
    } else if (out.max_singular_value() > 1 + 1e-9) {
        throw InputDomainError("(C, F) is not a physical state");
    }
    return out;
}

inline ComplexCorrelations majorana_to_complex(const CorrelationMatrix& st) {
    const int n = st.num_modes();
    const Mat& g = st.gamma;
    ComplexCorrelations cc{CMat::Zero(n, n), CMat::Zero(n, n)};
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const double d = x == y ? 1.0 : 0.0;
            const double g11 = g(2 * x, 2 * y), g22 = g(2 * x + 1, 2 * y + 1);
            const double g12 = g(2 * x, 2 * y + 1), g21 = g(2 * x + 1, 2 * y);
            cc.C(x, y) = cplx((g12 - g21 + 2 * d) / 4, -(g11 + g22) / 4);
            cc.F(x, y) = cplx((g12 + g21) / 4, (g22 - g11) / 4);
        }
    return cc;
}

// Slater determinant of plane waves: C(x,y) = (1/N) sum_q e^{-i q.(r_x - r_y)}.
inline CorrelationMatrix plane_wave_state(const Lattice& lat, const MomentumGrid& grid, const std::vector<std::size_t>& occupied) {
    const int n = lat.num_sites();
    const int m = int(occupied.size());
    CMat phi(n, m);
    for (int s = 0; s < n; ++s) {
        const Coord r = lat.coord(s);
        for (int j = 0; j < m; ++j) {
            const auto k = grid.momentum(occupied[j]);
            double ph = 0.0;
            for (int c = 0; c < lat.D; ++c) ph += k[c] * r[c];
            phi(s, j) = std::polar(1.0 / std::sqrt(double(n)), -ph);
        }
    }
    ComplexCorrelations cc;
    cc.C = phi * phi.adjoint();
    cc.C = (cc.C + cc.C.adjoint()) * 0.5;
    return complex_to_majorana(cc, lat);
}

struct FermiSea {
    CorrelationMatrix state;
    MomentumGrid grid;
    std::vector<std::size_t> occupied;  // indices into grid
    std::vector<bool> is_occupied;
};

inline FermiSea fermi_sea_1d_detail(const Lattice& lat, int n_occ) {
    if (lat.D != 1) throw UnsupportedConfiguration("fermi_sea_1d needs D=1");
    if (n_occ < 0 || n_occ > lat.num_sites())
        throw InputDomainError("n_occ=" + std::to_string(n_occ) + " outside [0, N]");
    FermiSea fs{{}, momentum_grid(lat, parity_of(n_occ)), {}, {}};
    std::vector<std::size_t> order(fs.grid.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const int ma = fs.grid.twice_m[a][0], mb = fs.grid.twice_m[b][0];
        if (std::abs(ma) != std::abs(mb)) return std::abs(ma) < std::abs(mb);
        return ma < mb;
    });
    fs.occupied.assign(order.begin(), order.begin() + n_occ);
    fs.is_occupied.assign(fs.grid.size(), false);
    for (auto i : fs.occupied) fs.is_occupied[i] = true;
    fs.state = plane_wave_state(lat, fs.grid, fs.occupied);
    return fs;
}

inline CorrelationMatrix fermi_sea_1d(const Lattice& lat, int n_occ) { return fermi_sea_1d_detail(lat, n_occ).state; }

inline double tight_binding_energy(const std::vector<double>& k, double t = 1.0) {
    double e = 0.0;
    for (double kc : k) e += std::cos(kc);
    return -2.0 * t * e;
}

inline FermiSea tight_binding_ground_state_2d_detail(const Lattice& lat, int n_occ) {
    if (lat.D != 2) throw UnsupportedConfiguration("tight_binding_ground_state_2d needs D=2");
    if (n_occ < 0 || n_occ > lat.num_sites())
        throw InputDomainError("n_occ=" + std::to_string(n_occ) + " outside [0, N]");
    FermiSea fs{{}, momentum_grid(lat, parity_of(n_occ)), {}, {}};
    const std::size_t n = fs.grid.size();
    // energies keyed on a 1e-9 lattice so exact degeneracies compare equal
    std::vector<long long> ekey(n);
    for (std::size_t i = 0; i < n; ++i) ekey[i] = std::llround(tight_binding_energy(fs.grid.momentum(i)) * 1e9);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (ekey[a] != ekey[b]) return ekey[a] < ekey[b];
        return fs.grid.twice_m[a] < fs.grid.twice_m[b];
    });
    fs.occupied.assign(order.begin(), order.begin() + n_occ);
    fs.is_occupied.assign(n, false);
    for (auto i : fs.occupied) fs.is_occupied[i] = true;
    fs.state = plane_wave_state(lat, fs.grid, fs.occupied);
    return fs;
}

inline CorrelationMatrix tight_binding_ground_state_2d(const Lattice& lat, int n_occ) {
    return tight_binding_ground_state_2d_detail(lat, n_occ).state;
}

// Quadratic form of sum_xy h_xy c_x^dag c_y, h Hermitian.
inline QuadraticObservable hopping_observable(const CMat& h) {
    const int n = int(h.rows());
    if (h.cols() != n) throw DimensionMismatch("h must be square");
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw InputDomainError("h is not Hermitian");
    QuadraticObservable o{h.trace().real() / 2, Mat::Zero(2 * n, 2 * n)};
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const double hr = h(x, y).real(), hi = h(x, y).imag();
            o.coeff(2 * x, 2 * y) = hi / 4;
            o.coeff(2 * x + 1, 2 * y + 1) = hi / 4;
            o.coeff(2 * x, 2 * y + 1) = hr / 4;
            o.coeff(2 * x + 1, 2 * y) = -hr / 4;
        }
    for (int a = 0; a < 2 * n; ++a) o.coeff(a, a) = 0.0;
    return o;
}

inline CVec plane_wave(const Lattice& lat, const std::vector<double>& k, double sign) {
    if (int(k.size()) != lat.D) throw DimensionMismatch("momentum has wrong dimension");
    const int n = lat.num_sites();
    CVec u(n);
    for (int s = 0; s < n; ++s) {
        const Coord r = lat.coord(s);
        double ph = 0.0;
        for (int c = 0; c < lat.D; ++c) ph += k[c] * r[c];
        u(s) = std::polar(1.0, sign * ph);
    }
    return u;
}

// n_k = (1/N) sum_xy e^{i k.(r_x - r_y)} c_x^dag c_y
inline QuadraticObservable build_momentum_occupation_observable(const Lattice& lat, const std::vector<double>& k) {
    const CVec v = plane_wave(lat, k, +1.0);
    const CMat h = v * v.adjoint() / double(lat.num_sites());
    return hopping_observable(h);
}

inline double quadratic_expectation(const QuadraticObservable& obs, const CorrelationMatrix& st) {
    if (obs.coeff.rows() != st.gamma.rows() || obs.coeff.cols() != st.gamma.cols())
        throw DimensionMismatch("observable and state dimensions differ");
    return obs.offset + (obs.coeff.array() * st.gamma.array()).sum();
}

// Evaluates 1/2 + sum_ab Ot(k)_ab M_ab for the n_k observable without building Ot(k).
// M is Gamma itself (ideal) or lambda o Gamma (noisy).
class MomentumOccupationEvaluator {
public:
    MomentumOccupationEvaluator(const Lattice& lat, const Mat& m) : lat_(lat) {
        const int n = lat.num_sites();
        if (m.rows() != 2 * n || m.cols() != 2 * n) throw DimensionMismatch("matrix must be 2N x 2N");
        w_.resize(n, n);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                const double p = m(2 * x, 2 * y) + m(2 * x + 1, 2 * y + 1);
                const double q = m(2 * x, 2 * y + 1) - m(2 * x + 1, 2 * y);
                w_(x, y) = cplx(q, -p);
            }
    }

    double operator()(const std::vector<double>& k) const {
        const CVec u = plane_wave(lat_, k, -1.0);
        const cplx s = u.dot(w_ * u);  // u^dag W u
        return 0.5 + s.real() / (4.0 * lat_.num_sites());
    }

private:
    Lattice lat_;
    CMat w_;
};

inline double momentum_occupation(const CorrelationMatrix& st, const std::vector<double>& k) {
    return MomentumOccupationEvaluator(st.lat, st.gamma)(k);
}

}  // namespace fqn
