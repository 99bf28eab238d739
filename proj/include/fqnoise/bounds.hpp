#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "encodings.hpp"
#include "errors.hpp"
#include "gaussian_state.hpp"
#include "lattice.hpp"
#include "noise.hpp"
#include "special_functions.hpp"

namespace fqn {

// C_D = 2^D (1+D)^{D-1} / (D-1)!
inline double c_dim(int D) {
    if (D < 1) throw InputDomainError("c_dim needs D >= 1");
    double fact = 1.0;
    for (int i = 2; i <= D - 1; ++i) fact *= i;
    return std::pow(2.0, D) * std::pow(1.0 + D, D - 1) / fact;
}

// number of points of Z^D within l1 distance d0 of the origin
inline double l1_ball_count(int D, int d0) {
    double total = 0.0, binom_d = 1.0, binom_d0 = 1.0;
    for (int k = 0; k <= D; ++k) {
        if (k > 0) {
            binom_d = binom_d * (D - k + 1) / k;
            binom_d0 = k <= d0 ? binom_d0 * (d0 - k + 1) / k : 0.0;
        }
        total += std::pow(2.0, k) * binom_d * binom_d0;
    }
    return total;
}

struct DecayParams {
    double K = 1.0;
    double mu = 3.0;
    int D = 1;
    int phi0 = 2;

    bool stable() const { return mu > D; }
    void validate() const {
        if (!(K > 0)) throw InputDomainError("K must be positive");
        if (!(mu > 0)) throw InputDomainError("mu must be positive");
        if (D < 1) throw InputDomainError("D must be >= 1");
        if (phi0 < 1) throw InputDomainError("phi0 must be >= 1");
    }
};

enum class Regime { unstable, sublinear, logarithmic, linear };

inline constexpr double regime_tol = 1e-12;

inline Regime regime_of(double mu, int D) {
    if (mu <= D) return Regime::unstable;
    if (std::abs(mu - (D + 1)) <= regime_tol) return Regime::logarithmic;
    return mu < D + 1 ? Regime::sublinear : Regime::linear;
}

inline std::string to_string(Regime r) {
    switch (r) {
        case Regime::unstable: return "mu<=D unstable";
        case Regime::sublinear: return "D<mu<D+1";
        case Regime::logarithmic: return "mu=D+1";
        case Regime::linear: return "mu>D+1";
    }
    return "?";
}

struct BoundReport {
    double value = 0.0;
    Regime regime = Regime::linear;
    DecayParams params;
    double p = 0.0;
    double constant = 1.0;  // multiplies the shape for the circuit bounds, 1 otherwise
    double shape = 0.0;
};

namespace detail {

inline void check_r(double r) {
    if (!(r >= 0.0 && r <= 1.0)) throw InputDomainError("r must lie in [0, 1]");
}

inline void check_p(double p) {
    if (!(p >= 0.0 && p <= 2.0 / 3 + 1e-15)) throw InputDomainError("p must lie in [0, 2/3]");
}

inline void check_stable(const DecayParams& dp) {
    dp.validate();
    if (!dp.stable()) throw InputDomainError("mu <= D: unstable regime, the bound diverges");
}

}  // namespace detail

// Short-range part: sum over d(s) <= d0 of [1 - r^{K1 d + K2}] with |g| <= 1.
inline double bound_S1(double r, double K1, double K2, int d0, int D) {
    detail::check_r(r);
    if (K1 < 0 || K2 < 1) throw InputDomainError("S1 needs K1 >= 0 and K2 >= 1");
    if (d0 < 0 || D < 1) throw InputDomainError("S1 needs d0 >= 0 and D >= 1");
    return (1.0 - r) * (K1 * d0 + K2) * l1_ball_count(D, d0);
}

// Tail: sum over d(s) > d0 of [1 - r^{K1 d + K2}] K / (d - d0)^mu.
inline double bound_S2(double r, double K1, double K2, int d0, double mu, int D, double K) {
    detail::check_r(r);
    if (K1 < 0 || K2 < 0) throw InputDomainError("S2 needs K1, K2 >= 0");
    if (d0 < 0 || D < 1 || !(K >= 0)) throw InputDomainError("S2 needs d0 >= 0, D >= 1, K >= 0");
    if (!(mu > D)) throw InputDomainError("S2 needs mu > D");
    if (r == 1.0) return 0.0;
    const double s = mu - D + 1;
    const double rk1 = std::pow(r, K1);
    const double li = rk1 >= 1.0 ? riemann_zeta(s) : polylog(s, rk1);
    return K * c_dim(D) * std::pow(d0 + 1.0, D - 1) * (riemann_zeta(s) - std::pow(r, K1 * d0 + K2) * li);
}

inline double bound_S(double r, double K1, double K2, int d0, double mu, int D, double K) {
    return bound_S1(r, K1, K2, d0, D) + bound_S2(r, K1, K2, d0, mu, D, K);
}

// Brute-force reference: max over r' is the origin by translation invariance of the torus.
inline double brute_force_S(const Lattice& lat, double r, double K1, double K2, int d0, double mu, double K) {
    double total = 0.0;
    const Coord origin(lat.D, 0);
    for (int s = 0; s < lat.num_sites(); ++s) {
        const int d = torus_distance(lat.coord(s), origin, lat);
        const double g = d <= d0 ? 1.0 : K / std::pow(double(d - d0), mu);
        total += (1.0 - std::pow(r, K1 * d + K2)) * g;
    }
    return total;
}

inline double corollary1_bound(const DecayParams& dp, double r) {
    detail::check_stable(dp);
    return bound_S(r, 1.0, dp.phi0, 0, dp.mu, dp.D, dp.K);
}

// Error <= 3 p phi0 + 2 K C_D (zeta(s) - r^phi0 Li_s(r)), r = 1 - 3p/2, s = mu - D + 1
inline BoundReport prop1_bound(const DecayParams& dp, double p) {
    detail::check_stable(dp);
    detail::check_p(p);
    const double r = std::max(0.0, 1.0 - 1.5 * p);
    const double s = dp.mu - dp.D + 1;
    const double li = r >= 1.0 ? riemann_zeta(s) : polylog(s, r);
    BoundReport rep;
    rep.params = dp;
    rep.p = p;
    rep.regime = regime_of(dp.mu, dp.D);
    rep.value = 3.0 * p * dp.phi0 + 2.0 * dp.K * c_dim(dp.D) * (riemann_zeta(s) - std::pow(r, dp.phi0) * li);
    rep.shape = rep.value;
    return rep;
}

// Free-fermion circuits of depth d and gate radius v. Summing the S-lemma over layers with
// d0 = 2 v k and bounding each term by f(p) = prop1 gives C3 f(p) d^{D+2}.
inline double prop3_constant(const DecayParams& dp, int v) {
    const double phi0 = dp.phi0;
    return (2 * v + phi0) * std::pow(4.0 * v + 1, dp.D) / phi0 + std::pow(2.0 * v + 1, dp.D - 1) * (1 + 2 * v / phi0);
}

inline BoundReport prop3_bound(const DecayParams& dp, double p, int d, int v = 1) {
    if (d < 0 || v < 1) throw InputDomainError("prop3 needs depth >= 0 and radius >= 1");
    BoundReport rep = prop1_bound(dp, p);
    const double f = rep.value;
    rep.constant = prop3_constant(dp, v);
    rep.shape = f * std::pow(double(d), dp.D + 2);
    rep.value = rep.constant * rep.shape;
    return rep;
}

// The same chain before the final coarse estimates: sum_{k=1}^{d} 2 S(r, 1, phi0, 2vk).
inline double prop3_layer_sum(const DecayParams& dp, double p, int d, int v = 1) {
    detail::check_stable(dp);
    detail::check_p(p);
    const double r = std::max(0.0, 1.0 - 1.5 * p);
    double total = 0.0;
    for (int k = 1; k <= d; ++k) total += 2.0 * bound_S(r, 1.0, dp.phi0, 2 * v * k, dp.mu, dp.D, dp.K);
    return total;
}

// Interacting circuits, through the second sum corollary with K1 = c2 (d-k)^{D-1}, K2 = c1 (d-k)^D.
inline double prop4_constant(const DecayParams& dp, int v) {
    const double phi0 = dp.phi0;
    const double c1 = 2 * std::pow(2.0 * v + 1, dp.D), c2 = std::pow(2.0 * v + 1, dp.D - 1);
    return (2 * v * c2 + c1) * std::pow(4.0 * v + 1, dp.D) / phi0 +
           2 * std::pow(2.0 * v + 1, dp.D - 1) * (1 + std::max(c2 / 2, (2 * v * c2 + c1) / (2 * phi0)));
}

inline BoundReport prop4_bound(const DecayParams& dp, double p, int d, int v = 1) {
    if (d < 0 || v < 1) throw InputDomainError("prop4 needs depth >= 0 and radius >= 1");
    BoundReport rep = prop1_bound(dp, p);
    const double f = rep.value;
    rep.constant = prop4_constant(dp, v);
    rep.shape = f * std::pow(double(d), 2 * dp.D + 1);
    rep.value = rep.constant * rep.shape;
    return rep;
}

// ---- circular Fermi surface in the thermodynamic limit ----

inline double decay_rate(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InputDomainError("p must lie in (0, 1)");
    return -std::log1p(-p);
}

// (1/2) lambda k_F^2 / (lambda^2 + Delta^2)^{3/2}
inline double fermi2d_limit_error(double p, double k_F, double delta) {
    if (!(k_F > 0)) throw InputDomainError("k_F must be positive");
    if (delta == 0.0) throw InputDomainError("delta = 0 is on the surface; use fermi2d_on_surface_error");
    const double lam = decay_rate(p);
    return 0.5 * lam * k_F * k_F / std::pow(lam * lam + delta * delta, 1.5);
}

// I(lambda) = (lambda/pi) int_0^{pi/2} dtheta / sqrt(lambda^2 + 4 k_F^2 sin^2 theta)
inline double fermi2d_surface_integral(double p, double k_F) {
    if (!(k_F > 0)) throw InputDomainError("k_F must be positive");
    const double lam = decay_rate(p);
    auto f = [&](double t) {
        const double s = std::sin(t);
        return 1.0 / std::sqrt(lam * lam + 4 * k_F * k_F * s * s);
    };
    return lam / std::numbers::pi * quad::integrate(f, 0.0, std::numbers::pi / 2, 1e-9, 0.0).value;
}

inline double fermi2d_surface_integral_bound(double p, double k_F) {
    const double lam = decay_rate(p);
    return lam / (4 * k_F) * std::asinh(2 * k_F / lam);
}

inline double fermi2d_on_surface_error(double p, double k_F) { return 0.5 - fermi2d_surface_integral(p, k_F); }

// Direct lattice counterpart on an L x L torus: noisy n(k) = sum_s e^{-lambda |s|_2} e^{i k.s} C(s) with
// minimum-image Euclidean |s|_2 and C(s) = (1/N) sum_{q occupied} e^{-i q.s}. No on-site offset.
inline double fermi2d_lattice_noisy_occupation(int L, double p, const std::vector<std::array<double, 2>>& occupied,
                                               const std::array<double, 2>& k) {
    if (L < 2) throw InputDomainError("L must be >= 2");
    const double lam = decay_rate(p);
    std::vector<int> sx(L);
    for (int x = 0; x < L; ++x) sx[x] = x < L / 2 ? x : x - L;
    const double n = double(L) * L;
    double total = 0.0;
    for (const auto& q : occupied) {
        const double px = k[0] - q[0], py = k[1] - q[1];
        // separable phase, radial weight
        std::vector<std::complex<double>> ex(L), ey(L);
        for (int x = 0; x < L; ++x) {
            ex[x] = std::polar(1.0, px * sx[x]);
            ey[x] = std::polar(1.0, py * sx[x]);
        }
        for (int y = 0; y < L; ++y)
            for (int x = 0; x < L; ++x) {
                const double d = std::hypot(double(sx[x]), double(sx[y]));
                total += std::exp(-lam * d) * (ex[x] * ey[y]).real();
            }
    }
    return total / n;
}

// ---- 1D scaling probes ----

struct ProbeRow {
    double x = 0.0;      // N for the jump probe, p for the Lipschitz probe
    double error = 0.0;  // absolute error
};

struct ProbeTable {
    std::vector<ProbeRow> rows;
    double slope = 0.0;  // least-squares log-log slope
};

inline double loglog_slope(const std::vector<ProbeRow>& rows) {
    const int n = int(rows.size());
    if (n < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : rows) {
        const double lx = std::log(r.x), ly = std::log(r.error);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// E = (1/N) sum_s g(s) sum_{m=j}^{N/2-1} e^{i s (k - q_m)}, g(s) = 1 - (1-p)^{phi0 + d(s)}, q_m = 2 pi m / N,
// for the step n(q) = 1 on q_j..q_{N/2-1}; here j = 0 and k = q_j + k_offset.
inline double jump_error(int N, double p, double k_offset, int phi0 = 1) {
    if (N < 2 || N % 2) throw InputDomainError("jump probe needs even N >= 2");
    detail::check_p(p);
    const double two_pi_n = 2 * std::numbers::pi / N;
    std::complex<double> total = 0.0;
    for (int s = -N / 2; s < N / 2; ++s) {
        const double g = 1.0 - std::pow(1.0 - p, phi0 + std::abs(s));
        std::complex<double> inner = 0.0;
        for (int m = 0; m < N / 2; ++m) inner += std::polar(1.0, s * (k_offset - two_pi_n * m));
        total += g * inner;
    }
    return std::abs(total) / N;
}

inline ProbeTable jump_scaling_probe(const std::vector<int>& N_grid, double p, double k_offset, int phi0 = 1) {
    if (N_grid.empty()) throw InputDomainError("empty N grid");
    ProbeTable t;
    for (int N : N_grid) t.rows.push_back({double(N), jump_error(N, p, k_offset, phi0)});
    t.slope = loglog_slope(t.rows);
    return t;
}

// Exact error of n_k for the translation-invariant number-conserving state with occupation n(q) on
// the periodic grid of N sites, local encoding with phi0, depolarizing p.
inline double smooth_occupation_error(const std::function<double(double)>& n_of_q, int N, double p, double k,
                                      int phi0 = 1) {
    const Lattice lat(1, N);
    CMat c = CMat::Zero(N, N);
    std::vector<cplx> cs(N, 0.0);
    for (int s = 0; s < N; ++s) {
        for (int m = 0; m < N; ++m) {
            const double q = 2 * std::numbers::pi * m / N;
            cs[s] += n_of_q(q) * std::polar(1.0, -q * s);
        }
        cs[s] /= double(N);
    }
    for (int x = 0; x < N; ++x)
        for (int y = 0; y < N; ++y) c(x, y) = cs[((x - y) % N + N) % N];
    const CorrelationMatrix st = complex_to_majorana({c, CMat()}, lat);
    const EncodingWeightModel enc(EncodingKind::local, lat, phi0);
    const LambdaMatrix lm = build_lambda_matrix(enc, PauliNoiseParams::depolarizing(p), LambdaMode::exact_depolarizing);
    const Mat damped = (lm.lambda.array() * st.gamma.array()).matrix();
    return std::abs(MomentumOccupationEvaluator(lat, st.gamma)({k}) - MomentumOccupationEvaluator(lat, damped)({k}));
}

inline ProbeTable lipschitz_scaling_probe(const std::vector<double>& p_grid,
                                          const std::function<double(double)>& n_smooth, int N = 100, double k = 0.0,
                                          int phi0 = 1) {
    if (p_grid.empty()) throw InputDomainError("empty p grid");
    ProbeTable t;
    for (double p : p_grid) t.rows.push_back({p, smooth_occupation_error(n_smooth, N, p, k, phi0)});
    t.slope = loglog_slope(t.rows);
    return t;
}

inline double smooth_cosine_occupation(double q) { return 0.5 * (1.0 + std::cos(q)); }

}  // namespace fqn
