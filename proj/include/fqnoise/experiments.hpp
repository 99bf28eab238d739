#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "circuits.hpp"
#include "encodings.hpp"
#include "gaussian_state.hpp"
#include "lattice.hpp"
#include "noise.hpp"

// Experiment drivers shared by the CLI and the acceptance suite.
namespace fqn::exp {

inline LambdaMode lambda_mode_from_string(const std::string& s) {
    if (s == "exact" || s == "exact_depolarizing") return LambdaMode::exact_depolarizing;
    if (s == "worst-case" || s == "worst_case") return LambdaMode::worst_case;
    if (s == "exact_jw1d_general") return LambdaMode::exact_jw1d_general;
    throw InputDomainError("unknown mode '" + s + "'");
}

// ---------------- 1D Fermi sea ----------------

struct Fermi1dConfig {
    std::vector<int> N_grid{20, 40, 60, 80, 100, 120, 140, 160, 180, 200};
    double p = 1e-2;
    int phi0 = 1;
    EncodingKind encoding = EncodingKind::local;
    LambdaMode mode = LambdaMode::exact_depolarizing;
    int sweep_N = 100;
};

struct Fermi1dRow {
    int N;
    double k_F, q0;
    double n_ideal_kF, n_ideal_q0;
    double n_noisy_kF, n_noisy_q0;
    double error_kF, error_q0;
};

struct SweepRow {
    double k;
    bool occupied;
    double n_ideal, n_noisy, error, sensitivity;
};

inline EncodingWeightModel make_encoding(EncodingKind kind, const Lattice& lat, int phi0) {
    return EncodingWeightModel(kind, lat, phi0);
}

inline PauliNoiseParams depolarizing_checked(double p) {
    PauliNoiseParams n = PauliNoiseParams::depolarizing(p);
    n.validate();
    return n;
}

// Largest occupied positive momentum and the grid momentum nearest 2 pi / N (ties to the larger one).
inline std::size_t fermi1d_kF_index(const FermiSea& fs) {
    std::size_t best = fs.grid.size();
    for (auto i : fs.occupied)
        if (fs.grid.twice_m[i][0] > 0 && (best == fs.grid.size() || fs.grid.twice_m[i][0] > fs.grid.twice_m[best][0]))
            best = i;
    if (best == fs.grid.size()) throw InputDomainError("no occupied positive momentum");
    return best;
}

inline std::size_t fermi1d_q0_index(const MomentumGrid& g) {
    // target 2 pi / N is twice_m = 2
    std::size_t best = 0;
    for (std::size_t i = 1; i < g.size(); ++i) {
        const int di = std::abs(g.twice_m[i][0] - 2), db = std::abs(g.twice_m[best][0] - 2);
        if (di < db || (di == db && g.twice_m[i][0] > g.twice_m[best][0])) best = i;
    }
    return best;
}

inline std::vector<Fermi1dRow> run_fermi1d(const Fermi1dConfig& cfg) {
    if (cfg.N_grid.empty()) throw InputDomainError("N grid is empty");
    const PauliNoiseParams noise = depolarizing_checked(cfg.p);
    std::vector<Fermi1dRow> out;
    for (int N : cfg.N_grid) {
        if (N < 4 || N % 4 != 0) throw InputDomainError("fermi1d needs N a multiple of 4 (even L, half filling)");
        const Lattice lat(1, N);
        const FermiSea fs = fermi_sea_1d_detail(lat, N / 2);
        const EncodingWeightModel enc = make_encoding(cfg.encoding, lat, cfg.phi0);
        const LambdaMatrix lm = build_lambda_matrix(enc, noise, cfg.mode);
        const Mat damped = (lm.lambda.array() * fs.state.gamma.array()).matrix();
        const MomentumOccupationEvaluator ideal(lat, fs.state.gamma), noisy(lat, damped);
        const auto kf = fs.grid.momentum(fermi1d_kF_index(fs));
        const auto q0 = fs.grid.momentum(fermi1d_q0_index(fs.grid));
        Fermi1dRow r{N, kf[0], q0[0], ideal(kf), ideal(q0), noisy(kf), noisy(q0), 0, 0};
        r.error_kF = std::abs(r.n_ideal_kF - r.n_noisy_kF);
        r.error_q0 = std::abs(r.n_ideal_q0 - r.n_noisy_q0);
        out.push_back(r);
    }
    return out;
}

inline std::vector<SweepRow> run_fermi1d_sweep(const Fermi1dConfig& cfg) {
    const int N = cfg.sweep_N;
    if (N < 4 || N % 2) throw InputDomainError("sweep needs even N >= 4");
    if (!(cfg.p > 0)) throw InputDomainError("sensitivity sweep needs p > 0");
    const Lattice lat(1, N);
    const FermiSea fs = fermi_sea_1d_detail(lat, N / 2);
    const EncodingWeightModel enc = make_encoding(cfg.encoding, lat, cfg.phi0);
    const LambdaMatrix lm = build_lambda_matrix(enc, depolarizing_checked(cfg.p), cfg.mode);
    const Mat damped = (lm.lambda.array() * fs.state.gamma.array()).matrix();
    const MomentumOccupationEvaluator ideal(lat, fs.state.gamma), noisy(lat, damped);
    std::vector<SweepRow> out;
    for (std::size_t i = 0; i < fs.grid.size(); ++i) {
        const auto k = fs.grid.momentum(i);
        SweepRow r{k[0], bool(fs.is_occupied[i]), ideal(k), noisy(k), 0, 0};
        r.error = std::abs(r.n_ideal - r.n_noisy);
        r.sensitivity = r.error / cfg.p;
        out.push_back(r);
    }
    return out;
}

// ---------------- 2D tight binding ----------------

struct Fermi2dConfig {
    int L = 30;
    std::vector<int> fillings{300, 450, 700};
    double p = 1e-2;
    int phi0 = 1;
    EncodingKind encoding = EncodingKind::local;
    LambdaMode mode = LambdaMode::exact_depolarizing;
};

struct Fermi2dRow {
    int n_occ;
    double kx, ky;
    bool occupied;
    bool near_contour;  // some axis neighbour on the grid has the opposite occupation
    double n_ideal, n_noisy, sensitivity;
};

// Axis-neighbour test on the periodic momentum grid (component 0 fastest).
inline std::vector<bool> contour_mask(const FermiSea& fs, int L) {
    const std::size_t n = fs.grid.size();
    std::vector<bool> out(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const int ix = int(i % L), iy = int(i / L);
        const int nb[4][2] = {{(ix + 1) % L, iy}, {(ix + L - 1) % L, iy}, {ix, (iy + 1) % L}, {ix, (iy + L - 1) % L}};
        for (const auto& q : nb)
            if (fs.is_occupied[std::size_t(q[1]) * L + q[0]] != fs.is_occupied[i]) out[i] = true;
    }
    return out;
}

inline std::vector<Fermi2dRow> run_fermi2d_filling(const Fermi2dConfig& cfg, int n_occ) {
    if (!(cfg.p > 0)) throw InputDomainError("sensitivity needs p > 0");
    const Lattice lat(2, cfg.L);
    const FermiSea fs = tight_binding_ground_state_2d_detail(lat, n_occ);
    const EncodingWeightModel enc = make_encoding(cfg.encoding, lat, cfg.phi0);
    const LambdaMatrix lm = build_lambda_matrix(enc, depolarizing_checked(cfg.p), cfg.mode);
    const Mat damped = (lm.lambda.array() * fs.state.gamma.array()).matrix();
    const MomentumOccupationEvaluator ideal(lat, fs.state.gamma), noisy(lat, damped);
    const auto mask = contour_mask(fs, cfg.L);
    std::vector<Fermi2dRow> out;
    out.reserve(fs.grid.size());
    for (std::size_t i = 0; i < fs.grid.size(); ++i) {
        const auto k = fs.grid.momentum(i);
        Fermi2dRow r{n_occ, k[0], k[1], bool(fs.is_occupied[i]), bool(mask[i]), ideal(k), noisy(k), 0};
        r.sensitivity = std::abs(r.n_ideal - r.n_noisy) / cfg.p;
        out.push_back(r);
    }
    return out;
}

inline std::vector<Fermi2dRow> run_fermi2d(const Fermi2dConfig& cfg) {
    if (cfg.fillings.empty()) throw InputDomainError("filling list is empty");
    std::vector<Fermi2dRow> out;
    for (int n : cfg.fillings) {
        auto rows = run_fermi2d_filling(cfg, n);
        out.insert(out.end(), rows.begin(), rows.end());
    }
    return out;
}

// Fraction of the top-decile sensitivity momenta that sit next to the contour.
inline double top_decile_contour_fraction(const std::vector<Fermi2dRow>& rows) {
    std::vector<std::size_t> idx(rows.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return rows[a].sensitivity > rows[b].sensitivity; });
    const std::size_t top = std::max<std::size_t>(1, rows.size() / 10);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < top; ++i) hits += rows[idx[i]].near_contour;
    return double(hits) / double(top);
}

// ---------------- encoding comparison ----------------

struct EncodingCompareConfig {
    double p = 1e-2;
    int phi0 = 1;
    std::vector<int> L_grid{3, 5, 7, 9, 11, 13, 15};  // odd: the middle column carries weight L+1
    std::vector<int> bk_N_grid{2, 4, 8, 16, 32, 64, 128, 256};
};

struct EncodingCompareRow {
    std::string encoding;
    int L;  // linear size (0 for BK, which uses a chain of N modes)
    int N;
    int weight;
    double error;
};

// Bonding orbital on two sites: <c_a^dag c_b + h.c.> = 1.
inline CorrelationMatrix bonding_pair_state(const Lattice& lat, int a, int b) {
    const int n = lat.num_sites();
    CVec phi = CVec::Zero(n);
    phi(a) = phi(b) = 1.0 / std::sqrt(2.0);
    ComplexCorrelations cc;
    cc.C = phi.conjugate() * phi.transpose();
    return complex_to_majorana(cc, lat);
}

inline QuadraticObservable hop_observable(const Lattice& lat, int a, int b) {
    CMat h = CMat::Zero(lat.num_sites(), lat.num_sites());
    h(a, b) = h(b, a) = 1.0;
    return hopping_observable(h);
}

inline QuadraticObservable number_observable(const Lattice& lat, int a) {
    CMat h = CMat::Zero(lat.num_sites(), lat.num_sites());
    h(a, a) = 1.0;
    return hopping_observable(h);
}

inline CorrelationMatrix vacuum_state(const Lattice& lat) {
    ComplexCorrelations cc;
    cc.C = CMat::Zero(lat.num_sites(), lat.num_sites());
    return complex_to_majorana(cc, lat);
}

inline double exact_error(const QuadraticObservable& obs, const CorrelationMatrix& st, const EncodingWeightModel& enc,
                          double p) {
    const LambdaMatrix lm = build_lambda_matrix(enc, depolarizing_checked(p), LambdaMode::exact_depolarizing);
    return measurement_error(obs, st, lm);
}

inline std::vector<EncodingCompareRow> run_encoding_compare(const EncodingCompareConfig& cfg) {
    std::vector<EncodingCompareRow> out;
    for (int L : cfg.L_grid) {
        if (L < 2) throw InputDomainError("L must be >= 2");
        const Lattice lat(2, L);
        const int x = L / 2;  // middle column for odd L
        const int a = lat.site_index({x, 0}), b = lat.site_index({x, 1});
        const CorrelationMatrix st = bonding_pair_state(lat, a, b);
        const QuadraticObservable obs = hop_observable(lat, a, b);
        for (EncodingKind kind : {EncodingKind::local, EncodingKind::jw2d_snake}) {
            const EncodingWeightModel enc(kind, lat, cfg.phi0);
            out.push_back({to_string(kind), L, lat.num_sites(), enc.weight(2 * a, 2 * b + 1),
                           exact_error(obs, st, enc, cfg.p)});
        }
    }
    for (int N : cfg.bk_N_grid) {
        const Lattice lat(1, N);
        const EncodingWeightModel enc(EncodingKind::bravyi_kitaev, lat);
        const int i = N - 1;
        out.push_back({to_string(EncodingKind::bravyi_kitaev), 0, N, enc.weight(2 * i, 2 * i + 1),
                       exact_error(number_observable(lat, i), vacuum_state(lat), enc, cfg.p)});
    }
    return out;
}

// ---------------- power-law states and circuits ----------------

// Translation-invariant number-conserving state: C(0) = 1/2, C(s) = amplitude / d(s)^mu.
// |Gamma_{r,r'}| <= 2 amplitude / d^mu for r != r'.
inline CorrelationMatrix power_law_state(const Lattice& lat, double mu, double amplitude) {
    const int n = lat.num_sites();
    ComplexCorrelations cc;
    cc.C = CMat::Zero(n, n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const int d = site_distance(x, y, lat);
            cc.C(x, y) = d == 0 ? 0.5 : amplitude / std::pow(double(d), mu);
        }
    return complex_to_majorana(cc, lat);  // throws if the spectrum leaves [0, 1]
}

// Premise check: smallest K with |Gamma_ab| <= K / (d - d0)^mu for d > d0 (and <= 1 for d <= d0).
inline double decay_constant(const CorrelationMatrix& st, double mu, int d0 = 0) {
    const int m = int(st.gamma.rows());
    double k = 0.0;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            const int d = site_distance(majorana_site(a), majorana_site(b), st.lat);
            if (d > d0) k = std::max(k, std::abs(st.gamma(a, b)) * std::pow(double(d - d0), mu));
        }
    return k;
}

// Decay constant of the states that enter the layer-by-layer error sum: U_k applied to the state
// after k-1 noisy layers, with d0 = 2 radius k.
inline double circuit_decay_constant(const CorrelationMatrix& state0, const GaussianCircuit& circ,
                                     const LambdaMatrix& lm, double mu) {
    double k_eff = 0.0;
    CorrelationMatrix cur = state0;
    for (int k = 0; k < circ.depth(); ++k) {
        const Mat& r = circ.layers[k].rotation;
        Mat g = r * cur.gamma * r.transpose();
        g = (g - g.transpose()) * 0.5;
        CorrelationMatrix pre{cur.lat, g};
        k_eff = std::max(k_eff, decay_constant(pre, mu, 2 * circ.radius * (k + 1)));
        cur.gamma = (g.array() * lm.lambda.array()).matrix();
    }
    return k_eff;
}

// i gamma_{(0,1)} gamma_{(e,2)} with e the neighbour of the origin along axis 0; trace norm 1.
inline QuadraticObservable neighbour_bilinear(const Lattice& lat) {
    const int m = lat.num_majoranas();
    Coord e(lat.D, 0);
    e[0] = 1 % lat.L;
    const int a = majorana_index(0, 1), b = majorana_index(lat.site_index(e), 2);
    QuadraticObservable o{0.0, Mat::Zero(m, m)};
    o.coeff(a, b) = 0.5;
    o.coeff(b, a) = -0.5;
    return o;
}

inline double default_amplitude(int D) { return D == 1 ? 0.2 : 0.1; }

struct CircuitConfig {
    int D = 1;
    std::vector<int> L_grid{64, 256};
    std::vector<int> depths{1, 2, 3};
    std::vector<double> p_grid{1e-3, 1e-2};
    int radius = 1;
    std::uint64_t seed = 1;
    double mu = 3.0;  // D + 2 by default
    double amplitude = 0.2;
    int phi0 = 2;
    LambdaMode mode = LambdaMode::exact_depolarizing;
};

struct CircuitRow {
    int D, L, N, depth;
    double p;
    double ideal, noisy, error;
    double K_eff;         // measured decay constant of the evolved states
    double prop3_sum;     // layer-by-layer S-lemma bound
    double prop3_bound;   // C3 f(p) d^{D+2}
};

inline std::vector<CircuitRow> run_circuit(const CircuitConfig& cfg) {
    if (cfg.L_grid.empty() || cfg.depths.empty() || cfg.p_grid.empty()) throw InputDomainError("empty grid");
    std::vector<CircuitRow> out;
    for (int L : cfg.L_grid) {
        const Lattice lat(cfg.D, L);
        const CorrelationMatrix st = power_law_state(lat, cfg.mu, cfg.amplitude);
        const QuadraticObservable obs = neighbour_bilinear(lat);
        const EncodingWeightModel enc(EncodingKind::local, lat, cfg.phi0);
        for (int depth : cfg.depths) {
            const GaussianCircuit circ = brickwork_random_circuit(lat, depth, cfg.radius, cfg.seed);
            const double ideal = ideal_circuit_expectation(st, circ, obs);
            for (double p : cfg.p_grid) {
                const PauliNoiseParams noise = depolarizing_checked(p);
                const LambdaMatrix lm = build_lambda_matrix(enc, noise, cfg.mode);
                const double noisy = quadratic_expectation(heisenberg_evolve(obs, circ, &lm), st);
                CircuitRow r{cfg.D, L, lat.num_sites(), depth, p, ideal, noisy, std::abs(ideal - noisy), 0, 0, 0};
                r.K_eff = std::max(circuit_decay_constant(st, circ, lm, cfg.mu), 1e-300);
                const DecayParams dp{r.K_eff, cfg.mu, cfg.D, cfg.phi0};
                if (dp.stable() && p <= 2.0 / 3) {
                    r.prop3_sum = prop3_layer_sum(dp, p, depth, cfg.radius);
                    r.prop3_bound = prop3_bound(dp, p, depth, cfg.radius).value;
                }
                out.push_back(r);
            }
        }
    }
    return out;
}

// ---------------- bound tables ----------------

struct BoundsConfig {
    std::vector<int> D_values{1, 2};
    std::vector<double> mu_offsets{0.3, 0.7, 1.0, 2.0};  // mu = D + offset
    std::vector<double> p_grid{1e-4, 1e-3, 1e-2, 1e-1};
    std::vector<int> depths{1, 2, 4};
    double K = 1.0;
    int phi0 = 2;
    int radius = 1;
    double k_F = std::numbers::pi / 4;
    std::vector<double> deltas{0.1, 0.5, 1.0};
};

struct BoundsRow {
    int D;
    double mu, p;
    std::string regime;
    double prop1;
    std::vector<double> prop3, prop4;  // per depth
};

struct FermiLimitRow {
    double p, k_F, delta, off_surface, on_surface;
};

inline std::vector<BoundsRow> run_bounds(const BoundsConfig& cfg) {
    std::vector<BoundsRow> out;
    for (int D : cfg.D_values)
        for (double off : cfg.mu_offsets)
            for (double p : cfg.p_grid) {
                const DecayParams dp{cfg.K, D + off, D, cfg.phi0};
                const BoundReport b = prop1_bound(dp, p);
                BoundsRow r{D, dp.mu, p, to_string(b.regime), b.value, {}, {}};
                for (int d : cfg.depths) {
                    r.prop3.push_back(prop3_bound(dp, p, d, cfg.radius).value);
                    r.prop4.push_back(prop4_bound(dp, p, d, cfg.radius).value);
                }
                out.push_back(r);
            }
    return out;
}

inline std::vector<FermiLimitRow> run_fermi_limit(const BoundsConfig& cfg) {
    std::vector<FermiLimitRow> out;
    for (double p : cfg.p_grid) {
        if (!(p > 0 && p < 1)) continue;
        const double on = fermi2d_on_surface_error(p, cfg.k_F);
        for (double d : cfg.deltas) out.push_back({p, cfg.k_F, d, fermi2d_limit_error(p, cfg.k_F, d), on});
    }
    return out;
}

}  // namespace fqn::exp
