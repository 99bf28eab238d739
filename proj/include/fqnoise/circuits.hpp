#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "encodings.hpp"
#include "errors.hpp"
#include "gaussian_state.hpp"
#include "noise.hpp"

namespace fqn {

struct GaussianLayer {
    Mat rotation;   // R, with U^dag gamma_c U = sum_b R_cb gamma_b
    Mat generator;  // A with R = exp(A); kept for the dense oracle
    int locality_radius = 0;

    double orthogonality_defect() const {
        return (rotation.transpose() * rotation - Mat::Identity(rotation.rows(), rotation.cols())).cwiseAbs().maxCoeff();
    }

    // largest |R_ab| over pairs further apart than the radius
    double locality_defect(const Lattice& lat) const {
        double worst = 0.0;
        for (int a = 0; a < rotation.rows(); ++a)
            for (int b = 0; b < rotation.cols(); ++b)
                if (site_distance(majorana_site(a), majorana_site(b), lat) > locality_radius)
                    worst = std::max(worst, std::abs(rotation(a, b)));
        return worst;
    }

    void validate(const Lattice& lat) const {
        if (rotation.rows() != lat.num_majoranas() || rotation.cols() != lat.num_majoranas())
            throw DimensionMismatch("layer rotation must be 2N x 2N");
        if (orthogonality_defect() > 1e-10) throw NumericalInvariantError("layer rotation is not orthogonal");
        if (locality_defect(lat) > 0.0) throw NumericalInvariantError("layer rotation exceeds its locality radius");
    }
};

struct GaussianCircuit {
    Lattice lat;
    std::vector<GaussianLayer> layers;
    std::uint64_t seed = 0;
    int radius = 1;

    int depth() const { return int(layers.size()); }
};

namespace detail {

// Platform-independent normal deviates (std::normal_distribution is implementation-defined).
class PortableNormal {
public:
    explicit PortableNormal(std::mt19937_64& rng) : rng_(rng) {}
    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = double(rng_() >> 11) * 0x1.0p-53;
        const double u2 = double(rng_() >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

private:
    std::mt19937_64& rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline int signed_position(int s, int L) { return s < (L + 1) / 2 ? s : s - L; }

inline std::mt19937_64 gate_rng(std::uint64_t seed, int layer, int axis, int line, int start) {
    std::seed_seq seq{std::uint32_t(seed & 0xffffffffu), std::uint32_t(seed >> 32), std::uint32_t(layer),
                      std::uint32_t(axis), std::uint32_t(line), std::uint32_t(start)};
    return std::mt19937_64(seq);
}

// Sites of each block in layer k; blocks are runs of `width` consecutive sites along one axis.
struct Block {
    std::vector<int> sites;
    int axis, line, start;
};

inline std::vector<Block> brickwork_blocks(const Lattice& lat, int layer, int radius) {
    const int L = lat.L;
    const int width = std::min(radius + 1, L);
    const int axis = lat.D == 1 ? 0 : layer % lat.D;
    const int phase = lat.D == 1 ? layer % 2 : (layer / lat.D) % 2;
    const int offset = phase * ((width + 1) / 2);
    const int n_blocks = L / width;
    std::vector<Block> out;
    const int n_lines = lat.num_sites() / L;
    for (int line = 0; line < n_lines; ++line) {
        // coordinates of the line: all components except `axis`
        Coord base(lat.D, 0);
        int t = line;
        for (int c = 0; c < lat.D; ++c) {
            if (c == axis) continue;
            base[c] = t % L;
            t /= L;
        }
        int line_key = 0;
        for (int c = lat.D - 1; c >= 0; --c)
            if (c != axis) line_key = line_key * (2 * L + 1) + signed_position(base[c], L) + L;
        for (int i = 0; i < n_blocks; ++i) {
            const int start = (offset + width * i) % L;
            Block b{{}, axis, line_key, signed_position(start, L)};
            for (int j = 0; j < width; ++j) {
                Coord r = base;
                r[axis] = (start + j) % L;
                b.sites.push_back(lat.site_index(r));
            }
            out.push_back(std::move(b));
        }
    }
    return out;
}

}  // namespace detail

inline GaussianCircuit brickwork_random_circuit(const Lattice& lat, int depth, int radius, std::uint64_t seed) {
    if (radius < 1) throw InputDomainError("circuit radius must be >= 1");
    if (depth < 0) throw InputDomainError("circuit depth must be >= 0");
    GaussianCircuit circ{lat, {}, seed, radius};
    const int m = lat.num_majoranas();
    for (int k = 0; k < depth; ++k) {
        GaussianLayer layer{Mat::Identity(m, m), Mat::Zero(m, m), radius};
        for (const auto& blk : detail::brickwork_blocks(lat, k, radius)) {
            auto rng = detail::gate_rng(seed, k, blk.axis, blk.line, blk.start);
            detail::PortableNormal nd(rng);
            const int bm = 2 * int(blk.sites.size());
            Mat a = Mat::Zero(bm, bm);
            for (int i = 0; i < bm; ++i)
                for (int j = i + 1; j < bm; ++j) {
                    a(i, j) = nd();
                    a(j, i) = -a(i, j);
                }
            const Mat r = a.exp();
            std::vector<int> idx;
            for (int s : blk.sites) {
                idx.push_back(2 * s);
                idx.push_back(2 * s + 1);
            }
            for (int i = 0; i < bm; ++i)
                for (int j = 0; j < bm; ++j) {
                    layer.rotation(idx[i], idx[j]) = r(i, j);
                    layer.generator(idx[i], idx[j]) = a(i, j);
                }
        }
        layer.validate(lat);
        circ.layers.push_back(std::move(layer));
    }
    return circ;
}

inline QuadraticObservable evolve_observable_ideal(const QuadraticObservable& obs, const GaussianLayer& layer) {
    if (obs.coeff.rows() != layer.rotation.rows()) throw DimensionMismatch("observable and layer dimensions differ");
    Mat c = layer.rotation.transpose() * obs.coeff * layer.rotation;
    c = (c - c.transpose()) * 0.5;
    return {obs.offset, c};
}

inline QuadraticObservable apply_noise_to_observable(const QuadraticObservable& obs, const LambdaMatrix& lm) {
    if (obs.coeff.rows() != lm.lambda.rows() || obs.coeff.cols() != lm.lambda.cols())
        throw DimensionMismatch("observable and lambda dimensions differ");
    return {obs.offset, (obs.coeff.array() * lm.lambda.array()).matrix()};
}

// Heisenberg picture of rho(d) = (N o U_d) ... (N o U_1) rho(0): going backwards, each layer first
// applies the noise adjoint and then U_k^dag . U_k.
inline QuadraticObservable heisenberg_evolve(const QuadraticObservable& obs, const GaussianCircuit& circ,
                                             const LambdaMatrix* lm) {
    QuadraticObservable o = obs;
    for (int k = circ.depth() - 1; k >= 0; --k) {
        if (lm) o = apply_noise_to_observable(o, *lm);
        o = evolve_observable_ideal(o, circ.layers[k]);
    }
    return o;
}

inline double ideal_circuit_expectation(const CorrelationMatrix& state0, const GaussianCircuit& circ,
                                        const QuadraticObservable& obs) {
    return quadratic_expectation(heisenberg_evolve(obs, circ, nullptr), state0);
}

inline double noisy_circuit_expectation(const CorrelationMatrix& state0, const GaussianCircuit& circ,
                                        const QuadraticObservable& obs, const EncodingWeightModel& enc,
                                        const PauliNoiseParams& noise, LambdaMode mode) {
    if (state0.gamma.rows() != enc.num_majoranas() || obs.coeff.rows() != enc.num_majoranas())
        throw DimensionMismatch("state, observable and encoding sizes differ");
    const LambdaMatrix lm = build_lambda_matrix(enc, noise, mode);
    return quadratic_expectation(heisenberg_evolve(obs, circ, &lm), state0);
}

struct ErrorPoint {
    double p;
    double error;
};

inline std::vector<ErrorPoint> circuit_error_curve(const CorrelationMatrix& state0, const GaussianCircuit& circ,
                                                   const QuadraticObservable& obs, const EncodingWeightModel& enc,
                                                   const std::vector<double>& p_grid,
                                                   LambdaMode mode = LambdaMode::exact_depolarizing) {
    const double ideal = ideal_circuit_expectation(state0, circ, obs);
    std::vector<ErrorPoint> out;
    for (double p : p_grid) {
        const double noisy = noisy_circuit_expectation(state0, circ, obs, enc, PauliNoiseParams::depolarizing(p), mode);
        out.push_back({p, std::abs(ideal - noisy)});
    }
    return out;
}

// Schrodinger picture: Gamma -> lambda o (R Gamma R^T) per layer.
inline std::vector<CorrelationMatrix> evolve_state_layers(const CorrelationMatrix& state0, const GaussianCircuit& circ,
                                                          const LambdaMatrix* lm) {
    std::vector<CorrelationMatrix> out{state0};
    CorrelationMatrix cur = state0;
    for (const auto& layer : circ.layers) {
        Mat g = layer.rotation * cur.gamma * layer.rotation.transpose();
        if (lm) g = (g.array() * lm->lambda.array()).matrix();
        cur.gamma = (g - g.transpose()) * 0.5;
        out.push_back(cur);
    }
    return out;
}

struct LightconeLayerReport {
    int layer = 0;          // number of layers applied
    int allowed_range = 0;  // 2 * radius * layer
    int support_ideal = 0;  // largest site distance with a nonzero entry
    int support_noisy = 0;
    double max_outside_ideal = 0.0;  // largest |Gamma| beyond allowed_range
    double max_outside_noisy = 0.0;
    bool noisy_within_ideal = true;  // noisy support subset of ideal support
};

struct LightconeReport {
    std::vector<LightconeLayerReport> layers;
    double tol = 1e-10;
    int largest_violating_distance = -1;  // -1: no violation
    bool ok() const {
        if (largest_violating_distance >= 0) return false;
        for (const auto& l : layers)
            if (!l.noisy_within_ideal) return false;
        return true;
    }
};

inline bool is_product_state(const CorrelationMatrix& st, double tol = 1e-12) {
    const int m = int(st.gamma.rows());
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (majorana_site(a) != majorana_site(b) && std::abs(st.gamma(a, b)) > tol) return false;
    return true;
}

inline LightconeReport lightcone_correlation_check(const CorrelationMatrix& state0, const GaussianCircuit& circ,
                                                   const EncodingWeightModel& enc, const PauliNoiseParams& noise,
                                                   LambdaMode mode = LambdaMode::exact_depolarizing, double tol = 1e-10) {
    if (!is_product_state(state0)) throw PreconditionError("light-cone check needs a product initial state");
    const LambdaMatrix lm = build_lambda_matrix(enc, noise, mode);
    const auto ideal = evolve_state_layers(state0, circ, nullptr);
    const auto noisy = evolve_state_layers(state0, circ, &lm);
    const Lattice& lat = state0.lat;
    const int m = lat.num_majoranas();
    LightconeReport rep;
    rep.tol = tol;
    for (int k = 0; k <= circ.depth(); ++k) {
        LightconeLayerReport lr;
        lr.layer = k;
        lr.allowed_range = 2 * circ.radius * k;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                const int d = site_distance(majorana_site(a), majorana_site(b), lat);
                const double gi = std::abs(ideal[k].gamma(a, b)), gn = std::abs(noisy[k].gamma(a, b));
                if (gi > tol) lr.support_ideal = std::max(lr.support_ideal, d);
                if (gn > tol) lr.support_noisy = std::max(lr.support_noisy, d);
                if (gn > tol && gi <= tol) lr.noisy_within_ideal = false;
                if (d > lr.allowed_range) {
                    lr.max_outside_ideal = std::max(lr.max_outside_ideal, gi);
                    lr.max_outside_noisy = std::max(lr.max_outside_noisy, gn);
                    if (gi > tol || gn > tol) rep.largest_violating_distance = std::max(rep.largest_violating_distance, d);
                }
            }
        rep.layers.push_back(lr);
    }
    return rep;
}

}  // namespace fqn
