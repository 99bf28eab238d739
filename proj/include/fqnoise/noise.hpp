#pragma once

#include <cmath>
#include <string>

#include "encodings.hpp"
#include "errors.hpp"
#include "gaussian_state.hpp"

namespace fqn {

struct PauliNoiseParams {
    double p = 0.0;
    double alpha_x = 1.0 / 3, alpha_y = 1.0 / 3, alpha_z = 1.0 / 3;

    static PauliNoiseParams depolarizing(double p) { return {p, 1.0 / 3, 1.0 / 3, 1.0 / 3}; }

    void validate() const {
        if (!(p >= 0.0 && p <= 2.0 / 3 + 1e-15)) throw InputDomainError("noise p must lie in [0, 2/3]");
        if (alpha_x < 0 || alpha_y < 0 || alpha_z < 0) throw InputDomainError("alpha weights must be >= 0");
        if (std::abs(alpha_x + alpha_y + alpha_z - 1.0) > 1e-12) throw InputDomainError("alpha weights must sum to 1");
    }

    bool is_depolarizing() const {
        return std::abs(alpha_x - 1.0 / 3) < 1e-12 && std::abs(alpha_y - 1.0 / 3) < 1e-12 &&
               std::abs(alpha_z - 1.0 / 3) < 1e-12;
    }

    // eigenvalue of the single-qubit channel on sigma
    double eta(char sigma) const {
        const double a = sigma == 'X' ? alpha_x : sigma == 'Y' ? alpha_y : alpha_z;
        return 1.0 - 1.5 * p * (1.0 - a);
    }
};

enum class LambdaMode { exact_depolarizing, exact_jw1d_general, worst_case };

inline std::string to_string(LambdaMode m) {
    switch (m) {
        case LambdaMode::exact_depolarizing: return "exact_depolarizing";
        case LambdaMode::exact_jw1d_general: return "exact_jw1d_general";
        case LambdaMode::worst_case: return "worst_case";
    }
    return "?";
}

inline double lambda_for_bilinear(const EncodingWeightModel& enc, const PauliNoiseParams& noise, int a, int b,
                                  LambdaMode mode) {
    noise.validate();
    switch (mode) {
        case LambdaMode::exact_depolarizing:
            if (!noise.is_depolarizing())
                throw UnsupportedConfiguration("exact_depolarizing mode needs alpha = (1/3,1/3,1/3)");
            return std::pow(1.0 - noise.p, enc.weight(a, b));
        case LambdaMode::worst_case: return std::pow(1.0 - 1.5 * noise.p, enc.weight(a, b));
        case LambdaMode::exact_jw1d_general: {
            if (enc.kind != EncodingKind::jw1d)
                throw UnsupportedConfiguration("exact_jw1d_general mode needs the jw1d encoding");
            const StringComposition c = enc.composition(a, b);
            return std::pow(noise.eta('X'), c.x) * std::pow(noise.eta('Y'), c.y) * std::pow(noise.eta('Z'), c.z);
        }
    }
    return 1.0;
}

struct LambdaMatrix {
    Mat lambda;
    LambdaMode mode = LambdaMode::exact_depolarizing;
};

// Diagonal entries are set to 1 (they never multiply a nonzero coefficient).
inline LambdaMatrix build_lambda_matrix(const EncodingWeightModel& enc, const PauliNoiseParams& noise, LambdaMode mode) {
    noise.validate();
    if (mode == LambdaMode::exact_depolarizing && !noise.is_depolarizing())
        throw UnsupportedConfiguration("exact_depolarizing mode needs alpha = (1/3,1/3,1/3)");
    if (mode == LambdaMode::exact_jw1d_general && enc.kind != EncodingKind::jw1d)
        throw UnsupportedConfiguration("exact_jw1d_general mode needs the jw1d encoding");
    const int m = enc.num_majoranas();
    LambdaMatrix lm{Mat::Ones(m, m), mode};
    if (mode == LambdaMode::exact_jw1d_general) {
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b) lm.lambda(a, b) = lm.lambda(b, a) = lambda_for_bilinear(enc, noise, a, b, mode);
        return lm;
    }
    // weight-only modes: cache powers
    const double base = mode == LambdaMode::worst_case ? 1.0 - 1.5 * noise.p : 1.0 - noise.p;
    std::vector<double> powers(1, 1.0);
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
            const int w = enc.weight(a, b);
            while (int(powers.size()) <= w) powers.push_back(std::pow(base, double(powers.size())));
            lm.lambda(a, b) = lm.lambda(b, a) = powers[w];
        }
    return lm;
}

inline void check_dims(const QuadraticObservable& obs, const CorrelationMatrix& st, const LambdaMatrix& lm) {
    if (obs.coeff.rows() != st.gamma.rows() || obs.coeff.cols() != st.gamma.cols() ||
        lm.lambda.rows() != st.gamma.rows() || lm.lambda.cols() != st.gamma.cols())
        throw DimensionMismatch("observable, state and lambda matrix dimensions differ");
}

inline double noisy_expectation(const QuadraticObservable& obs, const CorrelationMatrix& st, const LambdaMatrix& lm) {
    check_dims(obs, st, lm);
    return obs.offset + (lm.lambda.array() * obs.coeff.array() * st.gamma.array()).sum();
}

// noiseless - noisy
inline double signed_measurement_error(const QuadraticObservable& obs, const CorrelationMatrix& st, const LambdaMatrix& lm) {
    check_dims(obs, st, lm);
    return ((1.0 - lm.lambda.array()) * obs.coeff.array() * st.gamma.array()).sum();
}

inline double measurement_error(const QuadraticObservable& obs, const CorrelationMatrix& st, const LambdaMatrix& lm) {
    return std::abs(signed_measurement_error(obs, st, lm));
}

inline constexpr double default_sensitivity_p = 1e-2;

inline double sensitivity(const QuadraticObservable& obs, const CorrelationMatrix& st, const EncodingWeightModel& enc,
                          double p = default_sensitivity_p, LambdaMode mode = LambdaMode::exact_depolarizing) {
    if (!(p > 0)) throw InputDomainError("sensitivity needs p > 0");
    const LambdaMatrix lm = build_lambda_matrix(enc, PauliNoiseParams::depolarizing(p), mode);
    return measurement_error(obs, st, lm) / p;
}

}  // namespace fqn
