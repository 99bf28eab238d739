#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fqnoise/bounds.hpp"

using namespace fqn;
constexpr double pi = std::numbers::pi;

TEST(Constants, CDim) {
    EXPECT_DOUBLE_EQ(c_dim(1), 2);
    EXPECT_DOUBLE_EQ(c_dim(2), 12);
    EXPECT_DOUBLE_EQ(c_dim(3), 64);
    EXPECT_THROW(c_dim(0), InputDomainError);
}

TEST(Constants, L1BallCountByEnumeration) {
    for (int D : {1, 2, 3})
        for (int d0 = 0; d0 <= 6; ++d0) {
            int count = 0;
            const int R = d0;
            if (D == 1)
                for (int x = -R; x <= R; ++x) count += std::abs(x) <= d0;
            else if (D == 2)
                for (int x = -R; x <= R; ++x)
                    for (int y = -R; y <= R; ++y) count += std::abs(x) + std::abs(y) <= d0;
            else
                for (int x = -R; x <= R; ++x)
                    for (int y = -R; y <= R; ++y)
                        for (int z = -R; z <= R; ++z) count += std::abs(x) + std::abs(y) + std::abs(z) <= d0;
            EXPECT_DOUBLE_EQ(l1_ball_count(D, d0), count);
        }
}

TEST(MeasurementBound, EndpointValues) {
    for (int D : {1, 2})
        for (double mu_off : {0.4, 1.0, 2.5}) {
            const DecayParams dp{0.7, D + mu_off, D, 2};
            EXPECT_NEAR(prop1_bound(dp, 0.0).value, 0.0, 1e-12);
            const double s = dp.mu - D + 1;
            EXPECT_NEAR(prop1_bound(dp, 2.0 / 3).value, 2 * dp.phi0 + 2 * dp.K * c_dim(D) * riemann_zeta(s), 1e-10);
        }
}

TEST(MeasurementBound, TwiceSumBound) {
    for (int D : {1, 2})
        for (double p : {1e-4, 0.01, 0.3}) {
            const DecayParams dp{1.3, D + 1.5, D, 1};
            EXPECT_NEAR(prop1_bound(dp, p).value, 2 * corollary1_bound(dp, 1 - 1.5 * p), 1e-12);
        }
}

TEST(MeasurementBound, LinearRegimeHasFiniteSlope) {
    const DecayParams dp{1.0, 3.0, 1, 2};
    double lo = 1e300, hi = 0;
    for (double p = 1e-6; p <= 1e-3; p *= 1.5) {
        const double r = prop1_bound(dp, p).value / p;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    EXPECT_LT(hi / lo, 1.1);
}

TEST(MeasurementBound, SmallPSlopeMatchesRegime) {
    for (int D : {1, 2})
        for (double off : {0.3, 0.7, 2.0}) {
            const DecayParams dp{1.0, D + off, D, 2};
            const double p1 = 1e-6, p2 = 1e-5;
            const double slope = std::log(prop1_bound(dp, p2).value / prop1_bound(dp, p1).value) / std::log(p2 / p1);
            EXPECT_NEAR(slope, std::min(off, 1.0), 0.05) << "D=" << D << " mu-D=" << off;
        }
}

TEST(MeasurementBound, RegimeTagsAndDomain) {
    EXPECT_EQ(to_string(prop1_bound({1, 1.5, 1, 2}, 0.01).regime), "D<mu<D+1");
    EXPECT_EQ(to_string(prop1_bound({1, 2.0, 1, 2}, 0.01).regime), "mu=D+1");
    EXPECT_EQ(to_string(prop1_bound({1, 4.0, 2, 2}, 0.01).regime), "mu>D+1");
    EXPECT_EQ(to_string(regime_of(2.0, 2)), "mu<=D unstable");
    EXPECT_THROW(prop1_bound({1, 1.0, 1, 2}, 0.01), InputDomainError);
    EXPECT_THROW(prop1_bound({1, 3.0, 1, 2}, 0.7), InputDomainError);
    EXPECT_THROW(prop1_bound({-1, 3.0, 1, 2}, 0.1), InputDomainError);
}

TEST(SumBounds, NoiselessLimit) {
    EXPECT_EQ(bound_S1(1.0, 1.0, 2.0, 3, 2), 0.0);
    EXPECT_EQ(bound_S2(1.0, 1.0, 2.0, 3, 3.5, 2, 1.0), 0.0);
    EXPECT_EQ(bound_S(1.0, 2.0, 1.0, 0, 1.7, 1, 0.5), 0.0);
}

TEST(SumBounds, CorollaryIsSpecialisation) {
    const DecayParams dp{0.9, 2.6, 2, 3};
    for (double r : {0.0, 0.5, 0.97})
        EXPECT_DOUBLE_EQ(corollary1_bound(dp, r), bound_S(r, 1.0, dp.phi0, 0, dp.mu, dp.D, dp.K));
}

// direct lattice sum written out here, separately from brute_force_S
TEST(SumBounds, DominateLatticeSums) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0, 1);
    for (int t = 0; t < 40; ++t) {
        const int D = 1 + t % 2;
        const int L = D == 1 ? 8 + int(24 * u(rng)) : 4 + int(28 * u(rng));
        const double r = u(rng), K1 = 3 * u(rng), K2 = 1 + 3 * u(rng), mu = D + 0.1 + 3 * u(rng), K = 2 * u(rng);
        const int d0 = int(6 * u(rng));
        const Lattice lat(D, L);
        double direct = 0;
        for (int s = 0; s < lat.num_sites(); ++s) {
            int d = 0;
            int rem = s;
            for (int c = 0; c < D; ++c) {
                const int x = rem % L;
                rem /= L;
                d += std::min(x, L - x);
            }
            const double g = d <= d0 ? 1.0 : K * std::pow(double(d - d0), -mu);
            direct += (1 - std::pow(r, K1 * d + K2)) * g;
        }
        EXPECT_NEAR(brute_force_S(lat, r, K1, K2, d0, mu, K), direct, 1e-9 * (1 + direct));
        EXPECT_LE(direct, bound_S(r, K1, K2, d0, mu, D, K) * (1 + 1e-12)) << "tuple " << t;
    }
}

TEST(SumBounds, Domain) {
    EXPECT_THROW(bound_S1(1.2, 1, 1, 0, 1), InputDomainError);
    EXPECT_THROW(bound_S1(0.5, 1, 0.5, 0, 1), InputDomainError);
    EXPECT_THROW(bound_S2(0.5, 1, 1, 0, 1.0, 1, 1), InputDomainError);
}

TEST(CircuitBounds, ShapeProperties) {
    for (int D : {1, 2}) {
        const DecayParams dp{1.0, D + 1.5, D, 2};
        EXPECT_EQ(prop3_bound(dp, 0.01, 0).value, 0.0);
        EXPECT_EQ(prop4_bound(dp, 0.01, 0).value, 0.0);
        for (int d : {1, 3, 7})
            EXPECT_NEAR(prop3_bound(dp, 0.01, 2 * d).value / prop3_bound(dp, 0.01, d).value, std::pow(2.0, D + 2), 1e-9);
    }
}

TEST(CircuitBounds, InteractingDominatesFreeFermion) {
    for (int D : {1, 2, 3})
        for (double off : {0.2, 1.0, 3.0})
            for (double p : {1e-5, 1e-2, 0.5})
                for (int d : {1, 2, 5, 20})
                    for (int v : {1, 2}) {
                        const DecayParams dp{1.0, D + off, D, 2};
                        EXPECT_GE(prop4_bound(dp, p, d, v).value, prop3_bound(dp, p, d, v).value);
                    }
}

TEST(CircuitBounds, LayerSumBelowClosedForm) {
    for (int D : {1, 2})
        for (double off : {0.3, 1.0, 2.0})
            for (double p : {1e-4, 1e-2, 0.3})
                for (int d : {1, 2, 4, 8})
                    for (int phi0 : {1, 2}) {
                        const DecayParams dp{0.8, D + off, D, phi0};
                        EXPECT_LE(prop3_layer_sum(dp, p, d), prop3_bound(dp, p, d).value * (1 + 1e-12));
                    }
}

TEST(FermiLimit, OffSurface) {
    for (double delta : {0.1, 0.5})
        EXPECT_LT(fermi2d_limit_error(1e-9, 1.0, delta), 1e-6);
    const double lam = -std::log(1 - 0.05);
    EXPECT_NEAR(fermi2d_limit_error(0.05, 0.8, 0.3), 0.5 * lam * 0.64 / std::pow(lam * lam + 0.09, 1.5), 1e-14);
    EXPECT_THROW(fermi2d_limit_error(0.01, 1.0, 0.0), InputDomainError);
    EXPECT_THROW(fermi2d_limit_error(0.01, 0.0, 0.1), InputDomainError);
    EXPECT_THROW(fermi2d_limit_error(1.0, 1.0, 0.1), InputDomainError);
}

// I(lambda) in terms of the complete elliptic integral K(m) = pi / (2 AGM(1, sqrt(1-m)))
TEST(FermiLimit, SurfaceIntegralMatchesEllipticForm) {
    auto agm = [](double x, double y) {
        for (int i = 0; i < 60 && std::abs(x - y) > 1e-16 * x; ++i) {
            const double m = 0.5 * (x + y);
            y = std::sqrt(x * y);
            x = m;
        }
        return x;
    };
    for (double p : {1e-6, 1e-3, 0.1, 0.5})
        for (double kF : {0.2, 1.0, 2.0}) {
            const double lam = -std::log1p(-p);
            const double root = std::sqrt(lam * lam + 4 * kF * kF);
            const double ref = lam / (pi * root) * pi / (2 * agm(1.0, lam / root));
            EXPECT_NEAR(fermi2d_surface_integral(p, kF), ref, 1e-9 * std::max(ref, 1e-3));
            EXPECT_LE(fermi2d_surface_integral(p, kF), fermi2d_surface_integral_bound(p, kF));
        }
}

TEST(FermiLimit, OnSurfaceApproachesHalf) {
    EXPECT_NEAR(fermi2d_on_surface_error(1e-6, 1.0), 0.5, 0.02);
    EXPECT_LT(fermi2d_on_surface_error(1e-6, 1.0), 0.5);
}

TEST(FermiLimit, LatticeSingleMode) {
    const double q = 2 * pi * 3 / 40;
    const double n_small = fermi2d_lattice_noisy_occupation(40, 1e-12, {{q, 0.0}}, {q, 0.0});
    EXPECT_NEAR(n_small, 1.0, 1e-9);
    double prev = n_small;
    for (double p : {0.01, 0.1, 0.3}) {
        const double n = fermi2d_lattice_noisy_occupation(40, p, {{q, 0.0}}, {q, 0.0});
        EXPECT_LT(n, prev);
        prev = n;
    }
}

TEST(Probes, JumpShapes) {
    EXPECT_EQ(jump_error(100, 0.0, 0.0), 0.0);
    const auto at_jump = jump_scaling_probe({50, 100, 200}, 1e-4, 0.0);
    ASSERT_EQ(at_jump.rows.size(), 3u);
    EXPECT_EQ(at_jump.rows[1].x, 100);
    EXPECT_GT(at_jump.slope, 0.8);
    const auto away = jump_scaling_probe({50, 100, 200}, 1e-4, pi / 2);
    EXPECT_LT(std::abs(away.slope), 0.1);
    EXPECT_THROW(jump_scaling_probe({}, 0.01, 0.0), InputDomainError);
    EXPECT_THROW(jump_error(51, 0.01, 0.0), InputDomainError);
}

TEST(Probes, SmoothOccupationErrorMatchesObservablePath) {
    const int N = 24;
    const Lattice lat(1, N);
    for (double p : {1e-3, 0.05})
        for (double k : {0.0, 1.1}) {
            CMat c(N, N);
            for (int x = 0; x < N; ++x)
                for (int y = 0; y < N; ++y) {
                    cplx v = 0;
                    for (int m = 0; m < N; ++m) {
                        const double q = 2 * pi * m / N;
                        v += smooth_cosine_occupation(q) * std::polar(1.0, -q * (x - y));
                    }
                    c(x, y) = v / double(N);
                }
            const auto st = complex_to_majorana({c, {}}, lat);
            const auto obs = build_momentum_occupation_observable(lat, {k});
            Mat damped = st.gamma;
            for (int a = 0; a < 2 * N; ++a)
                for (int b = 0; b < 2 * N; ++b)
                    damped(a, b) *= std::pow(1 - p, 1 + site_distance(majorana_site(a), majorana_site(b), lat));
            const double ref = std::abs(quadratic_expectation(obs, st) - quadratic_expectation(obs, {lat, damped}));
            EXPECT_NEAR(smooth_occupation_error(smooth_cosine_occupation, N, p, k), ref, 1e-12);
        }
}

TEST(Probes, LipschitzSlope) {
    const auto t = lipschitz_scaling_probe({1e-5, 1e-4, 1e-3, 1e-2}, smooth_cosine_occupation);
    ASSERT_EQ(t.rows.size(), 4u);
    EXPECT_GE(t.slope, 0.5);
    EXPECT_THROW(lipschitz_scaling_probe({}, smooth_cosine_occupation), InputDomainError);
}
