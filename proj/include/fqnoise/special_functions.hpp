#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "errors.hpp"

namespace fqn {

// Adaptive Gauss-Kronrod (7/15) on a finite interval.
namespace quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

namespace detail {

inline constexpr std::array<double, 8> xk{0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                          0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                          0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                          0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wk{0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                          0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                          0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                          0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg{0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline void gk15(const std::function<double(double)>& f, double a, double b, double& kron, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double k = wk[7] * fc, g = wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double s = f(c - h * xk[i]) + f(c + h * xk[i]);
        k += wk[i] * s;
        if (i % 2 == 1) g += wg[i / 2] * s;
    }
    kron = k * h;
    err = std::abs((k - g) * h);
}

}  // namespace detail

// Globally adaptive: always bisect the interval with the largest error estimate.
inline Result integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12,
                        double abs_tol = 1e-15, int max_intervals = 4000) {
    Result r;
    if (a == b) return r;
    struct Piece {
        double a, b, value, error;
        bool operator<(const Piece& o) const { return error < o.error; }
    };
    std::priority_queue<Piece> heap;
    double k, e;
    detail::gk15(f, a, b, k, e);
    r.evaluations = 15;
    heap.push({a, b, k, e});
    double total = k, err = e;
    while (err > std::max(abs_tol, rel_tol * std::abs(total)) && int(heap.size()) < max_intervals) {
        const Piece w = heap.top();
        const double m = 0.5 * (w.a + w.b);
        if (!(m > w.a && m < w.b)) break;  // interval exhausted at machine precision
        heap.pop();
        double kl, el, kr, er;
        detail::gk15(f, w.a, m, kl, el);
        detail::gk15(f, m, w.b, kr, er);
        r.evaluations += 30;
        total += kl + kr - w.value;
        err += el + er - w.error;
        heap.push({w.a, m, kl, el});
        heap.push({m, w.b, kr, er});
    }
    // re-sum to shed the drift of the running updates
    r.value = 0.0;
    r.error = 0.0;
    while (!heap.empty()) {
        r.value += heap.top().value;
        r.error += heap.top().error;
        heap.pop();
    }
    return r;
}

// integral over [0, inf) via y = u / (1 - u)
inline Result integrate_half_line(const std::function<double(double)>& f, double rel_tol = 1e-12,
                                  double abs_tol = 1e-15) {
    auto g = [&](double u) {
        if (u >= 1.0) return 0.0;
        const double om = 1.0 - u;
        const double v = f(u / om) / (om * om);
        return std::isfinite(v) ? v : 0.0;
    };
    return integrate(g, 0.0, 1.0, rel_tol, abs_tol);
}

}  // namespace quad

namespace detail {

// B_{2j}/(2j)! for j = 1..6
inline constexpr std::array<double, 6> bernoulli_over_factorial{
    1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0, 1.0 / 47900160.0, -691.0 / 1307674368000.0};

}  // namespace detail

// Euler-Maclaurin with cutoff n = 32 and six Bernoulli corrections; error far below 1e-12 for s > 1.
inline double riemann_zeta(double s) {
    if (!(s > 1.0 + 1e-6)) throw InputDomainError("riemann_zeta needs s > 1");
    constexpr int n = 32;
    double sum = 0.0;
    for (int k = n - 1; k >= 1; --k) sum += std::pow(double(k), -s);
    const double nn = n;
    sum += std::pow(nn, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(nn, -s);
    // derivative factor s(s+1)...(s+2j-2) n^{-s-2j+1}
    double rising = s;
    double power = std::pow(nn, -s - 1.0);
    for (int j = 0; j < 6; ++j) {
        sum += detail::bernoulli_over_factorial[j] * rising * power;
        rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
        power /= nn * nn;
    }
    return sum;
}

namespace detail {

// int_n^inf t^{-s} e^{-a t} dt for a > 0, s >= 0
inline double tail_integral(double s, double a, double n) {
    const double x = a * n;
    if (s > 1.0 && x < 1.0) {
        // v = (n/t)^{s-1}
        const double e = 1.0 / (s - 1.0);
        auto f = [&](double v) { return v <= 0.0 ? 0.0 : std::exp(-x * std::pow(v, -e)); };
        return std::pow(n, 1.0 - s) * e * quad::integrate(f, 0.0, 1.0, 1e-13, 1e-300).value;
    }
    // t = n + y/a
    auto f = [&](double y) { return std::pow(n + y / a, -s) * std::exp(-y); };
    return std::exp(-x) / a * quad::integrate_half_line(f, 1e-13, 1e-300).value;
}

// d^m/dt^m [t^{-s} e^{-a t}]
inline double tail_derivative(double s, double a, double t, int m) {
    double total = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= m; ++i) {
        // g^{(i)} = (-1)^i (s)_i t^{-s-i}
        double poch = 1.0;
        for (int q = 0; q < i; ++q) poch *= s + q;
        const double gi = ((i % 2) ? -1.0 : 1.0) * poch * std::pow(t, -s - i);
        const double hj = std::pow(-a, m - i) * std::exp(-a * t);
        total += binom * gi * hj;
        binom = binom * (m - i) / (i + 1);
    }
    return total;
}

}  // namespace detail

// Li_s(z) = sum_{k>=1} z^k / k^s for s >= 0, z in [0, 1]; z = 1 requires s > 1.
inline double polylog(double s, double z) {
    if (!(s >= 0.0)) throw UnsupportedConfiguration("polylog implemented for s >= 0 only");
    if (!(z >= 0.0 && z <= 1.0)) throw InputDomainError("polylog needs z in [0, 1]");
    if (z == 0.0) return 0.0;
    if (z == 1.0) {
        if (!(s > 1.0)) throw InputDomainError("polylog diverges at z = 1 for s <= 1");
        return riemann_zeta(s);
    }
    if (z > 1.0 - 1e-9 && !(s > 1.0)) throw InputDomainError("polylog too close to its divergence");
    if (z <= 0.5) {
        double sum = 0.0, zk = 1.0;
        for (int k = 1; k < 10000; ++k) {
            zk *= z;
            const double term = zk * std::pow(double(k), -s);
            sum += term;
            // remaining terms are at most z^{k+1} / ((k+1)^s (1 - z))
            if (zk * z / (1.0 - z) * std::pow(double(k + 1), -s) < 1e-17 * std::max(1.0, sum)) break;
        }
        return sum;
    }
    // direct sum below n, Euler-Maclaurin tail above
    constexpr int n = 64;
    const double a = -std::log(z);
    double sum = 0.0;
    for (int k = 1; k < n; ++k) sum += std::exp(-a * k) * std::pow(double(k), -s);
    const double nn = n;
    double tail = detail::tail_integral(s, a, nn) + 0.5 * std::exp(-a * nn) * std::pow(nn, -s);
    for (int j = 0; j < 4; ++j) tail -= detail::bernoulli_over_factorial[j] * detail::tail_derivative(s, a, nn, 2 * j + 1);
    return sum + tail;
}

}  // namespace fqn
