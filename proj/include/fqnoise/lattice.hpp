#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"

namespace fqn {

using Coord = std::vector<int>;

struct Lattice {
    int D = 1;
    int L = 2;

    Lattice() = default;
    Lattice(int dim, int size) : D(dim), L(size) {
        detail::require<InputDomainError>(dim >= 1, "lattice dimension must be >= 1");
        detail::require<InputDomainError>(size >= 1, "lattice size L must be >= 1");
        double n = std::pow(double(size), dim);
        detail::require<InputDomainError>(n < 1e8, "lattice too large");
    }

    int num_sites() const {
        int n = 1;
        for (int i = 0; i < D; ++i) n *= L;
        return n;
    }
    int num_majoranas() const { return 2 * num_sites(); }

    bool operator==(const Lattice&) const = default;

    void check_coord(const Coord& r) const {
        if (int(r.size()) != D)
            throw DimensionMismatch("coordinate has " + std::to_string(r.size()) + " components, lattice has D=" +
                                    std::to_string(D));
        for (int c : r)
            if (c < 0 || c >= L)
                throw InputDomainError("coordinate component " + std::to_string(c) + " outside [0," +
                                       std::to_string(L - 1) + "]");
    }

    // row-major over (y, x): index = x + L*y (+ L^2*z ...)
    int site_index(const Coord& r) const {
        check_coord(r);
        int idx = 0;
        for (int i = D - 1; i >= 0; --i) idx = idx * L + r[i];
        return idx;
    }

    Coord coord(int site) const {
        if (site < 0 || site >= num_sites()) throw InputDomainError("site index out of range");
        Coord r(D);
        for (int i = 0; i < D; ++i) {
            r[i] = site % L;
            site /= L;
        }
        return r;
    }
};

// Majorana index layout: 2*site + (flavor-1), flavor in {1,2}.
inline int majorana_index(int site, int flavor) { return 2 * site + (flavor - 1); }
inline int majorana_site(int a) { return a / 2; }
inline int majorana_flavor(int a) { return a % 2 + 1; }

inline int torus_distance_1d(int a, int b, int L) {
    int d = std::abs(a - b);
    return std::min(d, L - d);
}

inline int torus_distance(const Coord& r, const Coord& r2, const Lattice& lat) {
    lat.check_coord(r);
    lat.check_coord(r2);
    int d = 0;
    for (int i = 0; i < lat.D; ++i) d += torus_distance_1d(r[i], r2[i], lat.L);
    return d;
}

// Same metric on flattened site indices, no range re-checks.
inline int site_distance(int s1, int s2, const Lattice& lat) {
    int d = 0;
    for (int i = 0; i < lat.D; ++i) {
        d += torus_distance_1d(s1 % lat.L, s2 % lat.L, lat.L);
        s1 /= lat.L;
        s2 /= lat.L;
    }
    return d;
}

// Table of site_distance for all pairs, N x N row-major.
inline std::vector<int> distance_table(const Lattice& lat) {
    const int n = lat.num_sites();
    std::vector<int> t(std::size_t(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t[std::size_t(i) * n + j] = site_distance(i, j, lat);
    return t;
}

enum class Boundary { periodic, antiperiodic };
enum class Parity { odd, even };

inline Parity parity_of(int n_occ) { return (n_occ % 2) ? Parity::odd : Parity::even; }

struct MomentumGrid {
    Boundary boundary = Boundary::periodic;
    int D = 1;
    int L = 2;
    // m-vectors stored doubled (2m) so half-integers stay exact
    std::vector<std::vector<int>> twice_m;

    std::size_t size() const { return twice_m.size(); }

    std::vector<double> momentum(std::size_t i) const {
        std::vector<double> k(D);
        for (int c = 0; c < D; ++c) k[c] = std::numbers::pi * twice_m[i][c] / L;
        return k;
    }
};

inline MomentumGrid momentum_grid(const Lattice& lat, Parity occupation_parity) {
    if (lat.L % 2 != 0)
        throw UnsupportedConfiguration("momentum grids need even L, got L=" + std::to_string(lat.L));
    MomentumGrid g;
    g.D = lat.D;
    g.L = lat.L;
    g.boundary = occupation_parity == Parity::odd ? Boundary::periodic : Boundary::antiperiodic;
    std::vector<int> comps;
    if (g.boundary == Boundary::periodic)
        for (int m = -lat.L / 2; m <= lat.L / 2 - 1; ++m) comps.push_back(2 * m);
    else
        for (int m = -lat.L / 2; m <= lat.L / 2 - 1; ++m) comps.push_back(2 * m + 1);

    const int n = lat.num_sites();
    g.twice_m.reserve(n);
    for (int s = 0; s < n; ++s) {
        std::vector<int> v(lat.D);
        int t = s;
        for (int c = 0; c < lat.D; ++c) {
            v[c] = comps[t % lat.L];
            t /= lat.L;
        }
        g.twice_m.push_back(v);
    }
    return g;
}

inline int snake_index(const Coord& r, const Lattice& lat) {
    if (lat.D != 2) throw UnsupportedConfiguration("snake ordering needs D=2");
    lat.check_coord(r);
    const int x = r[0], y = r[1];
    return y * lat.L + (y % 2 == 0 ? x : lat.L - 1 - x);
}

}  // namespace fqn
