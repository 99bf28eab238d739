#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"

namespace fqn {

enum class EncodingKind { local, jw1d, jw2d_snake, bravyi_kitaev };

inline std::string to_string(EncodingKind k) {
    switch (k) {
        case EncodingKind::local: return "local";
        case EncodingKind::jw1d: return "jw1d";
        case EncodingKind::jw2d_snake: return "jw2d_snake";
        case EncodingKind::bravyi_kitaev: return "bravyi_kitaev";
    }
    return "?";
}

inline EncodingKind encoding_from_string(const std::string& s) {
    if (s == "local") return EncodingKind::local;
    if (s == "jw1d") return EncodingKind::jw1d;
    if (s == "jw2d_snake" || s == "jw2d") return EncodingKind::jw2d_snake;
    if (s == "bravyi_kitaev" || s == "bk") return EncodingKind::bravyi_kitaev;
    throw InputDomainError("unknown encoding '" + s + "'");
}

// Counts of Pauli factors of an encoded bilinear (JW-1D only).
struct StringComposition {
    int x = 0, y = 0, z = 0;
    int weight() const { return x + y + z; }
    bool operator==(const StringComposition&) const = default;
};

inline bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

// Fenwick-tree (Bravyi-Kitaev) support sets, modes and qubits 0-based.
namespace bk {

inline int lowbit(int t) { return t & -t; }

inline void check_size(int n) {
    if (!is_power_of_two(n))
        throw UnsupportedConfiguration("Bravyi-Kitaev needs N a power of two, got N=" + std::to_string(n));
}

// qubits whose stored parity includes mode j (excluding j)
inline std::vector<int> update_set(int j, int n) {
    check_size(n);
    std::vector<int> out;
    for (int t = j + 1 + lowbit(j + 1); t <= n; t += lowbit(t)) out.push_back(t - 1);
    return out;
}

// qubits whose XOR gives the parity of modes 0..j-1
inline std::vector<int> parity_set(int j) {
    std::vector<int> out;
    for (int t = j; t > 0; t -= lowbit(t)) out.push_back(t - 1);
    return out;
}

// children of node j: qubits that, with qubit j, give the occupation of mode j
inline std::vector<int> flip_set(int j) {
    std::vector<int> out;
    const int t = j + 1;
    for (int step = 1; step < lowbit(t); step <<= 1) out.push_back(t - step - 1);
    return out;
}

}  // namespace bk

inline int bk_number_operator_weight(int i, int n) {
    bk::check_size(n);
    if (i < 0 || i >= n) throw InputDomainError("mode index out of range");
    return 1 + int(bk::flip_set(i).size());
}

// Symplectic (x|z) bit representation of a Pauli string, one bit per qubit.
struct SymplecticPauli {
    std::vector<std::uint64_t> x, z;

    explicit SymplecticPauli(int n = 0) : x((n + 63) / 64, 0), z((n + 63) / 64, 0) {}
    void set_x(int q) { x[q / 64] ^= std::uint64_t(1) << (q % 64); }
    void set_z(int q) { z[q / 64] ^= std::uint64_t(1) << (q % 64); }
    int weight() const {
        int w = 0;
        for (std::size_t i = 0; i < x.size(); ++i) w += std::popcount(x[i] | z[i]);
        return w;
    }
    SymplecticPauli operator*(const SymplecticPauli& o) const {
        SymplecticPauli r = *this;
        for (std::size_t i = 0; i < x.size(); ++i) {
            r.x[i] ^= o.x[i];
            r.z[i] ^= o.z[i];
        }
        return r;
    }
};

// Images of gamma1_j, gamma2_j under BK: X on {j} u U(j); Z on the parity set (gamma1) or the
// prefix set through j (gamma2, which puts Y on qubit j).
inline std::vector<SymplecticPauli> bk_majorana_strings(int n) {
    bk::check_size(n);
    std::vector<SymplecticPauli> out;
    out.reserve(2 * n);
    for (int j = 0; j < n; ++j) {
        SymplecticPauli g1(n);
        g1.set_x(j);
        for (int q : bk::update_set(j, n)) g1.set_x(q);
        SymplecticPauli g2 = g1;
        for (int q : bk::parity_set(j)) g1.set_z(q);
        for (int q : bk::parity_set(j + 1)) g2.set_z(q);
        out.push_back(g1);
        out.push_back(g2);
    }
    return out;
}

struct EncodingWeightModel {
    EncodingKind kind = EncodingKind::local;
    Lattice lat;
    int phi0 = 2;
    std::vector<SymplecticPauli> bk_strings;  // only for bravyi_kitaev

    EncodingWeightModel() = default;
    EncodingWeightModel(EncodingKind k, const Lattice& l, int phi0_ = 2) : kind(k), lat(l), phi0(phi0_) {
        if (kind == EncodingKind::local && phi0 < 1) throw InputDomainError("phi0 must be >= 1");
        if (kind == EncodingKind::jw1d && lat.D != 1) throw UnsupportedConfiguration("jw1d needs D=1");
        if (kind == EncodingKind::jw2d_snake && lat.D != 2) throw UnsupportedConfiguration("jw2d_snake needs D=2");
        if (kind == EncodingKind::bravyi_kitaev) bk_strings = bk_majorana_strings(lat.num_sites());
        if (kind != EncodingKind::local) phi0 = 1;
    }

    static EncodingWeightModel local(const Lattice& l, int phi0_ = 2) { return {EncodingKind::local, l, phi0_}; }

    int num_majoranas() const { return lat.num_majoranas(); }

    void check_pair(int a, int b) const {
        const int m = num_majoranas();
        if (a < 0 || b < 0 || a >= m || b >= m) throw InputDomainError("Majorana index out of range");
        if (a == b) throw InputDomainError("bilinear weight needs a != b");
    }

    int snake_of_site(int s) const {
        const int x = s % lat.L, y = s / lat.L;
        return y * lat.L + (y % 2 == 0 ? x : lat.L - 1 - x);
    }

    int weight(int a, int b) const {
        check_pair(a, b);
        const int sa = majorana_site(a), sb = majorana_site(b);
        switch (kind) {
            case EncodingKind::local: return phi0 + site_distance(sa, sb, lat);
            case EncodingKind::jw1d: return 1 + std::abs(sa - sb);
            case EncodingKind::jw2d_snake: return 1 + std::abs(snake_of_site(sa) - snake_of_site(sb));
            case EncodingKind::bravyi_kitaev: return (bk_strings[a] * bk_strings[b]).weight();
        }
        return 0;
    }

    StringComposition composition(int a, int b) const {
        if (kind != EncodingKind::jw1d)
            throw UnsupportedConfiguration("string composition is only available for jw1d");
        check_pair(a, b);
        int sa = majorana_site(a), sb = majorana_site(b);
        int fa = majorana_flavor(a), fb = majorana_flavor(b);
        StringComposition c;
        if (sa == sb) {
            c.z = 1;
            return c;
        }
        if (sa > sb) {
            std::swap(sa, sb);
            std::swap(fa, fb);
        }
        // left endpoint carries sigma * Z from the right operator's string: X Z ~ Y, Y Z ~ X
        (fa == 1 ? c.y : c.x) += 1;
        (fb == 1 ? c.x : c.y) += 1;
        c.z = sb - sa - 1;
        return c;
    }
};

inline int bilinear_weight(const EncodingWeightModel& enc, int a, int b) { return enc.weight(a, b); }

inline int max_weight(const EncodingWeightModel& enc) {
    const int m = enc.num_majoranas();
    int w = 0;
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) w = std::max(w, enc.weight(a, b));
    return w;
}

}  // namespace fqn
