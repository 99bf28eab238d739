#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "circuits.hpp"
#include "errors.hpp"

namespace fqn::io {

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}
// Shortest text that parses back to the same double; used when echoing configuration.
inline std::string exact(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}
inline std::string exact(int v) { return std::to_string(v); }

inline std::string fmt(int v) { return std::to_string(v); }
inline std::string fmt(bool v) { return v ? "1" : "0"; }
inline std::string fmt(const std::string& s) { return s; }

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    template <typename... T>
    void add(const T&... cells) {
        rows.push_back({fmt(cells)...});
        if (rows.back().size() != header.size()) throw DimensionMismatch("row width differs from header");
    }
};

inline void write_csv(std::ostream& os, const Table& t) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
}

// Rows as objects; numeric-looking cells become numbers.
inline nlohmann::json table_to_json(const Table& t) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : t.rows) {
        nlohmann::json o;
        for (std::size_t i = 0; i < r.size(); ++i) {
            char* end = nullptr;
            const double v = std::strtod(r[i].c_str(), &end);
            if (!r[i].empty() && end && *end == '\0')
                o[t.header[i]] = v;
            else
                o[t.header[i]] = r[i];
        }
        arr.push_back(o);
    }
    return arr;
}

inline void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputDomainError("cannot open output file '" + path + "'");
    f << text;
}

inline std::string to_csv_string(const Table& t) {
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
}

// Circuit spec {seed, depth, radius, lattice: {D, L}}; enough to rebuild the circuit exactly.
inline nlohmann::json circuit_spec(const GaussianCircuit& c) {
    return {{"seed", c.seed}, {"depth", c.depth()}, {"radius", c.radius}, {"lattice", {{"D", c.lat.D}, {"L", c.lat.L}}}};
}

inline GaussianCircuit circuit_from_spec(const nlohmann::json& j) {
    try {
        const Lattice lat(j.at("lattice").at("D").get<int>(), j.at("lattice").at("L").get<int>());
        return brickwork_random_circuit(lat, j.at("depth").get<int>(), j.at("radius").get<int>(),
                                        j.at("seed").get<std::uint64_t>());
    } catch (const nlohmann::json::exception& e) {
        throw InputDomainError(std::string("malformed circuit spec: ") + e.what());
    }
}

}  // namespace fqn::io
