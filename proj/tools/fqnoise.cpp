#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fqnoise/errors.hpp"
#include "fqnoise/experiments.hpp"
#include "fqnoise/io.hpp"

namespace {

using fqn::io::Table;

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename T>
std::string join(const std::vector<T>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fqn::io::exact(v[i]);
    return s;
}

// Flat key=value config: each key becomes --key value for the chosen subcommand unless the flag
// is already on the command line.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
    std::string path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw ConfigError("--config needs a path");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (path.empty()) return rest;
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot read '" + path + "'");
    std::set<std::string> given;
    for (const auto& a : rest)
        if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
    std::vector<std::string> injected;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (given.count(key)) continue;  // flags win
        if (value == "true") {
            injected.push_back("--" + key);
        } else if (value != "false") {
            injected.push_back("--" + key);
            injected.push_back(value);
        }
    }
    // subcommand first, then config values, then the explicit flags
    std::vector<std::string> out;
    if (!rest.empty()) out.push_back(rest[0]);
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), rest.begin() + (rest.empty() ? 0 : 1), rest.end());
    return out;
}

struct Common {
    std::string out = "-";
    std::string format = "csv";
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--out", c.out, "output path ('-' for stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void emit(const Common& c, const std::string& command, const nlohmann::json& config, const Table& t) {
    if (c.format == "csv") {
        fqn::io::write_text(c.out, fqn::io::to_csv_string(t));
        return;
    }
    nlohmann::json j;
    j["command"] = command;
    j["config"] = config;
    j["columns"] = t.header;
    j["rows"] = fqn::io::table_to_json(t);
    fqn::io::write_text(c.out, j.dump(2) + "\n");
}

void check_p(double p, const std::string& name = "p") {
    if (!(p >= 0.0 && p <= 2.0 / 3)) throw ConfigError("invalid --" + name + ": must lie in [0, 2/3]");
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = merge_config(args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    }

    CLI::App app{"Pauli-noise sensitivity of encoded fermionic observables"};
    app.require_subcommand(1);

    // fermi1d
    Common c1;
    fqn::exp::Fermi1dConfig f1;
    std::string f1_enc = "local", f1_mode = "exact";
    bool f1_sweep = false;
    auto* s1 = app.add_subcommand("fermi1d", "half-filled 1D Fermi sea: n_k error at k_F and q0 versus N");
    add_common(s1, c1);
    s1->add_option("--N", f1.N_grid, "system sizes")->delimiter(',');
    s1->add_option("--p", f1.p, "depolarizing probability");
    s1->add_option("--phi0", f1.phi0, "local encoding constant");
    s1->add_option("--encoding", f1_enc, "local or jw1d");
    s1->add_option("--mode", f1_mode, "exact or worst-case");
    s1->add_flag("--sweep", f1_sweep, "sensitivity(k) over the grid at --sweep-N");
    s1->add_option("--sweep-N", f1.sweep_N, "system size of the sweep");

    // fermi2d
    Common c2;
    fqn::exp::Fermi2dConfig f2;
    std::string f2_enc = "local", f2_mode = "exact";
    auto* s2 = app.add_subcommand("fermi2d", "2D tight-binding sensitivity map over the momentum grid");
    add_common(s2, c2);
    s2->add_option("--L", f2.L, "linear size");
    s2->add_option("--n-occ", f2.fillings, "fillings")->delimiter(',');
    s2->add_option("--p", f2.p, "depolarizing probability");
    s2->add_option("--phi0", f2.phi0, "local encoding constant");
    s2->add_option("--encoding", f2_enc, "local, jw2d_snake or bravyi_kitaev");
    s2->add_option("--mode", f2_mode, "exact or worst-case");

    // encoding-compare
    Common c3;
    fqn::exp::EncodingCompareConfig ec;
    auto* s3 = app.add_subcommand("encoding-compare", "worst-case observable error for local, snake JW and BK");
    add_common(s3, c3);
    s3->add_option("--p", ec.p, "depolarizing probability");
    s3->add_option("--phi0", ec.phi0, "local encoding constant");
    s3->add_option("--L", ec.L_grid, "odd linear sizes for the 2D encodings")->delimiter(',');
    s3->add_option("--bk-N", ec.bk_N_grid, "mode counts (powers of two) for BK")->delimiter(',');

    // circuit
    Common c4;
    fqn::exp::CircuitConfig cc;
    std::string cc_mode = "exact";
    double cc_amp = -1.0, cc_mu = -1.0;
    std::uint64_t cc_seed = 1;
    auto* s4 = app.add_subcommand("circuit", "noisy brickwork Gaussian circuits on a power-law state");
    add_common(s4, c4);
    s4->add_option("--D", cc.D, "dimension (1 or 2)");
    s4->add_option("--L", cc.L_grid, "linear sizes")->delimiter(',');
    s4->add_option("--depth", cc.depths, "depths")->delimiter(',');
    s4->add_option("--p", cc.p_grid, "depolarizing probabilities")->delimiter(',');
    s4->add_option("--radius", cc.radius, "gate locality radius");
    s4->add_option("--seed", cc_seed, "circuit seed");
    s4->add_option("--mu", cc_mu, "decay exponent of the initial state (default D+2)");
    s4->add_option("--amplitude", cc_amp, "prefactor of the initial correlations");
    s4->add_option("--phi0", cc.phi0, "local encoding constant");
    s4->add_option("--mode", cc_mode, "exact or worst-case");

    // bounds
    Common c5;
    c5.format = "json";
    fqn::exp::BoundsConfig bc;
    auto* s5 = app.add_subcommand("bounds", "tabulate the closed-form bounds");
    add_common(s5, c5);
    s5->add_option("--D", bc.D_values, "dimensions")->delimiter(',');
    s5->add_option("--mu-offset", bc.mu_offsets, "mu - D values")->delimiter(',');
    s5->add_option("--p", bc.p_grid, "noise probabilities")->delimiter(',');
    s5->add_option("--depth", bc.depths, "circuit depths")->delimiter(',');
    s5->add_option("--K", bc.K, "correlation prefactor");
    s5->add_option("--phi0", bc.phi0, "local encoding constant");
    s5->add_option("--radius", bc.radius, "gate locality radius");
    s5->add_option("--kF", bc.k_F, "Fermi momentum for the circular-surface formulas");
    s5->add_option("--delta", bc.deltas, "distances |k| - k_F")->delimiter(',');

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    }

    try {
        if (s1->parsed()) {
            check_p(f1.p);
            f1.encoding = fqn::encoding_from_string(f1_enc);
            f1.mode = fqn::exp::lambda_mode_from_string(f1_mode);
            if (f1.phi0 < 1) throw ConfigError("invalid --phi0: must be >= 1");
            nlohmann::json cfg{{"N", join(f1.N_grid)}, {"p", fqn::io::exact(f1.p)}, {"phi0", f1.phi0},
                               {"encoding", f1_enc},  {"mode", f1_mode},        {"sweep", f1_sweep},
                               {"sweep-N", f1.sweep_N}};
            Table t;
            if (f1_sweep) {
                t.header = {"N", "k", "occupied", "n_ideal", "n_noisy", "error", "sensitivity"};
                for (const auto& r : fqn::exp::run_fermi1d_sweep(f1))
                    t.add(f1.sweep_N, r.k, r.occupied, r.n_ideal, r.n_noisy, r.error, r.sensitivity);
            } else {
                t.header = {"N", "k_F", "q0", "n_noisy_kF", "n_noisy_q0", "error_kF", "error_q0"};
                for (const auto& r : fqn::exp::run_fermi1d(f1))
                    t.add(r.N, r.k_F, r.q0, r.n_noisy_kF, r.n_noisy_q0, r.error_kF, r.error_q0);
            }
            emit(c1, "fermi1d", cfg, t);
        } else if (s2->parsed()) {
            check_p(f2.p);
            if (!(f2.p > 0)) throw ConfigError("invalid --p: sensitivity needs p > 0");
            f2.encoding = fqn::encoding_from_string(f2_enc);
            f2.mode = fqn::exp::lambda_mode_from_string(f2_mode);
            if (f2.L < 2 || f2.L % 2) throw ConfigError("invalid --L: must be even and >= 2");
            for (int n : f2.fillings)
                if (n < 0 || n > f2.L * f2.L) throw ConfigError("invalid --n-occ: must lie in [0, L^2]");
            nlohmann::json cfg{{"L", f2.L},         {"n-occ", join(f2.fillings)}, {"p", fqn::io::exact(f2.p)},
                               {"phi0", f2.phi0},   {"encoding", f2_enc},         {"mode", f2_mode}};
            Table t;
            t.header = {"n_occ", "kx", "ky", "occupied", "near_contour", "n_ideal", "n_noisy", "sensitivity"};
            for (const auto& r : fqn::exp::run_fermi2d(f2))
                t.add(r.n_occ, r.kx, r.ky, r.occupied, r.near_contour, r.n_ideal, r.n_noisy, r.sensitivity);
            emit(c2, "fermi2d", cfg, t);
        } else if (s3->parsed()) {
            check_p(ec.p);
            nlohmann::json cfg{{"p", fqn::io::exact(ec.p)}, {"phi0", ec.phi0}, {"L", join(ec.L_grid)},
                               {"bk-N", join(ec.bk_N_grid)}};
            Table t;
            t.header = {"encoding", "L", "N", "weight", "error"};
            for (const auto& r : fqn::exp::run_encoding_compare(ec)) t.add(r.encoding, r.L, r.N, r.weight, r.error);
            emit(c3, "encoding-compare", cfg, t);
        } else if (s4->parsed()) {
            if (cc.D != 1 && cc.D != 2) throw ConfigError("invalid --D: must be 1 or 2");
            for (double p : cc.p_grid) check_p(p);
            cc.seed = cc_seed;
            cc.mu = cc_mu > 0 ? cc_mu : cc.D + 2.0;
            cc.amplitude = cc_amp > 0 ? cc_amp : fqn::exp::default_amplitude(cc.D);
            cc.mode = fqn::exp::lambda_mode_from_string(cc_mode);
            nlohmann::json cfg{{"D", cc.D},
                               {"L", join(cc.L_grid)},
                               {"depth", join(cc.depths)},
                               {"p", join(cc.p_grid)},
                               {"radius", cc.radius},
                               {"seed", std::to_string(cc.seed)},
                               {"mu", fqn::io::exact(cc.mu)},
                               {"amplitude", fqn::io::exact(cc.amplitude)},
                               {"phi0", cc.phi0},
                               {"mode", cc_mode}};
            Table t;
            t.header = {"D", "L", "N", "depth", "p", "ideal", "noisy", "error", "K_eff", "prop3_sum", "prop3_bound"};
            for (const auto& r : fqn::exp::run_circuit(cc))
                t.add(r.D, r.L, r.N, r.depth, r.p, r.ideal, r.noisy, r.error, r.K_eff, r.prop3_sum, r.prop3_bound);
            emit(c4, "circuit", cfg, t);
        } else if (s5->parsed()) {
            for (double p : bc.p_grid) check_p(p);
            nlohmann::json cfg{{"D", join(bc.D_values)},      {"mu-offset", join(bc.mu_offsets)},
                               {"p", join(bc.p_grid)},        {"depth", join(bc.depths)},
                               {"K", fqn::io::exact(bc.K)},     {"phi0", bc.phi0},
                               {"radius", bc.radius},         {"kF", fqn::io::exact(bc.k_F)},
                               {"delta", join(bc.deltas)}};
            Table t;
            t.header = {"D", "mu", "p", "regime", "prop1"};
            for (int d : bc.depths) t.header.push_back("prop3_d" + std::to_string(d));
            for (int d : bc.depths) t.header.push_back("prop4_d" + std::to_string(d));
            for (const auto& r : fqn::exp::run_bounds(bc)) {
                std::vector<std::string> row{fqn::io::fmt(r.D), fqn::io::fmt(r.mu), fqn::io::fmt(r.p), r.regime,
                                             fqn::io::fmt(r.prop1)};
                for (double v : r.prop3) row.push_back(fqn::io::fmt(v));
                for (double v : r.prop4) row.push_back(fqn::io::fmt(v));
                t.rows.push_back(row);
            }
            if (c5.format == "json") {
                Table ft;
                ft.header = {"p", "k_F", "delta", "off_surface", "on_surface"};
                for (const auto& r : fqn::exp::run_fermi_limit(bc)) ft.add(r.p, r.k_F, r.delta, r.off_surface, r.on_surface);
                nlohmann::json j;
                j["command"] = "bounds";
                j["config"] = cfg;
                j["columns"] = t.header;
                j["rows"] = fqn::io::table_to_json(t);
                j["fermi2d_columns"] = ft.header;
                j["fermi2d"] = fqn::io::table_to_json(ft);
                fqn::io::write_text(c5.out, j.dump(2) + "\n");
            } else {
                emit(c5, "bounds", cfg, t);
            }
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const fqn::NumericalInvariantError& e) {
        std::cerr << "numerical invariant violated: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::invalid_argument& e) {
        // InputDomainError, UnsupportedConfiguration, DimensionMismatch
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::logic_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    }
    return 0;
}
