#pragma once

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "tacnode/correlation.hpp"
#include "tacnode/dynamics.hpp"
#include "tacnode/limit_kernels.hpp"
#include "tacnode/macro_geometry.hpp"
#include "tacnode/verify.hpp"

namespace tacnode::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_verify_failed = 1;
inline constexpr int exit_usage = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads {"schema": 1, "<subcommand>": {"option": value, ...}, "option": value}.
/// Keys may use '-' or '_'; arrays become repeated values, nested arrays
/// become comma-joined tuples.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{\"schema\": 1}\n"; }

    std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
        if (!j.contains("schema") || j["schema"] != 1) throw CLI::ConversionError("config needs \"schema\": 1");
        std::vector<CLI::ConfigItem> items;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.key() == "schema") continue;
            if (it->is_object()) {
                for (auto jt = it->begin(); jt != it->end(); ++jt) items.push_back(item({it.key()}, jt.key(), *jt));
            } else {
                items.push_back(item({}, it.key(), *it));
            }
        }
        return items;
    }

private:
    static std::string scalar(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number()) return v.dump();
        if (v.is_array()) {
            std::string s;
            for (const auto& e : v) s += (s.empty() ? "" : ",") + scalar(e);
            return s;
        }
        throw CLI::ConversionError("unsupported config value: " + v.dump());
    }

    static CLI::ConfigItem item(std::vector<std::string> parents, std::string name, const nlohmann::json& v) {
        for (auto& c : name)
            if (c == '_') c = '-';
        CLI::ConfigItem r;
        r.parents = std::move(parents);
        r.name = std::move(name);
        if (v.is_array()) {
            for (const auto& e : v) r.inputs.push_back(scalar(e));
        } else {
            r.inputs.push_back(scalar(v));
        }
        return r;
    }
};

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<double> parse_tuple(const std::string& s, size_t arity) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t pos = 0;
        double v;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            throw UsageError("cannot parse number '" + tok + "' in tuple '" + s + "'");
        }
        if (tok.find_first_not_of(" \t", pos) != std::string::npos) throw UsageError("trailing text in '" + tok + "'");
        out.push_back(v);
    }
    if (out.size() != arity)
        throw UsageError("tuple '" + s + "' needs " + std::to_string(arity) + " comma-separated numbers");
    return out;
}

inline std::vector<double> parse_list(const std::vector<std::string>& raw) {
    std::vector<double> out;
    for (const auto& r : raw) {
        std::stringstream ss(r);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.find_first_not_of(" \t") == std::string::npos) continue;
            try {
                out.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw UsageError("cannot parse number '" + tok + "'");
            }
        }
    }
    return out;
}

inline int as_int(double v, const char* what) {
    if (v != std::floor(v) || std::abs(v) > 1e9) throw UsageError(std::string(what) + " must be an integer");
    return static_cast<int>(v);
}

/// Destination that is either a file or the given stream when the path is "-".
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (path.empty() || path == "-") {
            os_ = &fallback;
        } else {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw UsageError("cannot open output file '" + path + "'");
            os_ = file_.get();
        }
    }
    std::ostream& operator*() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

inline ChiNormalization parse_chi(const std::string& s) {
    return s == "plain" ? ChiNormalization::plain : ChiNormalization::factorial;
}

// ---------------------------------------------------------------- kernel

struct KernelArgs {
    std::string family;
    std::vector<std::string> args;
    double tol = 1e-10;
    double eps = 0.5;
    double t = 1.0;
    double eps_tac = 0.5;
    std::string scheme = "deformed";
    std::string chi = "factorial";
    std::string out = "-";
};

inline void cmd_kernel(const KernelArgs& a, std::ostream& stdout_) {
    if (a.args.empty()) throw UsageError("kernel needs at least one --args tuple");
    std::vector<std::vector<double>> tuples;
    for (const auto& s : a.args) tuples.push_back(parse_tuple(s, 4));
    std::vector<std::string> rows;
    for (const auto& v : tuples) {
        KernelValue k;
        if (a.family == "finite") {
            FiniteOptions o;
            o.tol = a.tol;
            o.scheme = a.scheme == "original" ? Scheme::original : a.scheme == "sigma" ? Scheme::sigma : Scheme::deformed;
            k = kernel_finite(grid_point(v[0], as_int(v[1], "m1")), grid_point(v[2], as_int(v[3], "m2")),
                              ModelParams{a.eps, a.t}, o);
        } else if (a.family == "tacnode") {
            TacnodeParams p;
            p.eps_tac = a.eps_tac;
            p.tol = a.tol;
            k = kernel_tacnode({as_int(v[0], "x1"), v[1]}, {as_int(v[2], "x2"), v[3]}, p);
        } else if (a.family == "gue" || a.family == "gue-minor") {
            LimitOptions o;
            o.tol = a.tol;
            o.chi = parse_chi(a.chi);
            const GUEPoint p1{as_int(v[0], "x1"), v[1]}, p2{as_int(v[2], "x2"), v[3]};
            k = a.family == "gue" ? kernel_gue_limit(p1, p2, o) : kernel_gue_minor(p1, p2, o);
        } else {
            LimitOptions o;
            o.tol = a.tol;
            k = kernel_pearcey({v[0], v[1]}, {v[2], v[3]}, o);
        }
        rows.push_back(a.family + "," + num(v[0]) + "," + num(v[1]) + "," + num(v[2]) + "," + num(v[3]) + "," +
                       num(k.value.real()) + "," + num(k.value.imag()) + "," + num(k.err));
    }
    Sink sink(a.out, stdout_);
    *sink << "family,x1,m1_or_mu1,x2,m2_or_mu2,re,im,err\n";
    for (const auto& r : rows) *sink << r << "\n";
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    int levels = 6;
    double eps = 0.3;
    double t = 0.5;
    long trials = 1000;
    std::uint64_t seed = 1;
    std::string out = "-";
    std::string snapshots;
    long snapshot_count = 10;
    std::string endpoints;
    std::string targets_out;
    bool compare_kernel = false;
    double tol = 1e-10;
};

inline std::vector<Target> read_targets(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open targets file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("targets file is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("schema") || j["schema"] != 1 || !j.contains("targets") ||
        !j["targets"].is_array())
        throw UsageError("targets file needs \"schema\": 1 and a \"targets\" array");
    std::vector<Target> out;
    for (const auto& t : j["targets"]) {
        Target tg;
        const std::string kind = t.value("kind", "");
        if (kind == "pair") {
            tg.kind = TargetKind::pair;
        } else if (kind == "endpoint") {
            tg.kind = TargetKind::endpoint;
        } else {
            throw UsageError("target kind must be pair or endpoint");
        }
        if (!t.contains("points") || !t["points"].is_array() || t["points"].empty())
            throw UsageError("target needs a nonempty \"points\" array of [x, m]");
        for (const auto& p : t["points"]) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number_integer())
                throw UsageError("target points are [x, m] with integer m");
            tg.points.push_back(grid_point(p[0].get<double>(), p[1].get<int>()));
        }
        out.push_back(std::move(tg));
    }
    return out;
}

inline void cmd_simulate(const SimulateArgs& a, std::ostream& stdout_) {
    const SimConfig cfg{a.levels, a.eps, a.t, a.trials, a.seed};
    check_sim_config(cfg);
    if (a.snapshot_count < 0) throw DomainError("snapshot-count must be nonnegative");
    std::vector<Target> targets;
    if (!a.endpoints.empty()) targets = read_targets(a.endpoints);
    const SimResult res = simulate(cfg, targets, a.snapshots.empty() ? 0 : a.snapshot_count);

    Sink occ(a.out, stdout_);
    *occ << "m,x2,freq,stderr,trials\n";
    for (const auto& [p, s] : res.occupancy)
        *occ << p.m << "," << p.x2 << "," << num(s.freq) << "," << num(s.std_err) << "," << res.trials << "\n";

    if (!a.snapshots.empty()) {
        Sink snap(a.snapshots, stdout_);
        *snap << "trial,m,x2\n";
        for (size_t i = 0; i < res.snapshots.size(); ++i)
            for (int m = 1; m <= cfg.levels; ++m)
                for (int k = 1; k <= m; ++k) *snap << i << "," << m << "," << res.snapshots[i].at(m, k) << "\n";
    }

    if (!targets.empty()) {
        Sink tout(a.targets_out, stdout_);
        *tout << "index,kind,points,freq,stderr,trials";
        if (a.compare_kernel) *tout << ",kernel,kernel_err";
        *tout << "\n";
        for (size_t i = 0; i < targets.size(); ++i) {
            std::string pts;
            for (const auto& p : targets[i].points)
                pts += (pts.empty() ? "" : " ") + std::to_string(p.m) + ":" + std::to_string(p.x2);
            *tout << i << "," << (targets[i].kind == TargetKind::pair ? "pair" : "endpoint") << "," << pts << ","
                  << num(res.targets[i].freq) << "," << num(res.targets[i].std_err) << "," << res.trials;
            if (a.compare_kernel) {
                const ModelParams prm{a.eps, a.t};
                RhoValue r;
                if (targets[i].kind == TargetKind::pair) {
                    r = rho(targets[i].points,
                            [&](const GridPoint& p, const GridPoint& q) { return kernel_finite(p, q, prm, Scheme::deformed, a.tol); });
                } else {
                    r = endpoint_block_rho(targets[i].points, prm, a.tol);
                }
                *tout << "," << num(r.value) << "," << num(r.err);
            }
            *tout << "\n";
        }
    }
}

// ---------------------------------------------------------------- density_map / boundary

struct DensityArgs {
    double eps = 0.5;
    double tau = 1.0;
    double xi_min = -4, xi_max = 4;
    int xi_steps = 81;
    double mu_min = 0, mu_max = 12;
    int mu_steps = 121;
    std::string out = "-";
};

inline double grid_value(double lo, double hi, int steps, int i) {
    if (steps == 1) return lo;
    // exact endpoints and a symmetric grid through zero
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

inline void cmd_density_map(const DensityArgs& a, std::ostream& stdout_) {
    if (a.xi_steps < 1 || a.mu_steps < 1) throw DomainError("grid steps must be positive");
    if (!(a.xi_max >= a.xi_min) || !(a.mu_max >= a.mu_min) || a.mu_min < 0)
        throw DomainError("need xi-min <= xi-max and 0 <= mu-min <= mu-max");
    if (!(a.eps > 0 && a.eps < 1) || !(a.tau > 0)) throw DomainError("need eps in (0,1) and tau > 0");
    const BoundaryTable table(a.eps, a.tau);
    Sink sink(a.out, stdout_);
    *sink << "xi,mu,region,density\n";
    for (int i = 0; i < a.xi_steps; ++i) {
        const double xi = grid_value(a.xi_min, a.xi_max, a.xi_steps, i);
        const auto top = table.max_mu(xi);
        for (int j = 0; j < a.mu_steps; ++j) {
            const double mu = grid_value(a.mu_min, a.mu_max, a.mu_steps, j);
            const auto r = detail::saddle_impl(MacroPoint{xi, mu, a.tau, a.eps}, [&](double) { return top; });
            *sink << num(xi) << "," << num(mu) << "," << region_name(r.region) << "," << num(r.density) << "\n";
        }
    }
}

struct BoundaryArgs {
    double eps = 0.5;
    double tau = 1.0;
    int samples = 200;
    double xi_max = 10;
    double mu_max = 50;
    std::string out = "-";
};

/// z samples on the four real branches separated by 0, eps, 1/eps, always including the cusps +-1.
inline std::vector<double> boundary_samples(double eps, int n) {
    std::vector<double> z{-1.0, 1.0};
    for (int k = 1; k < n; ++k) {
        const double u = static_cast<double>(k) / n;
        z.push_back(-std::pow(10.0, 3.0 * (2.0 * u - 1.0)));  // (-1e3, -1e-3)
        z.push_back(eps * u);
        z.push_back(eps + (1.0 / eps - eps) * u);
        z.push_back(1.0 / eps * std::pow(10.0, 3.0 * u));
    }
    std::sort(z.begin(), z.end());
    z.erase(std::unique(z.begin(), z.end()), z.end());
    return z;
}

inline void cmd_boundary(const BoundaryArgs& a, std::ostream& stdout_) {
    if (a.samples < 2) throw DomainError("samples must be at least 2");
    if (!(a.eps > 0 && a.eps < 1) || !(a.tau > 0)) throw DomainError("need eps in (0,1) and tau > 0");
    const auto pts = boundary_curve(a.eps, a.tau, boundary_samples(a.eps, a.samples));
    Sink sink(a.out, stdout_);
    *sink << "z,xi,mu\n";
    for (const auto& p : pts)
        if (std::abs(p.xi) <= a.xi_max && p.mu <= a.mu_max)
            *sink << num(p.z_real) << "," << num(p.xi) << "," << num(p.mu) << "\n";
}

// ---------------------------------------------------------------- converge

struct ConvergeArgs {
    std::string target;
    std::vector<std::string> scales;
    bool scales_given = false;
    std::vector<std::string> tuples;
    double eps_tac = 0.5;
    double mu = 0.0;
    double tol = 1e-10;
    std::string chi = "factorial";
    bool xi_effective = false;
    std::string out = "-";
};

inline std::vector<double> default_scales(const std::string& target) {
    if (target == "gue" || target == "gue-minor") return {0.5, 0.25, 0.125};
    if (target == "pearcey") return {4, 8, 16};
    return {8, 16, 32};
}

inline std::vector<std::string> default_tuples(const std::string& target) {
    // mu in (1/8)Z keeps 2L^2(1 + mu/L) an even integer for L = 8, 16, 32
    if (target == "tacnode") return {"0,0.25,0,0.25", "1,0,0,0.375", "0,0.375,-1,-0.125", "-1,0,0,0", "2,0.25,1,-0.25"};
    if (target == "gue") return {"3,0.1,0,0.6", "1,0.5,2,0.2", "0,0.4,0,0.4", "2,0,1,0.3", "1,-0.2,1,0.5",
                                 "-1,0.4,-2,0.1", "-2,0.3,-1,0.5", "-1,0.2,-1,0.2", "-3,0,-1,0.4", "-1,-0.5,-2,-0.2"};
    if (target == "gue-minor") return {"1,0.3,1,0.3", "2,0.1,1,0.5", "1,0.4,2,0.2", "3,0,2,0.4", "2,0.5,3,-0.1"};
    if (target == "pearcey") return {"0,0.2,0,0.2", "0,0.4,0,0.1", "0,-0.2,0,0.3", "0,0,0,0.5", "0,0.1,0,-0.3"};
    return {"0,0,0,0", "0,0,0,1", "0,1,0,0", "1,0,0,1", "0,-1,-1,1", "0,0,0,2"};
}

struct ConvergeRow {
    double scale;
    std::array<double, 4> args;
    cplx approx, limit;
};

inline std::vector<ConvergeRow> converge_rows(const ConvergeArgs& a) {
    const std::string& tg = a.target;
    std::vector<double> scales = a.scales_given ? parse_list(a.scales) : default_scales(tg);
    if (scales.empty()) throw UsageError("converge needs a nonempty --scales list");
    const auto tuple_strs = a.tuples.empty() ? default_tuples(tg) : a.tuples;
    std::vector<ConvergeRow> rows;
    for (const auto& ts : tuple_strs) {
        const auto v = parse_tuple(ts, 4);
        const std::array<double, 4> args{v[0], v[1], v[2], v[3]};
        cplx limit;
        TacnodeParams tp;
        tp.eps_tac = a.eps_tac;
        tp.tol = a.tol;
        LimitOptions lo;
        lo.tol = a.tol;
        lo.chi = parse_chi(a.chi);
        if (tg == "tacnode") {
            limit = kernel_tacnode({as_int(v[0], "x1"), v[1]}, {as_int(v[2], "x2"), v[3]}, tp).value;
        } else if (tg == "gue") {
            limit = kernel_gue_limit({as_int(v[0], "x1"), v[1]}, {as_int(v[2], "x2"), v[3]}, lo).value;
        } else if (tg == "gue-minor") {
            limit = kernel_gue_minor({as_int(v[0], "x1"), v[1]}, {as_int(v[2], "x2"), v[3]}, lo).value;
        } else if (tg == "nearby-sections") {
            limit = nearby_limit(as_int(v[0], "x1"), as_int(v[1], "dm1"), as_int(v[2], "x2"), as_int(v[3], "dm2"), a.mu, tp)
                        .value;
        }
        for (double s : scales) {
            if (!(s > 0.0)) throw DomainError("scales must be positive");
            ConvergeRow r{s, args, {}, limit};
            if (tg == "tacnode") {
                r.approx = scaled_finite_for_tacnode(s, a.eps_tac, {as_int(v[0], "x1"), v[1]}, {as_int(v[2], "x2"), v[3]},
                                                     a.tol)
                               .value;
            } else if (tg == "gue") {
                r.approx = scaled_tacnode_for_gue(s, {as_int(v[0], "x1"), v[1]}, {as_int(v[2], "x2"), v[3]}, tp).value;
            } else if (tg == "gue-minor") {
                r.approx =
                    scaled_tacnode_for_gue_minor(s, {as_int(v[0], "x1"), v[1]}, {as_int(v[2], "x2"), v[3]}, tp).value;
            } else if (tg == "pearcey") {
                const PearceyPoint p1{v[0], v[1]}, p2{v[2], v[3]};
                r.approx = scaled_tacnode_for_pearcey(s, p1, p2, a.tol).value;
                PearceyPoint q1 = p1, q2 = p2;
                if (a.xi_effective) {
                    q1.xi = pearcey_xi_effective(s, p1.xi);
                    q2.xi = pearcey_xi_effective(s, p2.xi);
                }
                r.limit = kernel_pearcey(q1, q2, lo).value;
            } else {
                r.approx = scaled_finite_nearby(s, a.eps_tac, as_int(v[0], "x1"), as_int(v[1], "dm1"), as_int(v[2], "x2"),
                                                as_int(v[3], "dm2"), a.mu, a.tol)
                               .value;
            }
            rows.push_back(r);
        }
    }
    return rows;
}

inline void cmd_converge(const ConvergeArgs& a, std::ostream& stdout_) {
    const auto rows = converge_rows(a);
    Sink sink(a.out, stdout_);
    *sink << "scale,x1,mu1_or_nu1,x2,mu2_or_nu2,approx_re,approx_im,limit_re,limit_im,abs_err\n";
    for (const auto& r : rows) {
        *sink << num(r.scale);
        for (double v : r.args) *sink << "," << num(v);
        *sink << "," << num(r.approx.real()) << "," << num(r.approx.imag()) << "," << num(r.limit.real()) << ","
              << num(r.limit.imag()) << "," << num(std::abs(r.approx - r.limit)) << "\n";
    }
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    std::string suite = "all";
    double threshold = 0.0;  // 0 keeps each suite's default
    double tol = 1e-11;
    std::string json;
};

inline bool cmd_verify(const VerifyArgs& a, std::ostream& out) {
    std::vector<SuiteReport> reports;
    const double thr = a.threshold > 0.0 ? a.threshold : 1e-8;
    if (a.suite == "deform" || a.suite == "all") reports.push_back(verify_deform(thr, a.tol));
    if (a.suite == "symmetry" || a.suite == "all") reports.push_back(verify_symmetry({0.25, 0.5, 1.0}, thr, a.tol));
    if (a.suite == "recurrence" || a.suite == "all") reports.push_back(verify_recurrence(thr, a.tol));
    bool ok = true;
    nlohmann::json rep = {{"schema", 1}, {"suites", nlohmann::json::array()}};
    for (const auto& r : reports) {
        ok = ok && r.pass;
        out << r.name << ": max_residual " << num(r.max_residual) << " threshold " << num(r.threshold) << " "
            << (r.pass ? "PASS" : "FAIL") << "\n";
        for (const auto& [k, v] : r.extras) out << "  " << k << " " << num(v) << "\n";
        if (!r.pass)
            for (const auto& row : r.rows)
                if (row.residual > r.threshold)
                    out << "  over threshold: " << row.label << " residual " << num(row.residual) << "\n";
        nlohmann::json s = {{"name", r.name},
                            {"threshold", r.threshold},
                            {"max_residual", r.max_residual},
                            {"pass", r.pass},
                            {"rows", nlohmann::json::array()},
                            {"extras", nlohmann::json::object()}};
        for (const auto& row : r.rows)
            s["rows"].push_back({{"label", row.label}, {"residual", row.residual}, {"err", row.err}});
        for (const auto& [k, v] : r.extras) s["extras"][k] = v;
        rep["suites"].push_back(std::move(s));
    }
    rep["pass"] = ok;
    if (!a.json.empty()) {
        Sink sink(a.json, out);
        *sink << rep.dump(2) << "\n";
    }
    return ok;
}

// ---------------------------------------------------------------- driver

/// Parses and runs one command; returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Numerical laboratory for the push-block interlacing particle process"};
    app.name("tacnode_cli");
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config with \"schema\": 1; flags override it");
    app.require_subcommand(1);
    app.fallthrough();

    KernelArgs ka;
    auto* kernel = app.add_subcommand("kernel", "Evaluate a kernel on argument tuples");
    kernel->add_option("--family", ka.family, "Kernel family")
        ->required()
        ->check(CLI::IsMember({"finite", "tacnode", "gue", "gue-minor", "pearcey"}));
    kernel->add_option("--args", ka.args, "Tuples x1,m1_or_mu1,x2,m2_or_mu2 (pearcey: xi1,nu1,xi2,nu2)")
        ->allow_extra_args();
    kernel->add_option("--tol", ka.tol, "Quadrature tolerance")->capture_default_str();
    kernel->add_option("--eps", ka.eps, "Jump-rate parameter of the finite process")->capture_default_str();
    kernel->add_option("--t", ka.t, "Time of the finite process")->capture_default_str();
    kernel->add_option("--eps-tac", ka.eps_tac, "Parameter of the tacnode kernel")->capture_default_str();
    kernel->add_option("--scheme", ka.scheme, "Contour scheme of the finite kernel")
        ->check(CLI::IsMember({"original", "deformed", "sigma"}))
        ->capture_default_str();
    kernel->add_option("--chi-normalization", ka.chi, "Indicator normalization of the GUE-type kernels")
        ->check(CLI::IsMember({"plain", "factorial"}))
        ->capture_default_str();
    kernel->add_option("--out", ka.out, "Output CSV, '-' for stdout")->capture_default_str();

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo runs of the push-block dynamics");
    sim->add_option("--levels", sa.levels, "Number of levels M")->capture_default_str();
    sim->add_option("--eps", sa.eps, "Jump-rate parameter in (0,1)")->capture_default_str();
    sim->add_option("--t", sa.t, "Final time")->capture_default_str();
    sim->add_option("--trials", sa.trials, "Number of independent trials")->capture_default_str();
    sim->add_option("--seed", sa.seed, "Master seed")->capture_default_str();
    sim->add_option("--out", sa.out, "Occupancy CSV, '-' for stdout")->capture_default_str();
    sim->add_option("--snapshots", sa.snapshots, "CSV of terminal configurations of the first trials");
    sim->add_option("--snapshot-count", sa.snapshot_count, "Trials kept for --snapshots")->capture_default_str();
    sim->add_option("--endpoints", sa.endpoints, "JSON file of pair and endpoint targets");
    sim->add_option("--targets-out", sa.targets_out, "CSV for target frequencies, stdout if omitted");
    sim->add_flag("--compare-kernel", sa.compare_kernel, "Add kernel determinants to the target CSV");
    sim->add_option("--tol", sa.tol, "Quadrature tolerance for --compare-kernel")->capture_default_str();

    DensityArgs da;
    auto* dmap = app.add_subcommand("density_map", "Limit density and region over a (xi, mu) grid");
    dmap->add_option("--eps", da.eps, "Jump-rate parameter in (0,1)")->capture_default_str();
    dmap->add_option("--tau", da.tau, "Macroscopic time")->capture_default_str();
    dmap->add_option("--xi-min", da.xi_min)->capture_default_str();
    dmap->add_option("--xi-max", da.xi_max)->capture_default_str();
    dmap->add_option("--xi-steps", da.xi_steps)->capture_default_str();
    dmap->add_option("--mu-min", da.mu_min)->capture_default_str();
    dmap->add_option("--mu-max", da.mu_max)->capture_default_str();
    dmap->add_option("--mu-steps", da.mu_steps)->capture_default_str();
    dmap->add_option("--out", da.out, "Output CSV, '-' for stdout")->capture_default_str();

    BoundaryArgs ba;
    auto* bnd = app.add_subcommand("boundary", "Boundary curve of the liquid region");
    bnd->add_option("--eps", ba.eps, "Jump-rate parameter in (0,1)")->capture_default_str();
    bnd->add_option("--tau", ba.tau, "Macroscopic time")->capture_default_str();
    bnd->add_option("--samples", ba.samples, "Samples per real branch")->capture_default_str();
    bnd->add_option("--xi-max", ba.xi_max, "Drop points with |xi| above this")->capture_default_str();
    bnd->add_option("--mu-max", ba.mu_max, "Drop points with mu above this")->capture_default_str();
    bnd->add_option("--out", ba.out, "Output CSV, '-' for stdout")->capture_default_str();

    ConvergeArgs ca;
    auto* conv = app.add_subcommand("converge", "Scaled kernels against their limits");
    conv->add_option("--target", ca.target, "Limit theorem")
        ->required()
        ->check(CLI::IsMember({"tacnode", "gue", "gue-minor", "pearcey", "nearby-sections"}));
    auto* scales_opt = conv->add_option("--scales", ca.scales, "Scales L, eps or M (comma or space separated)")
                           ->expected(0, CLI::detail::expected_max_vector_size);
    conv->add_option("--tuples", ca.tuples, "Argument tuples; nearby-sections uses x1,dm1,x2,dm2");
    conv->add_option("--eps-tac", ca.eps_tac, "Tacnode parameter for tacnode and nearby-sections")->capture_default_str();
    conv->add_option("--mu", ca.mu, "Section height for nearby-sections")->capture_default_str();
    conv->add_option("--tol", ca.tol, "Quadrature tolerance")->capture_default_str();
    conv->add_option("--chi-normalization", ca.chi, "Indicator normalization of the GUE-type limits")
        ->check(CLI::IsMember({"plain", "factorial"}))
        ->capture_default_str();
    conv->add_flag("--xi-effective", ca.xi_effective, "Pearcey: compare at the xi realized on the lattice");
    conv->add_option("--out", ca.out, "Output CSV, '-' for stdout")->capture_default_str();

    VerifyArgs va;
    auto* ver = app.add_subcommand("verify", "Identity suites with residual report");
    ver->add_option("--suite", va.suite)
        ->check(CLI::IsMember({"deform", "symmetry", "recurrence", "all"}))
        ->capture_default_str();
    ver->add_option("--threshold", va.threshold, "Residual threshold (default 1e-8)");
    ver->add_option("--tol", va.tol, "Quadrature tolerance")->capture_default_str();
    ver->add_option("--json", va.json, "Write a JSON residual report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (kernel->parsed()) cmd_kernel(ka, out);
        if (sim->parsed()) cmd_simulate(sa, out);
        if (dmap->parsed()) cmd_density_map(da, out);
        if (bnd->parsed()) cmd_boundary(ba, out);
        if (conv->parsed()) {
            ca.scales_given = scales_opt->count() > 0 || !ca.scales.empty();
            cmd_converge(ca, out);
        }
        if (ver->parsed()) return cmd_verify(va, out) ? exit_ok : exit_verify_failed;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const IndexError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const TargetOutOfRange& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_verify_failed;
    }
    return exit_ok;
}

}  // namespace tacnode::cli
