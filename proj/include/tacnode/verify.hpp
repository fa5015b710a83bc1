#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "tacnode/dynamics.hpp"
#include "tacnode/finite_kernel.hpp"
#include "tacnode/tacnode_kernel.hpp"

namespace tacnode {

struct ResidualRow {
    std::string label;
    double residual = 0.0;
    double err = 0.0;
};

struct SuiteReport {
    std::string name;
    double threshold = 0.0;
    double max_residual = 0.0;
    bool pass = false;
    std::vector<ResidualRow> rows;
    std::vector<std::pair<std::string, double>> extras;
};

namespace detail {

inline void finish(SuiteReport& r) {
    r.max_residual = 0.0;
    for (const auto& row : r.rows) r.max_residual = std::max(r.max_residual, row.residual);
    r.pass = r.max_residual <= r.threshold;
}

inline std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace detail

struct DeformCase {
    GridPoint p1, p2;
    ModelParams params;
};

/// 20 pseudo-random tuples with eps in {0.2, 0.4}, t in {0.1, 0.5}, m <= 6, |x| <= 3.
inline std::vector<DeformCase> deform_cases(std::uint64_t seed = 20240601) {
    Xoshiro256 rng(seed);
    std::vector<DeformCase> out;
    auto pick = [&](int m) {
        if (m % 2 == 1) return GridPoint{m, 2 * (static_cast<int>(rng.below(7)) - 3)};
        return GridPoint{m, 2 * (static_cast<int>(rng.below(6)) - 3) + 1};
    };
    for (int i = 0; i < 20; ++i) {
        const double eps = (i % 2 == 0) ? 0.2 : 0.4;
        const double t = ((i / 2) % 2 == 0) ? 0.1 : 0.5;
        const int m1 = 1 + static_cast<int>(rng.below(6));
        const int m2 = 1 + static_cast<int>(rng.below(6));
        out.push_back({pick(m1), pick(m2), {eps, t}});
    }
    return out;
}

inline SuiteReport verify_deform(double threshold = 1e-8, double tol = 1e-11) {
    SuiteReport r{"deform", threshold};
    for (const auto& c : deform_cases()) {
        FiniteOptions o;
        o.tol = tol;
        o.scheme = Scheme::original;
        KernelValue a = kernel_finite(c.p1, c.p2, c.params, o);
        o.scheme = Scheme::deformed;
        KernelValue b = kernel_finite(c.p1, c.p2, c.params, o);
        r.rows.push_back({"K(" + detail::fmt_num(c.p1.x()) + "," + std::to_string(c.p1.m) + ";" +
                              detail::fmt_num(c.p2.x()) + "," + std::to_string(c.p2.m) + ") eps=" +
                              detail::fmt_num(c.params.eps_rate) + " t=" + detail::fmt_num(c.params.t),
                          std::abs(a.value - b.value), a.err + b.err});
    }
    detail::finish(r);
    return r;
}

struct SymmetryCase {
    TacnodePoint a, b;
};

/// 20 argument tuples, including coincident pairs so that the delta term is exercised.
inline std::vector<SymmetryCase> symmetry_cases() {
    return {{{0, 0.4}, {0, 0.4}},   {{1, 0.3}, {0, 0.7}},    {{-2, 0.3}, {-1, 0.7}},  {{2, -0.5}, {1, 0.5}},
            {{0, -0.2}, {1, -0.6}}, {{-1, 0.0}, {-1, 0.0}},  {{3, 0.25}, {0, 0.25}},  {{-3, -0.4}, {2, 0.1}},
            {{1, 0.9}, {1, -0.9}},  {{0, 0.0}, {2, 0.5}},    {{2, 0.2}, {2, 0.2}},    {{-2, -0.7}, {0, -0.1}},
            {{1, -0.3}, {-1, 0.3}}, {{0, 0.6}, {-2, 0.1}},   {{4, 0.0}, {3, 0.4}},    {{-1, 0.5}, {1, -0.5}},
            {{2, 0.75}, {0, 0.25}}, {{-4, -0.25}, {-3, 0.5}}, {{0, -0.8}, {0, 0.8}},  {{1, 0.1}, {2, 0.1}}};
}

inline SuiteReport verify_symmetry(const std::vector<double>& eps_list = {0.25, 0.5, 1.0}, double threshold = 1e-8,
                                   double tol = 1e-11) {
    SuiteReport r{"symmetry", threshold};
    for (double e : eps_list) {
        TacnodeParams p;
        p.eps_tac = e;
        p.tol = tol;
        for (const auto& c : symmetry_cases()) {
            const auto& [a, b] = c;
            KernelValue k1 = kernel_tacnode({-a.x, a.mu}, {-b.x, b.mu}, p);
            KernelValue k2 = kernel_tacnode({a.x - 1, a.mu}, {b.x - 1, b.mu}, p);
            const std::string tag = "(" + std::to_string(a.x) + "," + detail::fmt_num(a.mu) + ";" +
                                    std::to_string(b.x) + "," + detail::fmt_num(b.mu) + ") eps=" + detail::fmt_num(e);
            r.rows.push_back({"reflection " + tag, std::abs(k1.value - k2.value), k1.err + k2.err});
            KernelValue k3 = kernel_tacnode({a.x, -a.mu}, {b.x, -b.mu}, p);
            KernelValue k4 = kernel_tacnode(a, b, p);
            const double sign = ((a.x - b.x) % 2 == 0) ? 1.0 : -1.0;
            const double delta = (a.x == b.x && a.mu == b.mu) ? 1.0 : 0.0;
            r.rows.push_back({"particle-hole " + tag, std::abs(sign * k3.value + k4.value - delta), k3.err + k4.err});
        }
    }
    detail::finish(r);
    return r;
}

struct RecurrenceCase {
    int x, y, n, m;
    ModelParams params;
};

/// 20 tuples on odd levels; every level touched stays <= 9.
inline std::vector<RecurrenceCase> recurrence_cases() {
    std::vector<RecurrenceCase> out;
    const std::array<std::array<int, 4>, 10> base{{{0, 0, 1, 5},
                                                   {0, 0, 1, 3},
                                                   {1, 0, 3, 5},
                                                   {0, 1, 5, 7},
                                                   {-1, 0, 3, 3},
                                                   {2, -1, 1, 7},
                                                   {0, 0, 5, 7},
                                                   {1, 1, 7, 7},
                                                   {-2, 1, 3, 7},
                                                   {0, -1, 5, 5}}};
    for (const auto& b : base) out.push_back({b[0], b[1], b[2], b[3], {0.2, 0.4}});
    for (const auto& b : base) out.push_back({b[0], b[1], b[2], b[3], {0.35, 0.8}});
    return out;
}

struct Rec5Probe {
    int x, n;
    double r_coarse;  // residual / eps^2 at eps = 0.1
    double r_fine;    // residual / eps^2 at eps = 0.05
    double ratio;
};

/// rec5 residual / eps^2 at coincident arguments for eps = 0.1 and 0.05,
/// holding t / eps fixed.
inline std::vector<Rec5Probe> rec5_probes(double t_over_eps = 2.0, double tol = 1e-12) {
    std::vector<Rec5Probe> out;
    const std::array<std::array<int, 2>, 3> pts{{{0, 1}, {0, 3}, {1, 3}}};
    for (const auto& p : pts) {
        Rec5Probe pr{p[0], p[1], 0, 0, 0};
        for (double eps : {0.1, 0.05}) {
            auto res = recurrence_residuals(p[0], p[0], p[1], std::max(3, p[1]), ModelParams{eps, t_over_eps * eps}, tol);
            if (p[1] < 3) {
                // rec5 is evaluated at (x, n; x, n); recompute directly when n = 1
                FiniteOptions o;
                o.tol = tol;
                const ModelParams prm{eps, t_over_eps * eps};
                auto K = [&](int la, int lb) {
                    return kernel_finite(GridPoint{la, 2 * p[0]}, GridPoint{lb, 2 * p[0]}, prm, o).value;
                };
                const int n = p[1];
                cplx c = -K(n + 2, n) + K(n, n) + K(n + 2, n + 2) - K(n, n + 2) - 1.0;
                res.rec5_over_eps2 = c.real() / (eps * eps);
            }
            (eps == 0.1 ? pr.r_coarse : pr.r_fine) = res.rec5_over_eps2;
        }
        pr.ratio = pr.r_coarse / pr.r_fine;
        out.push_back(pr);
    }
    return out;
}

inline SuiteReport verify_recurrence(double threshold = 1e-8, double tol = 1e-11) {
    SuiteReport r{"recurrence", threshold};
    for (const auto& c : recurrence_cases()) {
        auto res = recurrence_residuals(c.x, c.y, c.n, c.m, c.params, tol);
        const std::string tag = "(x=" + std::to_string(c.x) + ",y=" + std::to_string(c.y) + ",n=" + std::to_string(c.n) +
                                ",m=" + std::to_string(c.m) + ") eps=" + detail::fmt_num(c.params.eps_rate) +
                                " t=" + detail::fmt_num(c.params.t);
        r.rows.push_back({"rec1 " + tag, res.rec1, res.quad_err});
        r.rows.push_back({"rec2 " + tag, res.rec2, res.quad_err});
    }
    detail::finish(r);
    bool ratios_ok = true;
    for (const auto& p : rec5_probes()) {
        const std::string tag = "(x=" + std::to_string(p.x) + ",n=" + std::to_string(p.n) + ")";
        r.extras.push_back({"rec5/eps^2 eps=0.1 " + tag, p.r_coarse});
        r.extras.push_back({"rec5/eps^2 eps=0.05 " + tag, p.r_fine});
        r.extras.push_back({"rec5 ratio " + tag, p.ratio});
        ratios_ok = ratios_ok && p.ratio >= 0.5 && p.ratio <= 2.0;
    }
    r.extras.push_back({"rec5 ratios within [0.5,2]", ratios_ok ? 1.0 : 0.0});
    r.pass = r.pass && ratios_ok;
    return r;
}

}  // namespace tacnode
