// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "tacnode/cli.hpp"
#include "tacnode/tacnode.hpp"

namespace fs = std::filesystem;
using namespace tacnode;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

std::string list(const std::vector<double>& v) {
    std::string s;
    for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.3g", x);
    return s;
}

/// sup over tuples of |approx - limit| for each scale, in scale order
std::vector<double> sup_errors(const cli::ConvergeArgs& a) {
    const auto rows = cli::converge_rows(a);
    std::vector<double> scales;
    for (const auto& r : rows)
        if (std::find(scales.begin(), scales.end(), r.scale) == scales.end()) scales.push_back(r.scale);
    std::vector<double> sup(scales.size(), 0.0);
    for (const auto& r : rows) {
        const size_t i = std::find(scales.begin(), scales.end(), r.scale) - scales.begin();
        sup[i] = std::max(sup[i], std::abs(r.approx - r.limit));
    }
    return sup;
}

/// |approx - limit| per tuple, each in scale order
std::vector<std::vector<double>> tuple_errors(const cli::ConvergeArgs& a) {
    std::map<std::array<double, 4>, std::vector<double>> by;
    std::vector<std::array<double, 4>> order;
    for (const auto& r : cli::converge_rows(a)) {
        if (!by.count(r.args)) order.push_back(r.args);
        by[r.args].push_back(std::abs(r.approx - r.limit));
    }
    std::vector<std::vector<double>> out;
    for (const auto& k : order) out.push_back(by[k]);
    return out;
}

int count_decreasing(const std::vector<std::vector<double>>& e) {
    int n = 0;
    for (const auto& v : e) n += strictly_decreasing(v) ? 1 : 0;
    return n;
}

void suite(int n, const SuiteReport& r) {
    std::string d = r.name + " max residual " + fmt("%.3g", r.max_residual) + " over " + std::to_string(r.rows.size()) +
                    " checks";
    for (const auto& [k, v] : r.extras)
        if (k.rfind("rec5 ratio", 0) == 0) d += "; " + k + " " + fmt("%.4f", v);
    report(n, r.pass, d);
}

void criterion4() {
    cli::ConvergeArgs a;
    a.target = "tacnode";
    const auto sup = sup_errors(a);
    report(4, strictly_decreasing(sup) && sup.back() <= 0.05, "tacnode sup error at L=8,16,32: " + list(sup));
}

void criterion5() {
    cli::ConvergeArgs a;
    a.target = "gue";
    const auto fac = tuple_errors(a);
    const auto sf = sup_errors(a);
    a.chi = "plain";
    const auto pla = tuple_errors(a);
    const auto sp = sup_errors(a);
    const bool pick_fac = sf.back() <= sp.back();
    const auto& sel = pick_fac ? fac : pla;
    const int dec = count_decreasing(sel);
    report(5, dec == static_cast<int>(sel.size()),
           std::to_string(dec) + "/" + std::to_string(sel.size()) +
               " GUE tuples strictly decreasing at eps=.5,.25,.125; sup error with factorial " + list(sf) +
               ", without " + list(sp) + "; data selects " + (pick_fac ? "factorial" : "no factorial"));
}

void criterion6() {
    cli::ConvergeArgs a;
    a.target = "pearcey";
    const auto err = tuple_errors(a);
    const std::vector<double> M{4, 8, 16};
    bool rate = true, small = true;
    for (const auto& v : err) {
        small = small && v.back() <= 0.05;
        for (size_t i = 1; i < M.size(); ++i) {
            const double r = (v[i] / v[0]) / std::sqrt(M[0] / M[i]);
            rate = rate && r >= 0.25 && r <= 4.0;
        }
    }
    const int dec = count_decreasing(err);
    report(6, dec == static_cast<int>(err.size()) && small && rate,
           std::to_string(dec) + "/" + std::to_string(err.size()) +
               " Pearcey tuples strictly decreasing at M=4,8,16; sup error " + list(sup_errors(a)) +
               (rate ? "; within a factor 4 of M^-1/2" : "; off the M^-1/2 rate"));
}

void criterion7() {
    double worst_p = 0.0, worst_b = 0.0;
    for (double dnu : {0.5, 1.0, 2.0})
        for (double dxi : {0.0, 1.0, -2.0})
            worst_p = std::max(worst_p, std::abs(pearcey_single_quadrature(dnu, dxi).value.real() -
                                                 pearcey_single_closed(dnu, dxi)));
    for (int k : {-5, -2, 0, 3, 5})
        for (double a : {0.1, 1.0, 5.0}) {
            const double b = chi_term_bessel(k, a);
            worst_b = std::max(worst_b,
                               std::abs(chi_term_quadrature(k, a).value.real() - b) / std::max(1.0, std::abs(b)));
        }
    report(7, worst_p <= 1e-9 && worst_b <= 1e-9,
           "closed forms: Pearcey 9 pairs max " + fmt("%.2g", worst_p) + ", Bessel 15 pairs max " + fmt("%.2g", worst_b));
}

void criterion8() {
    const ModelParams prm{0.3, 0.5};
    const std::vector<Target> targets{{TargetKind::pair, {{2, 1}, {3, 0}}}, {TargetKind::endpoint, {{1, 0}}}};
    const SimResult res = simulate({6, prm.eps_rate, prm.t, 20000, 1}, targets);
    int ok = 0, total = 0;
    for (int m = 1; m <= 6; ++m)
        for (int k = 1; k <= m; ++k) {
            const GridPoint p{m, 2 * k - m - 1};
            const KernelValue kv = kernel_finite(p, p, prm, Scheme::deformed, 1e-10);
            const SiteStat s = res.occupancy.at(p);
            ++total;
            ok += std::abs(s.freq - kv.value.real()) <= 3 * (s.std_err + kv.err) ? 1 : 0;
        }
    const RhoValue pair = rho(targets[0].points, [&](const GridPoint& a, const GridPoint& b) {
        return kernel_finite(a, b, prm, Scheme::deformed, 1e-10);
    });
    const RhoValue end = endpoint_block_rho(targets[1].points, prm);
    const bool pair_ok = std::abs(res.targets[0].freq - pair.value) <= 3 * res.targets[0].std_err + pair.err;
    const bool end_ok = std::abs(res.targets[1].freq - end.value) <= 3 * res.targets[1].std_err + end.err;
    report(8, ok >= 20 && pair_ok && end_ok,
           "simulator vs kernel: " + std::to_string(ok) + "/" + std::to_string(total) + " sites within 3 sigma; pair " +
               fmt("%.5f", res.targets[0].freq) + " vs " + fmt("%.5f", pair.value) + "; endpoint " +
               fmt("%.5f", res.targets[1].freq) + " vs " + fmt("%.5f", end.value));
}

void criterion9() {
    const double eps = 0.25, t = 2.0, a = t / eps, b = t * eps;
    const long N = 100000;
    const auto occ = estimate_occupancy({1, eps, t, N, 2024});
    double mean = 0.0, m2 = 0.0;
    int within = 0, sites = 0;
    for (const auto& [p, s] : occ) {
        const double x = p.x2 / 2;
        mean += x * s.freq;
        m2 += x * x * s.freq;
        const double pmf = std::exp(-(a + b)) * std::pow(a / b, 0.5 * x) * chi_term_bessel(static_cast<int>(x), std::sqrt(a * b));
        const double se = std::sqrt(pmf * (1 - pmf) / N);
        ++sites;
        within += std::abs(s.freq - pmf) <= 3 * se + 1e-12 ? 1 : 0;
    }
    const double var = m2 - mean * mean;
    const bool mean_ok = std::abs(mean - (a - b)) <= 3 * std::sqrt((a + b) / N);
    // sample variance of a Skellam law: (2 + 1/(a+b)) (a+b)^2 / N
    const bool var_ok = std::abs(var - (a + b)) <= 3 * (a + b) * std::sqrt((2.0 + 1.0 / (a + b)) / N);
    report(9, mean_ok && var_ok,
           "single level: mean " + fmt("%.4f", mean) + " (7.5), variance " + fmt("%.4f", var) + " (8.5), " +
               std::to_string(within) + "/" + std::to_string(sites) + " pmf values within 3 sigma");
}

void criterion10() {
    bool ok = true;
    std::string d;
    for (double e : {1.0, 0.5}) {
        const auto [lo, hi] = cusp_points(e);
        ok = ok && std::abs(lo - (e + 1 / e - 2)) < 1e-12 && std::abs(hi - (e + 1 / e + 2)) < 1e-12;
        d += fmt("cusps eps=%g ", e) + fmt("(%g,", lo) + fmt("%g) ", hi);
    }
    const BoundaryTable table(0.5, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double mu = 1.4 + 0.7 * i;
        worst = std::max(worst, std::abs(saddle({0.0, mu, 1.0, 0.5}, table).density - *density_xi0_closed(0.5, 1.0, mu)));
    }
    ok = ok && worst <= 1e-9;
    d += "; xi=0 closed form max " + fmt("%.2g", worst);
    std::vector<double> zs;
    for (int k = 0; k < 60; ++k) zs.push_back(-6.0 + 0.2003 * k);
    double worst_f = 0.0;
    for (const auto& b : boundary_curve(0.5, 1.0, zs)) {
        const MacroPoint p{b.xi, b.mu, 1.0, 0.5};
        const auto fd = F_derivatives(b.z_real, p);
        worst_f = std::max(worst_f, std::max(std::abs(fd.dF), std::abs(fd.d2F)) / macro_scale(p));
    }
    ok = ok && worst_f <= 1e-9;
    d += "; boundary |F'|,|F''| max " + fmt("%.2g", worst_f);
    double jump = 0.0;
    for (double xi : {-1.0, 0.0, 1.5}) {
        for (const auto& c : table.crossings(xi)) {
            const double lo = saddle({xi, c.mu - 1e-6, 1.0, 0.5}, table).density;
            const double hi = saddle({xi, c.mu + 1e-6, 1.0, 0.5}, table).density;
            jump = std::max(jump, std::abs(hi - lo));
        }
    }
    ok = ok && jump <= 0.01;
    d += "; density jump across boundary max " + fmt("%.2g", jump);
    report(10, ok, d);
}

void criterion11() {
    const fs::path dir = fs::temp_directory_path() / "tacnode_acceptance";
    fs::create_directories(dir);
    const std::string f = (dir / "out").string();
    const std::vector<std::vector<std::string>> cmds{
        {"kernel", "--family", "finite", "--args", "0,3,0,3", "--eps", "0.3", "--t", "0.5"},
        {"kernel", "--family", "tacnode", "--args", "0,0.2,0,0.2"},
        {"kernel", "--family", "gue", "--args", "3,0.1,0,0.6"},
        {"kernel", "--family", "gue-minor", "--args", "2,0.1,1,0.5"},
        {"kernel", "--family", "pearcey", "--args", "0,0.2,1,-0.1"},
        {"simulate", "--levels", "5", "--trials", "500", "--seed", "9"},
        {"density_map", "--xi-steps", "21", "--mu-steps", "31"},
        {"boundary"},
        {"converge", "--target", "gue-minor"},
        {"verify", "--suite", "symmetry"}};
    bool ok = true;
    int n = 0;
    for (const auto& c : cmds) {
        std::string bytes[2];
        for (int rep = 0; rep < 2; ++rep) {
            std::vector<std::string> args{"tacnode_cli"};
            args.insert(args.end(), c.begin(), c.end());
            args.push_back(c[0] == "verify" ? "--json" : "--out");
            args.push_back(f);
            std::vector<const char*> argv;
            for (const auto& s : args) argv.push_back(s.c_str());
            std::ostringstream out, err;
            ok = ok && cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err) == 0;
            std::ifstream in(f, std::ios::binary);
            bytes[rep] = out.str() + std::string(std::istreambuf_iterator<char>(in), {});
        }
        ok = ok && !bytes[0].empty() && bytes[0] == bytes[1];
        ++n;
    }
    fs::remove_all(dir);
    report(11, ok, "CLI determinism: " + std::to_string(n) + " commands run twice, identical bytes");
}

}  // namespace

int main() {
    suite(1, verify_deform());
    suite(2, verify_recurrence());
    suite(3, verify_symmetry());
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    criterion11();
    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
