#pragma once

#include <cmath>
#include <compare>

#include "tacnode/finite_kernel.hpp"
#include "tacnode/tacnode_kernel.hpp"

namespace tacnode {

struct GUEPoint {
    int x = 0;
    double mu = 0.0;
    auto operator<=>(const GUEPoint&) const = default;
};

struct PearceyPoint {
    double xi = 0.0;
    double nu = 0.0;
    auto operator<=>(const PearceyPoint&) const = default;
};

enum class GueBranch { negative, nonnegative };

/// How the indicator term of the GUE-type kernels is normalized:
/// factorial divides (mu2-mu1)^k by k!, plain omits the factorial.
enum class ChiNormalization { factorial, plain };

struct LimitOptions {
    double tol = 1e-10;
    int n0 = 64;
    long n_max = 8192;
    ChiNormalization chi = ChiNormalization::factorial;
    double line_offset = 2.0;
    double cross_offset = 0.5;
};

namespace detail {

inline double chi_power(double dmu, int k, ChiNormalization norm) {
    double v = std::pow(dmu, k);
    if (norm == ChiNormalization::factorial) v /= std::tgamma(k + 1.0);
    return v;
}

struct GueFactors {
    int w_power;  // exponent of w in the w-factor
    int z_power;  // exponent of z in the z-factor
    int chi_k;    // exponent of (mu2 - mu1); negative when the indicator vanishes
};

inline double line_truncation(double offset, double mu2, int z_power) {
    auto h = [&](double s) {
        const cplx z{offset, s};
        return (mu2 * z + 0.5 * z * z).real() + z_power * std::log(std::abs(z));
    };
    return scan_truncation(h);
}

// Shared double integral of the GUE-type kernels:
// (1/(2 pi i)^2) oint_{|w|=1} int_{Re z = offset, downward}
//   e^{mu2 z + z^2/2 - mu1 w - w^2/2} z^{zp} w^{wp} / (w - z)
inline KernelValue gue_double(double mu1, double mu2, int wp, int zp, const LimitOptions& o) {
    auto fw = [&](cplx w) { return -mu1 * w - 0.5 * w * w + static_cast<double>(wp) * std::log(w); };
    auto fz = [&](cplx z) { return mu2 * z + 0.5 * z * z + static_cast<double>(zp) * std::log(z); };
    if (!(o.line_offset > 1.0)) throw ContourConflict("vertical line must lie right of the unit circle");
    const double T = line_truncation(o.line_offset, mu2, zp);
    return integrate_double_adaptive(fw, ContourSet{circle(0.0, 1.0)}, fz,
                                     ContourSet{vertical_line(o.line_offset, T, -1)}, InvDiff{},
                                     1.0 / (two_pi_i * two_pi_i), AdaptiveOptions{o.tol, o.n0, o.n_max});
}

inline GueFactors gue_factors(const GUEPoint& a, const GUEPoint& b, GueBranch br) {
    if (br == GueBranch::nonnegative) return {-(a.x + 1), b.x, a.x >= b.x ? a.x - b.x : -1};
    return {a.x, -(b.x + 1), a.x <= b.x ? b.x - a.x : -1};
}

inline GueFactors gue_minor_factors(const GUEPoint& a, const GUEPoint& b) {
    return {-a.x, b.x, b.x < a.x ? a.x - b.x - 1 : -1};
}

inline KernelValue gue_assemble(const GUEPoint& a, const GUEPoint& b, const GueFactors& f, const LimitOptions& o) {
    KernelValue out = gue_double(a.mu, b.mu, f.w_power, f.z_power, o);
    if (a.mu < b.mu && f.chi_k >= 0) out.value -= chi_power(b.mu - a.mu, f.chi_k, o.chi);
    return out;
}

}  // namespace detail

inline KernelValue kernel_gue_limit(const GUEPoint& a, const GUEPoint& b, GueBranch branch,
                                    const LimitOptions& o = {}) {
    const bool nonneg = a.x >= 0 && b.x >= 0;
    const bool neg = a.x < 0 && b.x < 0;
    if (!nonneg && !neg) return {};
    if ((branch == GueBranch::nonnegative) != nonneg) throw DomainError("branch does not match the signs of x");
    return detail::gue_assemble(a, b, detail::gue_factors(a, b, branch), o);
}

inline KernelValue kernel_gue_limit(const GUEPoint& a, const GUEPoint& b, const LimitOptions& o = {}) {
    if (a.x >= 0 && b.x >= 0) return kernel_gue_limit(a, b, GueBranch::nonnegative, o);
    if (a.x < 0 && b.x < 0) return kernel_gue_limit(a, b, GueBranch::negative, o);
    return {};
}

inline KernelValue kernel_gue_minor(const GUEPoint& a, const GUEPoint& b, const LimitOptions& o = {}) {
    if (a.x < 0 || b.x < 0) throw DomainError("kernel_gue_minor needs x >= 0");
    return detail::gue_assemble(a, b, detail::gue_minor_factors(a, b), o);
}

/// Double integral of the GUE-type kernels computed term by term from the
/// geometric expansion 1/(w-z) = -(1/z) sum_k (w/z)^k, valid for |w| < |z|.
/// Only finitely many terms survive because the circle integrals vanish
/// once the power of w is nonnegative.
inline KernelValue gue_double_series(double mu1, double mu2, int wp, int zp, const LimitOptions& o = {}) {
    KernelValue out;
    const double T = detail::line_truncation(o.line_offset, mu2, zp - 1);
    const ContourSet line{vertical_line(o.line_offset, T, -1)};
    const ContourSet unit{circle(0.0, 1.0)};
    for (int k = 0; wp + k < 0; ++k) {
        auto fc = [&](cplx w) { return std::exp(-mu1 * w - 0.5 * w * w + static_cast<double>(wp + k) * std::log(w)); };
        auto fl = [&](cplx z) { return std::exp(mu2 * z + 0.5 * z * z + static_cast<double>(zp - k - 1) * std::log(z)); };
        KernelValue c = integrate_adaptive(fc, unit, o.tol);
        KernelValue l = integrate_adaptive(fl, line, o.tol);
        out.value -= c.value * l.value / (two_pi_i * two_pi_i);
        out.err += (c.err * std::abs(l.value) + l.err * std::abs(c.value)) / (4 * pi * pi);
    }
    return out;
}

inline double pearcey_single_closed(double dnu, double dxi) {
    if (!(dnu > 0.0)) throw DomainError("closed form needs nu2 > nu1");
    return std::exp(-dxi * dxi / (4 * dnu)) / (2 * std::sqrt(pi * dnu));
}

/// (1/2 pi i) int_{-i inf}^{i inf} e^{dnu w^2 - dxi w} dw by quadrature.
inline KernelValue pearcey_single_quadrature(double dnu, double dxi, double tol = 1e-12) {
    if (!(dnu > 0.0)) throw DomainError("quadrature needs nu2 > nu1");
    auto f = [&](cplx w) { return std::exp(dnu * w * w - dxi * w); };
    const double T = scan_truncation([&](double s) { return -dnu * s * s; });
    KernelValue v = integrate_adaptive(f, ContourSet{vertical_line(0.0, T)}, tol * 2 * pi);
    return (1.0 / two_pi_i) * v;
}

inline KernelValue kernel_pearcey(const PearceyPoint& a, const PearceyPoint& b, const LimitOptions& o = {}) {
    KernelValue out;
    if (a.nu < b.nu) out.value -= pearcey_single_closed(b.nu - a.nu, b.xi - a.xi);
    auto num = [&](cplx z) {
        const cplx z2 = z * z;
        return 0.5 * z2 * z2 + b.nu * z2 - b.xi * z;
    };
    auto fw = [&](cplx w) {
        const cplx w2 = w * w;
        return -(0.5 * w2 * w2 + a.nu * w2 - a.xi * w);
    };
    const double Tw = scan_truncation([&](double s) { return fw(cplx(0.0, s)).real(); });
    const double c = o.cross_offset;
    const cplx d_right = std::polar(1.0, pi / 4), d_left = std::polar(1.0, 3 * pi / 4);
    const double Tz = scan_truncation([&](double s) {
        return std::max(num(c + s * d_right).real(), num(-c + s * d_left).real());
    });
    out += integrate_double_adaptive(fw, ContourSet{vertical_line(0.0, Tw)}, num, ContourSet{cross(Tz, pi / 4, c)},
                                     InvDiff{}, 1.0 / (two_pi_i * two_pi_i), AdaptiveOptions{o.tol, o.n0, o.n_max});
    return out;
}

/// Site of the finite process used for the tacnode limit at scale L:
/// t = eps L, eps_rate = eps / L, m = floor(2 L^2 (1 + mu / L)), with the
/// half-unit shift on even levels so that x stays an integer.
struct TacnodeScaling {
    ModelParams params;
    GridPoint p1;
    GridPoint p2;
};

inline int tacnode_level(double L, double mu) { return static_cast<int>(std::floor(2.0 * L * L * (1.0 + mu / L))); }

inline GridPoint tacnode_site(int x, int m) { return GridPoint{m, 2 * x + (m % 2 == 0 ? 1 : 0)}; }

inline TacnodeScaling tacnode_scaling(double L, double eps_tac, const TacnodePoint& a, const TacnodePoint& b) {
    const double eps = eps_tac / L;
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("scaling needs eps_tac / L in (0,1)");
    const int m1 = tacnode_level(L, a.mu), m2 = tacnode_level(L, b.mu);
    if (m1 < 1 || m2 < 1) throw DomainError("scaled level below 1; increase L");
    return {ModelParams{eps, eps_tac * L}, tacnode_site(a.x, m1), tacnode_site(b.x, m2)};
}

inline KernelValue scaled_finite_for_tacnode(double L, double eps_tac, const TacnodePoint& a, const TacnodePoint& b,
                                             double tol = 1e-10) {
    const auto s = tacnode_scaling(L, eps_tac, a, b);
    FiniteOptions o;
    o.scheme = Scheme::sigma;
    o.tol = tol;
    return kernel_finite(s.p1, s.p2, s.params, o);
}

/// Nearby sections: both arguments on levels m0 + dm1 and m0 + dm2 with
/// m0 = floor(2 L^2 (1 + mu / L)).
inline KernelValue scaled_finite_nearby(double L, double eps_tac, int x1, int dm1, int x2, int dm2, double mu,
                                        double tol = 1e-10) {
    const double eps = eps_tac / L;
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("scaling needs eps_tac / L in (0,1)");
    const int m0 = tacnode_level(L, mu);
    if (m0 + std::min(dm1, dm2) < 1) throw DomainError("scaled level below 1; increase L");
    FiniteOptions o;
    o.scheme = Scheme::sigma;
    o.tol = tol;
    return kernel_finite(tacnode_site(x1, m0 + dm1), tacnode_site(x2, m0 + dm2), ModelParams{eps, eps_tac * L}, o);
}

/// Limit of the nearby-sections kernel: K^eps(x1, mu; x2, mu) minus delta when
/// the first argument sits on the lower section.
inline KernelValue nearby_limit(int x1, int dm1, int x2, int dm2, double mu, const TacnodeParams& p) {
    KernelValue v = kernel_tacnode({x1, mu}, {x2, mu}, p);
    if (dm1 < dm2 && x1 == x2) v.value -= 1.0;
    return v;
}

inline double gue_scale_factor(double eps_tac, const GUEPoint& a, const GUEPoint& b) {
    if (a.x >= 0 && b.x >= 0) return std::pow(eps_tac, b.x - a.x);
    if (a.x < 0 && b.x < 0) return std::pow(eps_tac, a.x - b.x);
    throw DomainError("GUE scaling needs x1, x2 of the same sign");
}

inline KernelValue scaled_tacnode_for_gue(double eps_tac, const GUEPoint& a, const GUEPoint& b,
                                          const TacnodeParams& base = {}) {
    TacnodeParams p = base;
    p.eps_tac = eps_tac;
    const double f = gue_scale_factor(eps_tac, a, b);
    p.tol = base.tol / f;
    return f * kernel_tacnode({a.x, a.mu}, {b.x, b.mu}, p);
}

/// eps^{x_b + 1 - x_a} K^eps(x_a - 1, mu_a; x_b, mu_b), whose eps -> 0 limit is K_GUE.
inline KernelValue scaled_tacnode_for_gue_minor(double eps_tac, const GUEPoint& a, const GUEPoint& b,
                                                const TacnodeParams& base = {}) {
    TacnodeParams p = base;
    p.eps_tac = eps_tac;
    const double f = std::pow(eps_tac, b.x + 1 - a.x);
    p.tol = base.tol / f;
    return f * kernel_tacnode({a.x - 1, a.mu}, {b.x, b.mu}, p);
}

inline int pearcey_x(double M, double xi) { return static_cast<int>(std::floor(xi * std::sqrt(M))); }

/// xi actually realized on the lattice at scale M.
inline double pearcey_xi_effective(double M, double xi) { return pearcey_x(M, xi) / std::sqrt(M); }

/// e^{2M(nu1 - nu2)} sqrt(M) K^M(x1, -2M + nu1; x2, -2M + nu2) with x = floor(xi sqrt(M)).
inline KernelValue scaled_tacnode_for_pearcey(double M, const PearceyPoint& a, const PearceyPoint& b,
                                              double tol = 1e-10) {
    if (!(M > 0.0)) throw DomainError("M must be positive");
    TacnodeParams p;
    p.eps_tac = M;
    const double f = std::exp(2 * M * (a.nu - b.nu)) * std::sqrt(M);
    p.tol = tol / f;
    return f * kernel_tacnode({pearcey_x(M, a.xi), -2 * M + a.nu}, {pearcey_x(M, b.xi), -2 * M + b.nu}, p);
}

}  // namespace tacnode
