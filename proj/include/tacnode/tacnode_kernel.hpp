#pragma once

#include <cmath>
#include <compare>

#include "tacnode/contour.hpp"

namespace tacnode {

struct TacnodePoint {
    int x = 0;
    double mu = 0.0;
    auto operator<=>(const TacnodePoint&) const = default;
};

struct TacnodeParams {
    double eps_tac = 0.5;
    double tol = 1e-10;
    int n0 = 64;
    long n_max = 8192;
    double anchor = 0.0;  // 0 selects the default ray geometry
    double angle = 0.0;
};

/// I_k(2a) from its power series.
inline double chi_term_bessel(int k, double a) {
    if (a < 0.0) throw DomainError("chi_term_bessel needs a >= 0");
    k = std::abs(k);
    if (a == 0.0) return k == 0 ? 1.0 : 0.0;
    double term = 1.0;
    for (int i = 1; i <= k; ++i) term *= a / i;
    double sum = term;
    const double a2 = a * a;
    for (int j = 0; j < 100000; ++j) {
        term *= a2 / ((j + 1.0) * (k + j + 1.0));
        sum += term;
        if (term < 1e-17 * sum && j > a) break;
    }
    return sum;
}

/// (1/2 pi i) times the integral of e^{a(w+1/w)} w^{k-1} over the unit circle.
inline KernelValue chi_term_quadrature(int k, double a, double tol = 1e-12) {
    auto f = [&](cplx w) { return std::exp(a * (w + 1.0 / w) + static_cast<double>(k - 1) * std::log(w)); };
    KernelValue v = integrate_adaptive(f, ContourSet{circle(0.0, 1.0)}, tol * 2 * pi);
    return (1.0 / two_pi_i) * v;
}

namespace detail {

struct RayGeometry {
    double anchor;
    double angle;
};

inline RayGeometry tacnode_geometry(const TacnodeParams& p) {
    RayGeometry g{2.0, 3 * pi / 8};
    if (p.eps_tac > 1.0) g = {1.0 + 0.5 / std::sqrt(p.eps_tac), 5 * pi / 16};
    if (p.anchor > 0.0) g.anchor = p.anchor;
    if (p.angle > 0.0) g.angle = p.angle;
    if (!(g.anchor > 1.0)) throw ContourConflict("ray anchor must exceed the radius of the unit circle");
    return g;
}

}  // namespace detail

inline KernelValue kernel_tacnode(const TacnodePoint& a, const TacnodePoint& b, const TacnodeParams& p) {
    const double e = p.eps_tac;
    if (!(e > 0.0) || !std::isfinite(e)) throw DomainError("eps_tac must be positive");
    if (!std::isfinite(a.mu) || !std::isfinite(b.mu)) throw DomainError("mu must be finite");
    KernelValue out;
    if (a.mu < b.mu) {
        const double v = chi_term_bessel(a.x - b.x, e * (b.mu - a.mu));
        out.value -= v;
        out.err += 1e-15 * std::abs(v);
    }
    const double half_e2 = 0.5 * e * e;
    auto num = [&](cplx z) {
        const cplx s = z + 1.0 / z;
        return e * b.mu * s + half_e2 * s * s - static_cast<double>(b.x) * std::log(z);
    };
    auto den = [&](cplx w) {
        const cplx s = w + 1.0 / w;
        return e * a.mu * s + half_e2 * s * s - static_cast<double>(a.x) * std::log(w);
    };
    const auto g = detail::tacnode_geometry(p);
    const cplx dir = std::polar(1.0, g.angle);
    auto h = [&](double s) {
        const cplx z = g.anchor + s * dir;
        const double lz = std::log(std::abs(z));
        return std::max(num(z).real() - 2.0 * lz, num(1.0 / z).real() - lz);
    };
    const double T = scan_truncation(h);
    const Contour down = ray_pair(g.anchor, g.angle, T, -1);
    auto fw = [&](cplx w) { return -den(w); };
    out += integrate_double_adaptive(fw, ContourSet{circle(0.0, 1.0)}, num, ContourSet{down, inverted(down)},
                                     InvZDiff{}, 1.0 / (two_pi_i * two_pi_i),
                                     AdaptiveOptions{p.tol, p.n0, p.n_max});
    return out;
}

/// eps * (K(x_a - 1, mu_a; x_b, mu_b) + K(x_a + 1, mu_a; x_b, mu_b))
inline KernelValue endpoint_kernel(const TacnodePoint& a, const TacnodePoint& b, const TacnodeParams& p) {
    KernelValue lo = kernel_tacnode({a.x - 1, a.mu}, b, p);
    KernelValue hi = kernel_tacnode({a.x + 1, a.mu}, b, p);
    return p.eps_tac * (lo + hi);
}

}  // namespace tacnode
