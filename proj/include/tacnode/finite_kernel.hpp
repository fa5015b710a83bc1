#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <vector>

#include "tacnode/contour.hpp"

namespace tacnode {

/// Site (x, m) of the interlacing grid, with x stored as x2 = 2x.
struct GridPoint {
    int m = 1;
    int x2 = 0;

    double x() const { return 0.5 * x2; }
    auto operator<=>(const GridPoint&) const = default;
};

inline bool on_grid(const GridPoint& p) { return p.m >= 1 && ((p.x2 + p.m + 1) & 1) == 0; }

inline GridPoint grid_point(double x, int m) {
    GridPoint p{m, static_cast<int>(std::lround(2.0 * x))};
    if (std::abs(p.x2 - 2.0 * x) > 1e-12 || !on_grid(p)) throw DomainError("point is not on the interlacing grid");
    return p;
}

struct ModelParams {
    double eps_rate = 0.5;
    double t = 0.0;
};

enum class Scheme { original, deformed, sigma };

/// floor(x2 / 2)
inline int floor_half(int x2) { return x2 >= 0 ? x2 / 2 : -((1 - x2) / 2); }

inline void check_params(const ModelParams& p) {
    if (!(p.eps_rate > 0.0 && p.eps_rate < 1.0)) throw DomainError("eps_rate must lie in (0,1)");
    if (!(p.t >= 0.0) || !std::isfinite(p.t)) throw DomainError("t must be finite and nonnegative");
}

inline cplx log_G(const ModelParams& p, int m, int x2, cplx w) {
    const double eps = p.eps_rate;
    const double tiny = 1e-14;
    if (std::abs(w) < 1e-300 || std::abs(1.0 - eps * w) < tiny || std::abs(1.0 - eps / w) < tiny)
        throw Singular("log_G evaluated at a singular point");
    const int a = m / 2;
    const int b = (m + 1) / 2;
    const int k = floor_half(x2);
    cplx v = p.t * (w + 1.0 / w);
    if (a) v += static_cast<double>(a) * std::log(1.0 - eps * w);
    if (b) v += static_cast<double>(b) * std::log(1.0 - eps / w);
    if (k) v += static_cast<double>(k) * std::log(w);
    return v;
}

/// Coefficient of w^{-k} in (1 - eps w)^A (1 - eps/w)^B, i.e. the contour
/// integral (1/2 pi i) of (1-eps w)^A (1-eps/w)^B w^{k-1} around the origin.
inline double laurent_coeff(int A, int B, int k, double eps) {
    if (A < 0 || B < 0) throw Unsupported("negative binomial exponent; use quadrature");
    auto binom = [](int n, int r) {
        double c = 1.0;
        for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
        return c;
    };
    double sum = 0.0;
    for (int i = 0; i <= A; ++i) {
        const int j = i + k;
        if (j < 0 || j > B) continue;
        sum += binom(A, i) * binom(B, j) * std::pow(-eps, i + j);
    }
    return sum;
}

/// Exact single-integral value for the chi term between levels m1 and m2,
/// where k = floor(x1) - floor(x2).
inline double chi_coeff_oracle(int m1, int m2, int k, double eps) {
    return laurent_coeff(m1 / 2 - m2 / 2, (m1 + 1) / 2 - (m2 + 1) / 2, k, eps);
}

struct FiniteOptions {
    Scheme scheme = Scheme::deformed;
    double tol = 1e-10;
    int n0 = 64;
    long n_max = 8192;
    double sigma_anchor = 0.0;  // 0 selects min(2, eps^{-1/2})
    double sigma_angle = 3 * pi / 8;
    double deformed_radius = 0.0;  // radius of the circle around eps; 0 selects the default
};

namespace detail {

struct FiniteContours {
    ContourSet chi;
    ContourSet w;
    ContourSet z;
};

inline FiniteContours finite_contours(GridPoint p2, const ModelParams& prm, const FiniteOptions& o) {
    const double eps = prm.eps_rate;
    FiniteContours c;
    switch (o.scheme) {
        case Scheme::original: {
            c.w = {circle(0.0, eps / 4)};
            c.chi = c.w;
            c.z = {circle(0.5 * (eps + 1.0 / eps), 0.5 * (1.0 / eps - eps) + eps / 4)};
            break;
        }
        case Scheme::deformed: {
            double r = o.deformed_radius > 0.0 ? o.deformed_radius : std::min(eps / 2, (1.0 - eps) / 2);
            if (r >= eps || eps + r >= 1.0) throw ContourConflict("circle around eps must avoid 0 and the unit circle");
            c.w = {circle(0.0, 1.0)};
            c.chi = c.w;
            c.z = {circle(eps, r), circle(1.0 / eps, 0.5 * (1.0 / eps - 1.0))};
            break;
        }
        case Scheme::sigma: {
            if (!(prm.t > 0.0)) throw ContourConflict("the ray scheme needs t > 0 for decay along the rays");
            const double a = o.sigma_anchor > 0.0 ? o.sigma_anchor : std::min(2.0, 1.0 / std::sqrt(eps));
            if (!(a > 1.0 && a < 1.0 / eps)) throw ContourConflict("ray anchor must lie strictly between 1 and 1/eps");
            const double th = o.sigma_angle;
            const cplx dir = std::polar(1.0, th);
            auto h = [&](double s) {
                const cplx z = a + s * dir;
                const cplx zi = 1.0 / z;
                const double lz = std::log(std::abs(z));
                double out = -log_G(prm, p2.m, p2.x2, z).real() - 2.0 * lz;
                double in = -log_G(prm, p2.m, p2.x2, zi).real() + lz - 2.0 * lz;
                return std::max(out, in);
            };
            const double T = scan_truncation(h);
            Contour down = ray_pair(a, th, T, -1);
            c.w = {circle(0.0, 1.0)};
            c.chi = c.w;
            c.z = {down, inverted(down)};
            break;
        }
    }
    return c;
}

}  // namespace detail

inline KernelValue kernel_finite(GridPoint p1, GridPoint p2, const ModelParams& prm, const FiniteOptions& o) {
    check_params(prm);
    if (!on_grid(p1) || !on_grid(p2)) throw DomainError("kernel arguments must lie on the interlacing grid");
    const auto c = detail::finite_contours(p2, prm, o);
    KernelValue out;
    if (p1.m < p2.m) {
        const ModelParams p0{prm.eps_rate, 0.0};
        auto f = [&](cplx w) {
            return std::exp(log_G(p0, p1.m, p1.x2, w) - log_G(p0, p2.m, p2.x2, w)) / w;
        };
        KernelValue s = integrate_adaptive(f, c.chi, AdaptiveOptions{0.5 * o.tol * 2 * pi, o.n0, 1L << 17});
        out += (-1.0 / two_pi_i) * s;
    }
    auto fw = [&](cplx w) { return log_G(prm, p1.m, p1.x2, w); };
    auto fz = [&](cplx z) { return -log_G(prm, p2.m, p2.x2, z); };
    out += integrate_double_adaptive(fw, c.w, fz, c.z, InvZDiff{}, 1.0 / (two_pi_i * two_pi_i),
                                     AdaptiveOptions{0.5 * o.tol, o.n0, o.n_max});
    return out;
}

inline KernelValue kernel_finite(GridPoint p1, GridPoint p2, const ModelParams& prm, Scheme scheme = Scheme::deformed,
                                 double tol = 1e-10) {
    FiniteOptions o;
    o.scheme = scheme;
    o.tol = tol;
    return kernel_finite(p1, p2, prm, o);
}

struct RecurrenceResiduals {
    double rec1 = 0.0;
    double rec2 = 0.0;
    double rec5_over_eps2 = 0.0;
    double quad_err = 0.0;  // combined quadrature error of the evaluations used
};

/// Residuals of the level recurrences for odd levels n, m and integer x, y.
/// rec1: K(x,n+2,y,m) against the shifted combination at level n.
/// rec2: K(x,n,y,m-2) against the shifted combination at level m (needs m >= 3).
/// rec5: the four-term combination at (x,n;y,m) minus delta, divided by eps^2.
inline RecurrenceResiduals recurrence_residuals(int x, int y, int n, int m, const ModelParams& prm,
                                                const FiniteOptions& o) {
    if (n % 2 == 0 || m % 2 == 0 || n < 1 || m < 3) throw DomainError("recurrences need odd levels n >= 1, m >= 3");
    const double eps = prm.eps_rate;
    double qerr = 0.0;
    auto K = [&](int a, int la, int b, int lb) {
        KernelValue v = kernel_finite(GridPoint{la, 2 * a}, GridPoint{lb, 2 * b}, prm, o);
        qerr += v.err;
        return v.value;
    };
    RecurrenceResiduals r;
    {
        cplx lhs = K(x, n + 2, y, m);
        cplx rhs = (1 + eps * eps) * K(x, n, y, m) - eps * (K(x + 1, n, y, m) + K(x - 1, n, y, m));
        if (n == m - 2) rhs += chi_coeff_oracle(n + 2, m, x - y, eps);
        r.rec1 = std::abs(lhs - rhs);
    }
    {
        cplx lhs = K(x, n, y, m - 2);
        cplx rhs = (1 + eps * eps) * K(x, n, y, m) - eps * (K(x, n, y + 1, m) + K(x, n, y - 1, m));
        if (n == m - 2) rhs += chi_coeff_oracle(n + 2, m, x - y, eps);
        r.rec2 = std::abs(lhs - rhs);
    }
    {
        cplx c = -K(x, n + 2, y, m) + K(x, n, y, m) + K(x, n + 2, y, m + 2) - K(x, n, y, m + 2);
        if (n == m && x == y) c -= 1.0;
        r.rec5_over_eps2 = c.real() / (eps * eps);
    }
    r.quad_err = qerr;
    return r;
}

inline RecurrenceResiduals recurrence_residuals(int x, int y, int n, int m, const ModelParams& prm, double tol = 1e-10) {
    FiniteOptions o;
    o.tol = tol;
    return recurrence_residuals(x, y, n, m, prm, o);
}

}  // namespace tacnode
