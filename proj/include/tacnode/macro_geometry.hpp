#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "tacnode/contour.hpp"

namespace tacnode {

struct MacroPoint {
    double xi = 0.0;
    double mu = 0.0;
    double tau = 1.0;
    double eps_rate = 0.5;
};

enum class Region { D1, D2, outside };

inline const char* region_name(Region r) {
    switch (r) {
        case Region::D1: return "D1";
        case Region::D2: return "D2";
        default: return "out";
    }
}

struct SaddleResult {
    Region region = Region::outside;
    std::optional<cplx> z;
    double density = 0.0;
};

struct BoundaryPoint {
    double z_real;
    double xi;
    double mu;
};

struct FDerivatives {
    cplx F, dF, d2F;
};

inline FDerivatives F_derivatives(cplx z, const MacroPoint& p) {
    const double e = p.eps_rate;
    const cplx Dt = 1.0 + e * e - e * (z + 1.0 / z);
    if (std::abs(z) < 1e-300 || std::abs(Dt) < 1e-14) throw Singular("F evaluated at a singular point");
    const cplx zi = 1.0 / z;
    const cplx u = 1.0 - zi * zi;       // d/dz (z + 1/z)
    const cplx du = 2.0 * zi * zi * zi;  // d/dz u
    const cplx dDt = -e * u;
    FDerivatives r;
    r.F = p.tau * (z + zi) + 0.5 * p.mu * std::log(Dt) - p.xi * std::log(z);
    const cplx br = p.tau - 0.5 * p.mu * e / Dt;
    r.dF = u * br - p.xi * zi;
    r.d2F = du * br + u * (0.5 * p.mu * e * dDt / (Dt * Dt)) + p.xi * zi * zi;
    return r;
}

/// Coefficients c0..c4 of (z^2-1)(tau D - mu eps z / 2) - xi z D with
/// D = -eps z^2 + (1+eps^2) z - eps, whose roots are the critical points of F.
inline std::array<double, 5> saddle_quartic(const MacroPoint& p) {
    const double e = p.eps_rate;
    const double d2 = -e, d1 = 1 + e * e, d0 = -e;
    const double q2 = p.tau * d2, q1 = p.tau * d1 - 0.5 * p.mu * e, q0 = p.tau * d0;
    return {-q0, -q1 - p.xi * d0, q0 - q2 - p.xi * d1, q1 - p.xi * d2, q2};
}

inline std::vector<cplx> quartic_roots(const std::array<double, 5>& c) {
    if (std::abs(c[4]) < 1e-300) throw DegenerateQuartic("leading coefficient vanishes");
    Eigen::Matrix4d comp = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 4; ++i) comp(i, 3) = -c[i] / c[4];
    for (int i = 1; i < 4; ++i) comp(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::Matrix4d> es(comp, false);
    std::vector<cplx> roots;
    for (int i = 0; i < 4; ++i) {
        cplx z = es.eigenvalues()(i);
        // polish with Newton on the polynomial
        for (int it = 0; it < 3; ++it) {
            cplx pv = c[4], dp = 0.0;
            for (int k = 3; k >= 0; --k) {
                dp = dp * z + pv;
                pv = pv * z + c[k];
            }
            if (std::abs(dp) == 0.0) break;
            cplx nz = z - pv / dp;
            if (!is_finite(nz)) break;
            z = nz;
        }
        roots.push_back(z);
    }
    return roots;
}

inline double macro_scale(const MacroPoint& p) { return 1.0 + std::abs(p.tau) + std::abs(p.mu) + std::abs(p.xi); }

namespace detail {

// Solve F'(z) = F''(z) = 0 for (xi, mu) at a real z.
inline std::pair<double, double> boundary_solve(double z, double eps, double tau) {
    MacroPoint base{0.0, 0.0, tau, eps};
    MacroPoint unit_mu{0.0, 1.0, 0.0, eps};
    MacroPoint unit_xi{1.0, 0.0, 0.0, eps};
    const auto f0 = F_derivatives(z, base);
    const auto fm = F_derivatives(z, unit_mu);
    const auto fx = F_derivatives(z, unit_xi);
    const double a11 = fx.dF.real(), a12 = fm.dF.real(), a21 = fx.d2F.real(), a22 = fm.d2F.real();
    const double det = a11 * a22 - a12 * a21;
    const double sc = std::max({std::abs(a11 * a22), std::abs(a12 * a21), 1e-300});
    if (std::abs(det) < 1e-13 * sc) throw SingularSystem("boundary system is rank-deficient");
    const double b1 = -f0.dF.real(), b2 = -f0.d2F.real();
    return {(b1 * a22 - a12 * b2) / det, (a11 * b2 - a21 * b1) / det};
}

}  // namespace detail

inline std::pair<double, double> cusp_points(double eps_rate, double tau = 0.5) {
    if (!(eps_rate > 0.0 && eps_rate <= 1.0)) throw DomainError("eps_rate must lie in (0,1]");
    const double s = eps_rate + 1.0 / eps_rate;
    return {2 * tau * (s - 2.0), 2 * tau * (s + 2.0)};
}

/// Boundary point at real z; z = +-1 are returned as their limiting cusps.
inline std::optional<BoundaryPoint> boundary_point(double z, double eps, double tau) {
    if (z == 1.0 || z == -1.0) {
        const auto c = cusp_points(eps, tau);
        return BoundaryPoint{z, 0.0, z > 0 ? c.first : c.second};
    }
    auto [xi, mu] = detail::boundary_solve(z, eps, tau);
    if (!(mu >= 0.0) || !std::isfinite(xi) || !std::isfinite(mu)) return std::nullopt;
    return BoundaryPoint{z, xi, mu};
}

struct BoundaryReport {
    std::vector<BoundaryPoint> points;
    std::vector<double> skipped;  // z values where the system was singular
};

inline BoundaryReport boundary_curve_report(double eps, double tau, std::vector<double> z_samples) {
    std::sort(z_samples.begin(), z_samples.end());
    BoundaryReport r;
    for (double z : z_samples) {
        if (z == 0.0 || z == eps || z == 1.0 / eps) continue;
        try {
            if (auto b = boundary_point(z, eps, tau)) r.points.push_back(*b);
        } catch (const SingularSystem&) {
            r.skipped.push_back(z);
        } catch (const Singular&) {
            r.skipped.push_back(z);
        }
    }
    return r;
}

inline std::vector<BoundaryPoint> boundary_curve(double eps, double tau, const std::vector<double>& z_samples) {
    return boundary_curve_report(eps, tau, z_samples).points;
}

/// Sampled boundary used to find every crossing of a vertical line xi = const.
class BoundaryTable {
public:
    BoundaryTable(double eps, double tau, int per_branch = 600) : eps_(eps), tau_(tau) {
        // branches between the poles 0, eps, 1/eps; the cusps z = +-1 are interior samples
        auto uniform = [&](double lo, double hi, std::vector<double>& zs) {
            for (int k = 1; k < per_branch; ++k) zs.push_back(lo + (hi - lo) * k / per_branch);
        };
        std::vector<double> neg, low, mid, high;
        for (int k = 0; k < per_branch; ++k) neg.push_back(-1.0 - (std::pow(10.0, 4.0 * (1.0 - double(k) / per_branch)) - 1.0));
        uniform(-1.0, 0.0, neg);
        neg.push_back(-1.0);
        uniform(0.0, eps, low);
        uniform(eps, 1.0, mid);
        uniform(1.0, 1.0 / eps, mid);
        mid.push_back(1.0);
        for (int k = 1; k < per_branch; ++k) high.push_back(1.0 / eps + (std::pow(10.0, 4.0 * k / per_branch) - 1.0) / eps);
        for (auto* zs : {&neg, &low, &mid, &high}) {
            std::sort(zs->begin(), zs->end());
            zs->erase(std::unique(zs->begin(), zs->end()), zs->end());
            branches_.push_back(std::move(*zs));
        }
    }

    double eps() const { return eps_; }
    double tau() const { return tau_; }

    /// mu values of all boundary points lying on the line xi = const.
    std::vector<BoundaryPoint> crossings(double xi) const {
        std::vector<BoundaryPoint> out;
        for (const auto& zs : branches_) {
            double zp = NAN, gp = NAN;
            for (double z : zs) {
                double g;
                try {
                    g = xi_at(z) - xi;
                } catch (const Error&) {
                    zp = NAN;
                    continue;
                }
                if (!std::isnan(zp) && ((gp <= 0) != (g <= 0))) {
                    if (auto b = refine(zp, z, xi)) out.push_back(*b);
                }
                zp = z;
                gp = g;
            }
        }
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.mu < b.mu; });
        return out;
    }

    std::optional<double> max_mu(double xi) const {
        auto c = crossings(xi);
        if (c.empty()) return std::nullopt;
        return c.back().mu;
    }

private:
    double xi_at(double z) const {
        if (z == 1.0 || z == -1.0) return 0.0;
        return detail::boundary_solve(z, eps_, tau_).first;
    }

    std::optional<BoundaryPoint> refine(double a, double b, double xi) const {
        auto g = [&](double z) { return xi_at(z) - xi; };
        double ga = g(a);
        for (int it = 0; it < 200 && std::abs(b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
            double mid = 0.5 * (a + b);
            double gm;
            try {
                gm = g(mid);
            } catch (const Error&) {
                break;
            }
            if ((ga <= 0) == (gm <= 0)) {
                a = mid;
                ga = gm;
            } else {
                b = mid;
            }
        }
        const double z = 0.5 * (a + b);
        if (std::abs(z - 1.0) < 1e-6 || std::abs(z + 1.0) < 1e-6) return boundary_point(z > 0 ? 1.0 : -1.0, eps_, tau_);
        try {
            return boundary_point(z, eps_, tau_);
        } catch (const Error&) {
            return std::nullopt;
        }
    }

    double eps_, tau_;
    std::vector<std::vector<double>> branches_;
};

namespace detail {

template <class TopMu>
SaddleResult saddle_impl(const MacroPoint& p, TopMu&& top_mu) {
    if (!(p.mu >= 0.0) || !(p.tau > 0.0) || !(p.eps_rate > 0.0 && p.eps_rate < 1.0))
        throw DomainError("macro point needs mu >= 0, tau > 0, eps in (0,1)");
    const double scale = macro_scale(p);
    std::vector<cplx> upper;
    for (cplx z : quartic_roots(saddle_quartic(p))) {
        if (z.imag() <= 1e-7 * (1.0 + std::abs(z))) continue;
        try {
            if (std::abs(F_derivatives(z, p).dF) < 1e-8 * scale) upper.push_back(z);
        } catch (const Singular&) {
        }
    }
    SaddleResult r;
    if (upper.size() == 1) {
        r.region = Region::D1;
        r.z = upper.front();
        r.density = std::arg(upper.front()) / pi;
        return r;
    }
    if (upper.size() > 1) throw Error("several upper-half-plane saddles");
    const auto top = top_mu(p.xi);
    if (std::abs(p.xi) <= 0.5 * p.mu && top && p.mu > *top) {
        r.region = Region::D2;
        r.density = 1.0;
    } else {
        r.region = Region::outside;
        r.density = 0.0;
    }
    return r;
}

}  // namespace detail

inline SaddleResult saddle(const MacroPoint& p, const BoundaryTable& table) {
    return detail::saddle_impl(p, [&](double xi) { return table.max_mu(xi); });
}

inline SaddleResult saddle(const MacroPoint& p) {
    return detail::saddle_impl(p, [&](double xi) { return BoundaryTable(p.eps_rate, p.tau).max_mu(xi); });
}

/// Density at xi = 0 from the closed form arccos(s/2)/pi, s = (1+eps^2-mu eps/(2 tau))/eps.
inline std::optional<double> density_xi0_closed(double eps, double tau, double mu) {
    const double s = (1 + eps * eps - mu * eps / (2 * tau)) / eps;
    if (std::abs(s) > 2.0) return std::nullopt;
    return std::acos(0.5 * s) / pi;
}

}  // namespace tacnode
