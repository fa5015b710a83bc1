#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <variant>
#include <vector>

#include "tacnode/error.hpp"

namespace tacnode {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx two_pi_i{0.0, 2.0 * std::numbers::pi};

struct QuadNode {
    cplx point;
    cplx weight;
};

/// A complex value together with a quadrature error estimate.
struct KernelValue {
    cplx value{};
    double err = 0.0;

    KernelValue& operator+=(const KernelValue& o) {
        value += o.value;
        err += o.err;
        return *this;
    }
    friend KernelValue operator+(KernelValue a, const KernelValue& b) { return a += b; }
    friend KernelValue operator*(double s, KernelValue a) {
        a.value *= s;
        a.err *= std::abs(s);
        return a;
    }
    friend KernelValue operator*(cplx s, KernelValue a) {
        a.value *= s;
        a.err *= std::abs(s);
        return a;
    }
};

struct Circle {
    cplx center;
    double radius;
};

/// Two rays leaving `anchor` on the real axis at angles +-angle.
/// Positive orientation runs from the lower far end up to the upper far end.
struct RayPair {
    double anchor;
    double angle;
    double truncation;
};

/// Four rays at angles +-angle and pi+-angle, split into a right wedge with
/// vertex +offset and a left wedge with vertex -offset.
/// Positive orientation: e^{i angle}inf -> +offset -> e^{-i angle}inf and
/// e^{-i(pi-angle)}inf -> -offset -> e^{i(pi-angle)}inf.
struct Cross {
    double angle = pi / 4;
    double truncation = 6.0;
    double offset = 0.5;
};

/// Re z = offset, positive orientation upward.
struct VerticalLine {
    double offset;
    double truncation;
};

class Contour;

struct Inverted {
    std::shared_ptr<const Contour> base;
};

class Contour {
public:
    using Shape = std::variant<Circle, RayPair, Inverted, Cross, VerticalLine>;

    Contour(Shape s, int orientation = 1) : shape_(std::move(s)), orientation_(orientation) {
        if (orientation != 1 && orientation != -1) throw DomainError("orientation must be +1 or -1");
    }

    const Shape& shape() const { return shape_; }
    int orientation() const { return orientation_; }
    Contour reversed() const { return Contour(shape_, -orientation_); }

private:
    Shape shape_;
    int orientation_;
};

using ContourSet = std::vector<Contour>;

inline Contour circle(cplx center, double radius, int orientation = 1) {
    if (!(radius > 0.0)) throw DomainError("circle radius must be positive");
    return Contour(Circle{center, radius}, orientation);
}

inline Contour ray_pair(double anchor, double angle, double truncation, int orientation = 1) {
    if (!(anchor > 0.0)) throw DomainError("ray_pair anchor must be positive");
    if (!(angle > pi / 4 && angle < pi / 2)) throw DomainError("ray_pair angle must lie in (pi/4, pi/2)");
    if (!(truncation >= 0.0)) throw DomainError("truncation must be nonnegative");
    return Contour(RayPair{anchor, angle, truncation}, orientation);
}

inline Contour cross(double truncation, double angle = pi / 4, double offset = 0.5, int orientation = 1) {
    if (!(truncation >= 0.0)) throw DomainError("truncation must be nonnegative");
    if (!(offset >= 0.0)) throw DomainError("cross offset must be nonnegative");
    return Contour(Cross{angle, truncation, offset}, orientation);
}

inline Contour vertical_line(double offset, double truncation, int orientation = 1) {
    if (!(truncation >= 0.0)) throw DomainError("truncation must be nonnegative");
    return Contour(VerticalLine{offset, truncation}, orientation);
}

inline Contour inverted(const Contour& base, int orientation = 1) {
    if (std::holds_alternative<Circle>(base.shape())) throw DomainError("inverted circle is not supported");
    return Contour(Inverted{std::make_shared<const Contour>(base)}, orientation);
}

namespace detail {

struct GaussRule {
    std::vector<double> x;  // nodes on [-1, 1]
    std::vector<double> w;
};

inline GaussRule compute_gauss_legendre(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p0 = 1.0, p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
            double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
}

inline const GaussRule& gauss_legendre(int n) {
    static const GaussRule rules[17] = {
        {}, compute_gauss_legendre(1), compute_gauss_legendre(2), compute_gauss_legendre(3),
        compute_gauss_legendre(4), compute_gauss_legendre(5), compute_gauss_legendre(6),
        compute_gauss_legendre(7), compute_gauss_legendre(8), compute_gauss_legendre(9),
        compute_gauss_legendre(10), compute_gauss_legendre(11), compute_gauss_legendre(12),
        compute_gauss_legendre(13), compute_gauss_legendre(14), compute_gauss_legendre(15),
        compute_gauss_legendre(16)};
    return rules[n];
}

// Graded composite Gauss-Legendre rule on [0, T]: s = T u^2 with uniform
// panels in u, so nodes cluster near s = 0.
inline void segment_rule(double T, int n, std::vector<double>& s, std::vector<double>& ws) {
    const int order = std::min(16, n);
    const int panels = (n + order - 1) / order;
    const GaussRule& g = gauss_legendre(order);
    s.clear();
    ws.clear();
    s.reserve(static_cast<size_t>(panels) * order);
    ws.reserve(static_cast<size_t>(panels) * order);
    const double h = 1.0 / panels;
    for (int p = 0; p < panels; ++p) {
        for (int j = 0; j < order; ++j) {
            double u = (p + 0.5 * (g.x[j] + 1.0)) * h;
            double wu = 0.5 * h * g.w[j];
            s.push_back(T * u * u);
            ws.push_back(2.0 * T * u * wu);
        }
    }
}

inline void append_ray(std::vector<QuadNode>& out, cplx vertex, cplx dir, double sign, const std::vector<double>& s,
                       const std::vector<double>& ws, int orient) {
    for (size_t j = 0; j < s.size(); ++j) {
        out.push_back({vertex + s[j] * dir, static_cast<double>(orient) * sign * ws[j] * dir});
    }
}

}  // namespace detail

/// Quadrature nodes: n nodes on a circle, n nodes on every open ray segment.
inline std::vector<QuadNode> nodes(const Contour& c, int n) {
    if (n < 4) throw DomainError("nodes: n must be at least 4");
    std::vector<QuadNode> out;
    const int o = c.orientation();
    std::vector<double> s, ws;
    std::visit(
        [&](const auto& sh) {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, Circle>) {
                out.reserve(n);
                for (int k = 0; k < n; ++k) {
                    double th = 2.0 * pi * k / n;
                    cplx e{std::cos(th), std::sin(th)};
                    out.push_back({sh.center + sh.radius * e, static_cast<double>(o) * cplx(0, 1) * sh.radius * e *
                                                                  (2.0 * pi / n)});
                }
            } else if constexpr (std::is_same_v<T, RayPair>) {
                detail::segment_rule(sh.truncation, n, s, ws);
                const cplx up = std::polar(1.0, sh.angle);
                const cplx down = std::conj(up);
                detail::append_ray(out, sh.anchor, down, -1.0, s, ws, o);
                detail::append_ray(out, sh.anchor, up, 1.0, s, ws, o);
            } else if constexpr (std::is_same_v<T, Cross>) {
                detail::segment_rule(sh.truncation, n, s, ws);
                const cplx r_up = std::polar(1.0, sh.angle);
                const cplx r_down = std::conj(r_up);
                const cplx l_up = std::polar(1.0, pi - sh.angle);
                const cplx l_down = std::conj(l_up);
                detail::append_ray(out, sh.offset, r_up, -1.0, s, ws, o);
                detail::append_ray(out, sh.offset, r_down, 1.0, s, ws, o);
                detail::append_ray(out, -sh.offset, l_down, -1.0, s, ws, o);
                detail::append_ray(out, -sh.offset, l_up, 1.0, s, ws, o);
            } else if constexpr (std::is_same_v<T, VerticalLine>) {
                detail::segment_rule(sh.truncation, n, s, ws);
                const cplx i{0.0, 1.0};
                // both halves carry dz = i ds after reflecting the lower half
                for (size_t j = s.size(); j-- > 0;) out.push_back({sh.offset - i * s[j], static_cast<double>(o) * i * ws[j]});
                for (size_t j = 0; j < s.size(); ++j) out.push_back({sh.offset + i * s[j], static_cast<double>(o) * i * ws[j]});
            } else {
                auto base = nodes(*sh.base, n);
                out.reserve(base.size());
                for (const auto& b : base) {
                    cplx zi = 1.0 / b.point;
                    out.push_back({zi, -static_cast<double>(o) * b.weight * zi * zi});
                }
            }
        },
        c.shape());
    return out;
}

inline std::vector<QuadNode> nodes(const ContourSet& cs, int n) {
    std::vector<QuadNode> out;
    for (const auto& c : cs) {
        auto part = nodes(c, n);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

struct AdaptiveOptions {
    double tol = 1e-10;
    int n0 = 64;
    long n_max = 1L << 17;
};

/// Rounding floor of a sum whose terms have absolute sum `abs_sum`.
inline double rounding_floor(double abs_sum) { return 64.0 * 2.220446049250313e-16 * abs_sum; }

/// Sum of f(z_k) w_k over the contour nodes, doubling n until two successive
/// sums differ by less than tol. When cancellation puts the rounding floor
/// above tol, the floor is used as the target and reported as the error.
template <class F, class C>
KernelValue integrate_adaptive(F&& f, const C& contour, AdaptiveOptions opt = {}) {
    if (!(opt.tol > 0.0)) throw DomainError("tol must be positive");
    cplx prev{};
    double diff = INFINITY;
    for (long n = std::max(4, opt.n0);; n *= 2) {
        cplx sum{};
        double abs_sum = 0.0;
        for (const auto& q : nodes(contour, static_cast<int>(n))) {
            cplx v = f(q.point);
            if (!is_finite(v)) throw NonFinite("integrand is not finite at a quadrature node");
            sum += v * q.weight;
            abs_sum += std::abs(v * q.weight);
        }
        if (n > opt.n0) {
            diff = std::abs(sum - prev);
            const double floor = rounding_floor(abs_sum);
            if (diff < std::max(opt.tol, floor)) return {sum, std::max(diff, floor)};
        }
        prev = sum;
        if (2 * n > opt.n_max) throw NonConvergence(opt.n_max, diff);
    }
}

template <class F, class C>
KernelValue integrate_adaptive(F&& f, const C& contour, double tol, int n0 = 64, long n_max = 1L << 17) {
    return integrate_adaptive(std::forward<F>(f), contour, AdaptiveOptions{tol, n0, n_max});
}

namespace detail {

struct Prepared {
    std::vector<cplx> point;
    std::vector<cplx> scaled;  // exp(log f - shift) * weight
    double shift = 0.0;
};

template <class LogF>
Prepared prepare(const std::vector<QuadNode>& q, LogF& logf) {
    Prepared p;
    p.point.reserve(q.size());
    p.scaled.reserve(q.size());
    std::vector<cplx> lv(q.size());
    double mx = -INFINITY;
    for (size_t k = 0; k < q.size(); ++k) {
        lv[k] = logf(q[k].point);
        if (std::isnan(lv[k].real()) || std::isnan(lv[k].imag()) || lv[k].real() == INFINITY)
            throw NonFinite("log integrand is not finite at a quadrature node");
        mx = std::max(mx, lv[k].real());
    }
    if (!std::isfinite(mx)) mx = 0.0;
    p.shift = mx;
    for (size_t k = 0; k < q.size(); ++k) {
        p.point.push_back(q[k].point);
        p.scaled.push_back(std::exp(lv[k] - mx) * q[k].weight);
    }
    return p;
}

}  // namespace detail

/// prefactor * sum_{i,j} exp(log_fw(w_i) + log_fz(z_j)) g(w_i, z_j) dw_i dz_j,
/// with both node counts doubled together. The log factors are shifted by
/// their maxima before exponentiation so that large exponents do not overflow.
template <class LogFW, class LogFZ, class G>
KernelValue integrate_double_adaptive(LogFW&& log_fw, const ContourSet& cw, LogFZ&& log_fz, const ContourSet& cz,
                                      G&& g, cplx prefactor, AdaptiveOptions opt) {
    if (!(opt.tol > 0.0)) throw DomainError("tol must be positive");
    cplx prev{};
    double diff = INFINITY;
    for (long n = std::max(4, opt.n0);; n *= 2) {
        auto pw = detail::prepare(nodes(cw, static_cast<int>(n)), log_fw);
        auto pz = detail::prepare(nodes(cz, static_cast<int>(n)), log_fz);
        cplx sum{};
        double abs_sum = 0.0;
        for (size_t i = 0; i < pw.point.size(); ++i) {
            const cplx w = pw.point[i];
            double re = 0.0, im = 0.0, ab = 0.0;
            for (size_t j = 0; j < pz.point.size(); ++j) {
                cplx v = g(w, pz.point[j]) * pz.scaled[j];
                re += v.real();
                im += v.imag();
                ab += std::abs(v.real()) + std::abs(v.imag());
            }
            sum += cplx(re, im) * pw.scaled[i];
            abs_sum += ab * std::abs(pw.scaled[i]);
        }
        const double lg = pw.shift + pz.shift + std::log(std::abs(prefactor));
        if (lg > 700.0) throw NonFinite("double integral overflows");
        const double mag = std::abs(prefactor) * std::exp(pw.shift + pz.shift);
        cplx val = sum * (prefactor * std::exp(pw.shift + pz.shift));
        if (!is_finite(val)) throw NonFinite("double integral is not finite");
        if (n > opt.n0) {
            diff = std::abs(val - prev);
            const double floor = rounding_floor(abs_sum * mag);
            if (diff < std::max(opt.tol, floor)) return {val, std::max(diff, floor)};
        }
        prev = val;
        if (2 * n > opt.n_max) throw NonConvergence(opt.n_max, diff);
    }
}

/// Fast complex reciprocal kernels for the double sums.
struct InvDiff {
    cplx operator()(cplx w, cplx z) const {
        const double a = w.real() - z.real(), b = w.imag() - z.imag();
        const double d = a * a + b * b;
        return {a / d, -b / d};
    }
};

struct InvZDiff {
    cplx operator()(cplx w, cplx z) const {
        const cplx q = z * (w - z);
        const double d = std::norm(q);
        return {q.real() / d, -q.imag() / d};
    }
};

/// Smallest truncation s >= floor_T beyond the peak of log_mag where log_mag
/// has dropped by `drop` below its running maximum and stays there.
template <class H>
double scan_truncation(H&& log_mag, double floor_T = 6.0, double drop = 42.0, double cap = 1e7) {
    double peak = log_mag(0.0);
    for (double s = 0.05; s <= cap; s = s * 1.05 + 0.05) {
        double h = log_mag(s);
        if (std::isnan(h)) continue;
        peak = std::max(peak, h);
        if (s >= floor_T && h < peak - drop) {
            if (log_mag(1.5 * s) < peak - drop && log_mag(2.0 * s) < peak - drop) return s;
        }
    }
    throw NonConvergence(static_cast<long>(cap), INFINITY);
}

}  // namespace tacnode
