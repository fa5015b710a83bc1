#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "tacnode/finite_kernel.hpp"

namespace tacnode {

struct RhoValue {
    double value = 0.0;
    double imag = 0.0;  // imaginary part of the determinant, a diagnostic
    double err = 0.0;   // first-order propagation of the entry errors
};

namespace detail {

inline RhoValue determinant_with_error(const Eigen::MatrixXcd& A, const Eigen::MatrixXd& E) {
    RhoValue r;
    const long n = A.rows();
    if (n == 0) {
        r.value = 1.0;
        return r;
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    const cplx d = lu.determinant();
    r.value = d.real();
    r.imag = d.imag();
    // d det / d A_ij = cofactor_ij = det * (A^{-1})_ji
    double err = 0.0;
    if (std::abs(d) > 0.0) {
        Eigen::MatrixXcd inv = lu.inverse();
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) err += std::abs(d * inv(j, i)) * E(i, j);
    } else {
        err = E.sum();
    }
    r.err = err;
    return r;
}

}  // namespace detail

/// det[K(p_i, p_j)] over the sorted, deduplicated point set.
template <class P, class Kernel>
RhoValue rho(std::vector<P> points, Kernel&& kernel) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    const long n = static_cast<long>(points.size());
    Eigen::MatrixXcd A(n, n);
    Eigen::MatrixXd E(n, n);
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) {
            KernelValue v = kernel(points[i], points[j]);
            A(i, j) = v.value;
            E(i, j) = v.err;
        }
    }
    return detail::determinant_with_error(A, E);
}

/// delta - K, the kernel of the holes.
template <class Kernel>
auto complement_kernel(Kernel kernel) {
    return [kernel](const auto& a, const auto& b) {
        KernelValue v = kernel(a, b);
        v.value = (a == b ? 1.0 : 0.0) - v.value;
        return v;
    };
}

/// Probability that every (x_i, m_i) carries a particle while (x_i, m_i + 2)
/// is empty, from the particle-hole block determinant.
inline RhoValue endpoint_block_rho(std::vector<GridPoint> points, const ModelParams& prm, const FiniteOptions& o) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    for (const auto& p : points)
        if (p.m % 2 == 0 || !on_grid(p)) throw DomainError("endpoint points must be grid points on odd levels");
    const long n = static_cast<long>(points.size());
    std::vector<GridPoint> all(points);
    for (const auto& p : points) all.push_back({p.m + 2, p.x2});
    Eigen::MatrixXcd A(2 * n, 2 * n);
    Eigen::MatrixXd E(2 * n, 2 * n);
    for (long i = 0; i < 2 * n; ++i) {
        for (long j = 0; j < 2 * n; ++j) {
            KernelValue v = kernel_finite(all[i], all[j], prm, o);
            cplx a = v.value;
            if (i >= n) a = (i == j ? 1.0 : 0.0) - a;
            A(i, j) = a;
            E(i, j) = v.err;
        }
    }
    return detail::determinant_with_error(A, E);
}

inline RhoValue endpoint_block_rho(const std::vector<GridPoint>& points, const ModelParams& prm, double tol = 1e-10) {
    FiniteOptions o;
    o.tol = tol;
    return endpoint_block_rho(points, prm, o);
}

}  // namespace tacnode
