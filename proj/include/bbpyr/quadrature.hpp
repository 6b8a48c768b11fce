#pragma once

// Gauss rules on [0,1] and tensor rules on the collapsed unit cube.
//
// All rules are built by Golub-Welsch from the monic Jacobi recurrence,
// remapped affinely from [-1,1] to [0,1]. A 1D rule for weight
// (1-x)^alpha x^beta has the weight function folded into its weights.

#include "bbpyr/errors.hpp"
#include "bbpyr/polynomials.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace bbpyr {

enum class DomainTag {
    interval,     ///< [0,1], weight 1
    interval_jacobi, ///< [0,1], weight (1-x)^alpha x^beta
    pyramid_cube, ///< [0,1]^3 with (1-c)^2 folded into the weights
    tet_cube,     ///< [0,1]^3 with (1-b)(1-c)^2 folded into the weights
};

struct QuadratureRule1D {
    DomainTag domain = DomainTag::interval;
    int exactness_degree = 0;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

struct CubePoint {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

struct QuadratureRule3D {
    DomainTag domain = DomainTag::pyramid_cube;
    int exactness_degree = 0; ///< per direction, against the folded weight
    int points_per_direction = 0;
    std::vector<CubePoint> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

namespace detail {

/// Implicit-shift QL on a symmetric tridiagonal matrix.
/// diag: in = diagonal, out = eigenvalues. offdiag[i] couples i and i+1 (size n-1).
/// Returns the first component of each normalized eigenvector.
inline std::vector<double> tridiagonal_ql(std::vector<double>& diag, std::vector<double> offdiag)
{
    const std::size_t n = diag.size();
    std::vector<double> e(n, 0.0);
    std::copy(offdiag.begin(), offdiag.end(), e.begin());
    std::vector<double> z(n, 0.0);
    z[0] = 1.0;

    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m = l;
        while (true) {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) {
                    break;
                }
            }
            if (m == l) {
                break;
            }
            if (++iter > 60) {
                throw DomainError("tridiagonal QL failed to converge");
            }
            double g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = diag[m] - diag[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            bool underflow = false;
            for (std::size_t i = m; i-- > l;) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    diag[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if (underflow) {
                continue;
            }
            diag[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    return z;
}

inline void check_point_count(int n, const char* what)
{
    if (n < 1) {
        throw DomainError(std::string(what) + ": point count must be >= 1, got " + std::to_string(n));
    }
}

} // namespace detail

/// n-point Gauss rule on [0,1] for the weight (1-x)^alpha x^beta.
/// Exact for p(x)(1-x)^alpha x^beta with deg p <= 2n-1.
inline QuadratureRule1D gauss_jacobi(int n, double alpha, double beta)
{
    detail::check_point_count(n, "gauss_jacobi");
    validate(JacobiParams{alpha, beta, 0});

    // Monic Jacobi recurrence on [-1,1]: p_{k+1} = (t - a_k) p_k - b_k p_{k-1}.
    const double ab = alpha + beta;
    std::vector<double> diag(static_cast<std::size_t>(n));
    std::vector<double> off(static_cast<std::size_t>(n - 1));
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + ab;
        const double ak = k == 0 ? (beta - alpha) / (ab + 2.0)
                                 : (beta * beta - alpha * alpha) / (s * (s + 2.0));
        diag[k] = 0.5 * (1.0 + ak);
    }
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        double bk;
        if (k == 1) {
            bk = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        } else {
            bk = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
        }
        off[k - 1] = 0.5 * std::sqrt(bk);
    }

    auto first = detail::tridiagonal_ql(diag, off);

    const double mu0 = std::exp(std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));

    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return diag[i] < diag[j]; });

    QuadratureRule1D rule;
    rule.domain = (alpha == 0.0 && beta == 0.0) ? DomainTag::interval : DomainTag::interval_jacobi;
    rule.exactness_degree = 2 * n - 1;
    rule.nodes.reserve(order.size());
    rule.weights.reserve(order.size());
    const JacobiParams family{alpha, beta, n};
    for (const std::size_t idx : order) {
        // Newton polish of the eigenvalue against the Jacobi polynomial itself.
        double t = 2.0 * diag[idx] - 1.0;
        for (int it = 0; it < 2; ++it) {
            const double dp = jacobi_deriv(family, t);
            if (dp == 0.0) {
                break;
            }
            const double step = jacobi_eval(family, t) / dp;
            if (!std::isfinite(step) || std::abs(step) > 1e-8) {
                break;
            }
            t -= step;
        }
        rule.nodes.push_back(0.5 * (1.0 + t));
        rule.weights.push_back(mu0 * first[idx] * first[idx]);
    }
    return rule;
}

/// n-point Gauss-Legendre on [0,1]; nodes ascending.
inline QuadratureRule1D gauss_legendre(int n)
{
    detail::check_point_count(n, "gauss_legendre");
    return gauss_jacobi(n, 0.0, 0.0);
}

/// n-point Gauss rule on [0,1] with the (1-c)^2 weight folded in. Weights sum to 1/3.
inline QuadratureRule1D gauss_jacobi_20(int n)
{
    detail::check_point_count(n, "gauss_jacobi_20");
    return gauss_jacobi(n, 2.0, 0.0);
}

namespace detail {

inline QuadratureRule3D tensor_rule(const QuadratureRule1D& ra, const QuadratureRule1D& rb,
                                    const QuadratureRule1D& rc, DomainTag tag, int n)
{
    QuadratureRule3D rule;
    rule.domain = tag;
    rule.exactness_degree = 2 * n - 1;
    rule.points_per_direction = n;
    rule.nodes.reserve(ra.size() * rb.size() * rc.size());
    rule.weights.reserve(ra.size() * rb.size() * rc.size());
    // c outermost, then a, then b.
    for (std::size_t r = 0; r < rc.size(); ++r) {
        for (std::size_t p = 0; p < ra.size(); ++p) {
            for (std::size_t q = 0; q < rb.size(); ++q) {
                rule.nodes.push_back({ra.nodes[p], rb.nodes[q], rc.nodes[r]});
                rule.weights.push_back(ra.weights[p] * rb.weights[q] * rc.weights[r]);
            }
        }
    }
    return rule;
}

} // namespace detail

/// n^3-point rule on the unit cube for integrals over the reference pyramid:
/// sum w u(a,b,c) approximates the cube integral of u (1-c)^2.
inline QuadratureRule3D pyramid_rule(int n)
{
    detail::check_point_count(n, "pyramid_rule");
    const auto gl = gauss_legendre(n);
    return detail::tensor_rule(gl, gl, gauss_jacobi_20(n), DomainTag::pyramid_cube, n);
}

/// n^3-point collapsed rule for the reference tetrahedron x = a(1-b)(1-c), y = b(1-c), z = c.
/// The Duffy Jacobian (1-b)(1-c)^2 is folded into the weights, which sum to 1/6.
inline QuadratureRule3D tet_rule(int n)
{
    detail::check_point_count(n, "tet_rule");
    return detail::tensor_rule(gauss_legendre(n), gauss_jacobi(n, 1.0, 0.0), gauss_jacobi_20(n),
                               DomainTag::tet_cube, n);
}

} // namespace bbpyr
