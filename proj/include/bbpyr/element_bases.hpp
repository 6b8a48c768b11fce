#pragma once

// Bernstein-Bezier bases on the triangle, quadrilateral, tetrahedron and pyramid.
//
// Ordering contract (the linear position is the DOF index used everywhere):
//   pyramid      (i,j,k):    k = 0..N outer, then i = 0..N-k, then j = 0..N-k
//   quad         (i,j):      i outer, j inner  (same as the k=0 pyramid block)
//   triangle     (i,j,k):    exponents of (l1,l2,l3), i+j+k = N; k outer, then j, i = N-j-k
//   tetrahedron  (i,j,k,l):  exponents of (l1..l4), sum N; l outer, then k, then j
//
// The pyramid basis is defined on the unit cube (a,b,c), which maps to the
// reference pyramid by r = a(1-c), s = b(1-c), t = c:
//   B_ijk(a,b,c) = B^{N-k}_i(a) B^{N-k}_j(b) B^N_k(c).

#include "bbpyr/errors.hpp"
#include "bbpyr/polynomials.hpp"
#include "bbpyr/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bbpyr {

enum class Shape { triangle, quad, tetrahedron, pyramid };

inline std::string_view to_string(Shape s) noexcept
{
    switch (s) {
    case Shape::triangle: return "triangle";
    case Shape::quad: return "quad";
    case Shape::tetrahedron: return "tetrahedron";
    case Shape::pyramid: return "pyramid";
    }
    return "unknown";
}

inline std::optional<Shape> parse_shape(std::string_view name) noexcept
{
    if (name == "triangle") return Shape::triangle;
    if (name == "quad") return Shape::quad;
    if (name == "tetrahedron" || name == "tet") return Shape::tetrahedron;
    if (name == "pyramid") return Shape::pyramid;
    return std::nullopt;
}

struct BasisDescriptor {
    Shape shape = Shape::pyramid;
    int order = 0;

    std::size_t dimension() const
    {
        if (order < 0) {
            throw DomainError("basis order must be nonnegative");
        }
        const std::size_t n = static_cast<std::size_t>(order);
        switch (shape) {
        case Shape::triangle: return (n + 1) * (n + 2) / 2;
        case Shape::quad: return (n + 1) * (n + 1);
        case Shape::tetrahedron: return (n + 1) * (n + 2) * (n + 3) / 6;
        case Shape::pyramid: return (n + 1) * (n + 2) * (2 * n + 3) / 6;
        }
        return 0;
    }
};

inline std::size_t pyramid_dimension(int order) { return BasisDescriptor{Shape::pyramid, order}.dimension(); }
inline std::size_t tet_dimension(int order) { return BasisDescriptor{Shape::tetrahedron, order}.dimension(); }

struct MultiIndex3 {
    int i = 0;
    int j = 0;
    int k = 0;

    friend bool operator==(const MultiIndex3&, const MultiIndex3&) = default;
};

struct TriIndex {
    int i = 0;
    int j = 0;
    int k = 0;

    friend bool operator==(const TriIndex&, const TriIndex&) = default;
};

struct QuadIndex {
    int i = 0;
    int j = 0;

    friend bool operator==(const QuadIndex&, const QuadIndex&) = default;
};

struct TetIndex {
    int i = 0;
    int j = 0;
    int k = 0;
    int l = 0;

    friend bool operator==(const TetIndex&, const TetIndex&) = default;
};

inline bool is_admissible(const MultiIndex3& m, int order) noexcept
{
    return m.k >= 0 && m.k <= order && m.i >= 0 && m.i <= order - m.k && m.j >= 0 && m.j <= order - m.k;
}

inline std::vector<MultiIndex3> pyramid_indices(int order)
{
    std::vector<MultiIndex3> out;
    out.reserve(pyramid_dimension(order));
    for (int k = 0; k <= order; ++k) {
        for (int i = 0; i <= order - k; ++i) {
            for (int j = 0; j <= order - k; ++j) {
                out.push_back({i, j, k});
            }
        }
    }
    return out;
}

inline std::vector<QuadIndex> quad_indices(int order)
{
    std::vector<QuadIndex> out;
    for (int i = 0; i <= order; ++i) {
        for (int j = 0; j <= order; ++j) {
            out.push_back({i, j});
        }
    }
    return out;
}

inline std::vector<TriIndex> triangle_indices(int order)
{
    std::vector<TriIndex> out;
    for (int k = 0; k <= order; ++k) {
        for (int j = 0; j <= order - k; ++j) {
            out.push_back({order - j - k, j, k});
        }
    }
    return out;
}

inline std::vector<TetIndex> tet_indices(int order)
{
    std::vector<TetIndex> out;
    for (int l = 0; l <= order; ++l) {
        for (int k = 0; k <= order - l; ++k) {
            for (int j = 0; j <= order - l - k; ++j) {
                out.push_back({order - j - k - l, j, k, l});
            }
        }
    }
    return out;
}

/// Shape-agnostic listing of the ordered multi-indices (2, 3 or 4 entries each).
inline std::vector<std::vector<int>> index_set(const BasisDescriptor& desc)
{
    std::vector<std::vector<int>> out;
    out.reserve(desc.dimension());
    switch (desc.shape) {
    case Shape::pyramid:
        for (const auto& m : pyramid_indices(desc.order)) out.push_back({m.i, m.j, m.k});
        break;
    case Shape::quad:
        for (const auto& m : quad_indices(desc.order)) out.push_back({m.i, m.j});
        break;
    case Shape::triangle:
        for (const auto& m : triangle_indices(desc.order)) out.push_back({m.i, m.j, m.k});
        break;
    case Shape::tetrahedron:
        for (const auto& m : tet_indices(desc.order)) out.push_back({m.i, m.j, m.k, m.l});
        break;
    }
    return out;
}

/// Linear DOF position of an admissible pyramid index.
inline std::size_t pyramid_dof(int order, const MultiIndex3& m)
{
    if (!is_admissible(m, order)) {
        throw DomainError("pyramid multi-index not admissible for order " + std::to_string(order));
    }
    std::size_t offset = 0;
    for (int kk = 0; kk < m.k; ++kk) {
        const std::size_t w = static_cast<std::size_t>(order - kk + 1);
        offset += w * w;
    }
    const std::size_t w = static_cast<std::size_t>(order - m.k + 1);
    return offset + static_cast<std::size_t>(m.i) * w + static_cast<std::size_t>(m.j);
}

inline std::size_t triangle_dof(int order, const TriIndex& m)
{
    if (m.i < 0 || m.j < 0 || m.k < 0 || m.i + m.j + m.k != order) {
        throw DomainError("triangle multi-index not admissible");
    }
    std::size_t offset = 0;
    for (int kk = 0; kk < m.k; ++kk) {
        offset += static_cast<std::size_t>(order - kk + 1);
    }
    return offset + static_cast<std::size_t>(m.j);
}

inline std::size_t tet_dof(int order, const TetIndex& m)
{
    if (m.i < 0 || m.j < 0 || m.k < 0 || m.l < 0 || m.i + m.j + m.k + m.l != order) {
        throw DomainError("tetrahedron multi-index not admissible");
    }
    std::size_t offset = 0;
    for (int ll = 0; ll < m.l; ++ll) {
        const std::size_t rest = static_cast<std::size_t>(order - ll);
        offset += (rest + 1) * (rest + 2) / 2;
    }
    const int rest = order - m.l;
    for (int kk = 0; kk < m.k; ++kk) {
        offset += static_cast<std::size_t>(rest - kk + 1);
    }
    return offset + static_cast<std::size_t>(m.j);
}

// ---------------------------------------------------------------------------
// Pyramid

struct PyramidPoint {
    double r = 0.0;
    double s = 0.0;
    double t = 0.0;
};

inline constexpr double reference_tolerance = 1e-12;

inline bool in_reference_pyramid(const PyramidPoint& p, double tol = reference_tolerance) noexcept
{
    const double h = 1.0 - p.t;
    return p.t >= -tol && p.t <= 1.0 + tol && p.r >= -tol && p.s >= -tol && p.r <= h + tol && p.s <= h + tol;
}

inline PyramidPoint to_pyramid(const CubePoint& q) noexcept
{
    return {q.a * (1.0 - q.c), q.b * (1.0 - q.c), q.c};
}

/// Inverse collapse; requires t < 1.
inline CubePoint to_cube(const PyramidPoint& p)
{
    const double h = 1.0 - p.t;
    if (!(h > 0.0)) {
        throw DomainError("collapsed coordinates are singular at the apex");
    }
    return {p.r / h, p.s / h, p.t};
}

inline std::vector<double> pyramid_eval(int order, const CubePoint& q)
{
    if (order < 0) {
        throw DomainError("pyramid_eval: negative order");
    }
    std::vector<double> out;
    out.reserve(pyramid_dimension(order));
    const auto bc = bernstein_eval_all(order, q.c);
    for (int k = 0; k <= order; ++k) {
        const auto ba = bernstein_eval_all(order - k, q.a);
        const auto bb = bernstein_eval_all(order - k, q.b);
        for (int i = 0; i <= order - k; ++i) {
            for (int j = 0; j <= order - k; ++j) {
                out.push_back(ba[i] * bb[j] * bc[k]);
            }
        }
    }
    return out;
}

/// Evaluation at a point of the reference pyramid. The apex returns the
/// limit value: 1 for (0,0,N), 0 elsewhere.
inline std::vector<double> pyramid_eval_rst(int order, const PyramidPoint& p)
{
    if (!in_reference_pyramid(p)) {
        throw DomainError("point (" + std::to_string(p.r) + ", " + std::to_string(p.s) + ", " +
                          std::to_string(p.t) + ") outside the reference pyramid");
    }
    if (!(1.0 - p.t > 0.0)) {
        std::vector<double> out(pyramid_dimension(order), 0.0);
        out.back() = 1.0;
        return out;
    }
    CubePoint q = to_cube(p);
    q.a = std::clamp(q.a, 0.0, 1.0);
    q.b = std::clamp(q.b, 0.0, 1.0);
    q.c = std::clamp(q.c, 0.0, 1.0);
    return pyramid_eval(order, q);
}

/// Gradients with respect to the reference coordinates (r,s,t).
struct Gradients3 {
    std::vector<double> d0;
    std::vector<double> d1;
    std::vector<double> d2;
};

/// d/dr, d/ds, d/dt of every pyramid basis function at a cube point with c < 1.
/// B^N_k(c)/(1-c) is evaluated as N/(N-k) B^{N-1}_k(c), so nothing divides by 1-c.
inline Gradients3 pyramid_grad_rst(int order, const CubePoint& q)
{
    if (!(q.c < 1.0)) {
        throw DomainError("pyramid gradient is undefined at the apex (c = 1)");
    }
    const std::size_t np = pyramid_dimension(order);
    Gradients3 g{std::vector<double>(np), std::vector<double>(np), std::vector<double>(np)};

    const auto bc = bernstein_eval_all(order, q.c);
    const auto dbc = bernstein_deriv_all(order, q.c);
    const std::vector<double> bc_lower = order > 0 ? bernstein_eval_all(order - 1, q.c) : std::vector<double>{};

    std::size_t dof = 0;
    for (int k = 0; k <= order; ++k) {
        const int m = order - k;
        const auto ba = bernstein_eval_all(m, q.a);
        const auto bb = bernstein_eval_all(m, q.b);
        const auto dba = bernstein_deriv_all(m, q.a);
        const auto dbb = bernstein_deriv_all(m, q.b);
        const double reg = k < order ? static_cast<double>(order) / m * bc_lower[k] : 0.0;
        for (int i = 0; i <= m; ++i) {
            for (int j = 0; j <= m; ++j, ++dof) {
                const double dr = dba[i] * bb[j] * reg;
                const double ds = ba[i] * dbb[j] * reg;
                g.d0[dof] = dr;
                g.d1[dof] = ds;
                g.d2[dof] = q.a * dr + q.b * ds + ba[i] * bb[j] * dbc[k];
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Triangle, quadrilateral, tetrahedron

namespace detail {

inline double int_pow(double x, int e) noexcept
{
    double r = 1.0;
    for (int n = 0; n < e; ++n) {
        r *= x;
    }
    return r;
}

inline double binomial_double(int n, int k) { return static_cast<double>(binomial_exact(n, k)); }

template <std::size_t D>
void check_barycentric(const std::array<double, D>& lambda, const char* what)
{
    double sum = 0.0;
    for (const double l : lambda) {
        if (l < -reference_tolerance) {
            throw DomainError(std::string(what) + ": negative barycentric coordinate");
        }
        sum += l;
    }
    if (std::abs(sum - 1.0) > reference_tolerance) {
        throw DomainError(std::string(what) + ": barycentric coordinates sum to " + std::to_string(sum));
    }
}

} // namespace detail

inline std::vector<double> triangle_eval(int order, const std::array<double, 3>& lambda)
{
    detail::check_barycentric(lambda, "triangle_eval");
    std::vector<double> out;
    for (const auto& m : triangle_indices(order)) {
        const double coeff = detail::binomial_double(order, m.k) * detail::binomial_double(order - m.k, m.j);
        out.push_back(coeff * detail::int_pow(lambda[0], m.i) * detail::int_pow(lambda[1], m.j) *
                      detail::int_pow(lambda[2], m.k));
    }
    return out;
}

inline std::vector<double> quad_eval(int order, double a, double b)
{
    if (a < -reference_tolerance || a > 1.0 + reference_tolerance || b < -reference_tolerance ||
        b > 1.0 + reference_tolerance) {
        throw DomainError("quad_eval: point outside the unit square");
    }
    const auto ba = bernstein_eval_all(order, a);
    const auto bb = bernstein_eval_all(order, b);
    std::vector<double> out;
    out.reserve(ba.size() * bb.size());
    for (const double x : ba) {
        for (const double y : bb) {
            out.push_back(x * y);
        }
    }
    return out;
}

inline std::vector<double> tet_eval(int order, const std::array<double, 4>& lambda)
{
    detail::check_barycentric(lambda, "tet_eval");
    std::vector<double> out;
    out.reserve(tet_dimension(order));
    for (const auto& m : tet_indices(order)) {
        const double coeff = detail::binomial_double(order, m.l) * detail::binomial_double(order - m.l, m.k) *
                             detail::binomial_double(order - m.l - m.k, m.j);
        out.push_back(coeff * detail::int_pow(lambda[0], m.i) * detail::int_pow(lambda[1], m.j) *
                      detail::int_pow(lambda[2], m.k) * detail::int_pow(lambda[3], m.l));
    }
    return out;
}

/// Barycentrics of the reference tetrahedron (origin and the unit axes).
inline std::array<double, 4> tet_barycentric(double x, double y, double z) noexcept
{
    return {1.0 - x - y - z, x, y, z};
}

/// Gradients in (x,y,z) on the reference tetrahedron, via
/// dB_alpha/dlambda_m = N B^{N-1}_{alpha - e_m} and constant grad(lambda_m).
inline Gradients3 tet_grad(int order, double x, double y, double z)
{
    const auto lambda = tet_barycentric(x, y, z);
    detail::check_barycentric(lambda, "tet_grad");
    const std::size_t n = tet_dimension(order);
    Gradients3 g{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    if (order == 0) {
        return g;
    }
    const auto lower = tet_eval(order - 1, lambda);
    // grad(lambda_1) = (-1,-1,-1); grad(lambda_{2,3,4}) = unit axes.
    const auto idx = tet_indices(order);
    for (std::size_t p = 0; p < n; ++p) {
        const auto& m = idx[p];
        auto partial = [&](TetIndex lowered) {
            return order * lower[tet_dof(order - 1, lowered)];
        };
        const double d1 = m.i > 0 ? partial({m.i - 1, m.j, m.k, m.l}) : 0.0;
        const double d2 = m.j > 0 ? partial({m.i, m.j - 1, m.k, m.l}) : 0.0;
        const double d3 = m.k > 0 ? partial({m.i, m.j, m.k - 1, m.l}) : 0.0;
        const double d4 = m.l > 0 ? partial({m.i, m.j, m.k, m.l - 1}) : 0.0;
        g.d0[p] = d2 - d1;
        g.d1[p] = d3 - d1;
        g.d2[p] = d4 - d1;
    }
    return g;
}

// ---------------------------------------------------------------------------
// Face traces

enum class Face { quad_base, tri_a0, tri_a1, tri_b0, tri_b1 };

inline constexpr std::array<Face, 5> all_faces{Face::quad_base, Face::tri_a0, Face::tri_a1, Face::tri_b0,
                                               Face::tri_b1};

inline std::string_view to_string(Face f) noexcept
{
    switch (f) {
    case Face::quad_base: return "quad_base";
    case Face::tri_a0: return "tri_a0";
    case Face::tri_a1: return "tri_a1";
    case Face::tri_b0: return "tri_b0";
    case Face::tri_b1: return "tri_b1";
    }
    return "unknown";
}

struct TracePair {
    std::size_t pyramid_dof = 0;
    std::size_t face_dof = 0;
};

struct FaceTraceMap {
    Face face = Face::quad_base;
    std::vector<TracePair> pairs;
};

/// Face parameterization by the surviving cube coordinates (u,v):
///   quad_base: (a,b) = (u,v), c = 0
///   tri_a0 / tri_a1: a = 0 / 1, (b,c) = (u,v)
///   tri_b0 / tri_b1: b = 0 / 1, (a,c) = (u,v)
inline CubePoint face_to_cube(Face f, double u, double v) noexcept
{
    switch (f) {
    case Face::quad_base: return {u, v, 0.0};
    case Face::tri_a0: return {0.0, u, v};
    case Face::tri_a1: return {1.0, u, v};
    case Face::tri_b0: return {u, 0.0, v};
    case Face::tri_b1: return {u, 1.0, v};
    }
    return {};
}

/// Face Bernstein basis at face parameters (u,v). Triangular faces use the
/// collapsed barycentrics l1 = (1-u)(1-v), l2 = u(1-v), l3 = v.
inline std::vector<double> face_eval(int order, Face f, double u, double v)
{
    if (f == Face::quad_base) {
        return quad_eval(order, u, v);
    }
    std::array<double, 3> lambda{(1.0 - u) * (1.0 - v), u * (1.0 - v), v};
    // Rounding in the products can leave the sum a few ulps away from 1.
    lambda[0] = 1.0 - lambda[1] - lambda[2];
    return triangle_eval(order, lambda);
}

inline FaceTraceMap trace_map(int order, Face f)
{
    FaceTraceMap map{f, {}};
    for (int k = 0; k <= order; ++k) {
        const int m = order - k;
        for (int i = 0; i <= m; ++i) {
            for (int j = 0; j <= m; ++j) {
                const std::size_t pdof = pyramid_dof(order, {i, j, k});
                switch (f) {
                case Face::quad_base:
                    if (k == 0) map.pairs.push_back({pdof, static_cast<std::size_t>(i * (order + 1) + j)});
                    break;
                case Face::tri_a0:
                    if (i == 0) map.pairs.push_back({pdof, triangle_dof(order, {m - j, j, k})});
                    break;
                case Face::tri_a1:
                    if (i == m) map.pairs.push_back({pdof, triangle_dof(order, {m - j, j, k})});
                    break;
                case Face::tri_b0:
                    if (j == 0) map.pairs.push_back({pdof, triangle_dof(order, {m - i, i, k})});
                    break;
                case Face::tri_b1:
                    if (j == m) map.pairs.push_back({pdof, triangle_dof(order, {m - i, i, k})});
                    break;
                }
            }
        }
    }
    return map;
}

} // namespace bbpyr
