#pragma once

// Vertex-mapped pyramids.
//
// Base vertices v1..v4 follow the cube corners (a,b) = (0,0), (1,0), (1,1), (0,1)
// at c = 0 (counterclockwise seen from the apex side); v5 is the apex:
//   x(a,b,c) = (1-c) [(1-a)(1-b) v1 + a(1-b) v2 + ab v3 + (1-a)b v4] + c v5.
//
// With e1 = v2-v1, e2 = v4-v1, d = v3-v4-v2+v1 and w = v5-v1 the Jacobian with
// respect to the reference coordinates (r,s,t) has columns
//   dx/dr = e1 + b d,   dx/ds = e2 + a d,   dx/dt = w + ab d,
// so every entry is bilinear in (a,b) and independent of c, and
//   J = det(e1,e2,w) + a det(e1,d,w) + b det(d,e2,w) + ab det(e1,e2,d).

#include "bbpyr/errors.hpp"
#include "bbpyr/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

namespace bbpyr {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>; ///< row-major, m[row][col]

namespace detail {

inline Vec3 sub(const Vec3& x, const Vec3& y) noexcept { return {x[0] - y[0], x[1] - y[1], x[2] - y[2]}; }

inline Vec3 axpy(double alpha, const Vec3& x, const Vec3& y) noexcept
{
    return {alpha * x[0] + y[0], alpha * x[1] + y[1], alpha * x[2] + y[2]};
}

inline double det3(const Mat3& m) noexcept
{
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// Matrix with the given vectors as columns.
inline Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) noexcept
{
    return {{{c0[0], c1[0], c2[0]}, {c0[1], c1[1], c2[1]}, {c0[2], c1[2], c2[2]}}};
}

inline Mat3 inverse3(const Mat3& m, double det) noexcept
{
    Mat3 inv{};
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
    inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    return inv;
}

inline std::string describe(const CubePoint& q)
{
    std::ostringstream os;
    os.precision(17);
    os << "(a,b,c) = (" << q.a << ", " << q.b << ", " << q.c << ")";
    return os.str();
}

} // namespace detail

struct VertexPyramid {
    std::array<Vec3, 5> vertices{};

    const Vec3& base(std::size_t n) const { return vertices.at(n); }
    const Vec3& apex() const noexcept { return vertices[4]; }
};

/// Unit right pyramid: base [0,1]^2 at z = 0, apex (0,0,1).
inline VertexPyramid reference_pyramid() noexcept
{
    return {{{{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {1.0, 1.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}}};
}

inline Vec3 map_point(const VertexPyramid& p, const CubePoint& q) noexcept
{
    const auto& v = p.vertices;
    const double w1 = (1.0 - q.a) * (1.0 - q.b);
    const double w2 = q.a * (1.0 - q.b);
    const double w3 = q.a * q.b;
    const double w4 = (1.0 - q.a) * q.b;
    Vec3 x{};
    for (std::size_t d = 0; d < 3; ++d) {
        x[d] = (1.0 - q.c) * (w1 * v[0][d] + w2 * v[1][d] + w3 * v[2][d] + w4 * v[3][d]) + q.c * v[4][d];
    }
    return x;
}

/// d(x,y,z)/d(r,s,t) at a cube point; row = physical coordinate, column = reference coordinate.
inline Mat3 jacobian_rst(const VertexPyramid& p, const CubePoint& q) noexcept
{
    const auto& v = p.vertices;
    const Vec3 e1 = detail::sub(v[1], v[0]);
    const Vec3 e2 = detail::sub(v[3], v[0]);
    const Vec3 w = detail::sub(v[4], v[0]);
    const Vec3 d = detail::sub(detail::sub(v[2], v[3]), e1);
    return detail::from_columns(detail::axpy(q.b, d, e1), detail::axpy(q.a, d, e2), detail::axpy(q.a * q.b, d, w));
}

/// Jacobian determinant of the map from the reference pyramid; throws GeometryError if J <= 0.
inline double jacobian_det(const VertexPyramid& p, const CubePoint& q)
{
    const double det = detail::det3(jacobian_rst(p, q));
    if (!(det > 0.0)) {
        throw GeometryError("non-positive Jacobian determinant " + std::to_string(det) + " at " + detail::describe(q));
    }
    return det;
}

/// A base is a planar parallelogram exactly when v3 - v2 = v4 - v1; the map is then affine.
inline bool is_affine(const VertexPyramid& p, double tol = 1e-12) noexcept
{
    const auto& v = p.vertices;
    const Vec3 d = detail::sub(detail::sub(v[2], v[3]), detail::sub(v[1], v[0]));
    double scale = 0.0;
    for (const auto& x : v) {
        for (const double c : x) scale = std::max(scale, std::abs(c));
    }
    return std::abs(d[0]) <= tol * std::max(scale, 1.0) && std::abs(d[1]) <= tol * std::max(scale, 1.0) &&
           std::abs(d[2]) <= tol * std::max(scale, 1.0);
}

/// Per-node geometric factors for one (pyramid, rule) pair.
struct MetricFactors {
    std::vector<double> jacobian;   ///< J at each node
    std::vector<Mat3> forward;      ///< d(x,y,z)/d(r,s,t)
    std::vector<Mat3> inverse;      ///< d(r,s,t)/d(x,y,z), row = reference coordinate
};

inline MetricFactors metric_factors(const VertexPyramid& p, const QuadratureRule3D& rule)
{
    if (rule.domain != DomainTag::pyramid_cube) {
        throw UsageError("metric_factors requires a pyramid_cube quadrature rule");
    }
    MetricFactors mf;
    mf.jacobian.reserve(rule.size());
    mf.forward.reserve(rule.size());
    mf.inverse.reserve(rule.size());
    for (const auto& q : rule.nodes) {
        const Mat3 f = jacobian_rst(p, q);
        const double det = detail::det3(f);
        if (!(det > 0.0)) {
            throw GeometryError("singular or inverted Jacobian (J = " + std::to_string(det) + ") at quadrature node " +
                                detail::describe(q));
        }
        mf.jacobian.push_back(det);
        mf.forward.push_back(f);
        mf.inverse.push_back(detail::inverse3(f, det));
    }
    return mf;
}

} // namespace bbpyr
