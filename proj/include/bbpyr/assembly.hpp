#pragma once

// Element matrices for the Bernstein pyramid on vertex-mapped pyramids and for
// the Bernstein tetrahedron on the reference tetrahedron.
//
// Every matrix is a quadrature sum  sum_q w_q J_q f_m(q) g_n(q)  where the
// pyramid weights carry the (1-c)^2 collapse factor. Mass and weak-derivative
// integrands are polynomial on vertex-mapped pyramids and are integrated
// exactly once nq >= N+2; the stiffness integrand carries 1/J and is exact only
// when the map is affine.

#include "bbpyr/element_bases.hpp"
#include "bbpyr/errors.hpp"
#include "bbpyr/geometry.hpp"
#include "bbpyr/polynomials.hpp"
#include "bbpyr/quadrature.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bbpyr {

enum class MatrixKind { mass, weak_x, weak_y, weak_z, stiffness };

inline std::string_view to_string(MatrixKind k) noexcept
{
    switch (k) {
    case MatrixKind::mass: return "mass";
    case MatrixKind::weak_x: return "weak_x";
    case MatrixKind::weak_y: return "weak_y";
    case MatrixKind::weak_z: return "weak_z";
    case MatrixKind::stiffness: return "stiffness";
    }
    return "unknown";
}

inline std::optional<MatrixKind> parse_matrix_kind(std::string_view name) noexcept
{
    if (name == "mass") return MatrixKind::mass;
    if (name == "weak_x") return MatrixKind::weak_x;
    if (name == "weak_y") return MatrixKind::weak_y;
    if (name == "weak_z") return MatrixKind::weak_z;
    if (name == "stiffness") return MatrixKind::stiffness;
    return std::nullopt;
}

enum class Symmetry { symmetric, general };

struct ElementMatrix {
    Shape shape = Shape::pyramid;
    int order = 0;
    MatrixKind kind = MatrixKind::mass;
    int nq = 0;
    Symmetry symmetry = Symmetry::general;
    /// Relative Frobenius asymmetry before symmetrization (0 for general matrices).
    double asymmetry = 0.0;
    /// True for interior-interior blocks produced by restrict_matrix.
    bool restricted = false;
    Eigen::MatrixXd entries;

    Eigen::Index rows() const noexcept { return entries.rows(); }
    bool empty() const noexcept { return entries.size() == 0; }
};

/// Points per direction used when the caller does not choose: N+2.
inline int default_nq(int order) noexcept { return order + 2; }

namespace detail {

inline void check_nq(int nq)
{
    if (nq < 1) {
        throw DomainError("quadrature points per direction must be >= 1, got " + std::to_string(nq));
    }
}

inline ElementMatrix blank_matrix(Shape shape, int order, MatrixKind kind, int nq)
{
    ElementMatrix m;
    m.shape = shape;
    m.order = order;
    m.kind = kind;
    m.nq = nq;
    return m;
}

/// Values and physical gradients of every basis function at every node, with
/// the node weights already scaled by J.
struct NodalData {
    Eigen::MatrixXd values; ///< nodes x dofs
    std::array<Eigen::MatrixXd, 3> grads;
    Eigen::VectorXd weights;
};

inline NodalData pyramid_nodal_data(int order, const VertexPyramid& p, int nq, bool with_grads)
{
    const auto rule = pyramid_rule(nq);
    const auto mf = metric_factors(p, rule);
    const auto nn = static_cast<Eigen::Index>(rule.size());
    const auto np = static_cast<Eigen::Index>(pyramid_dimension(order));

    NodalData d;
    d.values.resize(nn, np);
    d.weights.resize(nn);
    if (with_grads) {
        for (auto& g : d.grads) g.resize(nn, np);
    }
    for (Eigen::Index q = 0; q < nn; ++q) {
        const auto& node = rule.nodes[static_cast<std::size_t>(q)];
        d.weights[q] = rule.weights[static_cast<std::size_t>(q)] * mf.jacobian[static_cast<std::size_t>(q)];
        const auto v = pyramid_eval(order, node);
        for (Eigen::Index m = 0; m < np; ++m) d.values(q, m) = v[static_cast<std::size_t>(m)];
        if (!with_grads) continue;
        const auto g = pyramid_grad_rst(order, node);
        const Mat3& inv = mf.inverse[static_cast<std::size_t>(q)];
        for (Eigen::Index m = 0; m < np; ++m) {
            const auto mu = static_cast<std::size_t>(m);
            const double gr = g.d0[mu], gs = g.d1[mu], gt = g.d2[mu];
            for (std::size_t x = 0; x < 3; ++x) {
                d.grads[x](q, m) = gr * inv[0][x] + gs * inv[1][x] + gt * inv[2][x];
            }
        }
    }
    return d;
}

inline NodalData tet_nodal_data(int order, int nq, bool with_grads)
{
    const auto rule = tet_rule(nq);
    const auto nn = static_cast<Eigen::Index>(rule.size());
    const auto np = static_cast<Eigen::Index>(tet_dimension(order));
    NodalData d;
    d.values.resize(nn, np);
    d.weights.resize(nn);
    if (with_grads) {
        for (auto& g : d.grads) g.resize(nn, np);
    }
    for (Eigen::Index q = 0; q < nn; ++q) {
        const auto& n = rule.nodes[static_cast<std::size_t>(q)];
        const double x = n.a * (1.0 - n.b) * (1.0 - n.c);
        const double y = n.b * (1.0 - n.c);
        const double z = n.c;
        d.weights[q] = rule.weights[static_cast<std::size_t>(q)];
        auto lambda = tet_barycentric(x, y, z);
        const auto v = tet_eval(order, lambda);
        for (Eigen::Index m = 0; m < np; ++m) d.values(q, m) = v[static_cast<std::size_t>(m)];
        if (!with_grads) continue;
        const auto g = tet_grad(order, x, y, z);
        for (Eigen::Index m = 0; m < np; ++m) {
            const auto mu = static_cast<std::size_t>(m);
            d.grads[0](q, m) = g.d0[mu];
            d.grads[1](q, m) = g.d1[mu];
            d.grads[2](q, m) = g.d2[mu];
        }
    }
    return d;
}

inline ElementMatrix finish_symmetric(ElementMatrix m)
{
    const double norm = m.entries.norm();
    const double skew = (m.entries - m.entries.transpose()).norm();
    m.asymmetry = norm > 0.0 ? skew / norm : 0.0;
    m.entries = 0.5 * (m.entries + m.entries.transpose()).eval();
    m.symmetry = Symmetry::symmetric;
    return m;
}

inline Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& left, const Eigen::VectorXd& w,
                                     const Eigen::MatrixXd& right)
{
    return left.transpose() * (w.asDiagonal() * right);
}

} // namespace detail

inline ElementMatrix mass_matrix(int order, const VertexPyramid& p, int nq)
{
    detail::check_nq(nq);
    const auto d = detail::pyramid_nodal_data(order, p, nq, false);
    ElementMatrix m = detail::blank_matrix(Shape::pyramid, order, MatrixKind::mass, nq);
    m.entries = detail::weighted_gram(d.values, d.weights, d.values);
    return detail::finish_symmetric(std::move(m));
}

/// S^x, S^y, S^z with entries  int B_m dB_n/dx  (row = test function, column = differentiated function).
inline std::array<ElementMatrix, 3> weak_derivative_matrices(int order, const VertexPyramid& p, int nq)
{
    detail::check_nq(nq);
    const auto d = detail::pyramid_nodal_data(order, p, nq, true);
    std::array<ElementMatrix, 3> out;
    constexpr std::array kinds{MatrixKind::weak_x, MatrixKind::weak_y, MatrixKind::weak_z};
    for (std::size_t x = 0; x < 3; ++x) {
        out[x] = detail::blank_matrix(Shape::pyramid, order, kinds[x], nq);
        out[x].entries = detail::weighted_gram(d.values, d.weights, d.grads[x]);
    }
    return out;
}

/// Quadrature stiffness; approximate unless is_affine(p). The nq used is kept in the result.
inline ElementMatrix stiffness_matrix(int order, const VertexPyramid& p, int nq)
{
    detail::check_nq(nq);
    const auto d = detail::pyramid_nodal_data(order, p, nq, true);
    ElementMatrix m = detail::blank_matrix(Shape::pyramid, order, MatrixKind::stiffness, nq);
    m.entries = Eigen::MatrixXd::Zero(d.values.cols(), d.values.cols());
    for (const auto& g : d.grads) {
        m.entries += detail::weighted_gram(g, d.weights, g);
    }
    return detail::finish_symmetric(std::move(m));
}

struct TetMatrices {
    ElementMatrix mass;
    ElementMatrix stiffness;
};

/// Mass and stiffness of the Bernstein tetrahedron on the reference tetrahedron
/// (vertices at the origin and the unit axes), using the collapsed tet rule.
inline TetMatrices tet_matrices(int order, int nq)
{
    detail::check_nq(nq);
    const auto d = detail::tet_nodal_data(order, nq, true);
    TetMatrices out{detail::blank_matrix(Shape::tetrahedron, order, MatrixKind::mass, nq),
                    detail::blank_matrix(Shape::tetrahedron, order, MatrixKind::stiffness, nq)};
    out.mass.entries = detail::weighted_gram(d.values, d.weights, d.values);
    out.stiffness.entries = Eigen::MatrixXd::Zero(d.values.cols(), d.values.cols());
    for (const auto& g : d.grads) {
        out.stiffness.entries += detail::weighted_gram(g, d.weights, g);
    }
    out.mass = detail::finish_symmetric(std::move(out.mass));
    out.stiffness = detail::finish_symmetric(std::move(out.stiffness));
    return out;
}

/// Exact reference-pyramid mass matrix from closed-form 1D Bernstein integrals:
///   M = int B^{N-k}_i B^{N-n}_l da * int B^{N-k}_j B^{N-n}_m db * int B^N_k B^N_n (1-c)^2 dc,
/// with (1-c)^2 B^N_n = [binom(N,n)/binom(N+2,n)] B^{N+2}_n folding the weight into the c factor.
inline Eigen::MatrixXd reference_mass_exact(int order)
{
    const auto idx = pyramid_indices(order);
    const auto np = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd m(np, np);
    for (Eigen::Index p = 0; p < np; ++p) {
        const auto& u = idx[static_cast<std::size_t>(p)];
        for (Eigen::Index q = 0; q < np; ++q) {
            const auto& v = idx[static_cast<std::size_t>(q)];
            const double fa = bernstein_pair_integral(order - u.k, u.i, order - v.k, v.i);
            const double fb = bernstein_pair_integral(order - u.k, u.j, order - v.k, v.j);
            const double shift = static_cast<double>(binomial_exact(order, v.k)) /
                                 static_cast<double>(binomial_exact(order + 2, v.k));
            const double fc = shift * bernstein_pair_integral(order, u.k, order + 2, v.k);
            m(p, q) = fa * fb * fc;
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Dirichlet reduction

struct DofPartition {
    std::vector<std::size_t> boundary;
    std::vector<std::size_t> interior;

    std::size_t size() const noexcept { return boundary.size() + interior.size(); }
};

/// Interior DOFs are those whose basis function vanishes on every face:
///   pyramid (i,j,k): k >= 1 and 1 <= i,j <= N-k-1
///   tetrahedron: all four exponents >= 1; triangle: all three >= 1; quad: 1 <= i,j <= N-1.
inline DofPartition dirichlet_partition(int order, Shape shape)
{
    if (order < 0) {
        throw DomainError("dirichlet_partition: negative order");
    }
    DofPartition part;
    std::size_t dof = 0;
    auto add = [&](bool interior) { (interior ? part.interior : part.boundary).push_back(dof++); };
    switch (shape) {
    case Shape::pyramid:
        for (const auto& m : pyramid_indices(order)) {
            add(m.k >= 1 && m.i >= 1 && m.j >= 1 && m.i <= order - m.k - 1 && m.j <= order - m.k - 1);
        }
        break;
    case Shape::tetrahedron:
        for (const auto& m : tet_indices(order)) add(m.i >= 1 && m.j >= 1 && m.k >= 1 && m.l >= 1);
        break;
    case Shape::triangle:
        for (const auto& m : triangle_indices(order)) add(m.i >= 1 && m.j >= 1 && m.k >= 1);
        break;
    case Shape::quad:
        for (const auto& m : quad_indices(order)) add(m.i >= 1 && m.j >= 1 && m.i <= order - 1 && m.j <= order - 1);
        break;
    }
    return part;
}

/// Interior-interior principal block. An empty interior yields a 0x0 matrix.
inline ElementMatrix restrict_matrix(const ElementMatrix& matrix, const DofPartition& part)
{
    if (matrix.entries.rows() != matrix.entries.cols() ||
        static_cast<std::size_t>(matrix.entries.rows()) != part.size()) {
        throw UsageError("restrict: matrix is " + std::to_string(matrix.entries.rows()) + "x" +
                         std::to_string(matrix.entries.cols()) + " but partition covers " +
                         std::to_string(part.size()) + " DOFs");
    }
    ElementMatrix out = matrix;
    out.restricted = true;
    const auto n = static_cast<Eigen::Index>(part.interior.size());
    out.entries.resize(n, n);
    for (Eigen::Index p = 0; p < n; ++p) {
        for (Eigen::Index q = 0; q < n; ++q) {
            out.entries(p, q) = matrix.entries(static_cast<Eigen::Index>(part.interior[static_cast<std::size_t>(p)]),
                                               static_cast<Eigen::Index>(part.interior[static_cast<std::size_t>(q)]));
        }
    }
    return out;
}

} // namespace bbpyr
