#pragma once

// Conditioning, span comparison against the semi-nodal (Lagrange x Jacobi)
// pyramid basis, and polynomial reproduction on vertex-mapped pyramids.

#include "bbpyr/assembly.hpp"
#include "bbpyr/element_bases.hpp"
#include "bbpyr/errors.hpp"
#include "bbpyr/geometry.hpp"
#include "bbpyr/polynomials.hpp"
#include "bbpyr/quadrature.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

namespace bbpyr {

// ---------------------------------------------------------------------------
// Condition numbers

struct ConditioningRecord {
    Shape shape = Shape::pyramid;
    int order = 0;
    MatrixKind kind = MatrixKind::mass;
    int nq = 0;
    std::size_t dof_count = 0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    /// Empty when lambda_min <= 0 (singular or indefinite input).
    std::optional<double> cond;

    bool singular() const noexcept { return !cond.has_value(); }
};

inline constexpr double symmetry_tolerance = 1e-10;

/// Eigenvalue extremes of a symmetric matrix via a full dense eigendecomposition.
inline std::pair<double, double> symmetric_extreme_eigenvalues(const Eigen::MatrixXd& m)
{
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw UsageError("condition number needs a nonempty square matrix");
    }
    const double norm = m.norm();
    if (norm > 0.0 && (m - m.transpose()).norm() > symmetry_tolerance * norm) {
        throw UsageError("condition number needs a symmetric matrix");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw UsageError("symmetric eigendecomposition failed");
    }
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

inline ConditioningRecord condition_number(const ElementMatrix& m)
{
    const auto [lo, hi] = symmetric_extreme_eigenvalues(m.entries);
    ConditioningRecord rec{m.shape, m.order, m.kind, m.nq, static_cast<std::size_t>(m.entries.rows()), lo, hi, {}};
    if (lo > 0.0) {
        rec.cond = hi / lo;
    }
    return rec;
}

/// Convenience overload for bare matrices; the record carries no element metadata.
inline ConditioningRecord condition_number(const Eigen::MatrixXd& m)
{
    ElementMatrix em;
    em.entries = m;
    em.symmetry = Symmetry::symmetric;
    return condition_number(em);
}

// ---------------------------------------------------------------------------
// Least-squares helpers

namespace detail {

/// Columns scaled to unit 2-norm (zero columns left alone).
inline Eigen::MatrixXd normalize_columns(const Eigen::MatrixXd& v)
{
    Eigen::MatrixXd out = v;
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        const double n = out.col(c).norm();
        if (n > 0.0) out.col(c) /= n;
    }
    return out;
}

} // namespace detail

/// ||V x - f|| / ||f|| for the least-squares x, per column of targets.
/// V is column-normalized and solved with column-pivoted Householder QR.
inline std::vector<double> lsq_relative_residuals(const Eigen::MatrixXd& basis_values, const Eigen::MatrixXd& targets)
{
    const Eigen::MatrixXd v = detail::normalize_columns(basis_values);
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(v);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(targets.cols()));
    for (Eigen::Index c = 0; c < targets.cols(); ++c) {
        const Eigen::VectorXd f = targets.col(c);
        const double fn = f.norm();
        if (fn == 0.0) {
            out.push_back(0.0);
            continue;
        }
        const Eigen::VectorXd x = qr.solve(f);
        out.push_back((v * x - f).norm() / fn);
    }
    return out;
}

/// Singular values of the column-normalized matrix, descending.
inline Eigen::VectorXd normalized_singular_values(const Eigen::MatrixXd& m)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::normalize_columns(m));
    return svd.singularValues();
}

/// Deterministic uniform points in [0,1)^3.
inline std::vector<CubePoint> random_cube_points(std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<CubePoint> out(count);
    for (auto& p : out) {
        p.a = u(gen);
        p.b = u(gen);
        p.c = u(gen);
    }
    return out;
}

/// Rows = points, columns = Bernstein pyramid functions.
inline Eigen::MatrixXd pyramid_vandermonde(int order, const std::vector<CubePoint>& points)
{
    Eigen::MatrixXd v(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(pyramid_dimension(order)));
    for (std::size_t p = 0; p < points.size(); ++p) {
        const auto vals = pyramid_eval(order, points[p]);
        for (std::size_t m = 0; m < vals.size(); ++m) v(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(m)) = vals[m];
    }
    return v;
}

// ---------------------------------------------------------------------------
// Semi-nodal comparison basis

/// Layer k (k = 0..N) uses degree m = N-k Lagrange factors in a and b, on the
/// m+1 Gauss-Legendre points of [0,1], times the radial factor
///   ((1 - c~)/2)^m P^{(2m+3, 0)}_k(c~),   c~ = 2c - 1,
/// i.e. (1-c)^m P^{(2m+3,0)}_k(2c-1). Function ordering matches the pyramid DOFs.
struct SemiNodalBasis {
    int order = 0;
    std::vector<std::vector<double>> layer_nodes; ///< indexed by k
    std::vector<JacobiParams> layer_jacobi;        ///< indexed by k

    static SemiNodalBasis make(int order)
    {
        if (order < 0) {
            throw DomainError("SemiNodalBasis: negative order");
        }
        SemiNodalBasis b;
        b.order = order;
        for (int k = 0; k <= order; ++k) {
            const int m = order - k;
            b.layer_nodes.push_back(gauss_legendre(m + 1).nodes);
            b.layer_jacobi.push_back(JacobiParams{2.0 * m + 3.0, 0.0, k});
        }
        return b;
    }
};

namespace detail {

inline std::vector<double> lagrange_eval(const std::vector<double>& nodes, double x)
{
    std::vector<double> out(nodes.size(), 1.0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            if (j != i) out[i] *= (x - nodes[j]) / (nodes[i] - nodes[j]);
        }
    }
    return out;
}

} // namespace detail

inline std::vector<double> semi_nodal_eval(const SemiNodalBasis& basis, const CubePoint& q)
{
    std::vector<double> out;
    out.reserve(pyramid_dimension(basis.order));
    for (int k = 0; k <= basis.order; ++k) {
        const int m = basis.order - k;
        const auto la = detail::lagrange_eval(basis.layer_nodes[static_cast<std::size_t>(k)], q.a);
        const auto lb = detail::lagrange_eval(basis.layer_nodes[static_cast<std::size_t>(k)], q.b);
        const double radial = detail::int_pow(1.0 - q.c, m) *
                              jacobi_eval(basis.layer_jacobi[static_cast<std::size_t>(k)], 2.0 * q.c - 1.0);
        for (int i = 0; i <= m; ++i) {
            for (int j = 0; j <= m; ++j) {
                out.push_back(la[static_cast<std::size_t>(i)] * lb[static_cast<std::size_t>(j)] * radial);
            }
        }
    }
    return out;
}

struct SpanReport {
    int order = 0;
    std::size_t sample_points = 0;
    double max_semi_in_bb = 0.0; ///< worst residual of a semi-nodal function projected on the BB span
    double max_bb_in_semi = 0.0; ///< and the reverse
    double tolerance = 0.0;
    bool bb_full_rank = true;
    bool semi_full_rank = true;
    Eigen::VectorXd bb_singular_values;   ///< filled only on rank deficiency
    Eigen::VectorXd semi_singular_values; ///< filled only on rank deficiency
    bool passed = false;
    std::string failed_direction; ///< empty, "semi_in_bb", "bb_in_semi", "both" or "rank"
};

inline constexpr double rank_tolerance = 1e-13;

namespace detail {

inline bool full_column_rank(const Eigen::MatrixXd& m, Eigen::VectorXd* sv_out)
{
    const Eigen::VectorXd sv = normalized_singular_values(m);
    const bool ok = sv.size() == m.cols() && sv.minCoeff() > rank_tolerance * sv.maxCoeff();
    if (!ok && sv_out != nullptr) *sv_out = sv;
    return ok;
}

} // namespace detail

/// Cross-projects the Bernstein pyramid basis and the semi-nodal basis at
/// 3 N_p random cube points; passes iff both worst residuals are <= tol.
inline SpanReport span_equivalence(int order, double tol, std::uint64_t seed = 0)
{
    if (order < 0 || order > 8) {
        throw DomainError("span_equivalence supports orders 0..8");
    }
    const auto np = pyramid_dimension(order);
    const auto points = random_cube_points(3 * np, seed);
    const auto semi = SemiNodalBasis::make(order);

    const Eigen::MatrixXd vb = pyramid_vandermonde(order, points);
    Eigen::MatrixXd vs(vb.rows(), vb.cols());
    for (std::size_t p = 0; p < points.size(); ++p) {
        const auto vals = semi_nodal_eval(semi, points[p]);
        for (std::size_t m = 0; m < vals.size(); ++m) vs(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(m)) = vals[m];
    }

    SpanReport rep;
    rep.order = order;
    rep.sample_points = points.size();
    rep.tolerance = tol;
    rep.bb_full_rank = detail::full_column_rank(vb, &rep.bb_singular_values);
    rep.semi_full_rank = detail::full_column_rank(vs, &rep.semi_singular_values);

    const auto a = lsq_relative_residuals(vb, vs);
    const auto b = lsq_relative_residuals(vs, vb);
    rep.max_semi_in_bb = *std::max_element(a.begin(), a.end());
    rep.max_bb_in_semi = *std::max_element(b.begin(), b.end());

    const bool ok_a = rep.max_semi_in_bb <= tol;
    const bool ok_b = rep.max_bb_in_semi <= tol;
    if (!rep.bb_full_rank || !rep.semi_full_rank) {
        rep.failed_direction = "rank";
    } else if (!ok_a && !ok_b) {
        rep.failed_direction = "both";
    } else if (!ok_a) {
        rep.failed_direction = "semi_in_bb";
    } else if (!ok_b) {
        rep.failed_direction = "bb_in_semi";
    }
    rep.passed = rep.failed_direction.empty();
    return rep;
}

/// Relative residual of an arbitrary function after projection onto the order-N Bernstein span.
inline double bb_span_residual(int order, const std::function<double(const CubePoint&)>& f, std::uint64_t seed = 0)
{
    const auto points = random_cube_points(3 * pyramid_dimension(order), seed);
    const Eigen::MatrixXd v = pyramid_vandermonde(order, points);
    Eigen::MatrixXd target(v.rows(), 1);
    for (std::size_t p = 0; p < points.size(); ++p) target(static_cast<Eigen::Index>(p), 0) = f(points[p]);
    return lsq_relative_residuals(v, target).front();
}

// ---------------------------------------------------------------------------
// Polynomial reproduction

using Exponents = std::array<int, 3>;

inline std::vector<Exponents> monomials_up_to(int degree)
{
    std::vector<Exponents> out;
    for (int total = 0; total <= degree; ++total) {
        for (int x = total; x >= 0; --x) {
            for (int y = total - x; y >= 0; --y) {
                out.push_back({x, y, total - x - y});
            }
        }
    }
    return out;
}

struct ReproductionReport {
    int order = 0;
    double tolerance = 0.0;
    std::vector<Exponents> monomials;
    std::vector<double> residuals;
    double max_residual = 0.0;
    bool passed = false;
};

/// Residuals of least-squares fits of physical monomials x^p y^q z^r by the
/// order-N Bernstein pyramid basis on the mapped element.
inline std::vector<double> monomial_fit_residuals(int order, const VertexPyramid& p, const std::vector<Exponents>& exps,
                                                  std::uint64_t seed = 0)
{
    const auto points = random_cube_points(std::max<std::size_t>(3 * pyramid_dimension(order), 40), seed);
    const Eigen::MatrixXd v = pyramid_vandermonde(order, points);
    Eigen::MatrixXd targets(v.rows(), static_cast<Eigen::Index>(exps.size()));
    for (std::size_t n = 0; n < points.size(); ++n) {
        const Vec3 x = map_point(p, points[n]);
        for (std::size_t e = 0; e < exps.size(); ++e) {
            targets(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(e)) =
                detail::int_pow(x[0], exps[e][0]) * detail::int_pow(x[1], exps[e][1]) * detail::int_pow(x[2], exps[e][2]);
        }
    }
    return lsq_relative_residuals(v, targets);
}

inline ReproductionReport polynomial_reproduction(int order, const VertexPyramid& p, double tol, std::uint64_t seed = 0)
{
    ReproductionReport rep;
    rep.order = order;
    rep.tolerance = tol;
    rep.monomials = monomials_up_to(order);
    rep.residuals = monomial_fit_residuals(order, p, rep.monomials, seed);
    rep.max_residual = *std::max_element(rep.residuals.begin(), rep.residuals.end());
    rep.passed = rep.max_residual <= tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Conditioning study

struct StudyConfig {
    int min_order = 1;
    int max_order = 6;
    std::vector<Shape> shapes{Shape::tetrahedron, Shape::pyramid};
    std::vector<MatrixKind> kinds{MatrixKind::mass, MatrixKind::stiffness};
    std::optional<int> nq; ///< points per direction; default N+2
    bool restrict_mass = false;
    bool restrict_stiffness = true;
};

struct SkippedRecord {
    Shape shape = Shape::pyramid;
    MatrixKind kind = MatrixKind::mass;
    int order = 0;
    std::string reason;
};

struct StudyResult {
    std::vector<ConditioningRecord> records;
    std::vector<SkippedRecord> skipped;
};

/// Reference-element condition numbers, sorted by (shape name, kind name, N).
inline StudyResult conditioning_study(const StudyConfig& cfg)
{
    if (cfg.min_order < 0 || cfg.max_order < cfg.min_order) {
        throw UsageError("invalid order range");
    }
    if (cfg.nq && *cfg.nq < 1) {
        throw UsageError("nq must be >= 1");
    }
    for (const auto s : cfg.shapes) {
        if (s != Shape::pyramid && s != Shape::tetrahedron) {
            throw UsageError("conditioning study supports pyramid and tetrahedron only");
        }
    }
    for (const auto k : cfg.kinds) {
        if (k != MatrixKind::mass && k != MatrixKind::stiffness) {
            throw UsageError("conditioning study supports mass and stiffness only");
        }
    }

    StudyResult out;
    const auto pyr = reference_pyramid();
    for (const auto shape : cfg.shapes) {
        for (int n = cfg.min_order; n <= cfg.max_order; ++n) {
            const int nq = cfg.nq.value_or(default_nq(n));
            ElementMatrix mass;
            ElementMatrix stiff;
            if (shape == Shape::pyramid) {
                mass = mass_matrix(n, pyr, nq);
                stiff = stiffness_matrix(n, pyr, nq);
            } else {
                auto t = tet_matrices(n, nq);
                mass = std::move(t.mass);
                stiff = std::move(t.stiffness);
            }
            const auto part = dirichlet_partition(n, shape);
            for (const auto kind : cfg.kinds) {
                const bool apply_restriction = kind == MatrixKind::mass ? cfg.restrict_mass : cfg.restrict_stiffness;
                ElementMatrix m = kind == MatrixKind::mass ? mass : stiff;
                if (apply_restriction) {
                    m = restrict_matrix(m, part);
                }
                if (m.empty()) {
                    out.skipped.push_back({shape, kind, n, "no interior degrees of freedom"});
                    continue;
                }
                auto rec = condition_number(m);
                if (rec.singular()) {
                    out.skipped.push_back({shape, kind, n, "matrix is singular (lambda_min <= 0)"});
                    continue;
                }
                out.records.push_back(rec);
            }
        }
    }
    auto key = [](const auto& r) { return std::tuple(to_string(r.shape), to_string(r.kind), r.order); };
    std::stable_sort(out.records.begin(), out.records.end(),
                     [&](const auto& x, const auto& y) { return key(x) < key(y); });
    std::stable_sort(out.skipped.begin(), out.skipped.end(),
                     [&](const auto& x, const auto& y) { return key(x) < key(y); });
    return out;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least-squares line through (x, y) with its coefficient of determination.
inline LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw UsageError("fit_line needs at least two paired samples");
    }
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += e * e;
    }
    fit.r_squared = syy > 0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

} // namespace bbpyr
