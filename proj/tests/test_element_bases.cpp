#include "bbpyr/element_bases.hpp"
#include "oracles.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace bbpyr;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

/// Direct product formula with naive 1D Bernstein factors.
double pyramid_naive(int n, const MultiIndex3& m, const CubePoint& q)
{
    return oracle::bernstein_naive(n - m.k, m.i, q.a) * oracle::bernstein_naive(n - m.k, m.j, q.b) *
           oracle::bernstein_naive(n, m.k, q.c);
}

} // namespace

TEST(IndexSet, PyramidOrderOne)
{
    const auto idx = index_set({Shape::pyramid, 1});
    const std::vector<std::vector<int>> expected{{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 0}, {0, 0, 1}};
    EXPECT_EQ(idx, expected);
}

TEST(IndexSet, Dimensions)
{
    EXPECT_EQ(index_set({Shape::pyramid, 2}).size(), 14u);
    EXPECT_EQ(index_set({Shape::tetrahedron, 2}).size(), 10u);
    for (int n = 0; n <= 10; ++n) {
        EXPECT_EQ(pyramid_indices(n).size(), static_cast<std::size_t>((n + 1) * (n + 2) * (2 * n + 3) / 6));
        EXPECT_EQ(index_set({Shape::triangle, n}).size(), static_cast<std::size_t>((n + 1) * (n + 2) / 2));
        EXPECT_EQ(index_set({Shape::quad, n}).size(), static_cast<std::size_t>((n + 1) * (n + 1)));
    }
    EXPECT_THROW((BasisDescriptor{Shape::pyramid, -1}.dimension()), DomainError);
}

TEST(IndexSet, DofPositionsMatchListing)
{
    for (int n = 0; n <= 6; ++n) {
        const auto p = pyramid_indices(n);
        for (std::size_t d = 0; d < p.size(); ++d) EXPECT_EQ(pyramid_dof(n, p[d]), d);
        const auto t = triangle_indices(n);
        for (std::size_t d = 0; d < t.size(); ++d) EXPECT_EQ(triangle_dof(n, t[d]), d);
        const auto tt = tet_indices(n);
        for (std::size_t d = 0; d < tt.size(); ++d) EXPECT_EQ(tet_dof(n, tt[d]), d);
    }
    EXPECT_THROW(pyramid_dof(2, {2, 0, 1}), DomainError);
}

TEST(ShapeNames, RoundTrip)
{
    for (const auto s : {Shape::triangle, Shape::quad, Shape::tetrahedron, Shape::pyramid})
        EXPECT_EQ(parse_shape(to_string(s)), s);
    EXPECT_EQ(parse_shape("tet"), Shape::tetrahedron);
    EXPECT_FALSE(parse_shape("hexahedron").has_value());
}

TEST(PyramidEval, MatchesProductFormula)
{
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n <= 7; ++n) {
        const auto idx = pyramid_indices(n);
        for (int s = 0; s < 20; ++s) {
            const CubePoint q{u(gen), u(gen), u(gen)};
            const auto v = pyramid_eval(n, q);
            ASSERT_EQ(v.size(), idx.size());
            for (std::size_t d = 0; d < idx.size(); ++d) EXPECT_NEAR(v[d], pyramid_naive(n, idx[d], q), 1e-14);
            EXPECT_NEAR(sum(v), 1.0, 1e-13);
        }
    }
}

TEST(PyramidEval, TopOfCubeIsApexIndicator)
{
    const auto v = pyramid_eval(2, {0.3, 0.8, 1.0});
    for (std::size_t d = 0; d + 1 < v.size(); ++d) EXPECT_EQ(v[d], 0.0);
    EXPECT_EQ(v.back(), 1.0);
}

TEST(PyramidEval, OriginVertex)
{
    const auto v = pyramid_eval(1, {0.0, 0.0, 0.0});
    EXPECT_EQ(v, (std::vector<double>{1, 0, 0, 0, 0}));
}

TEST(PyramidEvalRst, ApexAndOutside)
{
    const auto v = pyramid_eval_rst(3, {0.0, 0.0, 1.0});
    EXPECT_EQ(v.back(), 1.0);
    EXPECT_EQ(sum(v), 1.0);
    EXPECT_THROW(pyramid_eval_rst(2, {0.6, 0.1, 0.5}), DomainError);
    EXPECT_THROW(pyramid_eval_rst(2, {0.1, 0.1, -0.1}), DomainError);
    EXPECT_THROW(pyramid_eval_rst(2, {-0.01, 0.1, 0.1}), DomainError);
}

TEST(PyramidEvalRst, AgreesWithCubeEvaluation)
{
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n <= 6; ++n) {
        for (int s = 0; s < 30; ++s) {
            const CubePoint q{u(gen), u(gen), 0.95 * u(gen)};
            const auto a = pyramid_eval(n, q);
            const auto b = pyramid_eval_rst(n, to_pyramid(q));
            for (std::size_t d = 0; d < a.size(); ++d) EXPECT_NEAR(a[d], b[d], 1e-14);
        }
    }
}

TEST(PyramidEvalRst, LagrangeAtVerticesForOrderOne)
{
    const std::array<PyramidPoint, 5> vertices{{{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 0}, {0, 0, 1}}};
    Eigen::MatrixXd m(5, 5);
    for (int v = 0; v < 5; ++v) {
        const auto vals = pyramid_eval_rst(1, vertices[v]);
        for (int f = 0; f < 5; ++f) m(v, f) = vals[f];
    }
    // Each row and column holds a single 1.
    for (int r = 0; r < 5; ++r) {
        EXPECT_EQ(m.row(r).sum(), 1.0);
        EXPECT_EQ(m.col(r).sum(), 1.0);
        EXPECT_EQ(m.row(r).maxCoeff(), 1.0);
    }
    EXPECT_TRUE(m.isIdentity());
}

TEST(PyramidEvalRst, ContinuousAlongRaysToApex)
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 1; n <= 6; ++n) {
        for (int ray = 0; ray < 10; ++ray) {
            const double a = u(gen), b = u(gen);
            const double t = 1.0 - 1e-12;
            const auto v = pyramid_eval_rst(n, {a * (1 - t), b * (1 - t), t});
            for (std::size_t d = 0; d + 1 < v.size(); ++d) EXPECT_LE(v[d], 1e-10);
            EXPECT_NEAR(v.back(), 1.0, 1e-10);
        }
    }
}

TEST(PyramidGrad, ApexFunctionOfOrderOneIsT)
{
    for (const CubePoint q : {CubePoint{0.1, 0.2, 0.3}, CubePoint{0.9, 0.5, 0.99}, CubePoint{0, 1, 0}}) {
        const auto g = pyramid_grad_rst(1, q);
        EXPECT_EQ(g.d0.back(), 0.0);
        EXPECT_EQ(g.d1.back(), 0.0);
        EXPECT_NEAR(g.d2.back(), 1.0, 1e-15);
    }
}

TEST(PyramidGrad, ApexIsDomainError) { EXPECT_THROW(pyramid_grad_rst(2, {0.5, 0.5, 1.0}), DomainError); }

TEST(PyramidGrad, MatchesFiniteDifferencesAndSumsToZero)
{
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    std::uniform_real_distribution<double> uc(0.05, 0.8);
    const double h = 1e-5;
    for (int n = 1; n <= 6; ++n) {
        for (int s = 0; s < 30; ++s) {
            const CubePoint q{u(gen), u(gen), uc(gen)};
            const auto x = to_pyramid(q);
            const auto g = pyramid_grad_rst(n, q);
            const std::array<const std::vector<double>*, 3> comps{&g.d0, &g.d1, &g.d2};
            for (int dir = 0; dir < 3; ++dir) {
                PyramidPoint lo = x, hi = x;
                (dir == 0 ? lo.r : dir == 1 ? lo.s : lo.t) -= h;
                (dir == 0 ? hi.r : dir == 1 ? hi.s : hi.t) += h;
                const auto fl = pyramid_eval_rst(n, lo);
                const auto fh = pyramid_eval_rst(n, hi);
                const auto& an = *comps[dir];
                for (std::size_t d = 0; d < an.size(); ++d) {
                    const double fd = (fh[d] - fl[d]) / (2 * h);
                    EXPECT_LE(std::abs(an[d] - fd), 1e-6 * std::max(1.0, std::abs(an[d])));
                }
                EXPECT_NEAR(sum(an), 0.0, 1e-12);
            }
        }
    }
}

TEST(PyramidGrad, FlatDerivativesVanishOnTopLayer)
{
    for (int n = 1; n <= 6; ++n) {
        const auto g = pyramid_grad_rst(n, {0.3, 0.7, 0.4});
        EXPECT_EQ(g.d0.back(), 0.0);
        EXPECT_EQ(g.d1.back(), 0.0);
    }
}

TEST(Triangle, LinearIsBarycentric)
{
    const auto v = triangle_eval(1, {0.2, 0.3, 0.5});
    EXPECT_EQ(v, (std::vector<double>{0.2, 0.3, 0.5}));
}

TEST(Triangle, QuadraticAtCentroid)
{
    const double third = 1.0 / 3.0;
    const auto v = triangle_eval(2, {third, third, 1.0 - 2 * third});
    const auto idx = triangle_indices(2);
    for (std::size_t d = 0; d < idx.size(); ++d) {
        const bool vertex = idx[d].i == 2 || idx[d].j == 2 || idx[d].k == 2;
        EXPECT_NEAR(v[d], vertex ? 1.0 / 9.0 : 2.0 / 9.0, 1e-15);
    }
}

TEST(Triangle, PartitionAndErrors)
{
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int s = 0; s < 100; ++s) {
        double x = u(gen), y = u(gen);
        if (x + y > 1) { x = 1 - x; y = 1 - y; }
        EXPECT_NEAR(sum(triangle_eval(5, {1 - x - y, x, y})), 1.0, 1e-14);
    }
    EXPECT_THROW(triangle_eval(2, {0.5, 0.5, 0.5}), DomainError);
    EXPECT_THROW(triangle_eval(2, {1.2, -0.2, 0.0}), DomainError);
}

TEST(Quad, OriginAndPartition)
{
    EXPECT_EQ(quad_eval(1, 0.0, 0.0), (std::vector<double>{1, 0, 0, 0}));
    EXPECT_NEAR(sum(quad_eval(6, 0.31, 0.77)), 1.0, 1e-14);
    EXPECT_THROW(quad_eval(1, 1.5, 0.0), DomainError);
}

TEST(Tet, LinearIsBarycentricAndPartition)
{
    const std::array<double, 4> l{0.1, 0.2, 0.3, 0.4};
    const auto v = tet_eval(1, l);
    ASSERT_EQ(v.size(), 4u);
    for (int d = 0; d < 4; ++d) EXPECT_DOUBLE_EQ(v[d], l[d]);
    EXPECT_NEAR(sum(tet_eval(6, tet_barycentric(0.1, 0.25, 0.3))), 1.0, 1e-14);
}

TEST(Tet, LinearGradientsAreConstant)
{
    const auto g = tet_grad(1, 0.2, 0.1, 0.3);
    EXPECT_EQ(g.d0, (std::vector<double>{-1, 1, 0, 0}));
    EXPECT_EQ(g.d1, (std::vector<double>{-1, 0, 1, 0}));
    EXPECT_EQ(g.d2, (std::vector<double>{-1, 0, 0, 1}));
}

TEST(Tet, GradientMatchesFiniteDifferences)
{
    const double h = 1e-6;
    for (int n = 1; n <= 5; ++n) {
        const double x = 0.21, y = 0.17, z = 0.33;
        const auto g = tet_grad(n, x, y, z);
        const auto fxl = tet_eval(n, tet_barycentric(x - h, y, z)), fxh = tet_eval(n, tet_barycentric(x + h, y, z));
        const auto fyl = tet_eval(n, tet_barycentric(x, y - h, z)), fyh = tet_eval(n, tet_barycentric(x, y + h, z));
        const auto fzl = tet_eval(n, tet_barycentric(x, y, z - h)), fzh = tet_eval(n, tet_barycentric(x, y, z + h));
        for (std::size_t d = 0; d < g.d0.size(); ++d) {
            EXPECT_NEAR(g.d0[d], (fxh[d] - fxl[d]) / (2 * h), 1e-6 * std::max(1.0, std::abs(g.d0[d])));
            EXPECT_NEAR(g.d1[d], (fyh[d] - fyl[d]) / (2 * h), 1e-6 * std::max(1.0, std::abs(g.d1[d])));
            EXPECT_NEAR(g.d2[d], (fzh[d] - fzl[d]) / (2 * h), 1e-6 * std::max(1.0, std::abs(g.d2[d])));
        }
        EXPECT_NEAR(sum(g.d0), 0.0, 1e-12);
        EXPECT_NEAR(sum(g.d1), 0.0, 1e-12);
        EXPECT_NEAR(sum(g.d2), 0.0, 1e-12);
    }
}

TEST(Trace, PairCounts)
{
    const auto base = trace_map(2, Face::quad_base);
    ASSERT_EQ(base.pairs.size(), 9u);
    for (const auto& p : base.pairs) EXPECT_EQ(pyramid_indices(2)[p.pyramid_dof].k, 0);

    const auto a0 = trace_map(2, Face::tri_a0);
    ASSERT_EQ(a0.pairs.size(), 6u);
    for (const auto& p : a0.pairs) EXPECT_EQ(pyramid_indices(2)[p.pyramid_dof].i, 0);

    for (int n = 0; n <= 6; ++n) {
        for (const auto f : all_faces) {
            const auto map = trace_map(n, f);
            const std::size_t full = f == Face::quad_base ? (n + 1) * (n + 1) : (n + 1) * (n + 2) / 2;
            ASSERT_EQ(map.pairs.size(), full);
            std::vector<bool> seen(full, false);
            for (const auto& p : map.pairs) {
                ASSERT_LT(p.face_dof, full);
                EXPECT_FALSE(seen[p.face_dof]);
                seen[p.face_dof] = true;
            }
        }
    }
}

TEST(Trace, PairedFunctionsMatchFaceProducts)
{
    // On a triangular face the survivors are B^{N-k}_x(u) B^N_k(v), where x is the
    // free in-plane index; on the base they are B^N_i(u) B^N_j(v).
    std::mt19937_64 gen(29);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 1; n <= 6; ++n) {
        const auto idx = pyramid_indices(n);
        for (const auto f : all_faces) {
            const auto map = trace_map(n, f);
            std::vector<bool> paired(idx.size(), false);
            for (const auto& p : map.pairs) paired[p.pyramid_dof] = true;
            for (int s = 0; s < 50; ++s) {
                const double fu = u(gen), fv = u(gen);
                const auto vals = pyramid_eval(n, face_to_cube(f, fu, fv));
                const auto face = face_eval(n, f, fu, fv);
                for (const auto& p : map.pairs) {
                    const auto& m = idx[p.pyramid_dof];
                    double expect = 0.0;
                    if (f == Face::quad_base) {
                        expect = oracle::bernstein_naive(n, m.i, fu) * oracle::bernstein_naive(n, m.j, fv);
                    } else {
                        const int free = (f == Face::tri_a0 || f == Face::tri_a1) ? m.j : m.i;
                        expect = oracle::bernstein_naive(n - m.k, free, fu) * oracle::bernstein_naive(n, m.k, fv);
                    }
                    EXPECT_NEAR(vals[p.pyramid_dof], expect, 1e-12);
                    EXPECT_NEAR(face[p.face_dof], expect, 1e-12);
                }
                for (std::size_t d = 0; d < idx.size(); ++d) {
                    if (!paired[d]) {
                        EXPECT_LE(std::abs(vals[d]), 1e-14);
                    }
                }
            }
        }
    }
}

TEST(LinearIndependence, VandermondeFullRank)
{
    // Well-separated points: best of 30 uniform candidates in the pyramid per point.
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 0; n <= 6; ++n) {
        const auto np = static_cast<Eigen::Index>(pyramid_dimension(n));
        std::vector<PyramidPoint> pts;
        while (static_cast<Eigen::Index>(pts.size()) < np) {
            PyramidPoint best{};
            double best_gap = -1.0;
            for (int c = 0; c < 30;) {
                const PyramidPoint p{u(gen), u(gen), u(gen)};
                if (!in_reference_pyramid(p)) continue;
                ++c;
                double gap = 1e9;
                for (const auto& q : pts) gap = std::min(gap, std::hypot(p.r - q.r, p.s - q.s, p.t - q.t));
                if (gap > best_gap) {
                    best_gap = gap;
                    best = p;
                }
            }
            pts.push_back(best);
        }
        Eigen::MatrixXd v(np, np);
        for (Eigen::Index p = 0; p < np; ++p) {
            const auto vals = pyramid_eval_rst(n, pts[static_cast<std::size_t>(p)]);
            for (Eigen::Index d = 0; d < np; ++d) v(p, d) = vals[static_cast<std::size_t>(d)];
            v.row(p).normalize();
        }
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(v);
        EXPECT_GT(svd.singularValues().minCoeff(), 1e-8) << "N=" << n;
    }
}
