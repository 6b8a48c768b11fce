#include "bbpyr/geometry.hpp"
#include "bbpyr/verify.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace bbpyr;

namespace {

std::array<double, 3> arr(const Vec3& v) { return {v[0], v[1], v[2]}; }

/// Cone volume over a (possibly non-planar) bilinear base: the mean of the two diagonal splits.
double split_volume(const VertexPyramid& p)
{
    const auto& v = p.vertices;
    const double d13 = oracle::tet_volume(arr(v[0]), arr(v[1]), arr(v[2]), arr(v[4])) +
                       oracle::tet_volume(arr(v[0]), arr(v[2]), arr(v[3]), arr(v[4]));
    const double d24 = oracle::tet_volume(arr(v[0]), arr(v[1]), arr(v[3]), arr(v[4])) +
                       oracle::tet_volume(arr(v[1]), arr(v[2]), arr(v[3]), arr(v[4]));
    return 0.5 * (d13 + d24);
}

double quadrature_volume(const VertexPyramid& p, int n)
{
    const auto rule = pyramid_rule(n);
    double vol = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) vol += rule.weights[i] * jacobian_det(p, rule.nodes[i]);
    return vol;
}

} // namespace

TEST(Geometry, ReferenceMapIsIdentity)
{
    const auto p = reference_pyramid();
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int s = 0; s < 20; ++s) {
        const CubePoint q{u(gen), u(gen), u(gen)};
        const Vec3 x = map_point(p, q);
        EXPECT_NEAR(x[0], q.a * (1 - q.c), 1e-15);
        EXPECT_NEAR(x[1], q.b * (1 - q.c), 1e-15);
        EXPECT_NEAR(x[2], q.c, 1e-15);
        EXPECT_NEAR(jacobian_det(p, q), 1.0, 1e-15);
    }
    const Vec3 apex = map_point(p, {0.4, 0.9, 1.0});
    EXPECT_EQ(apex, (Vec3{0, 0, 1}));
    EXPECT_TRUE(is_affine(p));
}

TEST(Geometry, ScaledPyramidHasConstantJacobian)
{
    VertexPyramid p = reference_pyramid();
    for (auto& v : p.vertices)
        for (auto& c : v) c *= 2.0;
    EXPECT_NEAR(jacobian_det(p, {0.3, 0.6, 0.2}), 8.0, 1e-14);
    EXPECT_NEAR(quadrature_volume(p, 2), 8.0 / 3.0, 1e-14);
}

TEST(Geometry, JacobianMatchesFiniteDifferences)
{
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    const double h = 1e-6;
    for (const auto kind : {BaseKind::parallelogram, BaseKind::planar, BaseKind::nonplanar}) {
        const auto p = sample_pyramid(gen, kind);
        for (int s = 0; s < 10; ++s) {
            const CubePoint q{u(gen), u(gen), u(gen)};
            const PyramidPoint x = to_pyramid(q);
            const Mat3 j = jacobian_rst(p, q);
            for (int col = 0; col < 3; ++col) {
                PyramidPoint lo = x, hi = x;
                (col == 0 ? lo.r : col == 1 ? lo.s : lo.t) -= h;
                (col == 0 ? hi.r : col == 1 ? hi.s : hi.t) += h;
                const Vec3 fl = map_point(p, to_cube(lo));
                const Vec3 fh = map_point(p, to_cube(hi));
                for (int row = 0; row < 3; ++row) EXPECT_NEAR(j[row][col], (fh[row] - fl[row]) / (2 * h), 1e-7);
            }
        }
    }
}

TEST(Geometry, BilinearityCertificate)
{
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        const auto p = sample_pyramid(gen, t % 2 == 0 ? BaseKind::nonplanar : BaseKind::planar);
        const double c0 = u(gen);
        const double j00 = jacobian_det(p, {0, 0, c0}), j10 = jacobian_det(p, {1, 0, c0});
        const double j01 = jacobian_det(p, {0, 1, c0}), j11 = jacobian_det(p, {1, 1, c0});
        for (int s = 0; s < 10; ++s) {
            const CubePoint q{u(gen), u(gen), u(gen)};
            const double bilinear = (1 - q.a) * (1 - q.b) * j00 + q.a * (1 - q.b) * j10 + (1 - q.a) * q.b * j01 +
                                    q.a * q.b * j11;
            EXPECT_NEAR(jacobian_det(p, q), bilinear, 1e-12);
        }
    }
}

TEST(Geometry, VolumeMatchesTetrahedralSplits)
{
    std::mt19937_64 gen(6);
    for (const auto kind : {BaseKind::parallelogram, BaseKind::planar, BaseKind::nonplanar}) {
        for (int t = 0; t < 5; ++t) {
            const auto p = sample_pyramid(gen, kind);
            EXPECT_NEAR(quadrature_volume(p, 2), split_volume(p), 1e-13);
            EXPECT_NEAR(quadrature_volume(p, 6), split_volume(p), 1e-13);
        }
    }
}

TEST(Geometry, AffineDetection)
{
    std::mt19937_64 gen(8);
    EXPECT_TRUE(is_affine(sample_pyramid(gen, BaseKind::parallelogram), 1e-10));
    EXPECT_FALSE(is_affine(sample_pyramid(gen, BaseKind::planar)));
    VertexPyramid p = reference_pyramid();
    p.vertices[2][0] += 0.1;
    EXPECT_FALSE(is_affine(p));
}

TEST(Geometry, DegenerateGeometryIsGeometryError)
{
    VertexPyramid flat = reference_pyramid();
    flat.vertices[4] = {0.5, 0.5, 0.0};
    EXPECT_THROW(jacobian_det(flat, {0.5, 0.5, 0.5}), GeometryError);
    EXPECT_THROW(metric_factors(flat, pyramid_rule(2)), GeometryError);

    VertexPyramid inverted = reference_pyramid();
    inverted.vertices[4][2] = -1.0;
    EXPECT_THROW(jacobian_det(inverted, {0.2, 0.2, 0.2}), GeometryError);
}

TEST(Geometry, MetricFactorsInvertForwardMap)
{
    std::mt19937_64 gen(9);
    const auto p = sample_pyramid(gen, BaseKind::nonplanar);
    const auto rule = pyramid_rule(3);
    const auto mf = metric_factors(p, rule);
    ASSERT_EQ(mf.jacobian.size(), rule.size());
    for (std::size_t n = 0; n < rule.size(); ++n) {
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += mf.inverse[n][r][k] * mf.forward[n][k][c];
                EXPECT_NEAR(s, r == c ? 1.0 : 0.0, 1e-12);
            }
        EXPECT_NEAR(mf.jacobian[n], jacobian_det(p, rule.nodes[n]), 1e-15);
    }
    EXPECT_THROW(metric_factors(p, tet_rule(2)), UsageError);
}

TEST(Geometry, TranslationInvariance)
{
    std::mt19937_64 gen(10);
    const auto p = sample_pyramid(gen, BaseKind::planar);
    VertexPyramid shifted = p;
    for (auto& v : shifted.vertices) {
        v[0] += 3.0;
        v[1] -= 2.0;
        v[2] += 0.5;
    }
    for (const CubePoint q : {CubePoint{0.2, 0.3, 0.4}, CubePoint{0.9, 0.1, 0.0}})
        EXPECT_NEAR(jacobian_det(p, q), jacobian_det(shifted, q), 1e-13);
}
