#include "bbpyr/verify.hpp"

#include <gtest/gtest.h>

using namespace bbpyr;

TEST(Verify, AllSuitesPassAtDefaultOrder)
{
    const auto results = run_verification({4, 0, false});
    ASSERT_EQ(results.size(), 6u);
    for (const auto& r : results) EXPECT_TRUE(r.passed) << r.name << ": " << r.max_error << " " << r.detail;
    EXPECT_TRUE(all_passed(results));
}

TEST(Verify, InjectedFaultIsCaught)
{
    const auto results = run_verification({2, 0, true});
    EXPECT_FALSE(all_passed(results));
    EXPECT_FALSE(results[0].passed);
    EXPECT_GT(results[0].max_error, 1e-7);
}

TEST(Verify, OrderRange)
{
    EXPECT_THROW(run_verification({0, 0, false}), DomainError);
    EXPECT_THROW(run_verification({9, 0, false}), DomainError);
}

TEST(Verify, SamplePyramidSetShapes)
{
    const auto set = sample_pyramid_set(1);
    ASSERT_EQ(set.size(), 5u);
    EXPECT_TRUE(is_affine(set[0], 1e-10));
    EXPECT_FALSE(is_affine(set[3]));
    // Non-planar bases: the four base corners do not share a plane.
    const auto& v = set[4].vertices;
    const Mat3 m = detail::from_columns(detail::sub(v[1], v[0]), detail::sub(v[3], v[0]), detail::sub(v[2], v[0]));
    EXPECT_GT(std::abs(detail::det3(m)), 1e-6);
}

TEST(Verify, JsonSummary)
{
    const VerifyConfig cfg{2, 7, false};
    const auto j = verification_json(cfg, run_verification(cfg));
    EXPECT_EQ(j["seed"], 7);
    EXPECT_EQ(j["suites"].size(), 6u);
    EXPECT_LE(j["suites"][0]["max_error"].get<double>(), 1e-12);
}
