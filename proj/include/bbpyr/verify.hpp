#pragma once

// Executable property suites for the Bernstein pyramid: positivity and
// partition of unity, face traces, analytic gradients, span equivalence with
// the semi-nodal basis, and polynomial reproduction on mapped pyramids.

#include "bbpyr/analysis.hpp"
#include "bbpyr/element_bases.hpp"
#include "bbpyr/geometry.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace bbpyr {

enum class BaseKind { parallelogram, planar, nonplanar };

/// Random, well-shaped vertex pyramid under a random rigid motion. Base corners
/// are perturbations of the unit square, the apex sits above the base.
inline VertexPyramid sample_pyramid(std::mt19937_64& gen, BaseKind kind)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        std::array<Vec3, 5> v{};
        const std::array<std::array<double, 2>, 4> corners{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
        for (std::size_t n = 0; n < 4; ++n) {
            v[n] = {corners[n][0] + 0.15 * u(gen), corners[n][1] + 0.15 * u(gen),
                    kind == BaseKind::nonplanar ? 0.15 * u(gen) : 0.0};
        }
        if (kind == BaseKind::parallelogram) {
            v[2] = {v[1][0] + v[3][0] - v[0][0], v[1][1] + v[3][1] - v[0][1], 0.0};
        }
        v[4] = {0.5 + 0.3 * u(gen), 0.5 + 0.3 * u(gen), 1.0 + 0.3 * u(gen)};

        // Rigid motion: rotation from a normalized random quaternion, then a shift.
        double qw = u(gen), qx = u(gen), qy = u(gen), qz = u(gen);
        const double qn = std::sqrt(qw * qw + qx * qx + qy * qy + qz * qz);
        if (qn < 1e-3) continue;
        qw /= qn, qx /= qn, qy /= qn, qz /= qn;
        const Mat3 rot{{{1 - 2 * (qy * qy + qz * qz), 2 * (qx * qy - qz * qw), 2 * (qx * qz + qy * qw)},
                        {2 * (qx * qy + qz * qw), 1 - 2 * (qx * qx + qz * qz), 2 * (qy * qz - qx * qw)},
                        {2 * (qx * qz - qy * qw), 2 * (qy * qz + qx * qw), 1 - 2 * (qx * qx + qy * qy)}}};
        const Vec3 shift{u(gen), u(gen), u(gen)};
        VertexPyramid p;
        for (std::size_t n = 0; n < 5; ++n) {
            for (std::size_t r = 0; r < 3; ++r) {
                p.vertices[n][r] = rot[r][0] * v[n][0] + rot[r][1] * v[n][1] + rot[r][2] * v[n][2] + shift[r];
            }
        }
        // J is bilinear in (a,b): positive at the four corners means positive everywhere.
        bool ok = true;
        for (const auto& [a, b] : corners) {
            ok = ok && detail::det3(jacobian_rst(p, {a, b, 0.0})) > 0.05;
        }
        if (ok) return p;
    }
}

/// The fixed set used by the reproduction suite: parallelogram, two planar, two non-planar bases.
inline std::vector<VertexPyramid> sample_pyramid_set(std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    return {sample_pyramid(gen, BaseKind::parallelogram), sample_pyramid(gen, BaseKind::planar),
            sample_pyramid(gen, BaseKind::planar), sample_pyramid(gen, BaseKind::nonplanar),
            sample_pyramid(gen, BaseKind::nonplanar)};
}

using BasisEvaluator = std::function<std::vector<double>(int, const CubePoint&)>;

inline BasisEvaluator default_evaluator()
{
    return [](int order, const CubePoint& q) { return pyramid_eval(order, q); };
}

/// Deliberately wrong evaluator used as a negative control: the first function is scaled by 1 + 1e-6.
inline BasisEvaluator faulty_evaluator()
{
    return [](int order, const CubePoint& q) {
        auto v = pyramid_eval(order, q);
        v.front() *= 1.0 + 1e-6;
        return v;
    };
}

struct SuiteResult {
    std::string name;
    bool passed = false;
    double max_error = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyConfig {
    int max_order = 4;
    std::uint64_t seed = 0;
    bool inject_fault = false;
};

namespace suite {

inline std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

inline constexpr double partition_tol = 1e-12;
inline constexpr double trace_paired_tol = 1e-12;
inline constexpr double trace_unpaired_tol = 1e-13;
inline constexpr double gradient_step = 1e-5;
inline constexpr double gradient_tol = 1e-6;
inline constexpr double span_tol = 1e-8;
inline constexpr double reproduction_tol = 1e-8;

inline SuiteResult partition_of_unity(const BasisEvaluator& eval, int max_order, std::uint64_t seed)
{
    SuiteResult r{"partition_of_unity", false, 0.0, partition_tol, ""};
    for (int n = 1; n <= max_order; ++n) {
        for (const auto& q : random_cube_points(200, seed + static_cast<std::uint64_t>(n))) {
            const auto v = eval(n, q);
            double s = 0.0;
            for (const double x : v) s += x;
            r.max_error = std::max(r.max_error, std::abs(s - 1.0));
        }
    }
    r.passed = r.max_error <= r.tolerance;
    r.detail = "N=1.." + std::to_string(max_order) + ", 200 points each";
    return r;
}

inline SuiteResult positivity(const BasisEvaluator& eval, int max_order, std::uint64_t seed)
{
    SuiteResult r{"positivity", false, 0.0, 0.0, ""};
    for (int n = 1; n <= max_order; ++n) {
        for (const auto& q : random_cube_points(200, seed + static_cast<std::uint64_t>(n))) {
            for (const double x : eval(n, q)) r.max_error = std::max(r.max_error, -x);
        }
    }
    r.passed = r.max_error <= 0.0;
    r.detail = "largest negative basis value";
    return r;
}

/// Paired functions must equal the face Bernstein functions, unpaired ones must vanish.
inline SuiteResult trace(const BasisEvaluator& eval, int max_order, std::uint64_t seed)
{
    SuiteResult r{"trace", false, 0.0, trace_paired_tol, ""};
    double paired = 0.0;
    double unpaired = 0.0;
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 1; n <= max_order; ++n) {
        for (const Face f : all_faces) {
            const auto map = trace_map(n, f);
            std::vector<bool> listed(pyramid_dimension(n), false);
            for (const auto& pr : map.pairs) listed[pr.pyramid_dof] = true;
            for (int s = 0; s < 50; ++s) {
                const double fu = u(gen), fv = u(gen);
                const auto vp = eval(n, face_to_cube(f, fu, fv));
                const auto vf = face_eval(n, f, fu, fv);
                for (const auto& pr : map.pairs) {
                    paired = std::max(paired, std::abs(vp[pr.pyramid_dof] - vf[pr.face_dof]));
                }
                for (std::size_t m = 0; m < vp.size(); ++m) {
                    if (!listed[m]) unpaired = std::max(unpaired, std::abs(vp[m]));
                }
            }
        }
    }
    r.max_error = std::max(paired, unpaired);
    r.passed = paired <= trace_paired_tol && unpaired <= trace_unpaired_tol;
    r.detail = "paired " + sci(paired) + " (tol 1e-12), unpaired " + sci(unpaired) +
               " (tol 1e-13)";
    return r;
}

/// Analytic (r,s,t) gradients against central differences of the evaluator in
/// reference coordinates; error is |g - fd| / max(1, |g|).
inline SuiteResult gradient(const BasisEvaluator& eval, int max_order, std::uint64_t seed, int points = 100)
{
    SuiteResult r{"gradient", false, 0.0, gradient_tol, ""};
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> uab(0.05, 0.95);
    std::uniform_real_distribution<double> uc(0.05, 0.8);
    const double h = gradient_step;
    auto eval_rst = [&](int n, const PyramidPoint& p) { return eval(n, to_cube(p)); };
    double apex_layer = 0.0;
    for (int n = 1; n <= max_order; ++n) {
        const auto idx = pyramid_indices(n);
        for (int s = 0; s < points; ++s) {
            const CubePoint q{uab(gen), uab(gen), uc(gen)};
            const PyramidPoint p = to_pyramid(q);
            const auto g = pyramid_grad_rst(n, q);
            const std::array<const std::vector<double>*, 3> comps{&g.d0, &g.d1, &g.d2};
            for (std::size_t dir = 0; dir < 3; ++dir) {
                PyramidPoint lo = p, hi = p;
                (dir == 0 ? lo.r : dir == 1 ? lo.s : lo.t) -= h;
                (dir == 0 ? hi.r : dir == 1 ? hi.s : hi.t) += h;
                const auto vl = eval_rst(n, lo);
                const auto vh = eval_rst(n, hi);
                for (std::size_t m = 0; m < vl.size(); ++m) {
                    const double fd = (vh[m] - vl[m]) / (2.0 * h);
                    const double an = (*comps[dir])[m];
                    r.max_error = std::max(r.max_error, std::abs(an - fd) / std::max(1.0, std::abs(an)));
                }
            }
            for (std::size_t m = 0; m < idx.size(); ++m) {
                if (idx[m].k == n) apex_layer = std::max({apex_layer, std::abs(g.d0[m]), std::abs(g.d1[m])});
            }
        }
    }
    r.passed = r.max_error <= gradient_tol && apex_layer == 0.0;
    r.detail = "h=1e-5, k=N d/dr,d/ds max " + sci(apex_layer);
    return r;
}

inline SuiteResult span(int max_order, std::uint64_t seed)
{
    SuiteResult r{"span_equivalence", true, 0.0, span_tol, ""};
    for (int n = 1; n <= max_order; ++n) {
        const auto rep = span_equivalence(n, span_tol, seed + static_cast<std::uint64_t>(n));
        r.max_error = std::max({r.max_error, rep.max_semi_in_bb, rep.max_bb_in_semi});
        if (!rep.passed) {
            r.passed = false;
            r.detail += "N=" + std::to_string(n) + " failed (" + rep.failed_direction + ") ";
        }
    }
    if (r.passed) r.detail = "both directions, N=1.." + std::to_string(max_order);
    return r;
}

inline SuiteResult reproduction(int max_order, std::uint64_t seed)
{
    SuiteResult r{"polynomial_reproduction", true, 0.0, reproduction_tol, ""};
    const auto pyramids = sample_pyramid_set(seed);
    for (std::size_t g = 0; g < pyramids.size(); ++g) {
        for (int n = 1; n <= max_order; ++n) {
            const auto rep = polynomial_reproduction(n, pyramids[g], reproduction_tol, seed + static_cast<std::uint64_t>(n));
            r.max_error = std::max(r.max_error, rep.max_residual);
            if (!rep.passed) {
                r.passed = false;
                r.detail += "pyramid " + std::to_string(g) + " N=" + std::to_string(n) + " failed ";
            }
        }
    }
    if (r.passed) r.detail = "5 pyramids (2 non-planar), N=1.." + std::to_string(max_order);
    return r;
}

} // namespace suite

/// Runs every suite. Trace and gradient stop at N=6, span and reproduction at N=4.
inline std::vector<SuiteResult> run_verification(const VerifyConfig& cfg)
{
    if (cfg.max_order < 1 || cfg.max_order > 8) {
        throw DomainError("verify supports N_max in 1..8");
    }
    const auto eval = cfg.inject_fault ? faulty_evaluator() : default_evaluator();
    const int n = cfg.max_order;
    return {suite::partition_of_unity(eval, n, cfg.seed),
            suite::positivity(eval, n, cfg.seed),
            suite::trace(eval, std::min(n, 6), cfg.seed + 101),
            suite::gradient(eval, std::min(n, 6), cfg.seed + 202),
            suite::span(std::min(n, 4), cfg.seed + 303),
            suite::reproduction(std::min(n, 4), cfg.seed + 404)};
}

inline bool all_passed(const std::vector<SuiteResult>& results)
{
    return std::all_of(results.begin(), results.end(), [](const SuiteResult& r) { return r.passed; });
}

inline nlohmann::ordered_json verification_json(const VerifyConfig& cfg, const std::vector<SuiteResult>& results)
{
    nlohmann::ordered_json j;
    j["max_order"] = cfg.max_order;
    j["seed"] = cfg.seed;
    j["passed"] = all_passed(results);
    auto& suites = j["suites"];
    suites = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        suites.push_back({{"name", r.name},
                          {"passed", r.passed},
                          {"max_error", r.max_error},
                          {"tolerance", r.tolerance},
                          {"detail", r.detail}});
    }
    return j;
}

} // namespace bbpyr
