#pragma once

// Command-line front end: dim, eval, assemble, verify, cond-study.
//
// Exit codes: 0 success, 1 verification failure, 2 usage, 3 domain,
// 4 parse, 5 geometry.

#include "bbpyr/analysis.hpp"
#include "bbpyr/assembly.hpp"
#include "bbpyr/element_bases.hpp"
#include "bbpyr/errors.hpp"
#include "bbpyr/geometry.hpp"
#include "bbpyr/verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace bbpyr::cli {

inline constexpr const char* tool_version = "0.1.0";

enum ExitCode : int {
    exit_ok = 0,
    exit_verification = 1,
    exit_usage = 2,
    exit_domain = 3,
    exit_parse = 4,
    exit_geometry = 5,
};

enum class Format { csv, json };

/// Round-trip exact decimal ("%.17g").
inline std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline VertexPyramid parse_geometry(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("vertices")) {
        throw ParseError("geometry must be an object with a \"vertices\" array");
    }
    const auto& vs = j.at("vertices");
    if (!vs.is_array() || vs.size() != 5) {
        throw ParseError("geometry \"vertices\" must hold exactly 5 points");
    }
    VertexPyramid p;
    for (std::size_t n = 0; n < 5; ++n) {
        const auto& v = vs[n];
        if (!v.is_array() || v.size() != 3) {
            throw ParseError("vertex " + std::to_string(n) + " must be [x, y, z]");
        }
        for (std::size_t d = 0; d < 3; ++d) {
            if (!v[d].is_number()) {
                throw ParseError("vertex " + std::to_string(n) + " has a non-numeric coordinate");
            }
            p.vertices[n][d] = v[d].get<double>();
        }
    }
    return p;
}

inline VertexPyramid load_geometry(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open geometry file '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("geometry file '" + path + "': " + e.what());
    }
    return parse_geometry(j);
}

/// J is bilinear in (a,b), so checking the four base corners decides positivity everywhere.
inline void check_geometry(const VertexPyramid& p)
{
    for (const auto& [a, b] : std::array<std::array<double, 2>, 4>{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}) {
        (void)jacobian_det(p, {a, b, 0.0});
    }
}

/// FNV-1a over the "%.17g" text of the 15 coordinates.
inline std::string geometry_hash(const VertexPyramid& p)
{
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& v : p.vertices) {
        for (const double x : v) {
            for (const char ch : format_double(x) + ",") {
                h ^= static_cast<unsigned char>(ch);
                h *= 1099511628211ull;
            }
        }
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string matrix_csv(const Eigen::MatrixXd& m)
{
    std::string s;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) s += ',';
            s += format_double(m(r, c));
        }
        s += '\n';
    }
    return s;
}

inline nlohmann::ordered_json matrix_json(const ElementMatrix& m, const std::string& geometry)
{
    nlohmann::ordered_json j;
    j["shape"] = std::string(to_string(m.shape));
    j["N"] = m.order;
    j["kind"] = std::string(to_string(m.kind));
    j["nq"] = m.nq;
    j["geometry_hash"] = geometry;
    j["restricted"] = m.restricted;
    j["symmetric"] = m.symmetry == Symmetry::symmetric;
    j["asymmetry"] = m.asymmetry;
    j["rows"] = m.entries.rows();
    j["cols"] = m.entries.cols();
    auto& e = j["entries"];
    e = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < m.entries.rows(); ++r) {
        auto row = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < m.entries.cols(); ++c) row.push_back(m.entries(r, c));
        e.push_back(std::move(row));
    }
    return j;
}

inline std::string study_csv(const StudyResult& res)
{
    std::string s = "shape,kind,N,dof_count,nq,lambda_min,lambda_max,cond\n";
    for (const auto& r : res.records) {
        s += std::string(to_string(r.shape)) + ',' + std::string(to_string(r.kind)) + ',' + std::to_string(r.order) +
             ',' + std::to_string(r.dof_count) + ',' + std::to_string(r.nq) + ',' + format_double(r.lambda_min) + ',' +
             format_double(r.lambda_max) + ',' + format_double(*r.cond) + '\n';
    }
    return s;
}

inline nlohmann::ordered_json study_json(const StudyResult& res, const StudyConfig& cfg, std::uint64_t seed)
{
    nlohmann::ordered_json j;
    j["tool"] = "bbpyr";
    j["version"] = tool_version;
    j["seed"] = seed;
    j["min_order"] = cfg.min_order;
    j["max_order"] = cfg.max_order;
    j["restrict_mass"] = cfg.restrict_mass;
    j["restrict_stiffness"] = cfg.restrict_stiffness;
    auto& recs = j["records"];
    recs = nlohmann::ordered_json::array();
    for (const auto& r : res.records) {
        recs.push_back({{"shape", std::string(to_string(r.shape))},
                        {"kind", std::string(to_string(r.kind))},
                        {"N", r.order},
                        {"dof_count", r.dof_count},
                        {"nq", r.nq},
                        {"lambda_min", r.lambda_min},
                        {"lambda_max", r.lambda_max},
                        {"cond", *r.cond}});
    }
    auto& sk = j["skipped"];
    sk = nlohmann::ordered_json::array();
    for (const auto& r : res.skipped) {
        sk.push_back({{"shape", std::string(to_string(r.shape))},
                      {"kind", std::string(to_string(r.kind))},
                      {"N", r.order},
                      {"reason", r.reason}});
    }
    return j;
}

namespace detail {

/// Writes to the file when a path was given, otherwise to the fallback stream.
inline void emit(const std::string& path, const std::string& text, std::ostream& fallback)
{
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw UsageError("cannot open output file '" + path + "'");
    }
    f << text;
}

inline Shape require_shape(const std::string& name)
{
    const auto s = parse_shape(name);
    if (!s) {
        throw UsageError("unknown shape '" + name + "' (expected triangle, quad, tetrahedron or pyramid)");
    }
    return *s;
}

inline Format require_format(const std::string& name)
{
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    throw UsageError("unknown format '" + name + "' (expected csv or json)");
}

inline std::string label(const std::vector<int>& idx)
{
    std::string s = "(";
    for (std::size_t n = 0; n < idx.size(); ++n) {
        if (n) s += ',';
        s += std::to_string(idx[n]);
    }
    return s + ")";
}

inline std::vector<double> eval_at(Shape shape, int order, const std::vector<double>& pt)
{
    const std::size_t want = (shape == Shape::triangle || shape == Shape::quad) ? 2 : 3;
    if (pt.size() != want) {
        throw UsageError(std::string(to_string(shape)) + " points need " + std::to_string(want) + " coordinates");
    }
    switch (shape) {
    case Shape::pyramid: return pyramid_eval_rst(order, {pt[0], pt[1], pt[2]});
    case Shape::quad: return quad_eval(order, pt[0], pt[1]);
    case Shape::triangle: return triangle_eval(order, {1.0 - pt[0] - pt[1], pt[0], pt[1]});
    case Shape::tetrahedron: return tet_eval(order, tet_barycentric(pt[0], pt[1], pt[2]));
    }
    return {};
}

} // namespace detail

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Bernstein-Bezier pyramid and tetrahedron bases: evaluation, assembly, verification, conditioning"};
    app.require_subcommand(1);

    std::string shape_name = "pyramid";
    std::string format_name = "csv";
    std::string out_path;
    std::string geometry_path;
    std::string kind_name;
    int order = -1;
    int min_order = 1;
    int nq = 0;
    std::uint64_t seed = 0;
    std::vector<double> point;
    bool restrict_flag = false;
    bool restrict_mass = false;
    bool no_restrict_stiffness = false;
    bool inject_fault = false;

    auto* dim = app.add_subcommand("dim", "print the basis dimension");
    dim->add_option("--shape", shape_name, "triangle | quad | tetrahedron | pyramid")->required();
    dim->add_option("--order", order, "polynomial order N")->required();

    auto* ev = app.add_subcommand("eval", "print every basis function at a reference point");
    ev->add_option("--shape", shape_name, "triangle | quad | tetrahedron | pyramid");
    ev->add_option("--order", order, "polynomial order N")->required();
    ev->add_option("--point", point, "reference coordinates, e.g. 0.2,0.1,0.3 (pyramid: r,s,t)")
        ->required()
        ->delimiter(',');

    auto* as = app.add_subcommand("assemble", "write an element matrix");
    as->add_option("--kind", kind_name, "mass | weak_x | weak_y | weak_z | stiffness")->required();
    as->add_option("--shape", shape_name, "pyramid | tetrahedron");
    as->add_option("--order", order, "polynomial order N")->required();
    as->add_option("--geometry", geometry_path, "pyramid geometry JSON {\"vertices\": [[x,y,z] x 5]}");
    as->add_option("--nq", nq, "quadrature points per direction (default N+2)");
    as->add_flag("--restrict", restrict_flag, "keep only the interior (Dirichlet-reduced) block");
    as->add_option("--out", out_path, "output file (default stdout)");
    as->add_option("--format", format_name, "csv | json");

    auto* vf = app.add_subcommand("verify", "run the basis property suites");
    vf->add_option("--order", order, "largest order checked (default 4, at most 8)");
    vf->add_option("--seed", seed, "random seed (default 0)");
    vf->add_option("--out", out_path, "JSON summary file");
    vf->add_option("--format", format_name, "csv (table) | json");
    vf->add_flag("--inject-fault", inject_fault)->group("");

    auto* cs = app.add_subcommand("cond-study", "condition numbers of reference mass and stiffness matrices");
    cs->add_option("--order", order, "largest order (default 6)");
    cs->add_option("--min-order", min_order, "smallest order (default 1)");
    std::vector<std::string> study_shapes;
    cs->add_option("--shape", study_shapes, "restrict to pyramid and/or tetrahedron");
    cs->add_option("--nq", nq, "quadrature points per direction (default N+2)");
    cs->add_option("--seed", seed, "recorded in JSON metadata");
    cs->add_flag("--restrict-mass", restrict_mass, "condition the interior mass block instead of the full matrix");
    cs->add_flag("--no-restrict-stiffness", no_restrict_stiffness, "condition the full (singular) stiffness");
    cs->add_option("--out", out_path, "output file (default stdout)");
    cs->add_option("--format", format_name, "csv | json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (*dim) {
            const Shape s = detail::require_shape(shape_name);
            out << BasisDescriptor{s, order}.dimension() << "\n";
            return exit_ok;
        }

        if (*ev) {
            const Shape s = detail::require_shape(shape_name);
            if (order < 0) throw UsageError("--order must be >= 0");
            const auto vals = detail::eval_at(s, order, point);
            const auto labels = index_set({s, order});
            for (std::size_t m = 0; m < vals.size(); ++m) {
                out << detail::label(labels[m]) << ": " << format_double(vals[m]) << "\n";
            }
            return exit_ok;
        }

        if (*as) {
            const Shape s = detail::require_shape(shape_name);
            const Format fmt = detail::require_format(format_name);
            const auto kind = parse_matrix_kind(kind_name);
            if (!kind) throw UsageError("unknown matrix kind '" + kind_name + "'");
            if (order < 0) throw UsageError("--order must be >= 0");
            const int points = nq > 0 ? nq : default_nq(order);

            ElementMatrix m;
            std::string ghash = "reference";
            if (s == Shape::pyramid) {
                VertexPyramid p = reference_pyramid();
                if (!geometry_path.empty()) {
                    p = load_geometry(geometry_path);
                }
                check_geometry(p);
                ghash = geometry_hash(p);
                switch (*kind) {
                case MatrixKind::mass: m = mass_matrix(order, p, points); break;
                case MatrixKind::stiffness: m = stiffness_matrix(order, p, points); break;
                default: {
                    auto w = weak_derivative_matrices(order, p, points);
                    m = w[*kind == MatrixKind::weak_x ? 0 : *kind == MatrixKind::weak_y ? 1 : 2];
                }
                }
                if (*kind == MatrixKind::stiffness && !is_affine(p)) {
                    err << "note: stiffness on a non-affine pyramid is approximate (nq = " << points << ")\n";
                }
            } else if (s == Shape::tetrahedron) {
                if (!geometry_path.empty()) throw UsageError("tetrahedron matrices use the reference element only");
                if (*kind != MatrixKind::mass && *kind != MatrixKind::stiffness) {
                    throw UsageError("tetrahedron supports mass and stiffness only");
                }
                auto t = tet_matrices(order, points);
                m = *kind == MatrixKind::mass ? t.mass : t.stiffness;
            } else {
                throw UsageError("assemble supports pyramid and tetrahedron only");
            }

            if (restrict_flag) {
                m = restrict_matrix(m, dirichlet_partition(order, s));
                if (m.empty()) {
                    err << "warning: " << to_string(s) << " N=" << order
                        << " has no interior degrees of freedom; restricted matrix is empty\n";
                }
            }
            const std::string text = fmt == Format::csv ? matrix_csv(m.entries) : matrix_json(m, ghash).dump(2) + "\n";
            detail::emit(out_path, text, out);
            return exit_ok;
        }

        if (*vf) {
            const Format fmt = detail::require_format(format_name);
            VerifyConfig cfg;
            cfg.max_order = order < 0 ? 4 : order;
            cfg.seed = seed;
            cfg.inject_fault = inject_fault;
            const auto results = run_verification(cfg);
            const std::string json = verification_json(cfg, results).dump(2) + "\n";
            if (fmt == Format::json && out_path.empty()) {
                out << json;
            } else {
                char line[160];
                std::snprintf(line, sizeof line, "%-26s %-6s %-12s %s\n", "suite", "status", "max_error", "tolerance");
                out << line;
                for (const auto& r : results) {
                    std::snprintf(line, sizeof line, "%-26s %-6s %-12.3e %.1e\n", r.name.c_str(),
                                  r.passed ? "PASS" : "FAIL", r.max_error, r.tolerance);
                    out << line;
                }
                if (!out_path.empty()) detail::emit(out_path, json, out);
            }
            for (const auto& r : results) {
                if (!r.passed) err << "suite failed: " << r.name << " (" << r.detail << ")\n";
            }
            return all_passed(results) ? exit_ok : exit_verification;
        }

        if (*cs) {
            const Format fmt = detail::require_format(format_name);
            StudyConfig cfg;
            cfg.min_order = min_order;
            cfg.max_order = order < 0 ? 6 : order;
            if (nq > 0) cfg.nq = nq;
            cfg.restrict_mass = restrict_mass;
            cfg.restrict_stiffness = !no_restrict_stiffness;
            if (!study_shapes.empty()) {
                cfg.shapes.clear();
                for (const auto& name : study_shapes) cfg.shapes.push_back(detail::require_shape(name));
            }
            const auto res = conditioning_study(cfg);
            for (const auto& sk : res.skipped) {
                err << "skipped: " << to_string(sk.shape) << " " << to_string(sk.kind) << " N=" << sk.order << ": "
                    << sk.reason << "\n";
            }
            const std::string text = fmt == Format::csv ? study_csv(res) : study_json(res, cfg, seed).dump(2) + "\n";
            detail::emit(out_path, text, out);
            return exit_ok;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return exit_domain;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return exit_parse;
    } catch (const GeometryError& e) {
        err << "geometry error: " << e.what() << "\n";
        return exit_geometry;
    }
    return exit_usage;
}

} // namespace bbpyr::cli
