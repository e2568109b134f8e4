#include "persep/cli.hpp"

#include "persep/checks.hpp"
#include "persep/cones.hpp"
#include "persep/oracle.hpp"
#include "persep/plot.hpp"
#include "persep/scene.hpp"
#include "persep/separation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace persep {

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInput = 2;

double rounded(double v, int precision) {
    if (precision >= 15) return v;
    const double scale = std::pow(10.0, precision);
    double r = std::round(v * scale) / scale;
    if (r == 0.0) r = 0.0;  // normalize -0
    return r;
}

json vec_json(const Vec& v, int precision) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(rounded(v[i], precision));
    return out;
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SceneError("cannot open scene file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scene(buf.str());
}

// The supporting-hyperplane command works on one convex piece; its coords
// are the polytope vertices whether the piece was written as points or as a
// polytope (the supported object is the hull either way).
Polytope support_body(const Scene& scene, const Tolerance& tol) {
    if (scene.set_b) {
        throw SceneError("support: scene must contain a single set (A or C), no B");
    }
    if (scene.set_a.pieces.size() != 1) {
        throw SceneError("support: the set must consist of exactly one convex piece");
    }
    return Polytope::make(piece_coords(scene.set_a.pieces.front()), tol);
}

json certificate_json(const SeparationCertificate& cert, int precision) {
    json doc;
    doc["status"] = "Separated";
    doc["normal"] = vec_json(cert.hyperplane.normal, precision);
    doc["anchor"] = vec_json(cert.hyperplane.anchor, precision);
    doc["side_a_max"] = rounded(cert.side_a_max, precision);
    doc["side_b_min"] = rounded(cert.side_b_min, precision);
    doc["margin"] = rounded(cert.margin, precision);
    return doc;
}

int emit(std::ostream& out, const json& doc) {
    out << doc.dump(2) << "\n";
    return kExitOk;
}

bool fm_in_envelope(Index dim, std::size_t rows) {
    return dim <= kMaxFmDim && rows <= kMaxFmRows;
}

// Substitute N_i = s into the homogeneous rows and ask Fourier-Motzkin about
// the remaining coordinates; the homogeneous system has a nonzero solution
// iff some pinned subsystem is feasible.
bool fm_homogeneous_feasible(const std::vector<LinearConstraint>& rows, Index dim) {
    for (Index i = 0; i < dim; ++i) {
        for (int si = 0; si < 2; ++si) {
            const double s = si == 0 ? 1.0 : -1.0;
            if (dim == 1) {
                bool ok = true;
                for (const auto& r : rows) {
                    if (r.coeffs[0] * s > 0.0) ok = false;
                }
                if (ok) return true;
                continue;
            }
            std::vector<LinearConstraint> reduced;
            for (const auto& r : rows) {
                Vec c(dim - 1);
                Index k = 0;
                for (Index j = 0; j < dim; ++j) {
                    if (j != i) c[k++] = r.coeffs[j];
                }
                reduced.push_back({c, Rel::LessEq, -s * r.coeffs[i]});
            }
            if (fm_feasible(reduced)) return true;
        }
    }
    return false;
}

int run_support(const Scene& scene, bool verify, int precision, std::ostream& out,
                std::ostream& err) {
    const Tolerance tol = scene.effective_tolerance();
    if (!scene.point_p) throw SceneError("support: scene needs a point p");
    const Polytope body = support_body(scene, tol);
    const Vec& p = *scene.point_p;
    const SupportOutcome res = supporting_hyperplane(body, p, tol);

    if (verify) {
        std::vector<LinearConstraint> rows;
        for (const auto& v : body.vertices) {
            if ((v - p).norm() > tol.eps_zero) rows.push_back({v - p, Rel::LessEq, 0.0});
        }
        if (res.status == SupportStatus::Supported) {
            double worst = 0.0;
            for (const auto& v : body.vertices) {
                worst = std::max(worst, res.hyperplane->normal.dot(v - p));
            }
            if (worst > tol.eps_feas) {
                err << "verify: certificate re-evaluation failed (" << worst << ")\n";
                return kExitNegative;
            }
        }
        if (rows.empty()) {
            if (res.status != SupportStatus::Supported) {
                err << "verify: degenerate body must be supported\n";
                return kExitNegative;
            }
        } else if (fm_in_envelope(scene.dim, rows.size())) {
            const bool fmSays = fm_homogeneous_feasible(rows, scene.dim);
            if (fmSays != (res.status == SupportStatus::Supported)) {
                err << "verify: fourier-motzkin disagrees with the support status\n";
                return kExitNegative;
            }
        } else {
            err << "verify: scene outside the fourier-motzkin envelope, "
                   "certificate re-evaluation only\n";
        }
    }

    if (res.status == SupportStatus::PInInterior) {
        err << "p lies in the interior of the hull; no supporting hyperplane exists\n";
        json doc;
        doc["status"] = "PInInterior";
        emit(out, doc);
        return kExitNegative;
    }
    json doc;
    doc["status"] = "Supported";
    doc["normal"] = vec_json(res.hyperplane->normal, precision);
    doc["anchor"] = vec_json(res.hyperplane->anchor, precision);
    return emit(out, doc);
}

int run_separate(const Scene& scene, bool atPoint, bool verify, int precision, std::ostream& out,
                 std::ostream& err) {
    const Tolerance tol = scene.effective_tolerance();
    if (!scene.set_b) throw SceneError("separate: scene needs sets A and B");
    const SetExpr& a = scene.set_a;
    const SetExpr& b = *scene.set_b;

    auto verify_at = [&](const Vec& p, bool separated) -> bool {
        if (scene.dim != 2) {
            err << "verify: sweep oracle only covers dimension 2, skipping\n";
            return true;
        }
        const Separability2D sweep = oracle_separable_2d(a, b, p, tol);
        if (sweep.separable != separated) {
            err << "verify: 2d sweep oracle disagrees with the separation status\n";
            return false;
        }
        return true;
    };

    if (atPoint) {
        if (!scene.point_p) throw SceneError("separate --at-point: scene needs a point p");
        const SeparationOutcome res = separate_through_point(a, b, *scene.point_p, tol);
        if (res.status == SeparationStatus::DegeneratePoint) {
            err << "p belongs to one of the sets (trivial perspective cone)\n";
            json doc;
            doc["status"] = "DegeneratePoint";
            emit(out, doc);
            return kExitNegative;
        }
        if (verify && !verify_at(*scene.point_p, res.status == SeparationStatus::Separated)) {
            return kExitNegative;
        }
        if (res.status == SeparationStatus::NotSeparableThroughP) {
            err << "the two perspective cones cannot be split through p\n";
            json doc;
            doc["status"] = "NotSeparableThroughP";
            emit(out, doc);
            return kExitNegative;
        }
        return emit(out, certificate_json(*res.certificate, precision));
    }

    const FindPointOutcome res = find_perspective_point(a, b, SearchConfig{}, tol);
    if (res.status == FindPointStatus::NotFound) {
        err << "no perspective point found\n";
        json doc;
        doc["status"] = "NotFound";
        emit(out, doc);
        return kExitNegative;
    }
    if (verify && !verify_at(*res.point, true)) return kExitNegative;
    return emit(out, certificate_json(*res.certificate, precision));
}

const char* verdict_name(Convexity v) {
    switch (v) {
        case Convexity::Convex: return "Convex";
        case Convexity::NotConvex: return "NotConvex";
        case Convexity::Unknown: return "Unknown";
    }
    return "Unknown";
}

int run_cone(const Scene& scene, int precision, std::ostream& out, std::ostream& err) {
    const Tolerance tol = scene.effective_tolerance();
    if (!scene.point_p) throw SceneError("cone: scene needs a point p");
    (void)err;
    json sets;
    auto describe = [&](const SetExpr& s) {
        const auto cones = perspective_cone(s, *scene.point_p, tol);
        json info;
        info["trivial"] = cones.front().trivial;
        json pieces = json::array();
        for (const auto& k : cones) {
            json piece;
            json gens = json::array();
            for (const auto& g : k.generators) gens.push_back(vec_json(g, precision));
            piece["generators"] = std::move(gens);
            pieces.push_back(std::move(piece));
        }
        info["pieces"] = std::move(pieces);
        info["verdict"] = verdict_name(union_convexity(cones, tol).verdict);
        return info;
    };
    sets[scene.set_a_name] = describe(scene.set_a);
    if (scene.set_b) sets["B"] = describe(*scene.set_b);
    json doc;
    doc["status"] = "ok";
    doc["sets"] = std::move(sets);
    return emit(out, doc);
}

int run_check(long trials, std::uint64_t seed, std::ostream& out, std::ostream& err) {
    const auto results = run_lemma_suite(trials, seed);
    bool allOk = true;
    json arr = json::array();
    for (const auto& r : results) {
        err << (r.ok() ? "pass" : "FAIL") << "  " << r.name << "  " << r.passed << "/" << r.trials;
        if (!r.detail.empty()) err << "  (" << r.detail << ")";
        err << "\n";
        json item;
        item["name"] = r.name;
        item["passed"] = r.passed;
        item["trials"] = r.trials;
        arr.push_back(std::move(item));
        allOk = allOk && r.ok();
    }
    json doc;
    doc["status"] = allOk ? "ok" : "failed";
    doc["seed"] = seed;
    doc["trials"] = trials;
    doc["results"] = std::move(arr);
    emit(out, doc);
    return allOk ? kExitOk : kExitNegative;
}

int run_plot(const Scene& scene, const std::string& outPath, std::ostream& out,
             std::ostream& err) {
    const Tolerance tol = scene.effective_tolerance();
    std::optional<Hyperplane> line;
    Scene drawn = scene;
    bool negative = false;

    if (scene.set_b && scene.point_p) {
        const SeparationOutcome res =
            separate_through_point(scene.set_a, *scene.set_b, *scene.point_p, tol);
        if (res.status == SeparationStatus::Separated) {
            line = res.certificate->hyperplane;
        } else {
            negative = true;
            err << "plot: separation through p failed; drawing sets only\n";
        }
    } else if (scene.set_b) {
        const FindPointOutcome res =
            find_perspective_point(scene.set_a, *scene.set_b, SearchConfig{}, tol);
        if (res.status == FindPointStatus::Found) {
            line = res.certificate->hyperplane;
            drawn.point_p = res.point;
        } else {
            negative = true;
            err << "plot: no perspective point found; drawing sets only\n";
        }
    } else if (scene.point_p && scene.set_a.pieces.size() == 1) {
        const SupportOutcome res =
            supporting_hyperplane(support_body(scene, tol), *scene.point_p, tol);
        if (res.status == SupportStatus::Supported) {
            line = res.hyperplane;
        } else {
            negative = true;
            err << "plot: p lies in the hull interior; drawing the set only\n";
        }
    }

    if (outPath.empty() || outPath == "-") {
        emit_plot_2d(drawn, line, out);
    } else {
        std::ofstream file(outPath, std::ios::binary);
        if (!file) throw SceneError("plot: cannot open output file '" + outPath + "'");
        emit_plot_2d(drawn, line, file);
    }
    return negative ? kExitNegative : kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"supporting and separating hyperplanes for finite geometric scenes"};
    app.require_subcommand(1);

    bool verify = false;
    int precision = 6;
    app.add_flag("--verify", verify, "cross-check results against the exact oracles");
    app.add_option("--precision", precision, "decimal places in result documents (>= 15: full)")
        ->check(CLI::Range(0, 17));

    std::string supportPath, separatePath, conePath, plotPath;
    std::string plotOut = "-";
    bool atPoint = false;
    std::string suite;
    long trials = 100;
    std::uint64_t seed = kDefaultCheckSeed;
    if (const char* env = std::getenv("PERSEP_SEED")) {
        seed = std::strtoull(env, nullptr, 10);
    }

    CLI::App* support = app.add_subcommand("support", "supporting hyperplane through p");
    support->add_option("scene", supportPath, "scene file")->required();

    CLI::App* separate = app.add_subcommand("separate", "separate sets A and B");
    separate->add_option("scene", separatePath, "scene file")->required();
    separate->add_flag("--at-point", atPoint, "separate through the scene's p instead of searching");

    CLI::App* cone = app.add_subcommand("cone", "perspective cones and union convexity at p");
    cone->add_option("scene", conePath, "scene file")->required();

    CLI::App* check = app.add_subcommand("check", "randomized lemma and theorem suites");
    check->add_option("suite", suite, "which suite to run (lemmas)")->required();
    check->add_option("--trials", trials, "trials per lemma")->check(CLI::PositiveNumber);
    CLI::Option* seedOpt = check->add_option("--seed", seed, "seed for the deterministic stream");

    CLI::App* plot = app.add_subcommand("plot", "emit a deterministic 2D SVG of the scene");
    plot->add_option("scene", plotPath, "scene file")->required();
    plot->add_option("-o,--out", plotOut, "output file ('-' for standard output)");

    try {
        app.parse(argc, const_cast<char**>(argv));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (support->parsed()) {
            return run_support(load_scene(supportPath), verify, precision, out, err);
        }
        if (separate->parsed()) {
            return run_separate(load_scene(separatePath), atPoint, verify, precision, out, err);
        }
        if (cone->parsed()) {
            return run_cone(load_scene(conePath), precision, out, err);
        }
        if (check->parsed()) {
            if (suite != "lemmas") throw SceneError("check: unknown suite '" + suite + "'");
            (void)seedOpt;
            return run_check(trials, seed, out, err);
        }
        if (plot->parsed()) {
            return run_plot(load_scene(plotPath), plotOut, out, err);
        }
    } catch (const SceneError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}

}  // namespace persep
