#include "persep/checks.hpp"

#include "persep/angular.hpp"
#include "persep/lp.hpp"
#include "persep/oracle.hpp"
#include "persep/rng.hpp"
#include "persep/separation.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace persep {

namespace {

const Tolerance kTol{};
constexpr double kPi = std::numbers::pi;

Vec random_int_vec(SplitMix64& rng, Index dim, int lo, int hi) {
    Vec v(dim);
    for (Index j = 0; j < dim; ++j) v[j] = static_cast<double>(rng.next_int(lo, hi));
    return v;
}

Polytope random_polytope(SplitMix64& rng, Index dim, int maxVerts) {
    const int k = static_cast<int>(rng.next_int(static_cast<int>(dim) + 1, maxVerts));
    std::vector<Vec> verts;
    verts.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) verts.push_back(random_int_vec(rng, dim, -10, 10));
    return Polytope::make(std::move(verts), kTol);
}

// p with hull_interior_contains false, by rejection.
Vec random_non_interior_point(SplitMix64& rng, const Polytope& c) {
    for (;;) {
        const Vec p = random_int_vec(rng, c.dim, -10, 10);
        if (!hull_interior_contains(c, p, kTol)) return p;
    }
}

std::string describe_trial(const char* what, long trial) {
    std::ostringstream os;
    os << what << " failed at trial " << trial;
    return os.str();
}

// One wedge of points with angles inside [alpha, alpha+width] and radii in
// [0.7, 10]. Radii are snapped to a coarse grid so coordinates stay tame.
PointSet sector_cloud(SplitMix64& rng, double alpha, double width, int count) {
    std::vector<Vec> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double ang = alpha + rng.next_unit() * width;
        const double rad = 0.7 + rng.next_in(0.0, 9.3);
        Vec v(2);
        v << rad * std::cos(ang), rad * std::sin(ang);
        pts.push_back(v);
    }
    return PointSet::make(std::move(pts), kTol);
}

struct SectorScene {
    SetExpr a;
    SetExpr b;
};

// Scenes whose two piece-cone unions at the origin are convex (exact angular
// verdict) with disjoint arc interiors. Generated constructively, then
// filtered by the exact check itself; occasionally the two sectors touch,
// which keeps zero-margin separations in the population.
SectorScene random_sector_scene(SplitMix64& rng) {
    for (;;) {
        const double wa = rng.next_in(0.05, kPi - 0.2);
        const double wb = rng.next_in(0.05, kPi - 0.2);
        const double slack = 2.0 * kPi - wa - wb;
        const double alpha = rng.next_in(0.0, 2.0 * kPi);
        const bool touching = rng.next_unit() < 0.15;
        const double gap1 = touching ? 0.0 : rng.next_in(0.02, slack - 0.02);
        const double beta = alpha + wa + gap1;

        auto build = [&](double start, double width) {
            std::vector<SetPiece> pieces;
            const int npieces = static_cast<int>(rng.next_int(1, 2));
            pieces.push_back(sector_cloud(rng, start, width, static_cast<int>(rng.next_int(2, 5))));
            if (npieces == 2) {
                // nested sub-wedge anchored at both ends so the arc union
                // stays connected
                std::vector<Vec> pts;
                pts.push_back(unit_at(start) * rng.next_in(1.0, 9.0));
                pts.push_back(unit_at(start + width) * rng.next_in(1.0, 9.0));
                const int extra = static_cast<int>(rng.next_int(0, 2));
                for (int i = 0; i < extra; ++i) {
                    const double ang = start + rng.next_unit() * width;
                    pts.push_back(unit_at(ang) * rng.next_in(1.0, 9.0));
                }
                pieces.push_back(PointSet::make(std::move(pts), kTol));
            }
            return SetExpr::make(std::move(pieces));
        };

        SectorScene scene{build(alpha, wa), build(beta, wb)};
        const Vec origin = Vec::Zero(2);

        const auto conesA = perspective_cone(scene.a, origin, kTol);
        const auto conesB = perspective_cone(scene.b, origin, kTol);
        if (conesA.front().trivial || conesB.front().trivial) continue;
        if (union_convexity(conesA, kTol).verdict != Convexity::Convex) continue;
        if (union_convexity(conesB, kTol).verdict != Convexity::Convex) continue;

        const auto arcsA = cones_to_intervals(conesA, kTol);
        const auto arcsB = cones_to_intervals(conesB, kTol);
        const auto mergedA = merge_arcs(arcsA, kTol.eps_angle);
        const auto mergedB = merge_arcs(arcsB, kTol.eps_angle);
        if (mergedA.full || mergedB.full) continue;
        if (mergedA.components.size() != 1 || mergedB.components.size() != 1) continue;
        const auto& ia = mergedA.components.front();
        const auto& ib = mergedB.components.front();
        const bool overlap = ccw_gap(ia.start, ib.start) < ia.width - kTol.eps_angle ||
                             ccw_gap(ib.start, ia.start) < ib.width - kTol.eps_angle;
        if (overlap) continue;
        return scene;
    }
}

// Integer 2D scenes with the origin excluded from every piece.
std::pair<SetExpr, SetExpr> random_integer_scene_2d(SplitMix64& rng) {
    auto build = [&]() {
        std::vector<SetPiece> pieces;
        const int npieces = static_cast<int>(rng.next_int(1, 2));
        for (int pi = 0; pi < npieces; ++pi) {
            const bool polytope = rng.next_unit() < 0.3;
            std::vector<Vec> pts;
            const int count = static_cast<int>(rng.next_int(1, 4));
            for (int i = 0; i < count; ++i) {
                Vec v = random_int_vec(rng, 2, -10, 10);
                while (v.norm() == 0.0) v = random_int_vec(rng, 2, -10, 10);
                pts.push_back(v);
            }
            if (polytope) {
                Polytope c = Polytope::make(std::move(pts), kTol);
                const Vec origin = Vec::Zero(2);
                if (hull_contains(c, origin, kTol)) {
                    --pi;  // hull swallowed the origin; draw again
                    continue;
                }
                pieces.push_back(std::move(c));
            } else {
                pieces.push_back(PointSet::make(std::move(pts), kTol));
            }
        }
        return SetExpr::make(std::move(pieces));
    };
    return {build(), build()};
}

}  // namespace

CheckResult check_supporting_hyperplane(long trials, std::uint64_t seed) {
    CheckResult res{"supporting_hyperplane", 0, trials, ""};
    SplitMix64 rng(seed);
    for (long t = 0; t < trials; ++t) {
        const Index dim = rng.next_int(2, 4);
        const Polytope c = random_polytope(rng, dim, 12);
        const Vec p = random_non_interior_point(rng, c);
        const SupportOutcome out = supporting_hyperplane(c, p, kTol);
        bool ok = out.status == SupportStatus::Supported;
        if (ok) {
            for (const auto& v : c.vertices) {
                if (out.hyperplane->normal.dot(v - p) > 1e-9) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) ++res.passed;
        else if (res.detail.empty()) res.detail = describe_trial("support", t);
    }
    return res;
}

CheckResult check_separation_2d(long trials, std::uint64_t seed) {
    CheckResult res{"separation_2d", 0, trials, ""};
    SplitMix64 rng(seed);
    const Vec origin = Vec::Zero(2);
    for (long t = 0; t < trials; ++t) {
        const SectorScene scene = random_sector_scene(rng);
        const SeparationOutcome out = separate_through_point(scene.a, scene.b, origin, kTol);
        bool ok = out.status == SeparationStatus::Separated;
        if (ok) {
            const auto& cert = *out.certificate;
            const SeparationCertificate redo = [&] {
                SeparationCertificate c2 = cert;
                double amax = -1e300, bmin = 1e300;
                for_each_point(scene.a, [&](const Vec& x) {
                    amax = std::max(amax, cert.hyperplane.normal.dot(x - origin));
                });
                for_each_point(scene.b, [&](const Vec& x) {
                    bmin = std::min(bmin, cert.hyperplane.normal.dot(x - origin));
                });
                c2.side_a_max = amax;
                c2.side_b_min = bmin;
                return c2;
            }();
            ok = redo.side_a_max <= 1e-9 && redo.side_b_min >= -1e-9 &&
                 std::abs(redo.side_a_max - cert.side_a_max) <= 1e-9 &&
                 std::abs(redo.side_b_min - cert.side_b_min) <= 1e-9;
        }
        if (ok) ++res.passed;
        else if (res.detail.empty()) res.detail = describe_trial("separation", t);
    }
    return res;
}

CheckResult check_oracle_agreement_2d(long trials, std::uint64_t seed) {
    CheckResult res{"oracle_agreement_2d", 0, trials, ""};
    SplitMix64 rng(seed);
    const Vec origin = Vec::Zero(2);
    for (long t = 0; t < trials; ++t) {
        const auto [a, b] = random_integer_scene_2d(rng);
        const SeparationOutcome out = separate_through_point(a, b, origin, kTol);
        const Separability2D sweep = oracle_separable_2d(a, b, origin, kTol);
        const bool ok = (out.status == SeparationStatus::Separated) == sweep.separable;
        if (ok) ++res.passed;
        else if (res.detail.empty()) res.detail = describe_trial("oracle agreement", t);
    }
    return res;
}

CheckResult check_lp_fm_agreement(long trials, std::uint64_t seed) {
    CheckResult res{"lp_fm_agreement", 0, trials, ""};
    SplitMix64 rng(seed);
    for (long t = 0; t < trials; ++t) {
        const Index dim = rng.next_int(1, 4);
        const int m = static_cast<int>(rng.next_int(1, 10));
        std::vector<LinearConstraint> rows;
        for (int i = 0; i < m; ++i) {
            rows.push_back({random_int_vec(rng, dim, -10, 10),
                            rng.next_int(0, 1) == 0 ? Rel::LessEq : Rel::GreaterEq,
                            static_cast<double>(rng.next_int(-10, 10))});
        }
        LpProblem p;
        p.dim = dim;
        p.constraints = rows;
        const bool viaLp = solve(p, kTol).status == LpStatus::Feasible;
        const bool viaFm = fm_feasible(rows);
        if (viaLp == viaFm) ++res.passed;
        else if (res.detail.empty()) res.detail = describe_trial("lp vs fm", t);
    }
    return res;
}

CheckResult check_conic_hull_closure(long trials, std::uint64_t seed) {
    CheckResult res{"conic_hull_closure", 0, trials, ""};
    SplitMix64 rng(seed);
    for (long t = 0; t < trials; ++t) {
        const Index dim = rng.next_int(2, 4);
        const int k = static_cast<int>(rng.next_int(2, 5));
        std::vector<Vec> gens;
        for (int i = 0; i < k; ++i) {
            Vec g = random_int_vec(rng, dim, -5, 5);
            while (g.norm() == 0.0) g = random_int_vec(rng, dim, -5, 5);
            gens.push_back(g);
        }
        const PolyhedralCone hull = PolyhedralCone::make(Vec::Zero(dim), gens, kTol);
        Vec v = Vec::Zero(dim);
        for (const auto& g : gens) v += rng.next_in(0.0, 10.0) * g;
        if (cone_contains(hull, v, kTol)) ++res.passed;
        else if (res.detail.empty()) res.detail = describe_trial("hull closure", t);
    }
    return res;
}

CheckResult check_perspective_halfspace(long trials, std::uint64_t seed) {
    CheckResult res{"perspective_halfspace", 0, trials, ""};
    SplitMix64 rng(seed);
    for (long t = 0; t < trials; ++t) {
        const Index dim = rng.next_int(2, 4);
        const Polytope c = random_polytope(rng, dim, 12);
        const Vec p = random_non_interior_point(rng, c);
        std::vector<LinearConstraint> rows;
        for (const auto& v : c.vertices) {
            if ((v - p).norm() > kTol.eps_zero) rows.push_back({v - p, Rel::LessEq, 0.0});
        }
        bool ok;
        if (rows.empty()) {
            ok = true;  // c collapses to {p}; every hyperplane through p works
        } else {
            ok = homogeneous_nonzero_solve(rows, kTol).status == LpStatus::Feasible;
        }
        if (ok) ++res.passed;
        else if (res.detail.empty()) res.detail = describe_trial("halfspace", t);
    }
    return res;
}

CheckResult check_complement_ball(long trials, std::uint64_t seed) {
    CheckResult res{"complement_ball", 0, trials, ""};
    SplitMix64 rng(seed);
    for (long t = 0; t < trials; ++t) {
        const Index dim = rng.next_int(2, 3);
        const Polytope c = random_polytope(rng, dim, 10);
        const BallWitness ball = complement_interior_witness(c, kTol);
        bool ok = ball.radius > 0.0 && !hull_contains(c, ball.center, kTol);
        for (Index j = 0; j < dim && ok; ++j) {
            Vec probe = ball.center;
            probe[j] += ball.radius;
            if (hull_contains(c, probe, kTol)) ok = false;
            probe[j] -= 2.0 * ball.radius;
            if (ok && hull_contains(c, probe, kTol)) ok = false;
        }
        for (int s = 0; s < 100 && ok; ++s) {
            Vec dir(dim);
            for (Index j = 0; j < dim; ++j) dir[j] = rng.next_gaussian();
            if (dir.norm() == 0.0) continue;
            dir.normalize();
            if (hull_contains(c, (ball.center + ball.radius * dir).eval(), kTol)) ok = false;
        }
        if (ok) ++res.passed;
        else if (res.detail.empty()) res.detail = describe_trial("complement ball", t);
    }
    return res;
}

CheckResult check_member_point_degeneracy(long trials, std::uint64_t seed) {
    CheckResult res{"member_point_trivial_cone", 0, trials, ""};
    SplitMix64 rng(seed);
    for (long t = 0; t < trials; ++t) {
        auto [a, b] = random_integer_scene_2d(rng);
        // p drawn from a piece of one of the two sets
        const SetExpr& host = (rng.next_int(0, 1) == 0) ? a : b;
        const auto& piece = host.pieces[static_cast<std::size_t>(
            rng.next_int(0, static_cast<std::int64_t>(host.pieces.size()) - 1))];
        const auto& coords = piece_coords(piece);
        const Vec p = coords[static_cast<std::size_t>(
            rng.next_int(0, static_cast<std::int64_t>(coords.size()) - 1))];

        const auto cones = perspective_cone(host, p, kTol);
        bool ok = cones.size() == 1 && cones.front().trivial;
        if (ok) {
            const Vec probe = random_int_vec(rng, 2, -10, 10);
            ok = cone_contains(cones.front(), probe, kTol);
        }
        if (ok) {
            ok = separate_through_point(a, b, p, kTol).status ==
                 SeparationStatus::DegeneratePoint;
        }
        if (ok) ++res.passed;
        else if (res.detail.empty()) res.detail = describe_trial("member point", t);
    }
    return res;
}

std::vector<CheckResult> run_lemma_suite(long trials, std::uint64_t seed) {
    std::vector<CheckResult> out;
    out.push_back(check_supporting_hyperplane(trials, seed));
    out.push_back(check_separation_2d(trials, seed + 1));
    out.push_back(check_oracle_agreement_2d(trials, seed + 2));
    out.push_back(check_lp_fm_agreement(trials, seed + 3));
    out.push_back(check_conic_hull_closure(trials, seed + 4));
    out.push_back(check_perspective_halfspace(trials, seed + 5));
    out.push_back(check_complement_ball(trials, seed + 6));
    out.push_back(check_member_point_degeneracy(trials, seed + 7));
    return out;
}

}  // namespace persep
