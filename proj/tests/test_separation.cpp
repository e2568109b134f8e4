#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "persep/oracle.hpp"
#include "persep/rng.hpp"
#include "persep/separation.hpp"

#include <cmath>
#include <vector>

using namespace persep;

namespace {

const Tolerance kTol{};

SetExpr points_expr(std::vector<Vec> pts) {
    return SetExpr::make({PointSet::make(std::move(pts), kTol)});
}

Polytope unit_square() {
    return Polytope::make({vec({0.0, 0.0}), vec({1.0, 0.0}), vec({1.0, 1.0}), vec({0.0, 1.0})},
                          kTol);
}

double support_slack(const Polytope& c, const Hyperplane& h) {
    double worst = -1e300;
    for (const auto& v : c.vertices) worst = std::max(worst, h.normal.dot(v - h.anchor));
    return worst;
}

// conv(A) and conv(B) intersect iff matching convex combinations exist
bool hulls_intersect(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    const Index dim = a.front().size();
    const Index vars = static_cast<Index>(a.size() + b.size());
    LpProblem p;
    p.dim = vars;
    for (Index d = 0; d < dim; ++d) {
        Vec row(vars);
        Index k = 0;
        for (const auto& x : a) row[k++] = x[d];
        for (const auto& y : b) row[k++] = -y[d];
        p.constraints.push_back({row, Rel::Equal, 0.0});
    }
    Vec lambdaSum = Vec::Zero(vars), muSum = Vec::Zero(vars);
    for (Index i = 0; i < static_cast<Index>(a.size()); ++i) lambdaSum[i] = 1.0;
    for (Index i = static_cast<Index>(a.size()); i < vars; ++i) muSum[i] = 1.0;
    p.constraints.push_back({lambdaSum, Rel::Equal, 1.0});
    p.constraints.push_back({muSum, Rel::Equal, 1.0});
    std::vector<VarBounds> box(static_cast<std::size_t>(vars));
    for (auto& bd : box) bd.lower = 0.0;
    p.box = box;
    return solve(p, kTol).status == LpStatus::Feasible;
}

}  // namespace

TEST_CASE("supporting hyperplane for an exterior point") {
    const SupportOutcome out = supporting_hyperplane(unit_square(), vec({2.0, 0.5}), kTol);
    REQUIRE(out.status == SupportStatus::Supported);
    CHECK(support_slack(unit_square(), *out.hyperplane) <= 1e-9);
    // the axis-aligned family: N proportional to (1, 0)
    CHECK(out.hyperplane->normal[0] == doctest::Approx(1.0));
    CHECK(out.hyperplane->normal[1] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("supporting hyperplane at a boundary vertex") {
    const SupportOutcome out = supporting_hyperplane(unit_square(), vec({0.0, 0.0}), kTol);
    REQUIRE(out.status == SupportStatus::Supported);
    CHECK(support_slack(unit_square(), *out.hyperplane) <= 1e-9);
    CHECK(out.hyperplane->normal.dot(vec({1.0, 0.0})) <= 1e-9);
    CHECK(out.hyperplane->normal.dot(vec({0.0, 1.0})) <= 1e-9);
}

TEST_CASE("interior points have no supporting hyperplane") {
    const SupportOutcome out = supporting_hyperplane(unit_square(), vec({0.5, 0.5}), kTol);
    CHECK(out.status == SupportStatus::PInInterior);
    CHECK_FALSE(out.hyperplane.has_value());
}

TEST_CASE("halfspace containment of a salient 2d cone") {
    const PolyhedralCone k =
        PolyhedralCone::make(Vec::Zero(2), {vec({1.0, 0.0}), vec({1.0, 1.0})}, kTol);
    const HalfspaceOutcome out = halfspace_containing_cone(k, kTol);
    REQUIRE(out.status == HalfspaceStatus::Contained);
    for (const auto& g : k.generators) CHECK(out.hyperplane->normal.dot(g) <= 1e-9);
}

TEST_CASE("positively spanning generators are not proper") {
    const PolyhedralCone k = PolyhedralCone::make(
        Vec::Zero(2),
        {vec({1.0, 0.0}), vec({-1.0, 0.0}), vec({0.0, 1.0}), vec({0.0, -1.0})}, kTol);
    CHECK(halfspace_containing_cone(k, kTol).status == HalfspaceStatus::ConeNotProper);
    const PolyhedralCone trivial = PolyhedralCone::make_trivial(Vec::Zero(2));
    CHECK(halfspace_containing_cone(trivial, kTol).status == HalfspaceStatus::ConeNotProper);
}

TEST_CASE("upper wedge across the y axis is supported from below") {
    const PolyhedralCone k =
        PolyhedralCone::make(Vec::Zero(2), {vec({1.0, 1.0}), vec({-1.0, 1.0})}, kTol);
    const HalfspaceOutcome out = halfspace_containing_cone(k, kTol);
    REQUIRE(out.status == HalfspaceStatus::Contained);
    for (const auto& g : k.generators) CHECK(out.hyperplane->normal.dot(g) <= 1e-9);
    // (0,-1) belongs to the valid normal family
    CHECK(vec({0.0, -1.0}).dot(k.generators[0]) <= 1e-12);
    CHECK(vec({0.0, -1.0}).dot(k.generators[1]) <= 1e-12);
}

TEST_CASE("mirror scene separates through the origin with margin two") {
    const SetExpr a = points_expr({vec({1.0, 1.0}), vec({1.0, 2.0})});
    const SetExpr b = points_expr({vec({1.0, -1.0}), vec({1.0, -2.0})});
    const SeparationOutcome out = separate_through_point(a, b, vec({0.0, 0.0}), kTol);
    REQUIRE(out.status == SeparationStatus::Separated);
    const auto& cert = *out.certificate;
    CHECK(cert.hyperplane.anchor == vec({0.0, 0.0}));
    CHECK(cert.side_a_max <= 1e-9);
    CHECK(cert.side_b_min >= -1e-9);
    CHECK(cert.margin == doctest::Approx(2.0).epsilon(1e-9));
    // closed loop: recompute the extrema from the raw scene
    double amax = -1e300, bmin = 1e300;
    for_each_point(a, [&](const Vec& x) { amax = std::max(amax, cert.hyperplane.normal.dot(x)); });
    for_each_point(b, [&](const Vec& x) { bmin = std::min(bmin, cert.hyperplane.normal.dot(x)); });
    CHECK(amax == doctest::Approx(cert.side_a_max).epsilon(1e-12));
    CHECK(bmin == doctest::Approx(cert.side_b_min).epsilon(1e-12));
}

TEST_CASE("two close rays still separate through the apex") {
    const SetExpr a = points_expr({vec({1.0, 0.0})});
    const SetExpr b = points_expr({vec({1.0, 0.1})});
    const SeparationOutcome out = separate_through_point(a, b, vec({0.0, 0.0}), kTol);
    REQUIRE(out.status == SeparationStatus::Separated);
    CHECK(out.certificate->margin > 0.0);
}

TEST_CASE("coincident rays return the zero-margin certificate") {
    const SetExpr a = points_expr({vec({1.0, 1.0})});
    const SetExpr b = points_expr({vec({1.0, 1.0})});
    const SeparationOutcome out = separate_through_point(a, b, vec({0.0, 0.0}), kTol);
    REQUIRE(out.status == SeparationStatus::Separated);
    CHECK(std::abs(out.certificate->side_a_max) <= 1e-9);
    CHECK(std::abs(out.certificate->side_b_min) <= 1e-9);
    CHECK(std::abs(out.certificate->margin) <= 2e-9);
}

TEST_CASE("a point inside a set is degenerate") {
    const SetExpr a = points_expr({vec({1.0, 1.0}), vec({2.0, 0.0})});
    const SetExpr b = points_expr({vec({-1.0, -1.0})});
    CHECK(separate_through_point(a, b, vec({1.0, 1.0}), kTol).status ==
          SeparationStatus::DegeneratePoint);
}

TEST_CASE("surrounded rays cannot be split through the apex") {
    const SetExpr a = points_expr({vec({1.0, 0.0})});
    const SetExpr b = points_expr({vec({-1.0, 0.0}), vec({1.0, 1.0}), vec({1.0, -1.0})});
    CHECK(separate_through_point(a, b, vec({0.0, 0.0}), kTol).status ==
          SeparationStatus::NotSeparableThroughP);
}

TEST_CASE("a closed half-turn opposite a ray is zero-margin separable") {
    // B covers the closed left half-plane directions; the axis x = 0 still
    // separates non-strictly
    const SetExpr a = points_expr({vec({1.0, 0.0})});
    const SetExpr b = points_expr({vec({-1.0, 0.0}), vec({0.0, 1.0}), vec({0.0, -1.0})});
    const SeparationOutcome out = separate_through_point(a, b, vec({0.0, 0.0}), kTol);
    REQUIRE(out.status == SeparationStatus::Separated);
    CHECK(out.certificate->side_b_min >= -1e-9);
    CHECK(out.certificate->side_a_max <= -1.0 + 1e-9);
}

TEST_CASE("stage one finds the hyperplane between separated clouds") {
    const SetExpr a = points_expr({vec({1.0, 0.1}), vec({1.0, -0.1})});
    const SetExpr b = points_expr({vec({2.0, 0.0})});
    const FindPointOutcome out = find_perspective_point(a, b, SearchConfig{}, kTol);
    REQUIRE(out.status == FindPointStatus::Found);
    CHECK((*out.point - vec({1.5, 0.0})).norm() < 1e-9);
    CHECK(out.certificate->margin > 0.0);
    CHECK(out.certificate->side_a_max <= 1e-9);
    CHECK(out.certificate->side_b_min >= -1e-9);
}

TEST_CASE("the xor configuration has no perspective point") {
    const SetExpr a = points_expr({vec({0.0, 0.0}), vec({2.0, 2.0})});
    const SetExpr b = points_expr({vec({0.0, 2.0}), vec({2.0, 0.0})});
    // the hulls cross, so no affine separator exists at all
    CHECK(hulls_intersect(all_points(a), all_points(b)));
    CHECK(find_perspective_point(a, b, SearchConfig{}, kTol).status == FindPointStatus::NotFound);
}

TEST_CASE("equal singletons are inseparable") {
    const SetExpr a = points_expr({vec({1.0, 1.0})});
    const SetExpr b = points_expr({vec({1.0, 1.0})});
    CHECK(find_perspective_point(a, b, SearchConfig{}, kTol).status == FindPointStatus::NotFound);
}

TEST_CASE("found points exist exactly when the hulls are disjoint") {
    // compact hulls are strictly separable iff they do not meet, so the
    // search outcome must match the hull-intersection program
    SplitMix64 rng(61);
    int found = 0, notFound = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const Index dim = rng.next_int(2, 3);
        auto sample_set = [&]() {
            std::vector<Vec> pts;
            const int k = static_cast<int>(rng.next_int(1, 4));
            for (int i = 0; i < k; ++i) {
                Vec v(dim);
                for (Index j = 0; j < dim; ++j) v[j] = static_cast<double>(rng.next_int(-6, 6));
                pts.push_back(v);
            }
            return pts;
        };
        const std::vector<Vec> pa = sample_set();
        const std::vector<Vec> pb = sample_set();
        const SetExpr a = points_expr(pa);
        const SetExpr b = points_expr(pb);
        const FindPointOutcome out = find_perspective_point(a, b, SearchConfig{}, kTol);
        const bool meets = hulls_intersect(pa, pb);
        CHECK((out.status == FindPointStatus::Found) == !meets);
        if (out.status == FindPointStatus::Found) {
            ++found;
            const auto& cert = *out.certificate;
            CHECK(cert.side_a_max <= 1e-9);
            CHECK(cert.side_b_min >= -1e-9);
            const SeparationOutcome redo = separate_through_point(a, b, *out.point, kTol);
            CHECK(redo.status == SeparationStatus::Separated);
        } else {
            ++notFound;
        }
    }
    CHECK(found > 20);
    CHECK(notFound > 10);
}

TEST_CASE("separation works through a point in three dimensions") {
    SplitMix64 rng(67);
    const Vec origin = Vec::Zero(3);
    for (int trial = 0; trial < 40; ++trial) {
        // A strictly above, B strictly below the xz-plane through the origin
        auto sample_halfspace = [&](double sign) {
            std::vector<Vec> pts;
            const int k = static_cast<int>(rng.next_int(1, 4));
            for (int i = 0; i < k; ++i) {
                Vec v(3);
                v[0] = static_cast<double>(rng.next_int(-8, 8));
                v[1] = sign * static_cast<double>(rng.next_int(1, 8));
                v[2] = static_cast<double>(rng.next_int(-8, 8));
                pts.push_back(v);
            }
            return points_expr(std::move(pts));
        };
        const SetExpr a = sample_halfspace(+1.0);
        const SetExpr b = sample_halfspace(-1.0);
        const SeparationOutcome out = separate_through_point(a, b, origin, kTol);
        REQUIRE(out.status == SeparationStatus::Separated);
        const Vec& n = out.certificate->hyperplane.normal;
        for_each_point(a, [&](const Vec& x) { CHECK(n.dot(x) <= 1e-9); });
        for_each_point(b, [&](const Vec& x) { CHECK(n.dot(x) >= -1e-9); });
    }
}

TEST_CASE("search configuration is validated") {
    SearchConfig bad;
    bad.grid_resolution = 1;
    const SetExpr a = points_expr({vec({0.0, 0.0})});
    CHECK_THROWS_AS(find_perspective_point(a, a, bad, kTol), std::invalid_argument);
}

TEST_CASE("random polytopes admit supporting hyperplanes from outside") {
    SplitMix64 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const Index dim = rng.next_int(2, 3);
        std::vector<Vec> verts;
        const int k = static_cast<int>(rng.next_int(dim + 1, 10));
        for (int i = 0; i < k; ++i) {
            Vec v(dim);
            for (Index j = 0; j < dim; ++j) v[j] = static_cast<double>(rng.next_int(-10, 10));
            verts.push_back(v);
        }
        const Polytope c = Polytope::make(verts, kTol);
        Vec p(dim);
        do {
            for (Index j = 0; j < dim; ++j) p[j] = static_cast<double>(rng.next_int(-10, 10));
        } while (hull_interior_contains(c, p, kTol));
        const SupportOutcome out = supporting_hyperplane(c, p, kTol);
        REQUIRE(out.status == SupportStatus::Supported);
        CHECK(support_slack(c, *out.hyperplane) <= 1e-9);
    }
}

TEST_CASE("separability status is scale invariant about p") {
    SplitMix64 rng(43);
    const Vec origin = Vec::Zero(2);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<Vec> pa, pb;
        const int ka = static_cast<int>(rng.next_int(1, 3));
        const int kb = static_cast<int>(rng.next_int(1, 3));
        auto sample = [&]() {
            Vec v(2);
            do {
                v[0] = static_cast<double>(rng.next_int(-9, 9));
                v[1] = static_cast<double>(rng.next_int(-9, 9));
            } while (v.norm() == 0.0);
            return v;
        };
        for (int i = 0; i < ka; ++i) pa.push_back(sample());
        for (int i = 0; i < kb; ++i) pb.push_back(sample());
        const double lambda = rng.next_in(0.3, 4.0);
        auto scaled = [&](const std::vector<Vec>& pts) {
            std::vector<Vec> out;
            for (const auto& x : pts) out.push_back(lambda * x);
            return out;
        };
        const SetExpr a = points_expr(pa), b = points_expr(pb);
        const SetExpr as = points_expr(scaled(pa)), bs = points_expr(scaled(pb));
        const SeparationOutcome base = separate_through_point(a, b, origin, kTol);
        const SeparationOutcome alt = separate_through_point(as, bs, origin, kTol);
        CHECK(base.status == alt.status);
        if (base.status == SeparationStatus::Separated) {
            // the unscaled normal certifies the scaled scene as well
            const Vec& n = base.certificate->hyperplane.normal;
            for_each_point(as, [&](const Vec& x) { CHECK(n.dot(x) <= 1e-7); });
            for_each_point(bs, [&](const Vec& x) { CHECK(n.dot(x) >= -1e-7); });
        }
    }
}

TEST_CASE("separation status agrees with the 2d sweep oracle") {
    SplitMix64 rng(47);
    const Vec origin = Vec::Zero(2);
    for (int trial = 0; trial < 150; ++trial) {
        auto sample_set = [&]() {
            std::vector<Vec> pts;
            const int k = static_cast<int>(rng.next_int(1, 4));
            for (int i = 0; i < k; ++i) {
                Vec v(2);
                do {
                    v[0] = static_cast<double>(rng.next_int(-10, 10));
                    v[1] = static_cast<double>(rng.next_int(-10, 10));
                } while (v.norm() == 0.0);
                pts.push_back(v);
            }
            return points_expr(std::move(pts));
        };
        const SetExpr a = sample_set();
        const SetExpr b = sample_set();
        const bool viaLp =
            separate_through_point(a, b, origin, kTol).status == SeparationStatus::Separated;
        const bool viaSweep = oracle_separable_2d(a, b, origin, kTol).separable;
        CHECK(viaLp == viaSweep);
    }
}
