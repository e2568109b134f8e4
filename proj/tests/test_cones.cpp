#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "persep/cones.hpp"
#include "persep/rng.hpp"
#include "persep/sets.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace persep;

namespace {

const Tolerance kTol{};

SetExpr points_expr(std::vector<Vec> pts) {
    return SetExpr::make({PointSet::make(std::move(pts), kTol)});
}

PolyhedralCone ray2(double x, double y) {
    return PolyhedralCone::make(Vec::Zero(2), {vec({x, y})}, kTol);
}

}  // namespace

TEST_CASE("perspective cone through translated points") {
    const SetExpr s = points_expr({vec({1.0, 0.0}), vec({0.0, 1.0})});
    const auto cones = perspective_cone(s, vec({0.0, 0.0}), kTol);
    REQUIRE(cones.size() == 1);
    CHECK_FALSE(cones.front().trivial);
    REQUIRE(cones.front().generators.size() == 2);
    CHECK((cones.front().generators[0] - vec({1.0, 0.0})).norm() < 1e-12);
    CHECK((cones.front().generators[1] - vec({0.0, 1.0})).norm() < 1e-12);
}

TEST_CASE("perspective cone from a member point is trivial") {
    const SetExpr s = points_expr({vec({1.0, 1.0})});
    const auto cones = perspective_cone(s, vec({1.0, 1.0}), kTol);
    REQUIRE(cones.size() == 1);
    CHECK(cones.front().trivial);
    CHECK(cones.front().generators.empty());
}

TEST_CASE("perspective cone normalizes directions") {
    const SetExpr s = points_expr({vec({2.0, 0.0}), vec({2.0, 2.0})});
    const auto cones = perspective_cone(s, vec({1.0, 0.0}), kTol);
    REQUIRE(cones.size() == 1);
    REQUIRE(cones.front().generators.size() == 2);
    CHECK((cones.front().generators[0] - vec({1.0, 0.0})).norm() < 1e-12);
    const Vec expected = vec({1.0, 2.0}).normalized();
    CHECK((cones.front().generators[1] - expected).norm() < 1e-12);
}

TEST_CASE("a point inside a polytope piece hull is degenerate") {
    const Polytope square =
        Polytope::make({vec({0.0, 0.0}), vec({2.0, 0.0}), vec({2.0, 2.0}), vec({0.0, 2.0})}, kTol);
    const SetExpr s = SetExpr::make({square});
    const auto cones = perspective_cone(s, vec({1.0, 1.0}), kTol);
    REQUIRE(cones.size() == 1);
    CHECK(cones.front().trivial);
}

TEST_CASE("conic hull concatenates, keeps identity, deduplicates") {
    const auto hull = conic_hull({ray2(1.0, 0.0), ray2(0.0, 1.0)}, kTol);
    REQUIRE(hull.generators.size() == 2);

    const PolyhedralCone k = ray2(1.0, 0.0);
    const auto same = conic_hull({k}, kTol);
    REQUIRE(same.generators.size() == 1);
    CHECK((same.generators[0] - k.generators[0]).norm() == 0.0);

    const auto dedup = conic_hull({ray2(1.0, 0.0), ray2(1.0, 0.0)}, kTol);
    CHECK(dedup.generators.size() == 1);
}

TEST_CASE("conic hull rejects apex mismatch") {
    PolyhedralCone a = ray2(1.0, 0.0);
    PolyhedralCone b = PolyhedralCone::make(vec({1.0, 1.0}), {vec({1.0, 0.0})}, kTol);
    CHECK_THROWS_AS(conic_hull({a, b}, kTol), std::invalid_argument);
}

TEST_CASE("cone membership in the first quadrant") {
    const PolyhedralCone k =
        PolyhedralCone::make(Vec::Zero(2), {vec({1.0, 0.0}), vec({0.0, 1.0})}, kTol);
    CHECK(cone_contains(k, vec({1.0, 1.0}), kTol));
    CHECK_FALSE(cone_contains(k, vec({-1.0, 0.0}), kTol));
    const PolyhedralCone trivial = PolyhedralCone::make_trivial(Vec::Zero(2));
    CHECK(cone_contains(trivial, vec({-7.0, 3.0}), kTol));
}

TEST_CASE("two isolated rays are not a convex union") {
    const std::vector<PolyhedralCone> cones = {ray2(1.0, 0.0), ray2(0.0, 1.0)};
    const ConvexityReport report = union_convexity(cones, kTol);
    CHECK(report.verdict == Convexity::NotConvex);
    REQUIRE(report.witness.has_value());
    const auto& [u, w] = *report.witness;
    bool uIn = false, wIn = false;
    for (const auto& k : cones) {
        uIn = uIn || cone_contains(k, u, kTol);
        wIn = wIn || cone_contains(k, w, kTol);
    }
    CHECK(uIn);
    CHECK(wIn);
    const Vec mid = ((u + w) / 2.0).eval();
    for (const auto& k : cones) CHECK_FALSE(cone_contains(k, mid, kTol));
}

TEST_CASE("a quarter wedge is convex") {
    const std::vector<PolyhedralCone> cones = {
        PolyhedralCone::make(Vec::Zero(2), {vec({1.0, 0.0}), vec({0.0, 1.0})}, kTol)};
    CHECK(union_convexity(cones, kTol).verdict == Convexity::Convex);
}

TEST_CASE("a width-pi cone is the boundary case and counts as convex") {
    const std::vector<PolyhedralCone> cones = {PolyhedralCone::make(
        Vec::Zero(2), {vec({1.0, 0.0}), vec({-1.0, 0.0}), vec({0.0, 1.0})}, kTol)};
    CHECK(union_convexity(cones, kTol).verdict == Convexity::Convex);
}

TEST_CASE("opposite rays form a line, which is convex") {
    const std::vector<PolyhedralCone> cones = {ray2(1.0, 0.0), ray2(-1.0, 0.0)};
    CHECK(union_convexity(cones, kTol).verdict == Convexity::Convex);
}

TEST_CASE("arcs crossing the zero cut merge correctly") {
    // one wedge from -20 to +20 degrees, another from 10 to 30 degrees
    const double d = std::numbers::pi / 180.0;
    const PolyhedralCone a = PolyhedralCone::make(
        Vec::Zero(2), {unit_at(-20.0 * d), unit_at(20.0 * d)}, kTol);
    const PolyhedralCone b = PolyhedralCone::make(
        Vec::Zero(2), {unit_at(10.0 * d), unit_at(30.0 * d)}, kTol);
    CHECK(union_convexity({a, b}, kTol).verdict == Convexity::Convex);

    const PolyhedralCone far = PolyhedralCone::make(
        Vec::Zero(2), {unit_at(100.0 * d), unit_at(120.0 * d)}, kTol);
    const ConvexityReport split = union_convexity({a, far}, kTol);
    CHECK(split.verdict == Convexity::NotConvex);
}

TEST_CASE("a piece whose generators span the plane makes the union trivial") {
    const PolyhedralCone spanning = PolyhedralCone::make(
        Vec::Zero(2), {vec({1.0, 0.0}), vec({-1.0, 1.0}), vec({-1.0, -1.0})}, kTol);
    CHECK(union_convexity({spanning}, kTol).verdict == Convexity::Convex);
}

TEST_CASE("union convexity in 3d") {
    const PolyhedralCone single = PolyhedralCone::make(
        Vec::Zero(3), {vec({1.0, 0.0, 0.0}), vec({0.0, 1.0, 0.0})}, kTol);
    CHECK(union_convexity({single}, kTol).verdict == Convexity::Convex);

    const PolyhedralCone rx = PolyhedralCone::make(Vec::Zero(3), {vec({1.0, 0.0, 0.0})}, kTol);
    const PolyhedralCone rz = PolyhedralCone::make(Vec::Zero(3), {vec({0.0, 0.0, 1.0})}, kTol);
    const ConvexityReport report = union_convexity({rx, rz}, kTol);
    CHECK(report.verdict == Convexity::NotConvex);
    REQUIRE(report.witness.has_value());
    const Vec mid = ((report.witness->first + report.witness->second) / 2.0).eval();
    CHECK_FALSE(cone_contains(rx, mid, kTol));
    CHECK_FALSE(cone_contains(rz, mid, kTol));
}

TEST_CASE("borderline escapes in 3d come back as unknown") {
    // the second piece tilts out of the first piece's plane by so little that
    // every cross midpoint sits in the gray band of the membership test
    const PolyhedralCone wedge = PolyhedralCone::make(
        Vec::Zero(3), {vec({1.0, 0.0, 0.0}), vec({0.0, 1.0, 0.0})}, kTol);
    const PolyhedralCone tilted =
        PolyhedralCone::make(Vec::Zero(3), {vec({1.0, 1.0, 1e-7})}, kTol);
    CHECK(union_convexity({wedge, tilted}, kTol).verdict == Convexity::Unknown);
}

TEST_CASE("a trivial member makes the conic hull trivial") {
    const PolyhedralCone trivial = PolyhedralCone::make_trivial(Vec::Zero(2));
    const PolyhedralCone hull = conic_hull({ray2(1.0, 0.0), trivial}, kTol);
    CHECK(hull.trivial);
}

TEST_CASE("conic hulls absorb random nonnegative combinations") {
    SplitMix64 rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        const Index dim = rng.next_int(2, 4);
        const int k = static_cast<int>(rng.next_int(2, 5));
        std::vector<Vec> gens;
        for (int i = 0; i < k; ++i) {
            Vec g(dim);
            for (Index j = 0; j < dim; ++j) g[j] = static_cast<double>(rng.next_int(-5, 5));
            if (g.norm() == 0.0) g[0] = 1.0;
            gens.push_back(g);
        }
        const PolyhedralCone hull = PolyhedralCone::make(Vec::Zero(dim), gens, kTol);
        Vec v = Vec::Zero(dim);
        for (const auto& g : gens) v += rng.next_in(0.0, 10.0) * g;
        CHECK(cone_contains(hull, v, kTol));
    }
}

TEST_CASE("ray pairs witness the converse closure direction") {
    const PolyhedralCone ru = ray2(1.0, 0.0);
    const PolyhedralCone rw = ray2(0.0, 1.0);
    const Vec sum = vec({1.0, 1.0});
    CHECK_FALSE(cone_contains(ru, sum, kTol));
    CHECK_FALSE(cone_contains(rw, sum, kTol));
    CHECK(union_convexity({ru, rw}, kTol).verdict == Convexity::NotConvex);
}

TEST_CASE("member points make the cone trivial for random scenes") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const Index dim = rng.next_int(2, 3);
        std::vector<Vec> pts;
        const int k = static_cast<int>(rng.next_int(1, 5));
        for (int i = 0; i < k; ++i) {
            Vec v(dim);
            for (Index j = 0; j < dim; ++j) v[j] = static_cast<double>(rng.next_int(-9, 9));
            pts.push_back(v);
        }
        const SetExpr s = points_expr(pts);
        const auto& coords = piece_coords(s.pieces[0]);
        const Vec p = coords[static_cast<std::size_t>(
            rng.next_int(0, static_cast<std::int64_t>(coords.size()) - 1))];
        const auto cones = perspective_cone(s, p, kTol);
        REQUIRE(cones.size() == 1);
        CHECK(cones.front().trivial);
        Vec probe(dim);
        for (Index j = 0; j < dim; ++j) probe[j] = rng.next_in(-5.0, 5.0);
        CHECK(cone_contains(cones.front(), probe, kTol));
    }
}

TEST_CASE("minkowski difference negates and concatenates") {
    const PolyhedralCone ka = ray2(1.0, 1.0);
    const PolyhedralCone kb = ray2(1.0, -1.0);
    const PolyhedralCone d = minkowski_difference(ka, kb, kTol);
    REQUIRE(d.generators.size() == 2);
    CHECK((d.generators[0] - vec({1.0, 1.0}).normalized()).norm() < 1e-12);
    CHECK((d.generators[1] - vec({-1.0, 1.0}).normalized()).norm() < 1e-12);
}

TEST_CASE("minkowski difference of a ray with itself spans its line") {
    const PolyhedralCone d = minkowski_difference(ray2(1.0, 0.0), ray2(1.0, 0.0), kTol);
    REQUIRE(d.generators.size() == 2);
    CHECK((d.generators[0] - vec({1.0, 0.0})).norm() < 1e-12);
    CHECK((d.generators[1] - vec({-1.0, 0.0})).norm() < 1e-12);
}

TEST_CASE("minkowski difference deduplicates coincident directions") {
    const PolyhedralCone d = minkowski_difference(ray2(0.0, 1.0), ray2(0.0, -1.0), kTol);
    REQUIRE(d.generators.size() == 1);
    CHECK((d.generators[0] - vec({0.0, 1.0})).norm() < 1e-12);
}

TEST_CASE("minkowski difference rejects trivial input") {
    const PolyhedralCone trivial = PolyhedralCone::make_trivial(Vec::Zero(2));
    CHECK_THROWS_AS(minkowski_difference(trivial, ray2(1.0, 0.0), kTol), std::invalid_argument);
}

TEST_CASE("cone types are scalar generic") {
    VecX<float> apex = VecX<float>::Zero(2);
    VecX<float> gx(2), gy(2), probe(2);
    gx << 1.0F, 0.0F;
    gy << 0.0F, 1.0F;
    probe << 0.5F, 0.5F;
    const ToleranceT<float> tol(1e-5F, 1e-6F, 1e-5F);
    const auto k = PolyhedralConeT<float>::make(apex, {gx, gy}, tol);
    CHECK(cone_contains(k, probe, tol));
}

TEST_CASE("identical inputs produce identical reports") {
    const SetExpr s = points_expr({vec({3.0, 1.0}), vec({2.0, 5.0}), vec({4.0, 4.0})});
    const auto c1 = perspective_cone(s, vec({0.0, -1.0}), kTol);
    const auto c2 = perspective_cone(s, vec({0.0, -1.0}), kTol);
    REQUIRE(c1.size() == c2.size());
    for (std::size_t i = 0; i < c1.size(); ++i) {
        REQUIRE(c1[i].generators.size() == c2[i].generators.size());
        for (std::size_t j = 0; j < c1[i].generators.size(); ++j) {
            CHECK(c1[i].generators[j] == c2[i].generators[j]);
        }
    }
    const ConvexityReport r1 = union_convexity(c1, kTol);
    const ConvexityReport r2 = union_convexity(c2, kTol);
    CHECK(r1.verdict == r2.verdict);
}
