#pragma once

// Randomized suites exercising the library's core guarantees, shared by the
// `check lemmas` subcommand and the acceptance tests. All generators draw
// from a seeded deterministic stream.

#include "persep/cones.hpp"
#include "persep/sets.hpp"
#include "persep/tolerance.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace persep {

struct CheckResult {
    std::string name;
    long passed = 0;
    long trials = 0;
    std::string detail;  // first failure description, empty when clean

    bool ok() const { return passed == trials; }
};

inline constexpr std::uint64_t kDefaultCheckSeed = 20240817;

// Random polytopes with p outside the hull interior: a supporting
// hyperplane exists and certifies max_v <N, v - p> <= 1e-9.
CheckResult check_supporting_hyperplane(long trials, std::uint64_t seed);

// 2D scenes whose piece-cone unions at the origin are convex with disjoint
// arc interiors per the exact angular check always separate.
CheckResult check_separation_2d(long trials, std::uint64_t seed);

// separate_through_point status equals the exact 2D angular sweep.
CheckResult check_oracle_agreement_2d(long trials, std::uint64_t seed);

// lp.solve feasibility status equals Fourier-Motzkin on integer systems.
CheckResult check_lp_fm_agreement(long trials, std::uint64_t seed);

// Random nonnegative combinations stay inside the conic hull.
CheckResult check_conic_hull_closure(long trials, std::uint64_t seed);

// Perspective-cone generators of a convex polytope seen from a non-interior
// point admit a containing half-space.
CheckResult check_perspective_halfspace(long trials, std::uint64_t seed);

// The complement-interior ball witness never meets the hull.
CheckResult check_complement_ball(long trials, std::uint64_t seed);

// p drawn from a set piece yields the trivial cone and a DegeneratePoint
// separation outcome.
CheckResult check_member_point_degeneracy(long trials, std::uint64_t seed);

std::vector<CheckResult> run_lemma_suite(long trials, std::uint64_t seed);

}  // namespace persep
