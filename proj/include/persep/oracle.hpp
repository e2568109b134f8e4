#pragma once

// Independent slow verifiers used by tests, acceptance criteria, and the
// CLI --verify flag: Fourier-Motzkin elimination, the 2D angular sweep
// separability test, arc conversion for 2D cones, and the complement-ball
// witness for proper convex sets. These deliberately avoid the simplex path
// they are used to cross-check.

#include "persep/angular.hpp"
#include "persep/cones.hpp"
#include "persep/lp.hpp"
#include "persep/sets.hpp"
#include "persep/tolerance.hpp"
#include "persep/vec.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace persep {

inline constexpr Index kMaxFmDim = 4;
inline constexpr std::size_t kMaxFmRows = 12;

namespace detail {

template <typename Scalar>
struct FmRow {
    VecX<Scalar> coeffs;
    Scalar rhs;
};

// Constant inequality 0 <= b, with a little slack for accumulated roundoff.
template <typename Scalar>
bool fm_constant_holds(Scalar b) {
    return b >= -Scalar(1e-9) * (Scalar(1) + std::abs(b));
}

}  // namespace detail

// Exact feasibility of a small linear inequality system over the reals by
// variable elimination: every lower bound is paired with every upper bound
// until one variable is left, whose bounds are compared by cross
// multiplication (exact on integer data). Equalities must be rewritten as
// two inequalities upstream.
template <typename Scalar>
bool fm_feasible(const std::vector<LinearConstraintT<Scalar>>& constraints) {
    if (constraints.empty()) return true;
    const Index n = constraints.front().coeffs.size();
    if (n < 1 || n > kMaxFmDim) {
        throw std::invalid_argument("fm: dimension outside the <= 4 envelope");
    }
    if (constraints.size() > kMaxFmRows) {
        throw std::invalid_argument("fm: more constraints than the <= 12 envelope");
    }
    constexpr Scalar kCoefZero = Scalar(1e-11);

    std::vector<detail::FmRow<Scalar>> rows;
    for (const auto& c : constraints) {
        require_dim(c.coeffs.size(), n, "fm constraint");
        require_finite(c.coeffs, "fm constraint");
        if (!std::isfinite(static_cast<double>(c.rhs))) {
            throw std::invalid_argument("fm constraint: non-finite rhs");
        }
        switch (c.rel) {
            case Rel::LessEq: rows.push_back({c.coeffs, c.rhs}); break;
            case Rel::GreaterEq: rows.push_back({-c.coeffs, -c.rhs}); break;
            case Rel::Equal:
                throw std::invalid_argument("fm: rewrite equalities as two inequalities");
        }
    }

    std::vector<Index> remaining;
    for (Index j = 0; j < n; ++j) remaining.push_back(j);

    auto strip_constants = [&](std::vector<detail::FmRow<Scalar>>& rs) -> bool {
        std::vector<detail::FmRow<Scalar>> kept;
        for (auto& r : rs) {
            bool allZero = true;
            for (Index j : remaining) {
                if (std::abs(r.coeffs[j]) > kCoefZero) {
                    allZero = false;
                    break;
                }
            }
            if (allZero) {
                if (!detail::fm_constant_holds(r.rhs)) return false;
            } else {
                kept.push_back(std::move(r));
            }
        }
        rs = std::move(kept);
        return true;
    };

    if (!strip_constants(rows)) return false;

    while (remaining.size() > 1) {
        if (rows.empty()) return true;
        // cheapest variable first: fewest lower*upper combinations
        Index bestVar = remaining.front();
        std::size_t bestCost = static_cast<std::size_t>(-1);
        for (Index j : remaining) {
            std::size_t lo = 0, up = 0;
            for (const auto& r : rows) {
                if (r.coeffs[j] > kCoefZero) ++up;
                else if (r.coeffs[j] < -kCoefZero) ++lo;
            }
            const std::size_t cost = lo * up;
            if (cost < bestCost) {
                bestCost = cost;
                bestVar = j;
            }
        }
        const Index k = bestVar;

        std::vector<detail::FmRow<Scalar>> lowers, uppers, next;
        for (auto& r : rows) {
            if (r.coeffs[k] > kCoefZero) uppers.push_back(std::move(r));
            else if (r.coeffs[k] < -kCoefZero) lowers.push_back(std::move(r));
            else next.push_back(std::move(r));
        }
        for (const auto& u : uppers) {
            for (const auto& l : lowers) {
                detail::FmRow<Scalar> comb;
                comb.coeffs = u.coeffs[k] * l.coeffs - l.coeffs[k] * u.coeffs;
                comb.rhs = u.coeffs[k] * l.rhs - l.coeffs[k] * u.rhs;
                comb.coeffs[k] = Scalar(0);
                const Scalar mag =
                    std::max(comb.coeffs.cwiseAbs().maxCoeff(), std::abs(comb.rhs));
                if (mag > Scalar(1e8)) {
                    comb.coeffs /= mag;
                    comb.rhs /= mag;
                }
                next.push_back(std::move(comb));
            }
        }
        remaining.erase(std::find(remaining.begin(), remaining.end(), k));
        if (!strip_constants(next)) return false;

        // duplicate rows keep only the tightest rhs
        std::sort(next.begin(), next.end(), [n](const auto& x, const auto& y) {
            for (Index j = 0; j < n; ++j) {
                if (x.coeffs[j] != y.coeffs[j]) return x.coeffs[j] < y.coeffs[j];
            }
            return x.rhs < y.rhs;
        });
        std::vector<detail::FmRow<Scalar>> dedup;
        for (auto& r : next) {
            if (!dedup.empty() && (dedup.back().coeffs - r.coeffs).cwiseAbs().maxCoeff() <=
                                      Scalar(1e-12)) {
                dedup.back().rhs = std::min(dedup.back().rhs, r.rhs);
            } else {
                dedup.push_back(std::move(r));
            }
        }
        rows = std::move(dedup);
        if (rows.size() > 200000) {
            throw std::runtime_error("fm: elimination exceeded the internal row budget");
        }
    }

    if (rows.empty()) return true;
    const Index k = remaining.front();
    std::vector<std::pair<Scalar, Scalar>> lowers, uppers;  // (coef, rhs)
    for (const auto& r : rows) {
        if (r.coeffs[k] > kCoefZero) uppers.emplace_back(r.coeffs[k], r.rhs);
        else lowers.emplace_back(r.coeffs[k], r.rhs);
    }
    for (const auto& [al, bl] : lowers) {
        for (const auto& [au, bu] : uppers) {
            // b_l / a_l <= b_u / a_u with a_l < 0 < a_u, cross-multiplied
            const Scalar lhs = bl * au - bu * al;
            if (lhs < -Scalar(1e-9) * (Scalar(1) + std::abs(bl * au) + std::abs(bu * al))) {
                return false;
            }
        }
    }
    return true;
}

template <typename Scalar>
struct Separability2DT {
    bool separable = false;
    std::optional<Scalar> witness_angle;  // angle of a working normal
};
using Separability2D = Separability2DT<double>;

// Exact 2D separability of finite scenes through p. Candidate normals are
// the perpendiculars of all data directions plus the bisectors of
// consecutive sorted directions; non-strict separation always admits a
// candidate among the perpendiculars, so the sweep is complete.
template <typename Scalar>
Separability2DT<Scalar> oracle_separable_2d(const SetExprT<Scalar>& a, const SetExprT<Scalar>& b,
                                            const VecX<Scalar>& p, const ToleranceT<Scalar>& tol) {
    if (a.dim != 2 || b.dim != 2) throw std::invalid_argument("2d sweep: dimension must be 2");
    require_dim(p.size(), 2, "2d sweep");
    const Scalar halfPi = std::numbers::pi_v<Scalar> / Scalar(2);

    auto directions = [&](const SetExprT<Scalar>& s) {
        std::vector<VecX<Scalar>> dirs;
        for_each_point(s, [&](const VecX<Scalar>& x) {
            const VecX<Scalar> d = x - p;
            if (d.norm() <= tol.eps_zero) {
                throw std::invalid_argument("2d sweep: p lies in one of the sets");
            }
            dirs.push_back(d.normalized());
        });
        return dirs;
    };
    const auto da = directions(a);
    const auto db = directions(b);

    std::vector<Scalar> dataAngles;
    for (const auto& d : da) dataAngles.push_back(angle_of(d));
    for (const auto& d : db) dataAngles.push_back(angle_of(d));

    std::vector<Scalar> candidates;
    for (Scalar t : dataAngles) {
        candidates.push_back(normalize_angle(t + halfPi));
        candidates.push_back(normalize_angle(t - halfPi));
    }
    std::vector<Scalar> sorted = dataAngles;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const Scalar cur = sorted[i];
        const Scalar nxt = (i + 1 < sorted.size()) ? sorted[i + 1] : sorted[0] + kTwoPi<Scalar>;
        candidates.push_back(normalize_angle(cur + (nxt - cur) / Scalar(2)));
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end(),
                                 [](Scalar x, Scalar y) { return std::abs(x - y) <= 1e-12; }),
                     candidates.end());

    Separability2DT<Scalar> out;
    for (Scalar phi : candidates) {
        const VecX<Scalar> normal = unit_at(phi);
        bool ok = true;
        for (const auto& d : da) {
            if (normal.dot(d) > tol.eps_angle) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        for (const auto& d : db) {
            if (normal.dot(d) < -tol.eps_angle) {
                ok = false;
                break;
            }
        }
        if (ok) {
            out.separable = true;
            out.witness_angle = phi;
            return out;
        }
    }
    return out;
}

// Minimal arcs of non-trivial 2D cones. Hulled piece cones of a convex piece
// seen from an exterior point never exceed a half turn; observing one is an
// internal consistency failure, not a data error.
template <typename Scalar>
std::vector<AngularIntervalT<Scalar>> cones_to_intervals(
    const std::vector<PolyhedralConeT<Scalar>>& cones, const ToleranceT<Scalar>& tol) {
    std::vector<AngularIntervalT<Scalar>> out;
    for (const auto& k : cones) {
        if (k.trivial) throw std::invalid_argument("cones_to_intervals: trivial cone input");
        if (k.dim != 2) throw std::invalid_argument("cones_to_intervals: dimension must be 2");
        std::vector<Scalar> angles;
        for (const auto& g : k.generators) angles.push_back(angle_of(g));
        const AngularIntervalT<Scalar> arc = minimal_covering_arc(std::move(angles));
        if (arc.width > std::numbers::pi_v<Scalar> + tol.eps_angle) {
            throw std::logic_error("cones_to_intervals: piece cone spans more than a half turn");
        }
        out.push_back(arc);
    }
    return out;
}

template <typename Scalar>
struct BallWitnessT {
    VecX<Scalar> center;
    Scalar radius = Scalar(0);
};
using BallWitness = BallWitnessT<double>;

// Constructive witness that the complement of conv(c) has nonempty interior:
// a point past the farthest vertex, with a radius shrunk until all
// axis-aligned probes of the ball clear the hull.
template <typename Scalar>
BallWitnessT<Scalar> complement_interior_witness(const PolytopeT<Scalar>& c,
                                                 const ToleranceT<Scalar>& tol) {
    const Index n = c.dim;
    VecX<Scalar> mean = VecX<Scalar>::Zero(n);
    for (const auto& v : c.vertices) mean += v;
    mean /= Scalar(c.vertices.size());

    Scalar farDist = Scalar(-1);
    VecX<Scalar> far = c.vertices.front();
    for (const auto& v : c.vertices) {
        const Scalar d = (v - mean).norm();
        if (d > farDist) {
            farDist = d;
            far = v;
        }
    }

    BallWitnessT<Scalar> ball;
    if (farDist <= tol.eps_zero) {
        // single-point hull
        ball.center = mean;
        ball.center[0] += Scalar(1);
        ball.radius = Scalar(0.5);
    } else {
        ball.center = mean + Scalar(2) * (far - mean);
        ball.radius = farDist;
    }
    if (hull_contains(c, ball.center, tol)) {
        throw std::runtime_error("complement witness: center unexpectedly inside the hull");
    }
    for (int iter = 0; iter < 200; ++iter) {
        bool clear = true;
        for (Index j = 0; j < n && clear; ++j) {
            VecX<Scalar> probe = ball.center;
            probe[j] += ball.radius;
            if (hull_contains(c, probe, tol)) clear = false;
            probe[j] -= Scalar(2) * ball.radius;
            if (clear && hull_contains(c, probe, tol)) clear = false;
        }
        if (clear) return ball;
        ball.radius /= Scalar(2);
    }
    throw std::runtime_error("complement witness: radius shrink did not converge");
}

}  // namespace persep
