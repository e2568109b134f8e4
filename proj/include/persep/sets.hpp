#pragma once

// Finite set representations: point clouds, V-polytopes (the set is the
// convex hull of the stored vertices), and finite unions of those pieces.

#include "persep/lp.hpp"
#include "persep/tolerance.hpp"
#include "persep/vec.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

namespace persep {

namespace detail {

template <typename Scalar>
std::vector<VecX<Scalar>> dedup_points(std::vector<VecX<Scalar>> pts,
                                       const ToleranceT<Scalar>& tol, const char* what) {
    if (pts.empty()) throw std::invalid_argument(std::string(what) + ": empty set");
    const Index dim = pts.front().size();
    if (dim < 1) throw std::invalid_argument(std::string(what) + ": dimension must be positive");
    std::vector<VecX<Scalar>> out;
    out.reserve(pts.size());
    for (auto& p : pts) {
        require_dim(p.size(), dim, what);
        require_finite(p, what);
        bool dup = false;
        for (const auto& q : out) {
            if ((p - q).norm() <= tol.eps_zero) {
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(std::move(p));
    }
    return out;
}

}  // namespace detail

template <typename Scalar>
struct PointSetT {
    Index dim = 0;
    std::vector<VecX<Scalar>> points;  // deduplicated, all finite, all of size dim

    static PointSetT make(std::vector<VecX<Scalar>> pts, const ToleranceT<Scalar>& tol) {
        PointSetT s;
        s.points = detail::dedup_points(std::move(pts), tol, "point set");
        s.dim = s.points.front().size();
        return s;
    }
};
using PointSet = PointSetT<double>;

template <typename Scalar>
struct PolytopeT {
    Index dim = 0;
    std::vector<VecX<Scalar>> vertices;  // the denoted set is conv(vertices)

    static PolytopeT make(std::vector<VecX<Scalar>> verts, const ToleranceT<Scalar>& tol) {
        PolytopeT c;
        c.vertices = detail::dedup_points(std::move(verts), tol, "polytope");
        c.dim = c.vertices.front().size();
        return c;
    }
};
using Polytope = PolytopeT<double>;

template <typename Scalar>
using SetPieceT = std::variant<PointSetT<Scalar>, PolytopeT<Scalar>>;
using SetPiece = SetPieceT<double>;

template <typename Scalar>
const std::vector<VecX<Scalar>>& piece_coords(const SetPieceT<Scalar>& piece) {
    return std::visit([](const auto& p) -> const std::vector<VecX<Scalar>>& {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, PointSetT<Scalar>>) {
            return p.points;
        } else {
            return p.vertices;
        }
    }, piece);
}

template <typename Scalar>
Index piece_dim(const SetPieceT<Scalar>& piece) {
    return std::visit([](const auto& p) { return p.dim; }, piece);
}

// A finite union of pieces; non-convex sets are expressed this way.
template <typename Scalar>
struct SetExprT {
    Index dim = 0;
    std::vector<SetPieceT<Scalar>> pieces;

    static SetExprT make(std::vector<SetPieceT<Scalar>> pieces) {
        if (pieces.empty()) throw std::invalid_argument("set expression: empty set");
        SetExprT s;
        s.dim = piece_dim(pieces.front());
        for (const auto& p : pieces) require_dim(piece_dim(p), s.dim, "set expression piece");
        s.pieces = std::move(pieces);
        return s;
    }
};
using SetExpr = SetExprT<double>;

template <typename Scalar, typename F>
void for_each_point(const SetExprT<Scalar>& s, F&& f) {
    for (const auto& piece : s.pieces) {
        for (const auto& x : piece_coords(piece)) f(x);
    }
}

template <typename Scalar>
std::vector<VecX<Scalar>> all_points(const SetExprT<Scalar>& s) {
    std::vector<VecX<Scalar>> out;
    for_each_point(s, [&](const VecX<Scalar>& x) { out.push_back(x); });
    return out;
}

// Every point/vertex v becomes v - p. Structure (piece kinds, counts, order)
// is preserved exactly; no re-deduplication happens.
template <typename Scalar>
SetExprT<Scalar> translate(const SetExprT<Scalar>& s, const VecX<Scalar>& p) {
    require_dim(p.size(), s.dim, "translate");
    require_finite(p, "translate");
    SetExprT<Scalar> out;
    out.dim = s.dim;
    out.pieces.reserve(s.pieces.size());
    for (const auto& piece : s.pieces) {
        out.pieces.push_back(std::visit(
            [&](const auto& part) -> SetPieceT<Scalar> {
                auto moved = part;
                if constexpr (std::is_same_v<std::decay_t<decltype(part)>, PointSetT<Scalar>>) {
                    for (auto& x : moved.points) x -= p;
                } else {
                    for (auto& x : moved.vertices) x -= p;
                }
                return moved;
            },
            piece));
    }
    return out;
}

// x in conv(V) iff no affine functional separates x from the vertices;
// decided by maximizing <N, x> - c over the support constraints <N, v> <= c
// with N boxed to [-1, 1]^n.
template <typename Scalar>
bool hull_contains(const PolytopeT<Scalar>& c, const VecX<Scalar>& x,
                   const ToleranceT<Scalar>& tol) {
    require_dim(x.size(), c.dim, "hull membership");
    require_finite(x, "hull membership");
    const Index n = c.dim;
    const Index nz = n + 1;  // z = (N, c)
    Scalar mbox = Scalar(1) + x.template lpNorm<1>();
    for (const auto& v : c.vertices) mbox = std::max(mbox, Scalar(1) + v.template lpNorm<1>());

    std::vector<detail::LeqRow<Scalar>> rows;
    rows.reserve(c.vertices.size() + 2 * static_cast<std::size_t>(nz));
    for (const auto& v : c.vertices) {
        VecX<Scalar> a(nz);
        a.head(n) = v;
        a[n] = Scalar(-1);
        rows.push_back({std::move(a), Scalar(0)});
    }
    for (Index k = 0; k < nz; ++k) {
        VecX<Scalar> e = VecX<Scalar>::Zero(nz);
        e[k] = Scalar(1);
        const Scalar bound = k < n ? Scalar(1) : mbox;
        rows.push_back({e, bound});
        rows.push_back({-e, bound});
    }
    VecX<Scalar> objective(nz);
    objective.head(n) = x;
    objective[n] = Scalar(-1);
    const LpOutcomeT<Scalar> out = detail::solve_rows(
        nz, std::move(rows), std::optional<VecX<Scalar>>(std::move(objective)),
        /*lexicographic=*/false, tol);
    return out.status == LpStatus::Feasible && *out.objective_value <= tol.eps_feas;
}

// Ambient interior membership. p is interior iff no nonzero normal N has
// <N, v - p> <= 0 for every vertex v, i.e. iff the homogeneous solve is
// infeasible. Lower-dimensional hulls therefore have an empty interior.
template <typename Scalar>
bool hull_interior_contains(const PolytopeT<Scalar>& c, const VecX<Scalar>& p,
                            const ToleranceT<Scalar>& tol) {
    require_dim(p.size(), c.dim, "hull interior");
    require_finite(p, "hull interior");
    std::vector<LinearConstraintT<Scalar>> rows;
    rows.reserve(c.vertices.size());
    for (const auto& v : c.vertices) rows.push_back({v - p, Rel::LessEq, Scalar(0)});
    return homogeneous_nonzero_solve(rows, tol).status == LpStatus::Infeasible;
}

template <typename Scalar>
VecX<Scalar> centroid(const SetExprT<Scalar>& s) {
    VecX<Scalar> sum = VecX<Scalar>::Zero(s.dim);
    Index count = 0;
    for_each_point(s, [&](const VecX<Scalar>& x) {
        sum += x;
        ++count;
    });
    return sum / Scalar(count);
}

template <typename Scalar>
std::pair<VecX<Scalar>, VecX<Scalar>> bounding_box(const SetExprT<Scalar>& s) {
    VecX<Scalar> lo, hi;
    bool first = true;
    for_each_point(s, [&](const VecX<Scalar>& x) {
        if (first) {
            lo = x;
            hi = x;
            first = false;
        } else {
            lo = lo.cwiseMin(x);
            hi = hi.cwiseMax(x);
        }
    });
    return {lo, hi};
}

}  // namespace persep
