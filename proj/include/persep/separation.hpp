#pragma once

// The theorem engines: supporting hyperplanes for V-polytopes, half-space
// containment of proper cones, separation of two sets through a point via
// the Minkowski-difference cone, and the perspective-point search.
//
// Sign convention: the supported set A occupies the <N, x - p> <= 0 side.

#include "persep/cones.hpp"
#include "persep/lp.hpp"
#include "persep/sets.hpp"
#include "persep/tolerance.hpp"
#include "persep/vec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace persep {

template <typename Scalar>
struct HyperplaneT {
    VecX<Scalar> normal;  // |.|_inf = 1 after the pinning normalization
    VecX<Scalar> anchor;  // the hyperplane is {x : <normal, x - anchor> = 0}
};
using Hyperplane = HyperplaneT<double>;

template <typename Scalar>
struct SeparationCertificateT {
    HyperplaneT<Scalar> hyperplane;
    Scalar side_a_max = Scalar(0);  // max over a in A of <N, a - p>
    Scalar side_b_min = Scalar(0);  // min over b in B of <N, b - p>
    Scalar margin = Scalar(0);      // side_b_min - side_a_max
};
using SeparationCertificate = SeparationCertificateT<double>;

enum class SupportStatus { Supported, PInInterior };

template <typename Scalar>
struct SupportOutcomeT {
    SupportStatus status = SupportStatus::PInInterior;
    std::optional<HyperplaneT<Scalar>> hyperplane;
};
using SupportOutcome = SupportOutcomeT<double>;

enum class HalfspaceStatus { Contained, ConeNotProper };

template <typename Scalar>
struct HalfspaceOutcomeT {
    HalfspaceStatus status = HalfspaceStatus::ConeNotProper;
    std::optional<HyperplaneT<Scalar>> hyperplane;
};
using HalfspaceOutcome = HalfspaceOutcomeT<double>;

enum class SeparationStatus { Separated, DegeneratePoint, NotSeparableThroughP };

template <typename Scalar>
struct SeparationOutcomeT {
    SeparationStatus status = SeparationStatus::NotSeparableThroughP;
    std::optional<SeparationCertificateT<Scalar>> certificate;
};
using SeparationOutcome = SeparationOutcomeT<double>;

struct SearchConfig {
    int grid_resolution = 21;  // grid points per axis in the fallback search
    double inflation = 2.0;    // bounding-box inflation factor

    void validate() const {
        if (grid_resolution < 2) throw std::invalid_argument("search: grid_resolution must be >= 2");
        if (!(inflation > 1.0)) throw std::invalid_argument("search: inflation must exceed 1");
    }
};

enum class FindPointStatus { Found, NotFound };

template <typename Scalar>
struct FindPointOutcomeT {
    FindPointStatus status = FindPointStatus::NotFound;
    std::optional<VecX<Scalar>> point;
    std::optional<SeparationCertificateT<Scalar>> certificate;
};
using FindPointOutcome = FindPointOutcomeT<double>;

// Hyperplane through p with conv(c) in its <N, x - p> <= 0 half-space.
// Infeasibility of the homogeneous system over {v - p} is exactly the
// failure of the hypothesis, i.e. p lies in the ambient interior.
template <typename Scalar>
SupportOutcomeT<Scalar> supporting_hyperplane(const PolytopeT<Scalar>& c, const VecX<Scalar>& p,
                                              const ToleranceT<Scalar>& tol) {
    require_dim(p.size(), c.dim, "supporting hyperplane");
    require_finite(p, "supporting hyperplane");
    std::vector<LinearConstraintT<Scalar>> rows;
    rows.reserve(c.vertices.size());
    for (const auto& v : c.vertices) rows.push_back({v - p, Rel::LessEq, Scalar(0)});
    const LpOutcomeT<Scalar> res = homogeneous_nonzero_solve(rows, tol);
    SupportOutcomeT<Scalar> out;
    if (res.status != LpStatus::Feasible) {
        out.status = SupportStatus::PInInterior;
        return out;
    }
    out.status = SupportStatus::Supported;
    out.hyperplane = HyperplaneT<Scalar>{*res.witness, p};
    return out;
}

// Half-space containing a proper cone, anchored at its apex. Fails exactly
// when the generators positively span the whole space.
template <typename Scalar>
HalfspaceOutcomeT<Scalar> halfspace_containing_cone(const PolyhedralConeT<Scalar>& k,
                                                    const ToleranceT<Scalar>& tol) {
    HalfspaceOutcomeT<Scalar> out;
    if (k.trivial) {
        out.status = HalfspaceStatus::ConeNotProper;
        return out;
    }
    std::vector<LinearConstraintT<Scalar>> rows;
    rows.reserve(k.generators.size());
    for (const auto& g : k.generators) rows.push_back({g, Rel::LessEq, Scalar(0)});
    const LpOutcomeT<Scalar> res = homogeneous_nonzero_solve(rows, tol);
    if (res.status != LpStatus::Feasible) {
        out.status = HalfspaceStatus::ConeNotProper;
        return out;
    }
    out.status = HalfspaceStatus::Contained;
    out.hyperplane = HyperplaneT<Scalar>{*res.witness, k.apex};
    return out;
}

namespace detail {

template <typename Scalar>
SeparationCertificateT<Scalar> evaluate_certificate(const SetExprT<Scalar>& a,
                                                    const SetExprT<Scalar>& b,
                                                    const VecX<Scalar>& normal,
                                                    const VecX<Scalar>& p) {
    SeparationCertificateT<Scalar> cert;
    cert.hyperplane = HyperplaneT<Scalar>{normal, p};
    Scalar amax = -std::numeric_limits<Scalar>::infinity();
    Scalar bmin = std::numeric_limits<Scalar>::infinity();
    for_each_point(a, [&](const VecX<Scalar>& x) { amax = std::max(amax, normal.dot(x - p)); });
    for_each_point(b, [&](const VecX<Scalar>& x) { bmin = std::min(bmin, normal.dot(x - p)); });
    cert.side_a_max = amax;
    cert.side_b_min = bmin;
    cert.margin = bmin - amax;
    return cert;
}

}  // namespace detail

// Separation of A and B by a hyperplane through p, built literally from the
// difference cone of the hulled perspective cones. The certificate is always
// re-evaluated against the raw scene before it is returned.
template <typename Scalar>
SeparationOutcomeT<Scalar> separate_through_point(const SetExprT<Scalar>& a,
                                                  const SetExprT<Scalar>& b, const VecX<Scalar>& p,
                                                  const ToleranceT<Scalar>& tol) {
    require_dim(b.dim, a.dim, "separate");
    require_dim(p.size(), a.dim, "separate");
    require_finite(p, "separate");
    SeparationOutcomeT<Scalar> out;

    const auto conesA = perspective_cone(a, p, tol);
    if (conesA.front().trivial) {
        out.status = SeparationStatus::DegeneratePoint;
        return out;
    }
    const auto conesB = perspective_cone(b, p, tol);
    if (conesB.front().trivial) {
        out.status = SeparationStatus::DegeneratePoint;
        return out;
    }

    const PolyhedralConeT<Scalar> hullA = conic_hull(conesA, tol).translated_to_origin();
    const PolyhedralConeT<Scalar> hullB = conic_hull(conesB, tol).translated_to_origin();
    const PolyhedralConeT<Scalar> diff = minkowski_difference(hullA, hullB, tol);

    const HalfspaceOutcomeT<Scalar> hs = halfspace_containing_cone(diff, tol);
    if (hs.status != HalfspaceStatus::Contained) {
        out.status = SeparationStatus::NotSeparableThroughP;
        return out;
    }
    // A's generators sit directly in the difference cone, so A is already on
    // the nonpositive side of the returned normal.
    SeparationCertificateT<Scalar> cert =
        detail::evaluate_certificate(a, b, hs.hyperplane->normal, p);
    if (cert.side_a_max > tol.eps_feas || cert.side_b_min < -tol.eps_feas) {
        out.status = SeparationStatus::NotSeparableThroughP;
        return out;
    }
    out.status = SeparationStatus::Separated;
    out.certificate = std::move(cert);
    return out;
}

namespace detail {

// Affine separation over (N, c, t): <N, a> + t <= c and c + t <= <N, b>,
// coordinate pinning on N, maximize the slack t. Strictly positive slack is
// required, so configurations admitting only touching affine separators do
// not count as stage-1 hits.
template <typename Scalar>
std::optional<std::pair<VecX<Scalar>, Scalar>> affine_separation(
    const std::vector<VecX<Scalar>>& pa, const std::vector<VecX<Scalar>>& pb, Index n,
    const ToleranceT<Scalar>& tol) {
    const Index nz = n + 2;  // z = (N, c, t)
    Scalar mbox = Scalar(1);
    for (const auto& x : pa) mbox = std::max(mbox, Scalar(1) + x.template lpNorm<1>());
    for (const auto& y : pb) mbox = std::max(mbox, Scalar(1) + y.template lpNorm<1>());
    const Scalar tboxv = Scalar(2) * mbox + Scalar(1);

    std::vector<LeqRow<Scalar>> base;
    for (const auto& x : pa) {
        VecX<Scalar> r(nz);
        r.head(n) = x;
        r[n] = Scalar(-1);
        r[n + 1] = Scalar(1);
        base.push_back({std::move(r), Scalar(0)});
    }
    for (const auto& y : pb) {
        VecX<Scalar> r(nz);
        r.head(n) = -y;
        r[n] = Scalar(1);
        r[n + 1] = Scalar(1);
        base.push_back({std::move(r), Scalar(0)});
    }
    for (Index k = 0; k < nz; ++k) {
        VecX<Scalar> e = VecX<Scalar>::Zero(nz);
        e[k] = Scalar(1);
        const Scalar bound = (k < n) ? Scalar(1) : (k == n ? mbox : tboxv);
        base.push_back({e, bound});
        base.push_back({-e, bound});
    }
    VecX<Scalar> objective = VecX<Scalar>::Zero(nz);
    objective[n + 1] = Scalar(1);

    for (Index i = 0; i < n; ++i) {
        for (int si = 0; si < 2; ++si) {
            const Scalar s = (si == 0) ? Scalar(1) : Scalar(-1);
            std::vector<LeqRow<Scalar>> sub = base;
            VecX<Scalar> e = VecX<Scalar>::Zero(nz);
            e[i] = Scalar(1);
            sub.push_back({e, s});
            sub.push_back({-e, -s});
            const LpOutcomeT<Scalar> res =
                solve_rows(nz, std::move(sub), std::optional<VecX<Scalar>>(objective),
                           /*lexicographic=*/true, tol);
            if (res.status != LpStatus::Feasible) continue;
            if (!res.objective_value || *res.objective_value <= tol.eps_feas) continue;
            return std::make_pair(res.witness->head(n).eval(), (*res.witness)[n]);
        }
    }
    return std::nullopt;
}

}  // namespace detail

// Two-stage search for a perspective point. Stage 1 solves the direct affine
// separation program and projects the midpoint of the two centroids onto the
// separating hyperplane; if that point degenerates (lands inside a set), a
// deterministic grid over the inflated bounding box is scanned in
// lexicographic order. NotFound is a value, not an error.
template <typename Scalar>
FindPointOutcomeT<Scalar> find_perspective_point(const SetExprT<Scalar>& a,
                                                 const SetExprT<Scalar>& b,
                                                 const SearchConfig& search,
                                                 const ToleranceT<Scalar>& tol) {
    require_dim(b.dim, a.dim, "find perspective point");
    search.validate();
    FindPointOutcomeT<Scalar> out;
    const Index n = a.dim;

    const auto pa = all_points(a);
    const auto pb = all_points(b);
    const auto affine = detail::affine_separation(pa, pb, n, tol);
    if (!affine) return out;  // no affine separator at all, so no p can work

    const VecX<Scalar>& normal = affine->first;
    const Scalar offset = affine->second;
    const VecX<Scalar> mid = (centroid(a) + centroid(b)) / Scalar(2);
    const VecX<Scalar> p = mid - ((normal.dot(mid) - offset) / normal.squaredNorm()) * normal;

    SeparationOutcomeT<Scalar> sep = separate_through_point(a, b, p, tol);
    if (sep.status == SeparationStatus::Separated) {
        out.status = FindPointStatus::Found;
        out.point = p;
        out.certificate = std::move(sep.certificate);
        return out;
    }

    // Fallback grid over the union bounding box inflated about its center.
    SetExprT<Scalar> both;
    both.dim = n;
    both.pieces = a.pieces;
    for (const auto& piece : b.pieces) both.pieces.push_back(piece);
    const auto [lo, hi] = bounding_box(both);
    const VecX<Scalar> center = (lo + hi) / Scalar(2);
    VecX<Scalar> half = (hi - lo) / Scalar(2) * Scalar(search.inflation);
    for (Index j = 0; j < n; ++j) {
        if (half[j] <= tol.eps_zero) half[j] = Scalar(search.inflation);
    }
    const int g = search.grid_resolution;
    double cells = 1.0;
    for (Index j = 0; j < n; ++j) cells *= g;
    if (cells > 1e7) {
        throw std::invalid_argument("find perspective point: grid too large for this dimension");
    }

    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    VecX<Scalar> cand(n);
    while (true) {
        for (Index j = 0; j < n; ++j) {
            const Scalar t = Scalar(idx[static_cast<std::size_t>(j)]) / Scalar(g - 1);
            cand[j] = center[j] - half[j] + Scalar(2) * half[j] * t;
        }
        sep = separate_through_point(a, b, cand, tol);
        if (sep.status == SeparationStatus::Separated) {
            out.status = FindPointStatus::Found;
            out.point = cand;
            out.certificate = std::move(sep.certificate);
            return out;
        }
        Index j = n - 1;
        for (;; --j) {
            if (++idx[static_cast<std::size_t>(j)] < g) break;
            idx[static_cast<std::size_t>(j)] = 0;
            if (j == 0) return out;  // grid exhausted
        }
    }
}

}  // namespace persep
