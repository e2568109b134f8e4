#pragma once

// Low-dimensional linear feasibility and optimization.
//
// Homogeneous "find a nonzero normal" systems are normalized by coordinate
// pinning: for each coordinate i and sign s the solver fixes N_i = s, boxes
// every coordinate to [-1, 1], and maximizes the minimum slack of the rows.
// Subproblems are scanned i ascending, + before -, and the first feasible one
// wins, so outputs are reproducible. Ties among optimal vertices are broken
// by lexicographic refinement (smallest witness coordinate by coordinate).

#include "persep/tolerance.hpp"
#include "persep/vec.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace persep {

enum class Rel { LessEq, GreaterEq, Equal };

template <typename Scalar>
struct LinearConstraintT {
    VecX<Scalar> coeffs;
    Rel rel = Rel::LessEq;
    Scalar rhs = Scalar(0);
};
using LinearConstraint = LinearConstraintT<double>;

template <typename Scalar>
struct VarBoundsT {
    std::optional<Scalar> lower;
    std::optional<Scalar> upper;
};
using VarBounds = VarBoundsT<double>;

template <typename Scalar>
struct LpProblemT {
    Index dim = 0;
    std::vector<LinearConstraintT<Scalar>> constraints;
    std::optional<VecX<Scalar>> objective;               // maximize <objective, x>
    std::optional<std::vector<VarBoundsT<Scalar>>> box;  // per-coordinate, size dim when present
};
using LpProblem = LpProblemT<double>;

enum class LpStatus { Feasible, Infeasible, Unbounded };

template <typename Scalar>
struct LpOutcomeT {
    LpStatus status = LpStatus::Infeasible;
    std::optional<VecX<Scalar>> witness;
    std::optional<Scalar> objective_value;
};
using LpOutcome = LpOutcomeT<double>;

// Design envelope of the public solver; callers wanting more should rethink.
inline constexpr Index kMaxLpDim = 16;

namespace detail {

// One a.x <= b row over free variables.
template <typename Scalar>
struct LeqRow {
    VecX<Scalar> coeffs;
    Scalar rhs = Scalar(0);
};

template <typename Scalar>
struct SimplexSolution {
    LpStatus status = LpStatus::Infeasible;
    VecX<Scalar> x;               // valid when Feasible
    Scalar objective = Scalar(0); // valid when Feasible and an objective was given
};

inline constexpr long kMaxSimplexIter = 200000;

// Dense two-phase tableau simplex with Bland's rule on the split-variable
// standard form. Free x becomes y+ - y-; one auxiliary column drives phase 1.
template <typename Scalar>
SimplexSolution<Scalar> simplex_once(Index n, const std::vector<LeqRow<Scalar>>& rows,
                                     const VecX<Scalar>* objective,
                                     const ToleranceT<Scalar>& tol) {
    constexpr Scalar kPivotEps = Scalar(1e-11);
    constexpr Scalar kReducedCostEps = Scalar(1e-9);

    const Index m = static_cast<Index>(rows.size());
    SimplexSolution<Scalar> sol;

    if (m == 0) {
        sol.x = VecX<Scalar>::Zero(n);
        if (objective && objective->size() > 0 && objective->cwiseAbs().maxCoeff() > kReducedCostEps) {
            sol.status = LpStatus::Unbounded;
        } else {
            sol.status = LpStatus::Feasible;
        }
        return sol;
    }

    const Index nsplit = 2 * n;
    const Index art = nsplit + m;  // auxiliary column, used only in phase 1
    const Index ncols = nsplit + m + 1;

    MatX<Scalar> A = MatX<Scalar>::Zero(m, ncols);
    VecX<Scalar> rhs(m);
    for (Index i = 0; i < m; ++i) {
        A.row(i).segment(0, n) = rows[i].coeffs.transpose();
        A.row(i).segment(n, n) = -rows[i].coeffs.transpose();
        A(i, nsplit + i) = Scalar(1);
        A(i, art) = Scalar(-1);
        rhs[i] = rows[i].rhs;
    }

    std::vector<Index> basis(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = nsplit + i;

    // Phase-2 cost row carried through all pivots so no repricing is needed.
    Eigen::Matrix<Scalar, 1, Eigen::Dynamic> cost2 =
        Eigen::Matrix<Scalar, 1, Eigen::Dynamic>::Zero(ncols);
    if (objective) {
        cost2.segment(0, n) = objective->transpose();
        cost2.segment(n, n) = -objective->transpose();
    }
    Eigen::Matrix<Scalar, 1, Eigen::Dynamic> cost1 =
        Eigen::Matrix<Scalar, 1, Eigen::Dynamic>::Zero(ncols);
    cost1[art] = Scalar(-1);  // maximize -x0

    bool artAllowed = false;

    auto pivot = [&](Index r, Index e) {
        const Scalar piv = A(r, e);
        A.row(r) /= piv;
        rhs[r] /= piv;
        A(r, e) = Scalar(1);
        for (Index i = 0; i < m; ++i) {
            if (i == r) continue;
            const Scalar f = A(i, e);
            if (f == Scalar(0)) continue;
            A.row(i) -= f * A.row(r);
            rhs[i] -= f * rhs[r];
            A(i, e) = Scalar(0);
        }
        if (cost1[e] != Scalar(0)) {
            cost1 -= cost1[e] * A.row(r);
            cost1[e] = Scalar(0);
        }
        if (cost2[e] != Scalar(0)) {
            cost2 -= cost2[e] * A.row(r);
            cost2[e] = Scalar(0);
        }
        basis[static_cast<std::size_t>(r)] = e;
    };

    auto iterate = [&](const Eigen::Matrix<Scalar, 1, Eigen::Dynamic>& cost) -> LpStatus {
        for (long iter = 0;; ++iter) {
            if (iter > kMaxSimplexIter) throw std::runtime_error("lp: simplex iteration limit hit");
            Index enter = -1;
            for (Index j = 0; j < ncols; ++j) {
                if (j == art && !artAllowed) continue;
                if (cost[j] > kReducedCostEps) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return LpStatus::Feasible;  // optimal
            Index leave = -1;
            Scalar bestRatio = Scalar(0);
            for (Index i = 0; i < m; ++i) {
                if (A(i, enter) <= kPivotEps) continue;
                const Scalar num = rhs[i] < Scalar(0) ? Scalar(0) : rhs[i];
                const Scalar ratio = num / A(i, enter);
                if (leave < 0 || ratio < bestRatio ||
                    (ratio == bestRatio && basis[static_cast<std::size_t>(i)] <
                                               basis[static_cast<std::size_t>(leave)])) {
                    leave = i;
                    bestRatio = ratio;
                }
            }
            if (leave < 0) return LpStatus::Unbounded;
            pivot(leave, enter);
        }
    };

    Index worst = 0;
    rhs.minCoeff(&worst);
    if (rhs[worst] < Scalar(-1e-11)) {
        artAllowed = true;
        pivot(worst, art);  // makes every rhs nonnegative
        if (iterate(cost1) == LpStatus::Unbounded) {
            throw std::runtime_error("lp: phase 1 reported unbounded");
        }
        Scalar x0 = Scalar(0);
        for (Index i = 0; i < m; ++i) {
            if (basis[static_cast<std::size_t>(i)] == art) x0 = rhs[i];
        }
        if (x0 > tol.eps_feas) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        for (Index i = 0; i < m; ++i) {
            if (basis[static_cast<std::size_t>(i)] != art) continue;
            Index e = -1;
            for (Index j = 0; j < nsplit + m; ++j) {
                if (std::abs(A(i, j)) > kPivotEps) {
                    e = j;
                    break;
                }
            }
            if (e >= 0) {
                pivot(i, e);
            } else {
                // redundant row: neutralize it
                A.row(i).setZero();
                rhs[i] = Scalar(0);
            }
        }
        artAllowed = false;
    }

    if (objective) {
        const LpStatus st = iterate(cost2);
        if (st == LpStatus::Unbounded) {
            sol.status = LpStatus::Unbounded;
            return sol;
        }
    }

    VecX<Scalar> val = VecX<Scalar>::Zero(ncols);
    for (Index i = 0; i < m; ++i) val[basis[static_cast<std::size_t>(i)]] = rhs[i];
    sol.x.resize(n);
    for (Index j = 0; j < n; ++j) sol.x[j] = val[j] - val[n + j];
    sol.objective = objective ? objective->dot(sol.x) : Scalar(0);
    sol.status = LpStatus::Feasible;
    return sol;
}

template <typename Scalar>
Scalar pin_slack(Scalar v, const ToleranceT<Scalar>& tol) {
    return std::max(tol.eps_zero, Scalar(1e-12) * (Scalar(1) + std::abs(v)));
}

// Feasibility / optimization over a.x <= b rows, with optional lexicographic
// tie-breaking among optimal points.
template <typename Scalar>
LpOutcomeT<Scalar> solve_rows(Index n, std::vector<LeqRow<Scalar>> rows,
                              const std::optional<VecX<Scalar>>& objective, bool lexicographic,
                              const ToleranceT<Scalar>& tol) {
    LpOutcomeT<Scalar> out;
    const VecX<Scalar>* obj = objective ? &*objective : nullptr;
    SimplexSolution<Scalar> first = simplex_once(n, rows, obj, tol);
    if (first.status != LpStatus::Feasible) {
        out.status = first.status;
        return out;
    }
    VecX<Scalar> witness = first.x;
    if (objective && lexicographic) {
        const Scalar z = first.objective;
        rows.push_back({-*objective, -(z - pin_slack(z, tol))});
        for (Index j = 0; j < n; ++j) {
            VecX<Scalar> neg = VecX<Scalar>::Zero(n);
            neg[j] = Scalar(-1);
            const SimplexSolution<Scalar> s = simplex_once(n, rows, &neg, tol);
            if (s.status != LpStatus::Feasible) continue;  // coordinate unbounded below: leave it
            witness = s.x;
            const Scalar low = -s.objective;
            VecX<Scalar> pos = VecX<Scalar>::Zero(n);
            pos[j] = Scalar(1);
            rows.push_back({std::move(pos), low + pin_slack(low, tol)});
        }
    }
    out.status = LpStatus::Feasible;
    out.witness = std::move(witness);
    if (objective) out.objective_value = objective->dot(*out.witness);
    return out;
}

template <typename Scalar>
bool constraint_satisfied(const LinearConstraintT<Scalar>& c, const VecX<Scalar>& x,
                          const ToleranceT<Scalar>& tol) {
    const Scalar lhs = c.coeffs.dot(x);
    switch (c.rel) {
        case Rel::LessEq: return lhs <= c.rhs + tol.eps_feas;
        case Rel::GreaterEq: return lhs >= c.rhs - tol.eps_feas;
        case Rel::Equal: return std::abs(lhs - c.rhs) <= tol.eps_feas;
    }
    return false;
}

}  // namespace detail

template <typename Scalar>
LpOutcomeT<Scalar> solve(const LpProblemT<Scalar>& p, const ToleranceT<Scalar>& tol) {
    if (p.dim < 1) throw std::invalid_argument("lp: dimension must be positive");
    if (p.dim > kMaxLpDim) {
        throw std::invalid_argument("lp: dimension exceeds the design envelope of " +
                                    std::to_string(kMaxLpDim));
    }
    std::vector<detail::LeqRow<Scalar>> rows;
    rows.reserve(p.constraints.size() * 2);
    for (const auto& c : p.constraints) {
        require_dim(c.coeffs.size(), p.dim, "lp constraint");
        require_finite(c.coeffs, "lp constraint");
        if (!std::isfinite(static_cast<double>(c.rhs))) {
            throw std::invalid_argument("lp constraint: non-finite rhs");
        }
        switch (c.rel) {
            case Rel::LessEq: rows.push_back({c.coeffs, c.rhs}); break;
            case Rel::GreaterEq: rows.push_back({-c.coeffs, -c.rhs}); break;
            case Rel::Equal:
                rows.push_back({c.coeffs, c.rhs});
                rows.push_back({-c.coeffs, -c.rhs});
                break;
        }
    }
    if (p.box) {
        if (static_cast<Index>(p.box->size()) != p.dim) {
            throw std::invalid_argument("lp: box size must equal dim");
        }
        for (Index j = 0; j < p.dim; ++j) {
            const auto& b = (*p.box)[static_cast<std::size_t>(j)];
            VecX<Scalar> e = VecX<Scalar>::Zero(p.dim);
            e[j] = Scalar(1);
            if (b.upper) rows.push_back({e, *b.upper});
            if (b.lower) rows.push_back({-e, -*b.lower});
        }
    }
    if (p.objective) {
        require_dim(p.objective->size(), p.dim, "lp objective");
        require_finite(*p.objective, "lp objective");
    }

    LpOutcomeT<Scalar> out =
        detail::solve_rows(p.dim, std::move(rows), p.objective, p.objective.has_value(), tol);
    if (out.status == LpStatus::Feasible) {
        for (const auto& c : p.constraints) {
            if (!detail::constraint_satisfied(c, *out.witness, tol)) {
                throw std::runtime_error("lp: solver produced a witness violating a constraint");
            }
        }
    }
    return out;
}

// Searches for N != 0 with <row, N> <= 0 for every row. See the file comment
// for the pinning scheme. The returned objective_value is the achieved
// minimum slack of the winning subproblem.
template <typename Scalar>
LpOutcomeT<Scalar> homogeneous_nonzero_solve(const std::vector<LinearConstraintT<Scalar>>& rows,
                                             const ToleranceT<Scalar>& tol) {
    if (rows.empty()) throw std::invalid_argument("homogeneous solve: empty system");
    const Index n = rows.front().coeffs.size();
    if (n < 1) throw std::invalid_argument("homogeneous solve: dimension must be positive");
    if (n > kMaxLpDim) {
        throw std::invalid_argument("homogeneous solve: dimension exceeds the design envelope of " +
                                    std::to_string(kMaxLpDim));
    }

    std::vector<VecX<Scalar>> gens;
    Scalar tbox = Scalar(1);
    for (const auto& r : rows) {
        require_dim(r.coeffs.size(), n, "homogeneous row");
        require_finite(r.coeffs, "homogeneous row");
        if (r.rel != Rel::LessEq) {
            throw std::invalid_argument("homogeneous solve: rows must be <= constraints");
        }
        if (std::abs(r.rhs) > tol.eps_zero) {
            throw std::invalid_argument("homogeneous solve: rows must have zero rhs");
        }
        if (r.coeffs.norm() > tol.eps_zero) {
            gens.push_back(r.coeffs);
            tbox = std::max(tbox, Scalar(1) + r.coeffs.template lpNorm<1>());
        }
    }

    // Variables z = (N_0..N_{n-1}, t); maximize t subject to <g, N> + t <= 0.
    const Index nz = n + 1;
    std::vector<detail::LeqRow<Scalar>> base;
    base.reserve(gens.size() + 2 * static_cast<std::size_t>(nz));
    for (const auto& g : gens) {
        VecX<Scalar> a(nz);
        a.head(n) = g;
        a[n] = Scalar(1);
        base.push_back({std::move(a), Scalar(0)});
    }
    for (Index k = 0; k < n; ++k) {
        VecX<Scalar> e = VecX<Scalar>::Zero(nz);
        e[k] = Scalar(1);
        base.push_back({e, Scalar(1)});
        base.push_back({-e, Scalar(1)});
    }
    {
        VecX<Scalar> e = VecX<Scalar>::Zero(nz);
        e[n] = Scalar(1);
        base.push_back({e, tbox});
        base.push_back({-e, tbox});
    }
    VecX<Scalar> objective = VecX<Scalar>::Zero(nz);
    objective[n] = Scalar(1);

    for (Index i = 0; i < n; ++i) {
        for (int si = 0; si < 2; ++si) {
            const Scalar s = (si == 0) ? Scalar(1) : Scalar(-1);
            std::vector<detail::LeqRow<Scalar>> sub = base;
            VecX<Scalar> e = VecX<Scalar>::Zero(nz);
            e[i] = Scalar(1);
            sub.push_back({e, s});
            sub.push_back({-e, -s});
            const LpOutcomeT<Scalar> res =
                detail::solve_rows(nz, std::move(sub), std::optional<VecX<Scalar>>(objective),
                                   /*lexicographic=*/true, tol);
            if (res.status != LpStatus::Feasible) continue;
            if (!res.objective_value || *res.objective_value < -tol.eps_feas) continue;
            VecX<Scalar> normal = res.witness->head(n);
            bool verified = true;
            for (const auto& g : gens) {
                if (g.dot(normal) > tol.eps_feas) {
                    verified = false;
                    break;
                }
            }
            if (!verified) continue;
            LpOutcomeT<Scalar> out;
            out.status = LpStatus::Feasible;
            out.witness = std::move(normal);
            out.objective_value = res.objective_value;
            return out;
        }
    }
    return LpOutcomeT<Scalar>{};
}

}  // namespace persep
