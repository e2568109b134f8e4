#pragma once

// Circle-arc arithmetic for the 2D routines. All angles live in [0, 2*pi);
// widths in [0, 2*pi]. Wraparound is handled explicitly everywhere, which is
// the classic failure mode of angular sweeps.

#include "persep/tolerance.hpp"
#include "persep/vec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace persep {

template <typename Scalar>
inline constexpr Scalar kTwoPi = Scalar(2) * std::numbers::pi_v<Scalar>;

template <typename Scalar>
Scalar normalize_angle(Scalar a) {
    Scalar r = std::fmod(a, kTwoPi<Scalar>);
    if (r < Scalar(0)) r += kTwoPi<Scalar>;
    if (r >= kTwoPi<Scalar>) r = Scalar(0);
    return r;
}

template <typename Scalar>
Scalar angle_of(const VecX<Scalar>& v) {
    require_dim(v.size(), 2, "angle_of");
    return normalize_angle(std::atan2(v[1], v[0]));
}

/// Arc length walking counterclockwise from one angle to another.
template <typename Scalar>
Scalar ccw_gap(Scalar from, Scalar to) {
    return normalize_angle(to - from);
}

template <typename Scalar>
VecX<Scalar> unit_at(Scalar angle) {
    VecX<Scalar> v(2);
    v << std::cos(angle), std::sin(angle);
    return v;
}

template <typename Scalar>
struct AngularIntervalT {
    Scalar start = Scalar(0);  // in [0, 2*pi)
    Scalar width = Scalar(0);  // in [0, 2*pi]; 2*pi encodes the full circle

    Scalar end() const { return start + width; }

    bool contains(Scalar angle, Scalar eps) const {
        if (width >= kTwoPi<Scalar> - eps) return true;
        return ccw_gap(start, normalize_angle(angle)) <= width + eps;
    }
};
using AngularInterval = AngularIntervalT<double>;

/// Smallest arc covering all given angles: the complement of the largest
/// counterclockwise gap between consecutive sorted angles.
template <typename Scalar>
AngularIntervalT<Scalar> minimal_covering_arc(std::vector<Scalar> angles) {
    if (angles.empty()) throw std::invalid_argument("minimal_covering_arc: no angles");
    for (auto& a : angles) a = normalize_angle(a);
    std::sort(angles.begin(), angles.end());
    const std::size_t k = angles.size();
    Scalar bestGap = Scalar(-1);
    std::size_t bestIdx = 0;  // gap between angles[i] and its successor
    for (std::size_t i = 0; i < k; ++i) {
        const Scalar next = (i + 1 < k) ? angles[i + 1] : angles[0] + kTwoPi<Scalar>;
        const Scalar gap = next - angles[i];
        if (gap > bestGap) {
            bestGap = gap;
            bestIdx = i;
        }
    }
    AngularIntervalT<Scalar> arc;
    arc.start = normalize_angle((bestIdx + 1 < k) ? angles[bestIdx + 1] : angles[0]);
    arc.width = kTwoPi<Scalar> - bestGap;
    return arc;
}

template <typename Scalar>
struct MergedArcsT {
    std::vector<AngularIntervalT<Scalar>> components;  // sorted by start, disjoint
    bool full = false;                                 // the union covers the whole circle
};

/// Union of arcs on the circle; arcs closer than glue are joined.
template <typename Scalar>
MergedArcsT<Scalar> merge_arcs(std::vector<AngularIntervalT<Scalar>> arcs, Scalar glue) {
    MergedArcsT<Scalar> out;
    if (arcs.empty()) return out;
    for (auto& a : arcs) {
        if (a.width >= kTwoPi<Scalar> - glue) {
            out.full = true;
            return out;
        }
        a.start = normalize_angle(a.start);
    }
    std::sort(arcs.begin(), arcs.end(),
              [](const auto& x, const auto& y) { return x.start < y.start; });

    // Linear merge on [start, start+width] segments.
    std::vector<std::pair<Scalar, Scalar>> segs;  // (start, end) with end >= start
    for (const auto& a : arcs) {
        const Scalar s = a.start;
        const Scalar e = a.start + a.width;
        if (!segs.empty() && s <= segs.back().second + glue) {
            segs.back().second = std::max(segs.back().second, e);
        } else {
            segs.emplace_back(s, e);
        }
    }
    // Wrap: the last segment may reach past 2*pi and swallow leading ones,
    // or sit within glue of the first segment across the 0 cut.
    while (segs.size() > 1) {
        const Scalar overhang = segs.back().second - kTwoPi<Scalar>;
        if (overhang >= segs.front().first - glue) {
            segs.back().second =
                std::max(segs.back().second, segs.front().second + kTwoPi<Scalar>);
            segs.erase(segs.begin());
        } else {
            break;
        }
    }
    if (segs.size() == 1) {
        if (segs.front().second - segs.front().first >= kTwoPi<Scalar> - glue) {
            out.full = true;
            return out;
        }
    }
    for (const auto& [s, e] : segs) {
        AngularIntervalT<Scalar> c;
        c.start = normalize_angle(s);
        c.width = std::min(e - s, kTwoPi<Scalar>);
        out.components.push_back(c);
    }
    std::sort(out.components.begin(), out.components.end(),
              [](const auto& x, const auto& y) { return x.start < y.start; });
    return out;
}

}  // namespace persep
