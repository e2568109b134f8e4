#pragma once

// Scene files: a JSON document with `dim`, a `sets` object mapping "A"/"B"
// (or "C" in place of "A" for single-set scenes) to arrays of pieces, an
// optional point `p`, and optional `tolerance` overrides. Unknown keys are
// rejected.

#include "persep/sets.hpp"
#include "persep/tolerance.hpp"
#include "persep/vec.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace persep {

struct SceneError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SceneParseError : SceneError {
    int line = 0;
    int column = 0;
    SceneParseError(int l, int c, const std::string& msg)
        : SceneError("parse error at line " + std::to_string(l) + ", column " +
                     std::to_string(c) + ": " + msg),
          line(l),
          column(c) {}
};

struct ToleranceOverrides {
    std::optional<double> eps_feas;
    std::optional<double> eps_zero;
    std::optional<double> eps_angle;

    bool operator==(const ToleranceOverrides&) const = default;
};

struct Scene {
    Index dim = 0;
    std::string set_a_name = "A";  // "A" or "C", kept for faithful round trips
    SetExpr set_a;
    std::optional<SetExpr> set_b;
    std::optional<Vec> point_p;
    std::optional<ToleranceOverrides> tolerance_overrides;

    Tolerance effective_tolerance() const {
        Tolerance tol;
        if (tolerance_overrides) {
            if (tolerance_overrides->eps_feas) tol.eps_feas = *tolerance_overrides->eps_feas;
            if (tolerance_overrides->eps_zero) tol.eps_zero = *tolerance_overrides->eps_zero;
            if (tolerance_overrides->eps_angle) tol.eps_angle = *tolerance_overrides->eps_angle;
        }
        return tol;
    }
};

bool operator==(const Scene& a, const Scene& b);

Scene parse_scene(const std::string& text);
std::string serialize_scene(const Scene& scene);

}  // namespace persep
