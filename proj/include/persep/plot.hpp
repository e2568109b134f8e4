#pragma once

// Deterministic 2D SVG emission: sets as filled polygons / point markers,
// p as a distinct marker, the hyperplane as a line clipped to the viewport.
// Identical inputs produce byte-identical output (fixed 6-decimal number
// formatting, fixed element order).

#include "persep/scene.hpp"
#include "persep/separation.hpp"

#include <optional>
#include <ostream>

namespace persep {

void emit_plot_2d(const Scene& scene, const std::optional<Hyperplane>& result, std::ostream& out);

}  // namespace persep
