#include "persep/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace persep {

namespace {

std::string fmt(double v) {
    if (std::abs(v) < 5e-7) v = 0.0;  // avoid "-0.000000"
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

struct Frame {
    double x0, y0, x1, y1;  // data-coordinate viewport

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    // SVG's y axis points down; reflect within the viewport.
    double flip_y(double y) const { return y0 + y1 - y; }
};

void emit_piece(std::ostream& out, const SetPiece& piece, const char* cls, const Frame& f,
                double marker_r) {
    const auto& coords = piece_coords(piece);
    if (std::holds_alternative<Polytope>(piece)) {
        // render order: by angle around the piece centroid, then lexicographic
        Vec center = Vec::Zero(2);
        for (const auto& v : coords) center += v;
        center /= static_cast<double>(coords.size());
        std::vector<Vec> ordered(coords.begin(), coords.end());
        std::sort(ordered.begin(), ordered.end(), [&](const Vec& a, const Vec& b) {
            const double aa = std::atan2(a[1] - center[1], a[0] - center[0]);
            const double ab = std::atan2(b[1] - center[1], b[0] - center[0]);
            if (aa != ab) return aa < ab;
            if (a[0] != b[0]) return a[0] < b[0];
            return a[1] < b[1];
        });
        out << "  <polygon class=\"" << cls << "\" points=\"";
        bool first = true;
        for (const auto& v : ordered) {
            if (!first) out << ' ';
            first = false;
            out << fmt(v[0]) << ',' << fmt(f.flip_y(v[1]));
        }
        out << "\"/>\n";
    } else {
        for (const auto& v : coords) {
            out << "  <circle class=\"" << cls << "\" cx=\"" << fmt(v[0]) << "\" cy=\""
                << fmt(f.flip_y(v[1])) << "\" r=\"" << fmt(marker_r) << "\"/>\n";
        }
    }
}

}  // namespace

void emit_plot_2d(const Scene& scene, const std::optional<Hyperplane>& result,
                  std::ostream& out) {
    if (scene.dim != 2) throw std::invalid_argument("plot: scene dimension must be 2");

    double lo_x = 0, lo_y = 0, hi_x = 0, hi_y = 0;
    bool first = true;
    auto grow = [&](const Vec& v) {
        if (first) {
            lo_x = hi_x = v[0];
            lo_y = hi_y = v[1];
            first = false;
        } else {
            lo_x = std::min(lo_x, v[0]);
            hi_x = std::max(hi_x, v[0]);
            lo_y = std::min(lo_y, v[1]);
            hi_y = std::max(hi_y, v[1]);
        }
    };
    for_each_point(scene.set_a, grow);
    if (scene.set_b) for_each_point(*scene.set_b, grow);
    if (scene.point_p) grow(*scene.point_p);

    // viewport: bounding box inflated by 20 percent, with a floor for
    // degenerate extents
    const double cx = (lo_x + hi_x) / 2.0;
    const double cy = (lo_y + hi_y) / 2.0;
    double hx = std::max((hi_x - lo_x) / 2.0 * 1.2, 1e-9);
    double hy = std::max((hi_y - lo_y) / 2.0 * 1.2, 1e-9);
    if (hx < 1.0) hx = 1.0;
    if (hy < 1.0) hy = 1.0;
    const Frame f{cx - hx, cy - hy, cx + hx, cy + hy};

    const double diag = std::hypot(f.width(), f.height());
    const double marker = diag * 0.012;
    const double pmarker = diag * 0.016;
    const double stroke = diag * 0.003;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(f.x0) << ' ' << fmt(f.y0)
        << ' ' << fmt(f.width()) << ' ' << fmt(f.height()) << "\" width=\"640\" height=\"640\" "
        << "preserveAspectRatio=\"xMidYMid meet\">\n";
    out << "  <style>\n"
        << "    .set-a{fill:#4878cf;fill-opacity:0.45;stroke:#27477e;stroke-width:" << fmt(stroke)
        << ";}\n"
        << "    .set-b{fill:#d65f5f;fill-opacity:0.45;stroke:#8f2a2a;stroke-width:" << fmt(stroke)
        << ";}\n"
        << "    .hyperplane{stroke:#222222;stroke-width:" << fmt(stroke * 1.5) << ";}\n"
        << "    .point-p{fill:#111111;stroke:none;}\n"
        << "  </style>\n";

    for (const auto& piece : scene.set_a.pieces) emit_piece(out, piece, "set-a", f, marker);
    if (scene.set_b) {
        for (const auto& piece : scene.set_b->pieces) emit_piece(out, piece, "set-b", f, marker);
    }

    if (result) {
        // clip {x : <N, x - anchor> = 0} to the viewport
        const Vec& n = result->normal;
        const Vec& a = result->anchor;
        Vec d(2);
        d << -n[1], n[0];
        d.normalize();
        double t0 = -1e300, t1 = 1e300;
        bool alive = true;
        const double los[2] = {f.x0, f.y0};
        const double his[2] = {f.x1, f.y1};
        for (int axis = 0; axis < 2 && alive; ++axis) {
            if (std::abs(d[axis]) < 1e-15) {
                if (a[axis] < los[axis] || a[axis] > his[axis]) alive = false;
            } else {
                double ta = (los[axis] - a[axis]) / d[axis];
                double tb = (his[axis] - a[axis]) / d[axis];
                if (ta > tb) std::swap(ta, tb);
                t0 = std::max(t0, ta);
                t1 = std::min(t1, tb);
            }
        }
        if (alive && t0 < t1) {
            const Vec e0 = a + t0 * d;
            const Vec e1 = a + t1 * d;
            out << "  <line class=\"hyperplane\" x1=\"" << fmt(e0[0]) << "\" y1=\""
                << fmt(f.flip_y(e0[1])) << "\" x2=\"" << fmt(e1[0]) << "\" y2=\""
                << fmt(f.flip_y(e1[1])) << "\"/>\n";
        }
    }

    if (scene.point_p) {
        out << "  <circle class=\"point-p\" cx=\"" << fmt((*scene.point_p)[0]) << "\" cy=\""
            << fmt(f.flip_y((*scene.point_p)[1])) << "\" r=\"" << fmt(pmarker) << "\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace persep
