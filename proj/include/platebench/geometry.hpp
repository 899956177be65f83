#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "platebench/common.hpp"

namespace platebench {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Straight bead: the stroke of half-width width/2 around the segment [a, b].
struct LineBead {
    Vec2 a;
    Vec2 b;
    double width = 0.0;
};

// Elliptic bead: the stroke of half-width width/2 around the ellipse outline.
struct EllipseBead {
    Vec2 center;
    double semi_a = 0.0;   // semi-axis along the (rotated) local x direction
    double semi_b = 0.0;
    double rotation = 0.0; // rad, counter-clockwise
    double width = 0.0;
};

struct BeadingPattern {
    std::vector<LineBead> lines;
    std::vector<EllipseBead> ellipses;
};

// Node-aligned bead membership grid. values[i*nx + j] is the membership of the
// node at row i (y direction), column j (x direction). The boundary ring is
// kept at exactly 0 so beads never touch the plate edge.
struct BeadingField {
    GridDims grid;
    double dx = 0.0;  // node spacing in x (m)
    double dy = 0.0;  // node spacing in y (m)
    std::vector<float> values;

    float at(int i, int j) const { return values[static_cast<size_t>(i) * grid.nx + j]; }
    float& at(int i, int j) { return values[static_cast<size_t>(i) * grid.nx + j]; }
};

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const double abx = b.x - a.x, aby = b.y - a.y;
    const double apx = p.x - a.x, apy = p.y - a.y;
    const double len2 = abx * abx + aby * aby;
    double t = len2 > 0.0 ? (apx * abx + apy * aby) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = apx - t * abx, dy = apy - t * aby;
    return std::sqrt(dx * dx + dy * dy);
}

namespace detail {

// Root of F(s) = (r0 z0/(s+r0))^2 + (z1/(s+1))^2 - 1 by bisection (Eberly's
// robust point-ellipse scheme). F is strictly decreasing on the bracket.
inline double ellipse_distance_root(double r0, double z0, double z1, double g) {
    const double n0 = r0 * z0;
    double s0 = z1 - 1.0;
    double s1 = g < 0.0 ? 0.0 : std::sqrt(n0 * n0 + z1 * z1) - 1.0;
    double s = 0.0;
    for (int it = 0; it < 1074; ++it) {
        s = 0.5 * (s0 + s1);
        if (s == s0 || s == s1) break;
        const double ratio0 = n0 / (s + r0);
        const double ratio1 = z1 / (s + 1.0);
        g = ratio0 * ratio0 + ratio1 * ratio1 - 1.0;
        if (g > 0.0) {
            s0 = s;
        } else if (g < 0.0) {
            s1 = s;
        } else {
            break;
        }
    }
    return s;
}

// Distance from (y0, y1), both >= 0, to the ellipse x0^2/e0^2 + x1^2/e1^2 = 1
// with e0 >= e1 > 0.
inline double point_ellipse_first_quadrant(double e0, double e1, double y0, double y1) {
    if (y1 > 0.0) {
        if (y0 > 0.0) {
            const double z0 = y0 / e0;
            const double z1 = y1 / e1;
            const double g = z0 * z0 + z1 * z1 - 1.0;
            if (g != 0.0) {
                const double r0 = (e0 / e1) * (e0 / e1);
                const double sbar = ellipse_distance_root(r0, z0, z1, g);
                const double x0 = r0 * y0 / (sbar + r0);
                const double x1 = y1 / (sbar + 1.0);
                return std::sqrt((x0 - y0) * (x0 - y0) + (x1 - y1) * (x1 - y1));
            }
            return 0.0;
        }
        return std::abs(y1 - e1);
    }
    const double numer0 = e0 * y0;
    const double denom0 = e0 * e0 - e1 * e1;
    if (numer0 < denom0) {
        const double xde0 = numer0 / denom0;
        const double x0 = e0 * xde0;
        const double x1 = e1 * std::sqrt(1.0 - xde0 * xde0);
        return std::sqrt((x0 - y0) * (x0 - y0) + x1 * x1);
    }
    return std::abs(y0 - e0);
}

}  // namespace detail

// Distance from p to the outline of the ellipse. Works on absolute local
// coordinates, so results are exactly symmetric under reflections.
inline double point_ellipse_outline_distance(Vec2 p, const EllipseBead& e) {
    const double c = std::cos(e.rotation), s = std::sin(e.rotation);
    const double rx = p.x - e.center.x, ry = p.y - e.center.y;
    double lx = std::abs(c * rx + s * ry);
    double ly = std::abs(-s * rx + c * ry);
    double ea = e.semi_a, eb = e.semi_b;
    if (ea < eb) {
        std::swap(ea, eb);
        std::swap(lx, ly);
    }
    return detail::point_ellipse_first_quadrant(ea, eb, lx, ly);
}

enum class EdgeMode {
    Hard,  // binary membership: 1 iff distance <= width/2
    Ramp,  // one-cell linear transition centered on the stroke boundary
};

// Mirrors a pattern across the plate's vertical mid axis x = length/2.
inline BeadingPattern mirrored_x(const BeadingPattern& p, double length) {
    BeadingPattern out = p;
    for (auto& l : out.lines) {
        l.a.x = length - l.a.x;
        l.b.x = length - l.b.x;
    }
    for (auto& e : out.ellipses) {
        e.center.x = length - e.center.x;
        e.rotation = -e.rotation;
    }
    return out;
}

// Rasterizes a pattern onto the node grid of a length x width plate.
// Membership is computed per node from the exact stroke distance; overlapping
// primitives merge by max. Node coordinates are evaluated in a plate-centered
// frame so mirrored patterns produce exactly mirrored fields.
inline BeadingField rasterize_pattern(const BeadingPattern& pattern, double length, double width,
                                      GridDims grid, EdgeMode mode = EdgeMode::Hard) {
    if (grid.ny < 3 || grid.nx < 3) throw Error("rasterize_pattern: grid must be at least 3x3");
    BeadingField field;
    field.grid = grid;
    field.dx = length / (grid.nx - 1);
    field.dy = width / (grid.ny - 1);
    field.values.assign(static_cast<size_t>(grid.ny) * grid.nx, 0.0f);

    const double cell = std::max(field.dx, field.dy);
    const double cx = 0.5 * length;
    const double cy = 0.5 * width;
    const double jc = 0.5 * (grid.nx - 1);
    const double ic = 0.5 * (grid.ny - 1);

    // Primitives shifted into the centered frame once.
    std::vector<LineBead> lines = pattern.lines;
    for (auto& l : lines) {
        l.a.x -= cx; l.a.y -= cy;
        l.b.x -= cx; l.b.y -= cy;
    }
    std::vector<EllipseBead> ellipses = pattern.ellipses;
    for (auto& e : ellipses) {
        e.center.x -= cx;
        e.center.y -= cy;
    }

    auto membership = [&](double dist, double w) -> double {
        if (mode == EdgeMode::Hard) return dist <= 0.5 * w ? 1.0 : 0.0;
        return std::clamp((0.5 * w + 0.5 * cell - dist) / cell, 0.0, 1.0);
    };

    for (int i = 1; i < grid.ny - 1; ++i) {
        const double y = (i - ic) * field.dy;
        for (int j = 1; j < grid.nx - 1; ++j) {
            const double x = (j - jc) * field.dx;
            double m = 0.0;
            for (const auto& l : lines) {
                m = std::max(m, membership(point_segment_distance({x, y}, l.a, l.b), l.width));
            }
            for (const auto& e : ellipses) {
                m = std::max(m, membership(point_ellipse_outline_distance({x, y}, e), e.width));
            }
            field.at(i, j) = static_cast<float>(m);
        }
    }
    return field;
}

inline double beaded_fraction(const BeadingField& field) {
    double sum = 0.0;
    for (float v : field.values) sum += v;
    return field.values.empty() ? 0.0 : sum / static_cast<double>(field.values.size());
}

}  // namespace platebench
