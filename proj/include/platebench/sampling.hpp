#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "platebench/common.hpp"
#include "platebench/geometry.hpp"
#include "platebench/rng.hpp"

namespace platebench {

// Per-parameter sampling intervals. Point intervals pin a parameter to a
// constant, which is how the v5000 setting fixes everything but the pattern.
struct ParamRanges {
    Interval length{0.9, 0.9};
    Interval width{0.6, 0.6};
    Interval thickness{0.003, 0.003};
    Interval density{2700.0, 2700.0};
    Interval youngs_modulus{7e10, 7e10};
    Interval poisson_ratio{0.3, 0.3};
    Interval loss_factor{0.02, 0.02};
    Interval rot_stiffness{0.0, 0.0};
    Interval load_x{0.36, 0.36};
    Interval load_y{0.225, 0.225};
};

struct DatasetSetting {
    std::string name = "custom";
    IntInterval line_count{1, 3};
    IntInterval ellipse_count{0, 2};
    Interval bead_width{0.03, 0.07};
    ParamRanges ranges;
    double bead_depth = 0.02;
    // Node grid used for rasterization and meshing. Named settings carry the
    // fixed published resolution; custom settings get theirs from the bending
    // wavelength rule (see grid_resolution) before sampling.
    GridDims grid{0, 0};
    double f_max = 300.0;
    EdgeMode edge_mode = EdgeMode::Hard;

    static DatasetSetting v5000() {
        DatasetSetting s;
        s.name = "v5000";
        s.bead_width = {0.03, 0.07};
        s.grid = {81, 121};
        return s;
    }

    static DatasetSetting g5000() {
        DatasetSetting s;
        s.name = "g5000";
        s.bead_width = {0.04, 0.06};
        s.ranges.length = {0.6, 0.9};
        s.ranges.width = {0.4, 0.6};
        s.ranges.thickness = {0.002, 0.004};
        s.ranges.loss_factor = {0.01, 0.03};
        s.ranges.rot_stiffness = {0.0, 100.0};
        s.ranges.load_x = {0.18, 0.72};
        s.ranges.load_y = {0.12, 0.48};
        s.grid = {121, 181};
        return s;
    }

    void validate() const {
        auto check = [](bool ok, const char* what) {
            if (!ok) throw ConfigError(std::string("invalid setting: ") + what);
        };
        check(line_count.lo >= 0 && line_count.hi >= line_count.lo, "line count range");
        check(ellipse_count.lo >= 0 && ellipse_count.hi >= ellipse_count.lo, "ellipse count range");
        check(bead_width.lo > 0 && bead_width.hi >= bead_width.lo, "bead width range");
        check(ranges.length.lo > 0 && ranges.length.hi >= ranges.length.lo, "length range");
        check(ranges.width.lo > 0 && ranges.width.hi >= ranges.width.lo, "width range");
        check(ranges.thickness.lo > 0 && ranges.thickness.hi >= ranges.thickness.lo, "thickness range");
        check(ranges.density.lo > 0, "density range");
        check(ranges.youngs_modulus.lo > 0, "youngs modulus range");
        check(ranges.poisson_ratio.lo > 0 && ranges.poisson_ratio.hi < 0.5, "poisson range");
        check(ranges.loss_factor.lo > 0, "loss factor range");
        check(ranges.rot_stiffness.lo >= 0, "rotational stiffness range");
        check(ranges.load_x.lo > 0 && ranges.load_x.hi < ranges.length.hi, "load x range");
        check(ranges.load_y.lo > 0 && ranges.load_y.hi < ranges.width.hi, "load y range");
        check(bead_depth > 0, "bead depth");
        check(f_max > 0, "f_max");
    }
};

struct PlateParams {
    double length = 0.9;
    double width = 0.6;
    double thickness = 0.003;
    double density = 2700.0;
    double youngs_modulus = 7e10;
    double poisson_ratio = 0.3;
    double loss_factor = 0.02;
    double rot_stiffness = 0.0;
    Vec2 load_position{0.36, 0.225};
    double bead_depth = 0.02;
};

namespace detail {
constexpr std::uint64_t kParamStream = 0x706172616d73ull;   // "params"
constexpr std::uint64_t kPatternStream = 0x7061747465726eull;  // "pattern"
}  // namespace detail

// Deterministic per seed. Point intervals come out exactly at their value.
inline PlateParams sample_plate_params(std::uint64_t seed, const DatasetSetting& setting) {
    Rng rng(derive_seed(seed, detail::kParamStream));
    auto draw = [&](const Interval& r) { return r.is_point() ? r.lo : rng.uniform(r.lo, r.hi); };
    PlateParams p;
    p.length = draw(setting.ranges.length);
    p.width = draw(setting.ranges.width);
    p.thickness = draw(setting.ranges.thickness);
    p.density = draw(setting.ranges.density);
    p.youngs_modulus = draw(setting.ranges.youngs_modulus);
    p.poisson_ratio = draw(setting.ranges.poisson_ratio);
    p.loss_factor = draw(setting.ranges.loss_factor);
    p.rot_stiffness = draw(setting.ranges.rot_stiffness);
    p.load_position.x = draw(setting.ranges.load_x);
    p.load_position.y = draw(setting.ranges.load_y);
    p.bead_depth = setting.bead_depth;
    return p;
}

// Samples line and ellipse primitives uniformly inside the plate minus a
// margin of (bead width/2 + 2 grid cells), so rasterized beads never touch
// the boundary. Plate dimensions are re-derived from the same seed, keeping
// the (pattern, params) pair of one seed mutually consistent for settings
// with varying geometry. Distributions the tables do not specify (positions,
// orientations, ellipse semi-axes) are independent uniforms.
inline BeadingPattern sample_pattern(std::uint64_t seed, const DatasetSetting& setting) {
    if (setting.grid.ny < 3 || setting.grid.nx < 3)
        throw ConfigError("sample_pattern: setting has no resolved grid");
    const PlateParams plate = sample_plate_params(seed, setting);
    const double cell = std::max(plate.length / (setting.grid.nx - 1),
                                 plate.width / (setting.grid.ny - 1));

    Rng rng(derive_seed(seed, detail::kPatternStream));
    BeadingPattern pattern;
    const int n_lines = rng.uniform_int(setting.line_count.lo, setting.line_count.hi);
    const int n_ellipses = rng.uniform_int(setting.ellipse_count.lo, setting.ellipse_count.hi);

    for (int i = 0; i < n_lines; ++i) {
        LineBead l;
        l.width = rng.uniform(setting.bead_width.lo, setting.bead_width.hi);
        const double margin = 0.5 * l.width + 2.0 * cell;
        l.a = {rng.uniform(margin, plate.length - margin), rng.uniform(margin, plate.width - margin)};
        l.b = {rng.uniform(margin, plate.length - margin), rng.uniform(margin, plate.width - margin)};
        pattern.lines.push_back(l);
    }

    const double min_dim = std::min(plate.length, plate.width);
    for (int i = 0; i < n_ellipses; ++i) {
        EllipseBead e;
        e.width = rng.uniform(setting.bead_width.lo, setting.bead_width.hi);
        const double margin = 0.5 * e.width + 2.0 * cell;
        for (int attempt = 0; attempt < 64; ++attempt) {
            e.semi_a = rng.uniform(0.05 * min_dim, 0.35 * min_dim);
            e.semi_b = rng.uniform(0.05 * min_dim, 0.35 * min_dim);
            e.rotation = rng.uniform(0.0, 3.14159265358979323846);
            const double c = std::cos(e.rotation), s = std::sin(e.rotation);
            const double ext_x = std::sqrt(e.semi_a * e.semi_a * c * c + e.semi_b * e.semi_b * s * s);
            const double ext_y = std::sqrt(e.semi_a * e.semi_a * s * s + e.semi_b * e.semi_b * c * c);
            const double x_lo = margin + ext_x, x_hi = plate.length - margin - ext_x;
            const double y_lo = margin + ext_y, y_hi = plate.width - margin - ext_y;
            if (x_lo < x_hi && y_lo < y_hi) {
                e.center = {rng.uniform(x_lo, x_hi), rng.uniform(y_lo, y_hi)};
                pattern.ellipses.push_back(e);
                break;
            }
        }
    }
    return pattern;
}

// True when every primitive of the pattern respects the setting's count,
// width and margin constraints for the given plate.
inline bool pattern_in_ranges(const BeadingPattern& pattern, const DatasetSetting& setting,
                              const PlateParams& plate) {
    const int nl = static_cast<int>(pattern.lines.size());
    const int ne = static_cast<int>(pattern.ellipses.size());
    if (!setting.line_count.contains(nl) || !setting.ellipse_count.contains(ne)) return false;
    auto width_ok = [&](double w) { return setting.bead_width.contains(w); };
    auto inside = [&](Vec2 p, double margin) {
        return p.x >= margin && p.x <= plate.length - margin && p.y >= margin &&
               p.y <= plate.width - margin;
    };
    for (const auto& l : pattern.lines) {
        if (!width_ok(l.width)) return false;
        if (!inside(l.a, 0.5 * l.width) || !inside(l.b, 0.5 * l.width)) return false;
    }
    for (const auto& e : pattern.ellipses) {
        if (!width_ok(e.width)) return false;
        if (!inside(e.center, 0.5 * e.width)) return false;
    }
    return true;
}

}  // namespace platebench
