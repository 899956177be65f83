#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "platebench/common.hpp"
#include "platebench/mesh.hpp"
#include "platebench/sampling.hpp"

namespace platebench {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double parse_number(const std::string& s, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("setting key '" + key + "': bad number '" + s + "'");
    }
}

// "lo:hi" or a single value (a point interval).
inline Interval parse_interval(const std::string& s, const std::string& key) {
    const auto c = s.find(':');
    if (c == std::string::npos) {
        const double v = parse_number(s, key);
        return {v, v};
    }
    return {parse_number(trim(s.substr(0, c)), key), parse_number(trim(s.substr(c + 1)), key)};
}

inline IntInterval parse_int_interval(const std::string& s, const std::string& key) {
    const Interval r = parse_interval(s, key);
    return {static_cast<int>(r.lo), static_cast<int>(r.hi)};
}

}  // namespace detail

// Plain key = value setting file; '#' starts a comment. Interval-valued keys
// accept "lo:hi" or a single pinned value. A missing grid is resolved with
// the bending-wavelength rule at the largest plate the ranges allow.
inline DatasetSetting load_setting_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open setting file: " + path);

    DatasetSetting s;
    s.name = "custom";
    s.grid = {0, 0};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));

        if (key == "name") {
            s.name = value;
        } else if (key == "line_count") {
            s.line_count = detail::parse_int_interval(value, key);
        } else if (key == "ellipse_count") {
            s.ellipse_count = detail::parse_int_interval(value, key);
        } else if (key == "bead_width") {
            s.bead_width = detail::parse_interval(value, key);
        } else if (key == "length") {
            s.ranges.length = detail::parse_interval(value, key);
        } else if (key == "width") {
            s.ranges.width = detail::parse_interval(value, key);
        } else if (key == "thickness") {
            s.ranges.thickness = detail::parse_interval(value, key);
        } else if (key == "density") {
            s.ranges.density = detail::parse_interval(value, key);
        } else if (key == "youngs_modulus") {
            s.ranges.youngs_modulus = detail::parse_interval(value, key);
        } else if (key == "poisson_ratio") {
            s.ranges.poisson_ratio = detail::parse_interval(value, key);
        } else if (key == "loss_factor") {
            s.ranges.loss_factor = detail::parse_interval(value, key);
        } else if (key == "rot_stiffness") {
            s.ranges.rot_stiffness = detail::parse_interval(value, key);
        } else if (key == "load_x") {
            s.ranges.load_x = detail::parse_interval(value, key);
        } else if (key == "load_y") {
            s.ranges.load_y = detail::parse_interval(value, key);
        } else if (key == "bead_depth") {
            s.bead_depth = detail::parse_number(value, key);
        } else if (key == "f_max") {
            s.f_max = detail::parse_number(value, key);
        } else if (key == "grid") {
            const IntInterval g = detail::parse_int_interval(value, key);
            s.grid = {g.lo, g.hi};  // ny:nx
        } else if (key == "edge_mode") {
            if (value == "hard")
                s.edge_mode = EdgeMode::Hard;
            else if (value == "ramp")
                s.edge_mode = EdgeMode::Ramp;
            else
                throw ConfigError("edge_mode must be 'hard' or 'ramp', got '" + value + "'");
        } else {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }

    s.validate();
    if (s.grid.ny < 3 || s.grid.nx < 3) {
        PlateParams largest;
        largest.length = s.ranges.length.hi;
        largest.width = s.ranges.width.hi;
        largest.thickness = s.ranges.thickness.lo;  // thinnest → shortest wavelength
        largest.density = s.ranges.density.hi;
        largest.youngs_modulus = s.ranges.youngs_modulus.lo;
        largest.poisson_ratio = s.ranges.poisson_ratio.lo;
        s.grid = grid_resolution(s, largest, s.f_max);
    }
    return s;
}

// Accepts a named setting ("v5000", "g5000") or a path to a setting file.
inline DatasetSetting resolve_setting(const std::string& name_or_path) {
    if (name_or_path == "v5000") return DatasetSetting::v5000();
    if (name_or_path == "g5000") return DatasetSetting::g5000();
    return load_setting_file(name_or_path);
}

}  // namespace platebench
