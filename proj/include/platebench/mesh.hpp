#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <vector>

#include "platebench/common.hpp"
#include "platebench/geometry.hpp"
#include "platebench/sampling.hpp"

namespace platebench {

// Structured triangulated shell mesh of a (possibly beaded) plate. Nodes sit
// on a regular ny×nx grid over [0,L]×[0,W] with z-offsets from the beading
// field; 6 DOFs per node (u, v, w, θx, θy, θz) in fixed node-major order.
struct PlateMesh {
    static constexpr int kDofPerNode = 6;

    GridDims grid;
    double length = 0.0;
    double width = 0.0;
    std::vector<std::array<double, 3>> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<int> boundary_nodes;  // ascending

    int node_index(int i, int j) const { return i * grid.nx + j; }
    int n_nodes() const { return static_cast<int>(nodes.size()); }
    int n_dofs() const { return kDofPerNode * n_nodes(); }
    // comp: 0=u, 1=v, 2=w, 3=θx, 4=θy, 5=θz
    int dof(int node, int comp) const { return kDofPerNode * node + comp; }

    bool is_boundary(int i, int j) const {
        return i == 0 || j == 0 || i == grid.ny - 1 || j == grid.nx - 1;
    }
};

// Bending wavelength of an infinite plate at frequency f:
// λ_B = √(2π/f)·(E t²/(12(1−ν²)ρ))^{1/4}.
inline double bending_wavelength(const PlateParams& params, double f) {
    if (f <= 0.0) throw ConfigError("bending_wavelength: f must be > 0");
    const double stiffness_per_mass = params.youngs_modulus * params.thickness * params.thickness /
                                      (12.0 * (1.0 - params.poisson_ratio * params.poisson_ratio) *
                                       params.density);
    constexpr double two_pi = 6.28318530717958647692;
    return std::sqrt(two_pi / f) * std::pow(stiffness_per_mass, 0.25);
}

// Node grid for a setting: the fixed published resolution for the named
// settings, otherwise the smallest grid with node spacing ≤ λ_B(f_max)/10
// in both directions.
inline GridDims grid_resolution(const DatasetSetting& setting, const PlateParams& params,
                                double f_max) {
    if (f_max <= 0.0) throw ConfigError("grid_resolution: f_max must be > 0");
    if (setting.name == "v5000") return {81, 121};
    if (setting.name == "g5000") return {121, 181};
    const double spacing = bending_wavelength(params, f_max) / 10.0;
    auto node_count = [&](double extent) {
        const int intervals = static_cast<int>(std::ceil(extent / spacing));
        return 1 + (intervals < 2 ? 2 : intervals);
    };
    return {node_count(params.width), node_count(params.length)};
}

// Builds the structured mesh. Each grid cell splits into two triangles with
// the diagonal alternating per cell so no sweep direction is preferred.
inline PlateMesh build_mesh(const PlateParams& params, const BeadingField& field, GridDims grid) {
    if (params.length <= 0.0 || params.width <= 0.0)
        throw ConfigError("build_mesh: degenerate plate dimensions");
    if (grid.ny < 2 || grid.nx < 2) throw ConfigError("build_mesh: grid must be at least 2x2");
    if (field.grid.ny != grid.ny || field.grid.nx != grid.nx)
        throw ConfigError("build_mesh: field dimensions do not match grid");

    PlateMesh mesh;
    mesh.grid = grid;
    mesh.length = params.length;
    mesh.width = params.width;
    const double dx = params.length / (grid.nx - 1);
    const double dy = params.width / (grid.ny - 1);

    mesh.nodes.reserve(static_cast<std::size_t>(grid.ny) * grid.nx);
    for (int i = 0; i < grid.ny; ++i)
        for (int j = 0; j < grid.nx; ++j) {
            const double z = params.bead_depth * static_cast<double>(field.at(i, j));
            mesh.nodes.push_back({j * dx, i * dy, z});
            if (mesh.is_boundary(i, j)) mesh.boundary_nodes.push_back(mesh.node_index(i, j));
        }

    mesh.triangles.reserve(2 * static_cast<std::size_t>(grid.ny - 1) * (grid.nx - 1));
    for (int i = 0; i + 1 < grid.ny; ++i)
        for (int j = 0; j + 1 < grid.nx; ++j) {
            const int n00 = mesh.node_index(i, j);
            const int n01 = mesh.node_index(i, j + 1);
            const int n10 = mesh.node_index(i + 1, j);
            const int n11 = mesh.node_index(i + 1, j + 1);
            if ((i + j) % 2 == 0) {
                mesh.triangles.push_back({n00, n01, n11});
                mesh.triangles.push_back({n00, n11, n10});
            } else {
                mesh.triangles.push_back({n00, n01, n10});
                mesh.triangles.push_back({n01, n11, n10});
            }
        }
    return mesh;
}

// Plain-text dump (node table + triangle table) for debugging.
inline void write_mesh_text(const PlateMesh& mesh, std::ostream& out) {
    out << "nodes " << mesh.n_nodes() << "\n";
    out.precision(17);
    for (const auto& n : mesh.nodes) out << n[0] << " " << n[1] << " " << n[2] << "\n";
    out << "triangles " << mesh.triangles.size() << "\n";
    for (const auto& t : mesh.triangles) out << t[0] << " " << t[1] << " " << t[2] << "\n";
}

}  // namespace platebench
