#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "platebench/mesh.hpp"
#include "platebench/rng.hpp"

namespace platebench {

using SparseReal = Eigen::SparseMatrix<double>;
using SparseComplex = Eigen::SparseMatrix<std::complex<double>>;
using Mat18 = Eigen::Matrix<double, 18, 18>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kShearCorrection = 5.0 / 6.0;
constexpr double kDrillingFactor = 1e-6;

namespace detail {

// Local ingredients of one flat shell triangle, all in the element plane.
// Plate DOF order is (w, φx, φy) per node, where φx/φy are the Mindlin
// section rotations (φx = −θy, φy = θx in engineering rotations).
struct ShellElement {
    Eigen::Matrix3d rotation;              // rows = local axes in global coords
    double area = 0.0;
    Eigen::Matrix<double, 6, 6> k_membrane;   // (u, v) per node
    Eigen::Matrix<double, 9, 9> k_bending;    // (w, φx, φy) per node
    Eigen::Matrix<double, 9, 9> k_shear;      // same DOFs
};

inline ShellElement shell_element(const PlateMesh& mesh, int elem, const PlateParams& params) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(elem)];
    Eigen::Vector3d p1(mesh.nodes[tri[0]].data());
    Eigen::Vector3d p2(mesh.nodes[tri[1]].data());
    Eigen::Vector3d p3(mesh.nodes[tri[2]].data());

    const Eigen::Vector3d edge12 = p2 - p1;
    const Eigen::Vector3d edge13 = p3 - p1;
    const Eigen::Vector3d normal = edge12.cross(edge13);
    const double two_area = normal.norm();
    if (!(two_area > 1e-14 * (edge12.norm() + edge13.norm())))
        throw DataError("degenerate element " + std::to_string(elem));

    ShellElement el;
    const Eigen::Vector3d e1 = edge12.normalized();
    const Eigen::Vector3d n = normal / two_area;
    const Eigen::Vector3d e2 = n.cross(e1);
    el.rotation.row(0) = e1;
    el.rotation.row(1) = e2;
    el.rotation.row(2) = n;
    el.area = 0.5 * two_area;

    // In-plane coordinates with node 1 at the origin; y2 = 0 by construction.
    const double x2 = edge12.dot(e1), y2 = edge12.dot(e2);
    const double x3 = edge13.dot(e1), y3 = edge13.dot(e2);
    const double x1 = 0.0, y1 = 0.0;

    const double E = params.youngs_modulus, nu = params.poisson_ratio, t = params.thickness;
    const double area = el.area;

    // Constant-strain membrane.
    const double b1 = y2 - y3, b2 = y3 - y1, b3 = y1 - y2;
    const double c1 = x3 - x2, c2 = x1 - x3, c3 = x2 - x1;
    Eigen::Matrix<double, 3, 6> bm;
    bm << b1, 0, b2, 0, b3, 0,
          0, c1, 0, c2, 0, c3,
          c1, b1, c2, b2, c3, b3;
    bm /= 2.0 * area;
    Eigen::Matrix3d elastic;
    elastic << 1.0, nu, 0.0,
               nu, 1.0, 0.0,
               0.0, 0.0, 0.5 * (1.0 - nu);
    const Eigen::Matrix3d dm = elastic * (E * t / (1.0 - nu * nu));
    el.k_membrane = area * bm.transpose() * dm * bm;

    // Mindlin bending: curvatures (φx,x; φy,y; φx,y + φy,x) from linear φ.
    Eigen::Matrix<double, 3, 9> bb = Eigen::Matrix<double, 3, 9>::Zero();
    const double bs[3] = {b1, b2, b3}, cs[3] = {c1, c2, c3};
    for (int i = 0; i < 3; ++i) {
        bb(0, 3 * i + 1) = bs[i];
        bb(1, 3 * i + 2) = cs[i];
        bb(2, 3 * i + 1) = cs[i];
        bb(2, 3 * i + 2) = bs[i];
    }
    bb /= 2.0 * area;
    const Eigen::Matrix3d db = elastic * (E * t * t * t / (12.0 * (1.0 - nu * nu)));
    el.k_bending = area * bb.transpose() * db * bb;

    // Discrete-shear-gap transverse shear: the shear gaps accumulated along
    // the edges from node 1 are interpolated linearly and mapped back through
    // the element Jacobian, which removes locking without losing rank.
    const double a = x2, b = y2, d = x3, c = y3;  // x21, y21, x31, y31
    const double inv2 = 1.0 / (2.0 * area), inv4 = 1.0 / (4.0 * area);
    Eigen::Matrix<double, 2, 9> bsh;
    bsh << (b - c) * inv2, -0.5, 0.0, c * inv2, -a * c * inv4, -b * c * inv4,
           -b * inv2, b * d * inv4, b * c * inv4,
           (d - a) * inv2, 0.0, -0.5, -d * inv2, a * d * inv4, b * d * inv4,
           a * inv2, -a * d * inv4, -a * c * inv4;
    const double shear_modulus = E / (2.0 * (1.0 + nu));
    el.k_shear = (area * kShearCorrection * shear_modulus * t) * bsh.transpose() * bsh;
    return el;
}

}  // namespace detail

// Symmetric 18×18 element stiffness and consistent mass in global
// coordinates; DOF order (u, v, w, θx, θy, θz) per node, node-major.
inline void element_matrices(const PlateMesh& mesh, int elem, const PlateParams& params,
                             Mat18& k_global, Mat18& m_global) {
    const detail::ShellElement el = detail::shell_element(mesh, elem, params);

    // Plate block in engineering rotations: (w, θx, θy) with φx = −θy, φy = θx.
    Eigen::Matrix<double, 9, 9> to_phi = Eigen::Matrix<double, 9, 9>::Zero();
    for (int i = 0; i < 3; ++i) {
        to_phi(3 * i + 0, 3 * i + 0) = 1.0;
        to_phi(3 * i + 1, 3 * i + 2) = -1.0;  // φx ← −θy
        to_phi(3 * i + 2, 3 * i + 1) = 1.0;   // φy ← θx
    }
    const Eigen::Matrix<double, 9, 9> k_plate =
        to_phi.transpose() * (el.k_bending + el.k_shear) * to_phi;

    Mat18 k_local = Mat18::Zero();
    const int mem_dofs[6] = {0, 1, 6, 7, 12, 13};
    const int plate_dofs[9] = {2, 3, 4, 8, 9, 10, 14, 15, 16};
    for (int r = 0; r < 6; ++r)
        for (int col = 0; col < 6; ++col) k_local(mem_dofs[r], mem_dofs[col]) = el.k_membrane(r, col);
    for (int r = 0; r < 9; ++r)
        for (int col = 0; col < 9; ++col) k_local(plate_dofs[r], plate_dofs[col]) = k_plate(r, col);

    // Drilling DOF stabilization relative to the plate block magnitude.
    const double drill = kDrillingFactor * k_plate.diagonal().maxCoeff();
    for (int i = 0; i < 3; ++i) k_local(6 * i + 5, 6 * i + 5) += drill;

    // Rotate to global axes: T maps global to local DOF triples.
    Mat18 t_mat = Mat18::Zero();
    for (int blk = 0; blk < 6; ++blk)
        t_mat.block<3, 3>(3 * blk, 3 * blk) = el.rotation;
    k_global = t_mat.transpose() * k_local * t_mat;

    // Consistent mass. Translational and rotary blocks are isotropic
    // (identical for the three components of each triple), so the matrix is
    // already in global coordinates.
    const double rho = params.density, t = params.thickness;
    const double mass_t = rho * t * el.area / 12.0;
    const double mass_r = rho * (t * t * t / 12.0) * el.area / 12.0;
    m_global = Mat18::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double c = (i == j) ? 2.0 : 1.0;
            for (int comp = 0; comp < 3; ++comp) {
                m_global(6 * i + comp, 6 * j + comp) = c * mass_t;
                m_global(6 * i + 3 + comp, 6 * j + 3 + comp) = c * mass_r;
            }
        }
}

struct SystemMatrices {
    int n_dofs = 0;
    double loss_factor = 0.0;
    SparseReal K;                    // full system, identical pattern with M
    SparseReal M;
    Eigen::VectorXd spring_diag;     // boundary rotational springs, full length
    std::vector<char> constrained;   // 1 = Dirichlet-fixed DOF
    std::vector<int> free_dofs;      // reduced index → full index
    std::vector<int> full_to_free;   // full index → reduced index or −1
    SparseReal K_free;               // rows/cols restricted to free DOFs
    SparseReal M_free;
    Eigen::VectorXd spring_free;
    int n_free = 0;
};

// Global assembly: scatter-add of element matrices, rotational boundary
// springs (θy on the x = const edges, θx on the y = const edges, corners
// both), and u/v/w Dirichlet constraints on every boundary node.
inline SystemMatrices assemble_system(const PlateMesh& mesh, const PlateParams& params) {
    SystemMatrices sys;
    sys.n_dofs = mesh.n_dofs();
    sys.loss_factor = params.loss_factor;

    std::vector<Eigen::Triplet<double>> kt, mt;
    const std::size_t per_elem = 18 * 18;
    kt.reserve(mesh.triangles.size() * per_elem + static_cast<std::size_t>(sys.n_dofs));
    mt.reserve(mesh.triangles.size() * per_elem + static_cast<std::size_t>(sys.n_dofs));

    Mat18 k, m;
    for (int e = 0; e < static_cast<int>(mesh.triangles.size()); ++e) {
        element_matrices(mesh, e, params, k, m);
        const auto& tri = mesh.triangles[static_cast<std::size_t>(e)];
        int gdof[18];
        for (int v = 0; v < 3; ++v)
            for (int c = 0; c < 6; ++c) gdof[6 * v + c] = mesh.dof(tri[v], c);
        for (int r = 0; r < 18; ++r)
            for (int c = 0; c < 18; ++c) {
                kt.emplace_back(gdof[r], gdof[c], k(r, c));
                mt.emplace_back(gdof[r], gdof[c], m(r, c));
            }
    }
    // Structural diagonal in both matrices keeps their patterns identical and
    // lets springs fold into existing entries.
    for (int i = 0; i < sys.n_dofs; ++i) {
        kt.emplace_back(i, i, 0.0);
        mt.emplace_back(i, i, 0.0);
    }
    sys.K.resize(sys.n_dofs, sys.n_dofs);
    sys.M.resize(sys.n_dofs, sys.n_dofs);
    sys.K.setFromTriplets(kt.begin(), kt.end());
    kt.clear();
    kt.shrink_to_fit();
    sys.M.setFromTriplets(mt.begin(), mt.end());
    mt.clear();
    mt.shrink_to_fit();

    sys.spring_diag = Eigen::VectorXd::Zero(sys.n_dofs);
    sys.constrained.assign(static_cast<std::size_t>(sys.n_dofs), 0);
    for (int node : mesh.boundary_nodes) {
        const int i = node / mesh.grid.nx, j = node % mesh.grid.nx;
        if (j == 0 || j == mesh.grid.nx - 1) sys.spring_diag[mesh.dof(node, 4)] += params.rot_stiffness;
        if (i == 0 || i == mesh.grid.ny - 1) sys.spring_diag[mesh.dof(node, 3)] += params.rot_stiffness;
        for (int c = 0; c < 3; ++c) sys.constrained[static_cast<std::size_t>(mesh.dof(node, c))] = 1;
    }

    sys.full_to_free.assign(static_cast<std::size_t>(sys.n_dofs), -1);
    for (int i = 0; i < sys.n_dofs; ++i)
        if (!sys.constrained[static_cast<std::size_t>(i)]) {
            sys.full_to_free[static_cast<std::size_t>(i)] = static_cast<int>(sys.free_dofs.size());
            sys.free_dofs.push_back(i);
        }
    sys.n_free = static_cast<int>(sys.free_dofs.size());

    auto reduce = [&](const SparseReal& full) {
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<std::size_t>(full.nonZeros()));
        for (int col = 0; col < full.outerSize(); ++col) {
            const int fc = sys.full_to_free[static_cast<std::size_t>(col)];
            if (fc < 0) continue;
            for (SparseReal::InnerIterator it(full, col); it; ++it) {
                const int fr = sys.full_to_free[static_cast<std::size_t>(it.row())];
                if (fr >= 0) trip.emplace_back(fr, fc, it.value());
            }
        }
        SparseReal out(sys.n_free, sys.n_free);
        out.setFromTriplets(trip.begin(), trip.end());
        return out;
    };
    sys.K_free = reduce(sys.K);
    sys.M_free = reduce(sys.M);
    sys.spring_free.resize(sys.n_free);
    for (int i = 0; i < sys.n_free; ++i)
        sys.spring_free[i] = sys.spring_diag[sys.free_dofs[static_cast<std::size_t>(i)]];
    return sys;
}

struct LoadVector {
    Eigen::VectorXcd f;
    int node = -1;  // grid node carrying the transverse unit force
};

// Unit transverse point force at the grid node nearest the load position.
inline LoadVector point_load(const PlateMesh& mesh, const PlateParams& params) {
    LoadVector load;
    double best = std::numeric_limits<double>::max();
    for (int n = 0; n < mesh.n_nodes(); ++n) {
        const double ddx = mesh.nodes[static_cast<std::size_t>(n)][0] - params.load_position.x;
        const double ddy = mesh.nodes[static_cast<std::size_t>(n)][1] - params.load_position.y;
        const double d2 = ddx * ddx + ddy * ddy;
        if (d2 < best) {
            best = d2;
            load.node = n;
        }
    }
    load.f = Eigen::VectorXcd::Zero(mesh.n_dofs());
    load.f[mesh.dof(load.node, 2)] = std::complex<double>(1.0, 0.0);
    return load;
}

struct HarmonicSolution {
    double frequency = 0.0;
    Eigen::VectorXcd displacement;  // full length; constrained DOFs exactly 0
};

// Direct frequency-domain solver for [(1+iη)(K + K_spring) − ω²M] u = F.
// The sparsity pattern is fixed across frequencies, so the symbolic analysis
// is performed once and only the numeric factorization repeats. One instance
// per worker thread; instances share the immutable SystemMatrices.
class HarmonicSolver {
public:
    explicit HarmonicSolver(const SystemMatrices& sys, double residual_tol = 1e-8)
        : sys_(&sys), residual_tol_(residual_tol) {
        SparseReal kc = sys.K_free;
        for (int i = 0; i < sys.n_free; ++i) kc.coeffRef(i, i) += sys.spring_free[i];
        kc.makeCompressed();
        if (kc.nonZeros() != sys.M_free.nonZeros())
            throw SolverError("stiffness/mass sparsity mismatch", 0.0);
        a_ = kc.cast<std::complex<double>>();
        k_values_.assign(kc.valuePtr(), kc.valuePtr() + kc.nonZeros());
        m_values_.assign(sys.M_free.valuePtr(), sys.M_free.valuePtr() + sys.M_free.nonZeros());
    }

    HarmonicSolution solve(const LoadVector& load, double f) {
        if (f <= 0.0) throw ConfigError("solve_harmonic: f must be > 0");
        if (load.f.size() != sys_->n_dofs) throw ConfigError("load vector length mismatch");

        HarmonicSolution sol;
        sol.frequency = f;
        sol.displacement = Eigen::VectorXcd::Zero(sys_->n_dofs);

        Eigen::VectorXcd b(sys_->n_free);
        for (int i = 0; i < sys_->n_free; ++i)
            b[i] = load.f[sys_->free_dofs[static_cast<std::size_t>(i)]];
        const double b_norm = b.norm();
        if (b_norm == 0.0) return sol;

        const double omega = 2.0 * kPi * f;
        const std::complex<double> damp(1.0, sys_->loss_factor);
        std::complex<double>* av = a_.valuePtr();
        const double w2 = omega * omega;
        for (std::size_t k = 0; k < k_values_.size(); ++k)
            av[k] = damp * k_values_[k] - w2 * m_values_[k];

        if (!analyzed_) {
            lu_.analyzePattern(a_);
            analyzed_ = true;
        }
        lu_.factorize(a_);
        if (lu_.info() != Eigen::Success)
            throw SolverError("sparse LU factorization failed", f);
        const Eigen::VectorXcd x = lu_.solve(b);
        const double residual = (a_ * x - b).norm() / b_norm;
        if (!(residual <= residual_tol_))
            throw SolverError("residual " + std::to_string(residual) + " above tolerance", f);

        for (int i = 0; i < sys_->n_free; ++i)
            sol.displacement[sys_->free_dofs[static_cast<std::size_t>(i)]] = x[i];
        return sol;
    }

private:
    const SystemMatrices* sys_;
    double residual_tol_;
    SparseComplex a_;
    std::vector<double> k_values_, m_values_;
    Eigen::SparseLU<SparseComplex> lu_;
    bool analyzed_ = false;
};

inline HarmonicSolution solve_harmonic(const SystemMatrices& sys, const LoadVector& load, double f,
                                       double residual_tol = 1e-8) {
    HarmonicSolver solver(sys, residual_tol);
    return solver.solve(load, f);
}

// One harmonic solution per frequency. Workers claim frequencies through an
// atomic counter and write to disjoint slots, so results do not depend on
// the worker count or scheduling. Each worker owns its factorization.
inline std::vector<HarmonicSolution> frequency_sweep(const SystemMatrices& sys,
                                                     const LoadVector& load,
                                                     const std::vector<double>& freqs, int workers,
                                                     double residual_tol = 1e-8) {
    if (freqs.empty()) throw ConfigError("frequency_sweep: empty frequency list");
    for (std::size_t i = 1; i < freqs.size(); ++i)
        if (!(freqs[i] > freqs[i - 1]))
            throw ConfigError("frequency_sweep: frequencies must be strictly increasing");

    const int n = static_cast<int>(freqs.size());
    std::vector<HarmonicSolution> results(static_cast<std::size_t>(n));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));

    auto run = [&](HarmonicSolver& solver, int i) {
        try {
            results[static_cast<std::size_t>(i)] = solver.solve(load, freqs[static_cast<std::size_t>(i)]);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    };

    if (workers <= 1 || n == 1) {
        HarmonicSolver solver(sys, residual_tol);
        for (int i = 0; i < n; ++i) run(solver, i);
    } else {
        std::atomic<int> next{0};
        auto work = [&] {
            HarmonicSolver solver(sys, residual_tol);
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) run(solver, i);
        };
        const int count = workers < n ? workers : n;
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(count));
        for (int t = 0; t < count; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

// Smallest eigenfrequencies (Hz) of (K + K_spring, M) on the free DOFs via
// subspace iteration: inverse iteration on a deterministic random block with
// Rayleigh–Ritz projection each round. Suited to the handful of lowest modes
// the acceptance checks need.
inline std::vector<double> smallest_eigenfrequencies(const SystemMatrices& sys, int count,
                                                     double tol = 1e-9, int max_iter = 200) {
    if (count <= 0) throw ConfigError("smallest_eigenfrequencies: count must be > 0");
    const int n = sys.n_free;
    if (count > n) count = n;
    const int p = std::min(n, std::max(2 * count + 8, 16));

    SparseReal kc = sys.K_free;
    for (int i = 0; i < n; ++i) kc.coeffRef(i, i) += sys.spring_free[i];
    kc.makeCompressed();
    Eigen::SimplicialLLT<SparseReal> llt(kc);
    if (llt.info() != Eigen::Success)
        throw SolverError("stiffness factorization failed (K not positive definite)", 0.0);

    Rng rng(derive_seed(0x65696765ull, 0));  // fixed seed: deterministic output
    Eigen::MatrixXd x(n, p);
    for (int j = 0; j < p; ++j)
        for (int i = 0; i < n; ++i) x(i, j) = rng.uniform(-1.0, 1.0);

    Eigen::VectorXd prev = Eigen::VectorXd::Zero(count);
    for (int iter = 0; iter < max_iter; ++iter) {
        const Eigen::MatrixXd y = sys.M_free * x;
        const Eigen::MatrixXd xbar = llt.solve(y);
        Eigen::MatrixXd k_red = xbar.transpose() * y;  // x̄ᵀ K x̄ since K x̄ = y
        Eigen::MatrixXd m_red = xbar.transpose() * (sys.M_free * xbar);
        k_red = 0.5 * (k_red + k_red.transpose()).eval();
        m_red = 0.5 * (m_red + m_red.transpose()).eval();
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(k_red, m_red);
        if (ges.info() != Eigen::Success)
            throw SolverError("subspace Rayleigh-Ritz projection failed", 0.0);
        x = xbar * ges.eigenvectors();

        const Eigen::VectorXd lambda = ges.eigenvalues().head(count);
        double change = 0.0;
        for (int i = 0; i < count; ++i)
            change = std::max(change, std::abs(lambda[i] - prev[i]) /
                                          std::max(std::abs(lambda[i]), 1e-300));
        prev = lambda;
        if (iter > 0 && change <= tol) break;
        if (iter == max_iter - 1)
            throw SolverError("subspace iteration did not converge", 0.0);
    }

    std::vector<double> freqs(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        freqs[static_cast<std::size_t>(i)] = std::sqrt(std::max(prev[i], 0.0)) / (2.0 * kPi);
    return freqs;
}

}  // namespace platebench
