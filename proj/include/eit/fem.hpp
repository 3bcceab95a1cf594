#pragma once

// Forward model: piecewise-linear finite elements for div(gamma grad u) = 0 on
// the unit disk with gap-model electrode currents on the boundary.

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "eit/error.hpp"

namespace eit {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2d;

inline constexpr double kPi = 3.14159265358979323846;

/// Electrode ring on the tank wall. Physical sizes are kept in meters and
/// converted to the unit-disk scale by dividing lengths by the tank radius.
struct ElectrodeLayout {
    int count = 32;
    double width_m = 0.0254;
    double depth_m = 0.01;
    double tank_radius_m = 0.15;

    /// Electrode arc length on the unit circle.
    double width() const { return width_m / tank_radius_m; }
    /// Electrode area (width times bath depth) on the unit-disk scale.
    double area() const { return width() * (depth_m / tank_radius_m); }
    /// Midpoint angle of electrode `l` (0-based); electrode l sits at 2*pi*(l+1)/L.
    double midpoint_angle(int l) const { return 2.0 * kPi * (l + 1) / count; }
    Vec2 midpoint(int l) const;

    void validate() const;
    bool same_geometry(const ElectrodeLayout& other) const;
};

struct BoundaryEdge {
    int a = 0;
    int b = 0;
    double theta_a = 0.0;  // angle of node a
    double arc = 0.0;      // angular extent, theta_b = theta_a + arc
    int electrode = -1;    // -1 on gaps

    double mid_angle() const { return theta_a + 0.5 * arc; }
};

/// Triangulated unit disk. Immutable after construction.
class TriMesh {
public:
    TriMesh(std::vector<Vec2> nodes, std::vector<std::array<int, 3>> elements,
            std::vector<BoundaryEdge> boundary, ElectrodeLayout layout);

    const std::vector<Vec2>& nodes() const { return nodes_; }
    const std::vector<std::array<int, 3>>& elements() const { return elements_; }
    const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_; }
    const ElectrodeLayout& layout() const { return layout_; }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t element_count() const { return elements_.size(); }

    double signed_area(std::size_t element) const;
    Vec2 centroid(std::size_t element) const;
    /// Sum of boundary chord lengths.
    double boundary_length() const;

    /// Throws InvalidArgument if any mesh invariant is violated.
    void validate() const;

private:
    std::vector<Vec2> nodes_;
    std::vector<std::array<int, 3>> elements_;
    std::vector<BoundaryEdge> boundary_;
    ElectrodeLayout layout_;
};

/// Ring-structured disk mesh whose boundary nodes include every electrode
/// endpoint. Rejects edge lengths that give fewer than 2 edges per electrode.
TriMesh build_disk_mesh(double target_edge_length, const ElectrodeLayout& layout);

struct CurrentPatternSet {
    Eigen::MatrixXd T;  // (L-1) x L, row i is pattern i+1
    double amplitude = 0.0;

    int electrode_count() const { return static_cast<int>(T.cols()); }
    int pattern_count() const { return static_cast<int>(T.rows()); }
};

/// Trigonometric current patterns: cosines for i < L/2, the alternating
/// pattern at i = L/2, sines above.
CurrentPatternSet trig_current_patterns(int electrode_count, double amplitude);

struct ConductivityField {
    std::vector<cplx> values;  // one admittivity per element
    cplx background{1.0, 0.0};

    static ConductivityField constant(const TriMesh& mesh, cplx value);
    bool is_real() const;
};

/// Neumann data on the boundary, parameterized by boundary angle. Either a
/// continuum density or per-electrode constants (gap model).
struct BoundaryFlux {
    std::function<cplx(double)> density;
    std::vector<cplx> electrode_density;

    static BoundaryFlux continuum(std::function<cplx(double)> density);
    bool is_gap_model() const { return !electrode_density.empty(); }

    /// Flux value on a boundary edge at angle theta.
    cplx value(const BoundaryEdge& edge, double theta) const;
    /// Integral over the boundary in arc measure.
    cplx total(const TriMesh& mesh) const;
};

/// Gap model: t_l / A on electrode l, zero on the gaps.
BoundaryFlux gap_boundary_flux(std::span<const double> pattern_row, const ElectrodeLayout& layout);

/// Assembled and factorized stiffness system for one admittivity field.
/// Reusable across any number of right-hand sides.
class ForwardSolver {
public:
    ForwardSolver(const TriMesh& mesh, const ConductivityField& gamma);
    ~ForwardSolver();
    ForwardSolver(ForwardSolver&&) noexcept;
    ForwardSolver& operator=(ForwardSolver&&) noexcept;

    /// Nodal potential grounded so that electrode-averaged voltages sum to zero.
    Eigen::VectorXcd solve(const BoundaryFlux& flux) const;

    /// Electrode voltages: potential averaged over each electrode arc.
    Eigen::VectorXcd electrode_voltages(const Eigen::VectorXcd& potential) const;

    /// Relative residual of the last solve.
    double last_residual() const { return last_residual_; }

private:
    struct Impl;
    const TriMesh* mesh_;
    std::unique_ptr<Impl> impl_;
    mutable double last_residual_ = 0.0;
};

Eigen::VectorXcd assemble_and_solve(const TriMesh& mesh, const ConductivityField& gamma,
                                    const BoundaryFlux& flux);

struct NoiseInfo {
    double level = 0.0;
    std::uint64_t seed = 0;
};

struct MeasurementFrame {
    Eigen::MatrixXcd V;  // (L-1) x L, row i is the voltage response to pattern i
    ElectrodeLayout layout;
    double amplitude = 0.0;
    NoiseInfo noise;

    int electrode_count() const { return static_cast<int>(V.cols()); }
    int pattern_count() const { return static_cast<int>(V.rows()); }
};

MeasurementFrame simulate_measurements(const TriMesh& mesh, const ConductivityField& gamma,
                                       const CurrentPatternSet& patterns,
                                       const ElectrodeLayout& layout);

/// Multiplicative Gaussian noise, independent on real and imaginary parts.
/// Rows are re-centered afterwards so the ground condition still holds.
MeasurementFrame add_noise(const MeasurementFrame& frame, double level, std::uint64_t seed);

}  // namespace eit
