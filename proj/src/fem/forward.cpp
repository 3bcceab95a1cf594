#include <array>
#include <cmath>
#include <sstream>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "eit/fem.hpp"

namespace eit {

ConductivityField ConductivityField::constant(const TriMesh& mesh, cplx value) {
    ConductivityField f;
    f.values.assign(mesh.element_count(), value);
    f.background = value;
    return f;
}

bool ConductivityField::is_real() const {
    for (const auto& v : values) {
        if (v.imag() != 0.0) return false;
    }
    return true;
}

BoundaryFlux BoundaryFlux::continuum(std::function<cplx(double)> density) {
    BoundaryFlux f;
    f.density = std::move(density);
    return f;
}

cplx BoundaryFlux::value(const BoundaryEdge& edge, double theta) const {
    if (is_gap_model()) {
        return edge.electrode >= 0 ? electrode_density[edge.electrode] : cplx{};
    }
    return density ? density(theta) : cplx{};
}

namespace {

// 3-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 3> kGaussX = {0.1127016653792583, 0.5, 0.8872983346207417};
constexpr std::array<double, 3> kGaussW = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

}  // namespace

cplx BoundaryFlux::total(const TriMesh& mesh) const {
    cplx sum{};
    for (const auto& edge : mesh.boundary_edges()) {
        for (int q = 0; q < 3; ++q) {
            sum += kGaussW[q] * edge.arc * value(edge, edge.theta_a + kGaussX[q] * edge.arc);
        }
    }
    return sum;
}

BoundaryFlux gap_boundary_flux(std::span<const double> pattern_row, const ElectrodeLayout& layout) {
    if (static_cast<int>(pattern_row.size()) != layout.count) {
        throw InvalidArgument("pattern row has " + std::to_string(pattern_row.size()) +
                              " entries, layout has " + std::to_string(layout.count) + " electrodes");
    }
    BoundaryFlux f;
    f.electrode_density.resize(pattern_row.size());
    const double area = layout.area();
    for (std::size_t l = 0; l < pattern_row.size(); ++l) {
        f.electrode_density[l] = pattern_row[l] / area;
    }
    return f;
}

struct ForwardSolver::Impl {
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>> lu;
    Eigen::SparseMatrix<cplx> system;
};

ForwardSolver::ForwardSolver(const TriMesh& mesh, const ConductivityField& gamma)
    : mesh_(&mesh), impl_(std::make_unique<Impl>()) {
    const auto n = static_cast<Eigen::Index>(mesh.node_count());
    if (gamma.values.size() != mesh.element_count()) {
        throw InvalidArgument("conductivity field has " + std::to_string(gamma.values.size()) +
                              " values for " + std::to_string(mesh.element_count()) + " elements");
    }
    for (std::size_t e = 0; e < gamma.values.size(); ++e) {
        if (!(gamma.values[e].real() > 0.0)) {
            throw InvalidArgument("admittivity real part must be positive (element " + std::to_string(e) + ")");
        }
    }

    std::vector<Eigen::Triplet<cplx>> triplets;
    triplets.reserve(mesh.element_count() * 9 + 2 * mesh.node_count());
    const auto& nodes = mesh.nodes();
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        const auto& el = mesh.elements()[e];
        const double area = mesh.signed_area(e);
        // Gradients of the barycentric basis functions.
        std::array<Vec2, 3> grad;
        for (int k = 0; k < 3; ++k) {
            const Vec2& p = nodes[el[(k + 1) % 3]];
            const Vec2& q = nodes[el[(k + 2) % 3]];
            grad[k] = Vec2(p.y() - q.y(), q.x() - p.x()) / (2.0 * area);
        }
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                triplets.emplace_back(el[a], el[b], gamma.values[e] * area * grad[a].dot(grad[b]));
            }
        }
    }
    // Lagrange multiplier row/column: sum of nodal values is zero.
    for (Eigen::Index i = 0; i < n; ++i) {
        triplets.emplace_back(i, n, 1.0);
        triplets.emplace_back(n, i, 1.0);
    }
    impl_->system.resize(n + 1, n + 1);
    impl_->system.setFromTriplets(triplets.begin(), triplets.end());
    impl_->system.makeCompressed();
    impl_->lu.compute(impl_->system);
    if (impl_->lu.info() != Eigen::Success) {
        throw SolverError("stiffness factorization failed: " + impl_->lu.lastErrorMessage());
    }
}

ForwardSolver::~ForwardSolver() = default;
ForwardSolver::ForwardSolver(ForwardSolver&&) noexcept = default;
ForwardSolver& ForwardSolver::operator=(ForwardSolver&&) noexcept = default;

Eigen::VectorXcd ForwardSolver::solve(const BoundaryFlux& flux) const {
    const TriMesh& mesh = *mesh_;
    const auto n = static_cast<Eigen::Index>(mesh.node_count());
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n + 1);
    double magnitude = 0.0;
    for (const auto& edge : mesh.boundary_edges()) {
        // Hat functions are taken linear in boundary angle (arc measure).
        for (int q = 0; q < 3; ++q) {
            const double s = kGaussX[q];
            const cplx g = kGaussW[q] * edge.arc * flux.value(edge, edge.theta_a + s * edge.arc);
            rhs[edge.a] += (1.0 - s) * g;
            rhs[edge.b] += s * g;
            magnitude += std::abs(g);
        }
    }
    const cplx net = rhs.head(n).sum();
    if (std::abs(net) > 1e-8 * std::max(magnitude, 1e-300)) {
        std::ostringstream msg;
        msg << "boundary flux is incompatible with the Neumann problem: net current " << std::abs(net)
            << " relative to " << magnitude;
        throw InvalidArgument(msg.str());
    }

    Eigen::VectorXcd x = impl_->lu.solve(rhs);
    if (impl_->lu.info() != Eigen::Success) throw SolverError("sparse solve failed");
    const double rhs_norm = rhs.norm();
    last_residual_ = rhs_norm > 0.0 ? (impl_->system * x - rhs).norm() / rhs_norm : 0.0;
    if (!(last_residual_ < 1e-10)) {
        std::ostringstream msg;
        msg << "stiffness system ill-conditioned: relative residual " << last_residual_;
        throw SolverError(msg.str());
    }

    Eigen::VectorXcd u = x.head(n);
    const Eigen::VectorXcd v = electrode_voltages(u);
    u.array() -= v.mean();
    return u;
}

Eigen::VectorXcd ForwardSolver::electrode_voltages(const Eigen::VectorXcd& potential) const {
    const TriMesh& mesh = *mesh_;
    const int L = mesh.layout().count;
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(L);
    Eigen::VectorXd arc = Eigen::VectorXd::Zero(L);
    for (const auto& edge : mesh.boundary_edges()) {
        if (edge.electrode < 0) continue;
        v[edge.electrode] += 0.5 * edge.arc * (potential[edge.a] + potential[edge.b]);
        arc[edge.electrode] += edge.arc;
    }
    return v.array() / arc.array().cast<cplx>();
}

Eigen::VectorXcd assemble_and_solve(const TriMesh& mesh, const ConductivityField& gamma,
                                    const BoundaryFlux& flux) {
    return ForwardSolver(mesh, gamma).solve(flux);
}

MeasurementFrame simulate_measurements(const TriMesh& mesh, const ConductivityField& gamma,
                                       const CurrentPatternSet& patterns,
                                       const ElectrodeLayout& layout) {
    if (!mesh.layout().same_geometry(layout)) {
        throw InvalidArgument("mesh was built for a different electrode layout");
    }
    if (patterns.electrode_count() != layout.count) {
        throw InvalidArgument("current patterns do not match the electrode count");
    }
    const ForwardSolver solver(mesh, gamma);
    MeasurementFrame frame;
    frame.layout = layout;
    frame.amplitude = patterns.amplitude;
    frame.V.resize(patterns.pattern_count(), layout.count);
    std::vector<double> row(layout.count);
    for (int i = 0; i < patterns.pattern_count(); ++i) {
        for (int l = 0; l < layout.count; ++l) row[l] = patterns.T(i, l);
        try {
            const Eigen::VectorXcd u = solver.solve(gap_boundary_flux(row, layout));
            frame.V.row(i) = solver.electrode_voltages(u).transpose();
        } catch (const Error& e) {
            throw SolverError("current pattern " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return frame;
}

}  // namespace eit
