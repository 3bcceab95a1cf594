#include <algorithm>
#include <cmath>
#include <sstream>

#include "eit/fem.hpp"

namespace eit {

Vec2 ElectrodeLayout::midpoint(int l) const {
    const double t = midpoint_angle(l);
    return {std::cos(t), std::sin(t)};
}

void ElectrodeLayout::validate() const {
    if (count < 4 || count % 2 != 0) {
        throw InvalidArgument("electrode count must be even and >= 4, got " + std::to_string(count));
    }
    if (!(width_m > 0.0) || !(depth_m > 0.0) || !(tank_radius_m > 0.0)) {
        throw InvalidArgument("electrode width, bath depth and tank radius must be positive");
    }
    if (count * width() >= 2.0 * kPi) {
        throw InvalidArgument("electrodes overlap: L * e_w exceeds the circumference");
    }
}

bool ElectrodeLayout::same_geometry(const ElectrodeLayout& other) const {
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); };
    return count == other.count && close(width(), other.width()) && close(area(), other.area());
}

TriMesh::TriMesh(std::vector<Vec2> nodes, std::vector<std::array<int, 3>> elements,
                 std::vector<BoundaryEdge> boundary, ElectrodeLayout layout)
    : nodes_(std::move(nodes)),
      elements_(std::move(elements)),
      boundary_(std::move(boundary)),
      layout_(layout) {}

double TriMesh::signed_area(std::size_t element) const {
    const auto& e = elements_[element];
    const Vec2 u = nodes_[e[1]] - nodes_[e[0]];
    const Vec2 v = nodes_[e[2]] - nodes_[e[0]];
    return 0.5 * (u.x() * v.y() - u.y() * v.x());
}

Vec2 TriMesh::centroid(std::size_t element) const {
    const auto& e = elements_[element];
    return (nodes_[e[0]] + nodes_[e[1]] + nodes_[e[2]]) / 3.0;
}

double TriMesh::boundary_length() const {
    double len = 0.0;
    for (const auto& edge : boundary_) {
        len += (nodes_[edge.b] - nodes_[edge.a]).norm();
    }
    return len;
}

void TriMesh::validate() const {
    const int n = static_cast<int>(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].norm() > 1.0 + 1e-9) {
            throw InvalidArgument("mesh node " + std::to_string(i) + " lies outside the unit disk");
        }
    }
    for (std::size_t e = 0; e < elements_.size(); ++e) {
        for (int v : elements_[e]) {
            if (v < 0 || v >= n) throw InvalidArgument("element references missing node");
        }
        if (!(signed_area(e) > 0.0)) {
            throw InvalidArgument("element " + std::to_string(e) + " has non-positive signed area");
        }
    }
    if (boundary_.size() < 3) throw InvalidArgument("boundary loop too short");
    for (std::size_t i = 0; i < boundary_.size(); ++i) {
        const auto& next = boundary_[(i + 1) % boundary_.size()];
        if (boundary_[i].b != next.a) throw InvalidArgument("boundary edges do not form a closed loop");
    }
}

namespace {

struct Ring {
    std::vector<int> ids;
    std::vector<double> angles;  // ascending, within [angles[0], angles[0] + 2pi)
};

// Stitches two concentric rings into a band of triangles by walking both
// rings in angle order.
void stitch(const Ring& inner, const Ring& outer, std::vector<std::array<int, 3>>& out) {
    const int na = static_cast<int>(inner.ids.size());
    const int nb = static_cast<int>(outer.ids.size());
    const double a0 = inner.angles[0];

    // Outer start: node with angle closest to a0 (mod 2pi).
    int start = 0;
    double best = 1e300;
    for (int j = 0; j < nb; ++j) {
        double d = std::remainder(outer.angles[j] - a0, 2.0 * kPi);
        if (std::abs(d) < best) {
            best = std::abs(d);
            start = j;
        }
    }
    auto inner_angle = [&](int i) { return inner.angles[i % na] + 2.0 * kPi * (i / na); };
    const double b0 = a0 + std::remainder(outer.angles[start] - a0, 2.0 * kPi);
    // Unwrapped outer angles, strictly increasing over one turn.
    std::vector<double> beta(nb + 1);
    beta[0] = b0;
    for (int j = 1; j <= nb; ++j) {
        const int idx = (start + j) % nb;
        const int prev = (start + j - 1) % nb;
        double step = outer.angles[idx] - outer.angles[prev];
        if (step <= 0.0) step += 2.0 * kPi;
        beta[j] = beta[j - 1] + step;
    }
    auto outer_id = [&](int j) { return outer.ids[(start + j) % nb]; };
    auto inner_id = [&](int i) { return inner.ids[i % na]; };

    int i = 0;
    int j = 0;
    while (i < na || j < nb) {
        const bool advance_inner = (j == nb) || (i < na && inner_angle(i + 1) < beta[j + 1]);
        if (advance_inner) {
            out.push_back({inner_id(i), outer_id(j), inner_id(i + 1)});
            ++i;
        } else {
            out.push_back({inner_id(i), outer_id(j), outer_id(j + 1)});
            ++j;
        }
    }
}

}  // namespace

TriMesh build_disk_mesh(double target_edge_length, const ElectrodeLayout& layout) {
    layout.validate();
    const double h = target_edge_length;
    if (!(h > 0.0 && h < 0.5)) {
        throw InvalidArgument("target edge length must lie in (0, 0.5)");
    }
    const int L = layout.count;
    const double ew = layout.width();
    const double gap = 2.0 * kPi / L - ew;
    const int per_electrode = static_cast<int>(std::lround(ew / h));
    if (per_electrode < 2) {
        std::ostringstream msg;
        msg << "edge length " << h << " resolves electrodes of arc " << ew << " with " << per_electrode
            << " edges; at least 2 are required";
        throw InvalidArgument(msg.str());
    }
    const int per_gap = std::max(1, static_cast<int>(std::lround(gap / h)));

    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> elements;
    auto add_node = [&](double r, double t) {
        nodes.emplace_back(r * std::cos(t), r * std::sin(t));
        return static_cast<int>(nodes.size()) - 1;
    };

    // Radial layering.
    const int layers = std::max(2, static_cast<int>(std::lround(1.0 / h)));
    const int center = add_node(0.0, 0.0);

    std::vector<Ring> rings;
    for (int j = 1; j < layers; ++j) {
        const double r = static_cast<double>(j) / layers;
        const int count = std::max(6, static_cast<int>(std::lround(2.0 * kPi * r / h)));
        const double offset = (j % 2 == 0) ? kPi / count : 0.0;
        Ring ring;
        for (int k = 0; k < count; ++k) {
            const double t = offset + 2.0 * kPi * k / count;
            ring.ids.push_back(add_node(r, t));
            ring.angles.push_back(t);
        }
        rings.push_back(std::move(ring));
    }

    // Boundary ring: electrode l spans [theta_l - ew/2, theta_l + ew/2].
    Ring outer;
    std::vector<BoundaryEdge> boundary;
    const double start = layout.midpoint_angle(0) - 0.5 * ew;
    std::vector<int> edge_electrode;
    std::vector<double> angles;
    for (int l = 0; l < L; ++l) {
        const double t0 = layout.midpoint_angle(l) - 0.5 * ew;
        for (int k = 0; k < per_electrode; ++k) {
            angles.push_back(t0 + ew * k / per_electrode);
            edge_electrode.push_back(l);
        }
        const double g0 = t0 + ew;
        for (int k = 0; k < per_gap; ++k) {
            angles.push_back(g0 + gap * k / per_gap);
            edge_electrode.push_back(-1);
        }
    }
    for (double t : angles) {
        outer.ids.push_back(add_node(1.0, t));
        outer.angles.push_back(t);
    }
    const int nb = static_cast<int>(angles.size());
    for (int k = 0; k < nb; ++k) {
        BoundaryEdge e;
        e.a = outer.ids[k];
        e.b = outer.ids[(k + 1) % nb];
        e.theta_a = angles[k];
        e.arc = (k + 1 < nb ? angles[k + 1] : start + 2.0 * kPi) - angles[k];
        e.electrode = edge_electrode[k];
        boundary.push_back(e);
    }

    // Central fan.
    const Ring& first = rings.empty() ? outer : rings.front();
    const int nf = static_cast<int>(first.ids.size());
    for (int k = 0; k < nf; ++k) {
        elements.push_back({center, first.ids[k], first.ids[(k + 1) % nf]});
    }
    for (std::size_t j = 0; j + 1 < rings.size(); ++j) {
        stitch(rings[j], rings[j + 1], elements);
    }
    if (!rings.empty()) stitch(rings.back(), outer, elements);

    TriMesh mesh(std::move(nodes), std::move(elements), std::move(boundary), layout);
    mesh.validate();
    return mesh;
}

}  // namespace eit
