#include <algorithm>
#include <cmath>

#include "eit/phantom.hpp"

namespace eit {

bool OrganBoundary::contains(const Vec2& p) const {
    // Even-odd ray casting.
    bool inside = false;
    const std::size_t n = points.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = points[i];
        const Vec2& b = points[j];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
            if (p.x() < x) inside = !inside;
        }
    }
    return inside;
}

double OrganBoundary::max_radius() const {
    const Vec2 c = organ_center(*this);
    double r = 0.0;
    for (const auto& p : points) r = std::max(r, (p - c).norm());
    return r;
}

std::string to_string(PhantomCase c) {
    switch (c) {
        case PhantomCase::A: return "A";
        case PhantomCase::B: return "B";
        case PhantomCase::C: return "C";
        case PhantomCase::D: return "D";
    }
    return "?";
}

PhantomCase parse_case(const std::string& text) {
    if (text == "A" || text == "a") return PhantomCase::A;
    if (text == "B" || text == "b") return PhantomCase::B;
    if (text == "C" || text == "c") return PhantomCase::C;
    if (text == "D" || text == "d") return PhantomCase::D;
    throw InvalidArgument("unknown phantom case '" + text + "' (expected A, B, C or D)");
}

std::string to_string(Pathology p) {
    switch (p) {
        case Pathology::None: return "none";
        case Pathology::High: return "high";
        case Pathology::Low: return "low";
    }
    return "?";
}

cplx Phantom::admittivity_at(const Vec2& p) const {
    for (auto it = organs.rbegin(); it != organs.rend(); ++it) {
        if (it->contains(p)) return it->admittivity;
    }
    return background;
}

const OrganBoundary* Phantom::find(const std::string& name) const {
    for (const auto& o : organs) {
        if (o.name == name) return &o;
    }
    return nullptr;
}

Vec2 organ_center(const OrganBoundary& boundary) {
    if (boundary.points.size() < 3) {
        throw InvalidArgument("organ '" + boundary.name + "' needs at least 3 boundary points");
    }
    Vec2 sum = Vec2::Zero();
    for (const auto& p : boundary.points) sum += p;
    return sum / static_cast<double>(boundary.points.size());
}

OrganBoundary vary_organ_size(const OrganBoundary& boundary, double variation, std::mt19937_64& rng) {
    if (!(variation >= 0.0 && variation < 1.0)) throw InvalidArgument("size variation must lie in [0, 1)");
    const Vec2 c = organ_center(boundary);
    if (variation == 0.0) return boundary;
    std::uniform_real_distribution<double> factor(1.0 - variation, 1.0 + variation);
    constexpr int kMaxRetries = 100;
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        const double s = factor(rng);
        OrganBoundary out = boundary;
        bool inside = true;
        for (auto& p : out.points) {
            p = c + s * (p - c);
            inside = inside && p.norm() < 1.0;
        }
        if (inside) return out;
    }
    throw InvalidArgument("organ '" + boundary.name + "' keeps leaving the unit disk when resized");
}

OrganBoundary vary_organ_size(const OrganBoundary& boundary, double variation, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return vary_organ_size(boundary, variation, rng);
}

OrganBoundary make_disc(const std::string& name, const Vec2& center, double radius, cplx admittivity, int points) {
    OrganBoundary disc;
    disc.name = name;
    disc.admittivity = admittivity;
    disc.points.reserve(points);
    for (int k = 0; k < points; ++k) {
        const double t = 2.0 * kPi * k / points;
        disc.points.emplace_back(center.x() + radius * std::cos(t), center.y() + radius * std::sin(t));
    }
    return disc;
}

}  // namespace eit
