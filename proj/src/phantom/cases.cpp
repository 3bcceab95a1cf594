#include <cmath>

#include "eit/phantom.hpp"

namespace eit {

namespace {

cplx jitter(cplx nominal, double fraction, std::mt19937_64& rng) {
    if (fraction == 0.0) return nominal;
    std::uniform_real_distribution<double> factor(1.0 - fraction, 1.0 + fraction);
    return nominal * factor(rng);
}

OrganBoundary with_value(OrganBoundary organ, cplx value) {
    organ.admittivity = value;
    return organ;
}

}  // namespace

Phantom chest_phantom_case_a(const OrganTemplates& templates, std::uint64_t seed, const ChestJitter& jitter_cfg) {
    const ChestNominal nominal = ChestNominal::case_a();
    std::mt19937_64 rng(seed);
    Phantom p;
    p.tag = PhantomCase::A;
    p.seed = seed;

    OrganBoundary left = vary_organ_size(templates.get("left_lung"), jitter_cfg.lung_size, rng);
    OrganBoundary right = vary_organ_size(templates.get("right_lung"), jitter_cfg.lung_size, rng);
    OrganBoundary heart = vary_organ_size(templates.get("heart"), jitter_cfg.heart_size, rng);

    p.background = jitter(nominal.background, jitter_cfg.background_admittivity, rng);
    left.admittivity = jitter(nominal.lung, jitter_cfg.lung_admittivity, rng);
    right.admittivity = jitter(nominal.lung, jitter_cfg.lung_admittivity, rng);
    heart.admittivity = jitter(nominal.heart, jitter_cfg.heart_admittivity, rng);

    p.organs = {std::move(left), std::move(right), std::move(heart),
                with_value(templates.get("aorta"), nominal.aorta),
                with_value(templates.get("spine"), nominal.spine)};
    return p;
}

Vec2 pathology_center(const OrganBoundary& lung, std::size_t boundary_index, double r) {
    if (boundary_index >= lung.points.size()) throw InvalidArgument("boundary index out of range");
    const Vec2 c = organ_center(lung);
    return c + r * (lung.points[boundary_index] - c);
}

Phantom chest_phantom_pathology(const OrganTemplates& templates, std::uint64_t seed, Pathology kind,
                                PhantomCase untagged, const ChestJitter& jitter_cfg,
                                const PathologyConfig& config) {
    const ChestNominal nominal = ChestNominal::case_bc();
    std::mt19937_64 rng(seed);
    Phantom p;
    p.seed = seed;
    p.tag = kind == Pathology::High ? PhantomCase::B : kind == Pathology::Low ? PhantomCase::C : untagged;

    OrganBoundary left = vary_organ_size(templates.get("left_lung"), jitter_cfg.lung_size, rng);
    OrganBoundary right = vary_organ_size(templates.get("right_lung"), jitter_cfg.lung_size, rng);
    OrganBoundary heart = vary_organ_size(templates.get("heart"), jitter_cfg.heart_size, rng);

    p.background = jitter(nominal.background, jitter_cfg.background_admittivity, rng);
    left.admittivity = jitter(nominal.lung, jitter_cfg.lung_admittivity, rng);
    right.admittivity = jitter(nominal.lung, jitter_cfg.lung_admittivity, rng);
    heart.admittivity = jitter(nominal.heart, jitter_cfg.heart_admittivity, rng);

    p.organs = {left, right, std::move(heart)};

    if (kind != Pathology::None) {
        const bool use_left = std::uniform_int_distribution<int>(0, 1)(rng) == 0;
        const OrganBoundary& host = use_left ? left : right;
        const auto index = std::uniform_int_distribution<std::size_t>(0, host.points.size() - 1)(rng);
        const double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const Vec2 center = pathology_center(host, index, r);
        const double radius = 0.5 * config.diameter_m / config.tank_radius_m;
        const cplx value = kind == Pathology::High ? config.high : config.low;
        p.organs.push_back(make_disc("pathology", center, radius, value));
        p.pathology = PathologyInfo{kind, host.name, center};
    }
    return p;
}

Phantom cucumber_phantom(std::uint64_t seed, const CucumberConfig& config) {
    std::mt19937_64 rng(seed);
    const double radius = 0.5 * config.diameter_m / config.tank_radius_m;
    const std::size_t count = config.radius_bands.size();
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);

    std::vector<Vec2> centers(count);
    bool placed = false;
    for (int attempt = 0; attempt < config.max_retries && !placed; ++attempt) {
        for (std::size_t i = 0; i < count; ++i) {
            const auto [lo, hi] = config.radius_bands[i];
            const double r = std::uniform_real_distribution<double>(lo, hi)(rng);
            const double t = angle(rng);
            centers[i] = {r * std::cos(t), r * std::sin(t)};
        }
        placed = true;
        for (std::size_t i = 0; i < count && placed; ++i) {
            placed = centers[i].norm() + radius < 1.0;
            for (std::size_t j = i + 1; j < count && placed; ++j) {
                placed = (centers[i] - centers[j]).norm() >= 2.0 * radius;
            }
        }
    }
    if (!placed) throw InvalidArgument("could not place non-overlapping inclusions");

    Phantom p;
    p.tag = PhantomCase::D;
    p.seed = seed;
    p.background = config.background;
    for (std::size_t i = 0; i < count; ++i) {
        const cplx value = jitter(config.inclusion, config.admittivity_jitter, rng);
        p.organs.push_back(make_disc("inclusion_" + std::to_string(i + 1), centers[i], radius, value));
    }
    return p;
}

}  // namespace eit
