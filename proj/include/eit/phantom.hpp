#pragma once

// Randomized phantom families on the unit disk and their rasterization.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "eit/fem.hpp"

namespace eit {

struct OrganBoundary {
    std::string name;
    std::vector<Vec2> points;  // closed polyline, last point connects to the first
    cplx admittivity{};

    bool contains(const Vec2& p) const;
    /// Largest distance from the organ center to any boundary point.
    double max_radius() const;
};

enum class PhantomCase { A, B, C, D };
enum class Pathology { None, High, Low };

std::string to_string(PhantomCase c);
PhantomCase parse_case(const std::string& text);
std::string to_string(Pathology p);

struct PathologyInfo {
    Pathology kind = Pathology::None;
    std::string host;  // lung the inclusion was placed against
    Vec2 center = Vec2::Zero();
};

struct Phantom {
    cplx background{1.0, 0.0};
    std::vector<OrganBoundary> organs;  // paint order: later entries win
    PhantomCase tag = PhantomCase::A;
    std::uint64_t seed = 0;
    std::optional<PathologyInfo> pathology;

    cplx admittivity_at(const Vec2& p) const;
    const OrganBoundary* find(const std::string& name) const;
};

/// Arithmetic mean of the boundary points. Needs at least 3 points.
Vec2 organ_center(const OrganBoundary& boundary);

/// Scales the organ about its center by a single factor drawn uniformly from
/// [1 - variation, 1 + variation]. Draws that leave the unit disk are redrawn.
OrganBoundary vary_organ_size(const OrganBoundary& boundary, double variation, std::mt19937_64& rng);
OrganBoundary vary_organ_size(const OrganBoundary& boundary, double variation, std::uint64_t seed);

/// Closed polygon approximating a circle.
OrganBoundary make_disc(const std::string& name, const Vec2& center, double radius, cplx admittivity,
                        int points = 64);

/// Organ outlines shipped with the repository, with Case A nominal values.
struct OrganTemplates {
    std::vector<OrganBoundary> organs;
    std::string checksum;  // CRC-32 of the file bytes, hex

    const OrganBoundary& get(const std::string& name) const;
};

OrganTemplates load_templates(const std::string& path);
std::string default_template_path();

/// Jitter fractions for the chest families: organ sizes and admittivities
/// are varied uniformly within +/- the fraction of their nominal value.
struct ChestJitter {
    double heart_size = 0.0;
    double lung_size = 0.0;
    double heart_admittivity = 0.0;
    double lung_admittivity = 0.0;
    double background_admittivity = 0.0;

    static ChestJitter none() { return {}; }
    static ChestJitter case_a() { return {0.10, 0.15, 0.20, 0.30, 0.10}; }
    static ChestJitter case_bc() { return {0.10, 0.25, 0.15, 0.20, 0.0}; }
};

struct ChestNominal {
    cplx background;
    cplx lung;
    cplx heart;
    cplx aorta;
    cplx spine;

    static ChestNominal case_a() { return {0.3, 0.1, 0.67, 0.67, 0.1}; }
    static ChestNominal case_bc() { return {0.19, 0.123, 0.323, 0.0, 0.0}; }
};

/// Two lungs, heart, aorta and spine; Case A values.
Phantom chest_phantom_case_a(const OrganTemplates& templates, std::uint64_t seed,
                             const ChestJitter& jitter = ChestJitter::case_a());

struct PathologyConfig {
    double diameter_m = 0.022;
    double tank_radius_m = 0.15;
    cplx high{0.8, 0.0};  // copper pipe
    cplx low{0.01, 0.0};  // PVC pipe
};

/// Inclusion center for the lung-anchored placement rule:
/// center + r * (boundary point - center).
Vec2 pathology_center(const OrganBoundary& lung, std::size_t boundary_index, double r);

/// Lungs and heart with Case B/C values, plus an optional circular pathology
/// placed against a randomly chosen lung. Tagged B when kind is High, C when
/// Low and `untagged` otherwise.
Phantom chest_phantom_pathology(const OrganTemplates& templates, std::uint64_t seed, Pathology kind,
                                PhantomCase untagged = PhantomCase::B,
                                const ChestJitter& jitter = ChestJitter::case_bc(),
                                const PathologyConfig& config = {});

struct CucumberConfig {
    double diameter_m = 0.049;
    double tank_radius_m = 0.15;
    cplx inclusion{0.23, 0.01};
    cplx background{0.18, 0.0};
    double admittivity_jitter = 0.10;
    std::vector<std::pair<double, double>> radius_bands{{0.0, 0.15}, {0.3, 0.45}, {0.6, 0.75}};
    int max_retries = 1000;
};

/// Three non-overlapping discs at random polar positions, one per radius band.
Phantom cucumber_phantom(std::uint64_t seed, const CucumberConfig& config = {});

struct RasterImage {
    Eigen::MatrixXcd pixels;  // pixels(row, col), row 0 at y = 1
    cplx background{};

    int size() const { return static_cast<int>(pixels.rows()); }
};

RasterImage rasterize(const Phantom& phantom, int n);

/// Per-element admittivity by centroid membership.
ConductivityField phantom_to_field(const Phantom& phantom, const TriMesh& mesh);

}  // namespace eit
