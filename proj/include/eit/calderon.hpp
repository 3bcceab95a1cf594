#pragma once

// Calderon's linearized reconstruction: exponential harmonic traces on the
// electrodes, their expansion in the applied/measured pattern bases, the
// truncated scattering transform and its Simpson-rule Fourier inversion.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "eit/fem.hpp"

namespace eit {

struct NormalizedPatterns {
    Eigen::MatrixXd t;   // t^i = T^i / |T^i|
    Eigen::MatrixXcd v;  // v^i = V^i / |T^i|
};

NormalizedPatterns normalize_patterns(const CurrentPatternSet& patterns, const MeasurementFrame& frame);

enum class CgoKind { Growing = 1, Decaying = 2 };

/// exp(pi i k.x +/- pi k_perp.x) sampled at the electrode midpoints, with
/// k_perp = (-k2, k1). Growing is the "+" branch.
Eigen::VectorXcd cgo_trace(const ElectrodeLayout& layout, const Vec2& k, CgoKind which);
/// Same function at an arbitrary point of the plane.
cplx cgo_value(const Vec2& x, const Vec2& k, CgoKind which);

/// Least-squares fit of a boundary trace in the span of basis rows. The
/// pseudo-inverse is computed once and reused for every trace.
class CoefficientExpander {
public:
    /// Rejects bases whose smallest singular value falls below
    /// `relative_cutoff` times the largest.
    explicit CoefficientExpander(const Eigen::MatrixXcd& basis_rows, double relative_cutoff = 1e-12);

    Eigen::VectorXcd operator()(const Eigen::VectorXcd& trace) const;
    double condition_number() const { return condition_; }

private:
    Eigen::MatrixXcd pinv_;
    double condition_ = 1.0;
};

Eigen::VectorXcd expand_coefficients(const Eigen::VectorXcd& trace, const Eigen::MatrixXcd& basis_rows);

/// -e_w / (2 pi^2 A |k|^2) * a T (b_gamma - b_ref)^T
cplx fhat_difference(const Eigen::VectorXcd& a, const Eigen::MatrixXd& t_gram,
                     const Eigen::VectorXcd& b_gamma, const Eigen::VectorXcd& b_ref,
                     const ElectrodeLayout& layout, const Vec2& k);

/// -e_w / (2 pi^2 A |k|^2) * a T b_gamma^T - integral of exp(2 pi i k.x) over the disk
cplx fhat_absolute(const Eigen::VectorXcd& a, const Eigen::MatrixXd& t_gram, const Eigen::VectorXcd& b_gamma,
                   const Vec2& k, const ElectrodeLayout& layout);

/// Integral of exp(2 pi i k.x) over the unit disk, J1(2 pi |k|) / |k|.
cplx domain_exponential_integral(const Vec2& k);

/// Uniform Cartesian k-grid over [-R, R]^2 with an odd number of points per
/// axis. Samples outside |k| <= R and the origin are excluded.
class FrequencyGrid {
public:
    FrequencyGrid(double radius, int points_per_axis = 33);
    /// Grid with spacing at most `max_step`, rounded up to an odd point count.
    static FrequencyGrid with_step(double radius, double max_step);

    double radius() const { return radius_; }
    int points_per_axis() const { return points_; }
    double step() const { return step_; }
    double coordinate(int i) const { return -radius_ + i * step_; }
    Vec2 k(int ix, int iy) const { return {coordinate(ix), coordinate(iy)}; }
    /// True when (ix, iy) is a sample: inside the disk and not the origin.
    bool is_sample(int ix, int iy) const;
    std::size_t sample_count() const;
    /// Composite Simpson weights along one axis.
    Eigen::VectorXd simpson_weights() const;

private:
    double radius_;
    int points_;
    double step_;
};

/// F-hat on the full grid box; entries that are not samples hold zero.
struct ScatteringData {
    Eigen::MatrixXcd values;  // values(ix, iy)
};

enum class ReconstructionMode { Difference, Absolute };

std::string to_string(ReconstructionMode mode);
ReconstructionMode parse_mode(const std::string& text);

ScatteringData scattering_transform(const NormalizedPatterns& gamma, const NormalizedPatterns* reference,
                                    const ElectrodeLayout& layout, const FrequencyGrid& grid);

/// Square image over [-1, 1]^2, row 0 at the top (y = 1), column 0 at x = -1.
struct ReconstructionImage {
    Eigen::MatrixXcd pixels;  // pixels(row, col)
    cplx background{};
    double radius = 0.0;
    ReconstructionMode mode = ReconstructionMode::Difference;

    int size() const { return static_cast<int>(pixels.rows()); }
    static Vec2 pixel_center(int row, int col, int n);
    static bool in_disk(int row, int col, int n);
};

/// Composite-Simpson evaluation of the truncated inverse transform at every
/// pixel center in the unit disk; pixels outside the disk are zero.
ReconstructionImage inverse_fourier_simpson(const ScatteringData& data, const FrequencyGrid& grid, int n);

struct ReconstructionOptions {
    double radius = 1.3;
    int grid_points = 33;
    int pixels = 64;
    /// Admittivity of the reference frame; added back in difference mode.
    cplx background{1.0, 0.0};
};

/// Full pipeline. Difference mode when `reference` is given, absolute mode otherwise.
ReconstructionImage reconstruct(const MeasurementFrame& frame, const MeasurementFrame* reference,
                                const ReconstructionOptions& options);

}  // namespace eit
