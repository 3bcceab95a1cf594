#pragma once

// Paired training data: phantom -> forward solve -> noise -> reconstruction,
// paired with the rasterized phantom, normalized and written to disk.
//
// On-disk layout ("dcm-ds-1"), one directory per dataset:
//   manifest.json  generation config, split, normalization, checksums
//   inputs.bin     reconstructions
//   truths.bin     rasterized phantoms
// Blobs hold little-endian float32, sample-major; each sample is the n x n
// real plane followed by the n x n imaginary plane, both row-major.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "eit/calderon.hpp"
#include "eit/fem.hpp"
#include "eit/phantom.hpp"

namespace eit {

inline constexpr const char* kDatasetFormat = "dcm-ds-1";

struct DatasetConfig {
    PhantomCase phantom_case = PhantomCase::A;
    int count = 256;
    std::uint64_t seed = 0;
    double noise_level = 1e-4;
    double radius = 1.3;
    int grid_points = 33;
    int pixels = 0;  // 0 selects the per-case default
    double mesh_edge = 0.04;
    int electrodes = 32;
    double electrode_width_m = 0.0254;
    double bath_depth_m = 0.0;  // 0 selects the per-case default
    double tank_radius_m = 0.15;
    double amplitude = 0.0033;
    double train_fraction = 0.9;
    std::string template_path;  // empty selects the bundled templates
    int workers = 1;

    /// Fills the per-case defaults: 64 pixels for A/D and 128 for B/C; bath
    /// depth 1 cm, 1.6 cm for D.
    DatasetConfig resolved() const;
    ElectrodeLayout layout() const;
    void validate() const;
};

/// Pathology class of sample `index` in a B/C dataset: even indices carry
/// none, 1 mod 4 low, 3 mod 4 high. Every prefix of length N then holds
/// ceil(N/2) / floor(N/4) / rest.
Pathology pathology_schedule(std::size_t index);

struct SamplePair {
    Eigen::MatrixXcd input;  // reconstruction, gamma = background + delta
    Eigen::MatrixXcd truth;  // rasterized phantom
    std::uint64_t seed = 0;
    PhantomCase phantom_case = PhantomCase::A;
    Pathology pathology = Pathology::None;
    double noise_level = 0.0;
    double radius = 0.0;
};

/// Everything needed to produce sample i, shared read-only by workers.
class SampleGenerator {
public:
    explicit SampleGenerator(const DatasetConfig& config);

    SamplePair generate(std::size_t index) const;
    Phantom phantom(std::size_t index) const;
    const MeasurementFrame& reference() const { return reference_; }
    const TriMesh& mesh() const { return mesh_; }
    const DatasetConfig& config() const { return config_; }
    const std::string& template_checksum() const { return templates_.checksum; }

private:
    DatasetConfig config_;
    OrganTemplates templates_;
    ElectrodeLayout layout_;
    TriMesh mesh_;
    CurrentPatternSet patterns_;
    MeasurementFrame reference_;
};

std::vector<SamplePair> generate_samples(const SampleGenerator& generator);

struct PlaneRange {
    double min = 0.0;
    double max = 1.0;

    double normalize(double x) const { return (x - min) / (max - min); }
    double denormalize(double y) const { return min + y * (max - min); }
};

struct NormalizationRecord {
    PlaneRange real;
    std::optional<PlaneRange> imag;  // absent when the imaginary plane is passed through
};

/// Affine map of every plane onto [0, 1] using the batch-global min/max.
/// With per_part the imaginary planes get their own range; otherwise they
/// are passed through unchanged. Constant planes are rejected.
std::pair<std::vector<Eigen::MatrixXcd>, NormalizationRecord> normalize_unit_range(
    const std::vector<Eigen::MatrixXcd>& images, bool per_part);
std::vector<Eigen::MatrixXcd> denormalize(const std::vector<Eigen::MatrixXcd>& images,
                                          const NormalizationRecord& record);

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
};

/// Uniform random partition, round(fraction * N) training indices, each
/// list sorted ascending.
Split split_indices(std::size_t count, double fraction, std::uint64_t seed);

struct SampleMeta {
    std::uint64_t seed = 0;
    PhantomCase phantom_case = PhantomCase::A;
    Pathology pathology = Pathology::None;
};

struct Dataset {
    DatasetConfig config;
    int pixels = 0;
    bool complex_valued = false;
    NormalizationRecord normalization;
    Split split;
    std::vector<SampleMeta> samples;
    std::string template_checksum;
    std::vector<float> inputs;  // normalized, blob layout
    std::vector<float> truths;

    std::size_t count() const { return samples.size(); }
    std::size_t plane_size() const { return static_cast<std::size_t>(pixels) * pixels; }
    /// Denormalized sample planes.
    Eigen::MatrixXcd input(std::size_t index) const;
    Eigen::MatrixXcd truth(std::size_t index) const;
};

/// Normalizes and splits generated samples. Real-valued cases (A/B/C) store
/// zero imaginary planes; case D normalizes both planes independently.
Dataset assemble_dataset(const std::vector<SamplePair>& samples, const DatasetConfig& config,
                         const std::string& template_checksum);

Dataset generate_dataset(const DatasetConfig& config);

void export_dataset(const Dataset& dataset, const std::string& directory);
Dataset import_dataset(const std::string& directory);

std::string crc32_hex(const void* data, std::size_t bytes);

}  // namespace eit
