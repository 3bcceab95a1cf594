#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <string>
#include <unistd.h>

#include "eit/calderon.hpp"
#include "eit/dataset.hpp"
#include "eit/fem.hpp"

namespace eit::test {

namespace fs = std::filesystem;

// Fresh scratch directory, removed by the destructor.
class TempDir {
public:
    explicit TempDir(const std::string& tag)
        : path_(fs::temp_directory_path() / ("eit-" + tag + "-" + std::to_string(::getpid()))) {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

inline std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Relative path -> contents for every regular file below root.
inline std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> tree;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file()) tree[fs::relative(entry.path(), root).string()] = read_bytes(entry.path());
    }
    return tree;
}

inline ConductivityField disc_field(const TriMesh& mesh, const Vec2& center, double radius, cplx inside,
                                    cplx outside) {
    ConductivityField f = ConductivityField::constant(mesh, outside);
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        if ((mesh.centroid(e) - center).norm() < radius) f.values[e] = inside;
    }
    return f;
}

/// Relative L2 error of the boundary potential against cos(n theta)/n.
inline double cosine_mode_error(const TriMesh& mesh, const Eigen::VectorXcd& u, int n) {
    double mean = 0.0;
    for (const auto& e : mesh.boundary_edges()) mean += u[e.a].real();
    mean /= static_cast<double>(mesh.boundary_edges().size());
    double num = 0.0, den = 0.0;
    for (const auto& e : mesh.boundary_edges()) {
        const double exact = std::cos(n * e.theta_a) / n;
        const double d = u[e.a].real() - mean - exact;
        num += d * d;
        den += exact * exact;
    }
    return std::sqrt(num / den);
}

inline BoundaryFlux cosine_flux(int n) {
    return BoundaryFlux::continuum([n](double t) { return cplx(std::cos(n * t)); });
}

/// Row and column of the largest real value.
inline std::pair<int, int> argmax_real(const Eigen::MatrixXcd& m) {
    Eigen::Index r = 0, c = 0;
    m.real().maxCoeff(&r, &c);
    return {static_cast<int>(r), static_cast<int>(c)};
}

/// Value of the golden fixture's sample s, plane (0 real, 1 imaginary), at (r, c).
inline double golden_value(int s, bool truth, int r, int c) {
    return truth ? (r + c < 8 ? 0.1 : 0.3 + 0.1 * s) : 0.2 + 0.05 * s + 0.01 * r - 0.004 * c;
}

/// Small hand-built Case A dataset whose exported bytes are checked in under
/// tests/data/golden_ds.
inline Dataset golden_dataset() {
    DatasetConfig cfg;
    cfg.count = 2;
    cfg.seed = 5;
    cfg.pixels = 8;
    std::vector<SamplePair> samples(2);
    for (int s = 0; s < 2; ++s) {
        samples[s].input.resize(8, 8);
        samples[s].truth.resize(8, 8);
        for (int r = 0; r < 8; ++r) {
            for (int c = 0; c < 8; ++c) {
                samples[s].input(r, c) = golden_value(s, false, r, c);
                samples[s].truth(r, c) = golden_value(s, true, r, c);
            }
        }
        samples[s].seed = cfg.seed + s;
    }
    return assemble_dataset(samples, cfg, "0123abcd");
}

}  // namespace eit::test
