#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "eit/dataset.hpp"

namespace eit {

namespace {

PlaneRange plane_range(const std::vector<Eigen::MatrixXcd>& images, bool imaginary, const char* what) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& img : images) {
        const Eigen::MatrixXd plane = imaginary ? Eigen::MatrixXd(img.imag()) : Eigen::MatrixXd(img.real());
        lo = std::min(lo, plane.minCoeff());
        hi = std::max(hi, plane.maxCoeff());
    }
    if (!(hi > lo)) {
        throw InvalidArgument(std::string("cannot normalize a constant ") + what + " plane (min = max = " +
                              std::to_string(lo) + ")");
    }
    return {lo, hi};
}

}  // namespace

std::pair<std::vector<Eigen::MatrixXcd>, NormalizationRecord> normalize_unit_range(
    const std::vector<Eigen::MatrixXcd>& images, bool per_part) {
    if (images.empty()) throw InvalidArgument("cannot normalize an empty batch");
    NormalizationRecord record;
    record.real = plane_range(images, false, "real");
    if (per_part) record.imag = plane_range(images, true, "imaginary");

    std::vector<Eigen::MatrixXcd> out;
    out.reserve(images.size());
    for (const auto& img : images) {
        Eigen::MatrixXcd n = img;
        for (Eigen::Index i = 0; i < n.size(); ++i) {
            const cplx v = img(i);
            n(i) = {record.real.normalize(v.real()), record.imag ? record.imag->normalize(v.imag()) : v.imag()};
        }
        out.push_back(std::move(n));
    }
    return {std::move(out), record};
}

std::vector<Eigen::MatrixXcd> denormalize(const std::vector<Eigen::MatrixXcd>& images,
                                          const NormalizationRecord& record) {
    std::vector<Eigen::MatrixXcd> out;
    out.reserve(images.size());
    for (const auto& img : images) {
        Eigen::MatrixXcd d = img;
        for (Eigen::Index i = 0; i < d.size(); ++i) {
            const cplx v = img(i);
            d(i) = {record.real.denormalize(v.real()), record.imag ? record.imag->denormalize(v.imag()) : v.imag()};
        }
        out.push_back(std::move(d));
    }
    return out;
}

Split split_indices(std::size_t count, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw InvalidArgument("split fraction must lie in (0, 1)");
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    // Explicit Fisher-Yates: std::shuffle's draw pattern is implementation-defined.
    for (std::size_t i = count; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(order[i - 1], order[j]);
    }
    const auto n_train = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(count)));
    Split s;
    s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.validation.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.validation.begin(), s.validation.end());
    return s;
}

}  // namespace eit
