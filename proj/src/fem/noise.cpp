#include <random>

#include "eit/fem.hpp"

namespace eit {

MeasurementFrame add_noise(const MeasurementFrame& frame, double level, std::uint64_t seed) {
    if (level < 0.0) throw InvalidArgument("noise level must be non-negative");
    MeasurementFrame out = frame;
    out.noise = {level, seed};
    if (level == 0.0) return out;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> xi(0.0, 1.0);
    // Row-major draw order so the realisation does not depend on storage order.
    for (Eigen::Index i = 0; i < out.V.rows(); ++i) {
        for (Eigen::Index l = 0; l < out.V.cols(); ++l) {
            const cplx v = out.V(i, l);
            const double re = v.real() * (1.0 + level * xi(rng));
            const double im = v.imag() * (1.0 + level * xi(rng));
            out.V(i, l) = {re, im};
        }
        out.V.row(i).array() -= out.V.row(i).mean();
    }
    return out;
}

}  // namespace eit
