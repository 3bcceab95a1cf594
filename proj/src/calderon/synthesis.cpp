#include <cmath>

#include "eit/calderon.hpp"

namespace eit {

Vec2 ReconstructionImage::pixel_center(int row, int col, int n) {
    const double h = 2.0 / n;
    return {-1.0 + (col + 0.5) * h, 1.0 - (row + 0.5) * h};
}

bool ReconstructionImage::in_disk(int row, int col, int n) {
    return pixel_center(row, col, n).squaredNorm() <= 1.0;
}

ReconstructionImage inverse_fourier_simpson(const ScatteringData& data, const FrequencyGrid& grid, int n) {
    if (n < 8) throw InvalidArgument("image size must be at least 8 pixels");
    const int p = grid.points_per_axis();
    if (data.values.rows() != p || data.values.cols() != p) {
        throw InvalidArgument("scattering data does not match the frequency grid");
    }
    const Eigen::VectorXd w = grid.simpson_weights();

    // Separable kernel: exp(-2 pi i (k1 x + k2 y)) = exp(-2 pi i k1 x) exp(-2 pi i k2 y).
    Eigen::MatrixXcd ex(n, p);  // (col, ix)
    Eigen::MatrixXcd ey(n, p);  // (row, iy)
    for (int i = 0; i < n; ++i) {
        const Vec2 c = ReconstructionImage::pixel_center(i, i, n);
        for (int j = 0; j < p; ++j) {
            const double kj = grid.coordinate(j);
            ex(i, j) = w[j] * std::exp(cplx(0.0, -2.0 * kPi * kj * c.x()));
            ey(i, j) = w[j] * std::exp(cplx(0.0, -2.0 * kPi * kj * c.y()));
        }
    }
    ReconstructionImage img;
    img.radius = grid.radius();
    img.pixels = ey * data.values.transpose() * ex.transpose();
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            if (!ReconstructionImage::in_disk(r, c, n)) img.pixels(r, c) = 0.0;
        }
    }
    return img;
}

}  // namespace eit
