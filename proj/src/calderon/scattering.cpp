#include <cmath>

#include "eit/calderon.hpp"

namespace eit {

namespace {

cplx prefactor(const ElectrodeLayout& layout, const Vec2& k) {
    const double k2 = k.squaredNorm();
    if (!(k2 > 0.0)) throw InvalidArgument("scattering transform is undefined at k = 0");
    return -layout.width() / (2.0 * kPi * kPi * layout.area() * k2);
}

cplx bilinear(const Eigen::VectorXcd& a, const Eigen::MatrixXd& t_gram, const Eigen::VectorXcd& b) {
    return (a.transpose() * t_gram.cast<cplx>() * b).value();
}

}  // namespace

cplx fhat_difference(const Eigen::VectorXcd& a, const Eigen::MatrixXd& t_gram,
                     const Eigen::VectorXcd& b_gamma, const Eigen::VectorXcd& b_ref,
                     const ElectrodeLayout& layout, const Vec2& k) {
    return prefactor(layout, k) * bilinear(a, t_gram, b_gamma - b_ref);
}

cplx fhat_absolute(const Eigen::VectorXcd& a, const Eigen::MatrixXd& t_gram, const Eigen::VectorXcd& b_gamma,
                   const Vec2& k, const ElectrodeLayout& layout) {
    return prefactor(layout, k) * bilinear(a, t_gram, b_gamma) - domain_exponential_integral(k);
}

cplx domain_exponential_integral(const Vec2& k) {
    const double r = k.norm();
    if (r < 1e-8) {
        // J1(z)/z ~ 1/2 - z^2/16
        const double z = 2.0 * kPi * r;
        return 2.0 * kPi * (0.5 - z * z / 16.0);
    }
    return std::cyl_bessel_j(1.0, 2.0 * kPi * r) / r;
}

FrequencyGrid::FrequencyGrid(double radius, int points_per_axis) : radius_(radius), points_(points_per_axis) {
    if (!(radius > 0.0)) throw InvalidArgument("truncation radius must be positive");
    if (points_per_axis < 3 || points_per_axis % 2 == 0) {
        throw InvalidArgument("Simpson rule needs an odd number (>= 3) of grid points per axis");
    }
    step_ = 2.0 * radius / (points_per_axis - 1);
}

FrequencyGrid FrequencyGrid::with_step(double radius, double max_step) {
    if (!(max_step > 0.0)) throw InvalidArgument("grid step must be positive");
    const int half = static_cast<int>(std::ceil(radius / max_step - 1e-12));
    return FrequencyGrid(radius, 2 * std::max(half, 1) + 1);
}

bool FrequencyGrid::is_sample(int ix, int iy) const {
    const int c = points_ / 2;
    if (ix == c && iy == c) return false;
    return k(ix, iy).norm() <= radius_ * (1.0 + 1e-12);
}

std::size_t FrequencyGrid::sample_count() const {
    std::size_t n = 0;
    for (int ix = 0; ix < points_; ++ix) {
        for (int iy = 0; iy < points_; ++iy) n += is_sample(ix, iy) ? 1 : 0;
    }
    return n;
}

Eigen::VectorXd FrequencyGrid::simpson_weights() const {
    Eigen::VectorXd w(points_);
    for (int i = 0; i < points_; ++i) {
        w[i] = (i == 0 || i == points_ - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    }
    return w * (step_ / 3.0);
}

std::string to_string(ReconstructionMode mode) {
    return mode == ReconstructionMode::Difference ? "difference" : "absolute";
}

ReconstructionMode parse_mode(const std::string& text) {
    if (text == "difference") return ReconstructionMode::Difference;
    if (text == "absolute") return ReconstructionMode::Absolute;
    throw InvalidArgument("unknown reconstruction mode '" + text + "'");
}

ScatteringData scattering_transform(const NormalizedPatterns& gamma, const NormalizedPatterns* reference,
                                    const ElectrodeLayout& layout, const FrequencyGrid& grid) {
    const Eigen::MatrixXd t_gram = gamma.t * gamma.t.transpose();
    const CoefficientExpander fit_t(gamma.t.cast<cplx>());
    const CoefficientExpander fit_gamma(gamma.v);
    std::optional<CoefficientExpander> fit_ref;
    if (reference) {
        if (reference->v.rows() != gamma.v.rows() || reference->v.cols() != gamma.v.cols()) {
            throw InvalidArgument("reference frame shape differs from the data frame");
        }
        fit_ref.emplace(reference->v);
    }

    ScatteringData out;
    const int p = grid.points_per_axis();
    out.values = Eigen::MatrixXcd::Zero(p, p);
    for (int ix = 0; ix < p; ++ix) {
        for (int iy = 0; iy < p; ++iy) {
            if (!grid.is_sample(ix, iy)) continue;
            const Vec2 k = grid.k(ix, iy);
            const Eigen::VectorXcd a = fit_t(cgo_trace(layout, k, CgoKind::Growing));
            const Eigen::VectorXcd phi2 = cgo_trace(layout, k, CgoKind::Decaying);
            const Eigen::VectorXcd b_gamma = fit_gamma(phi2);
            out.values(ix, iy) = fit_ref ? fhat_difference(a, t_gram, b_gamma, (*fit_ref)(phi2), layout, k)
                                         : fhat_absolute(a, t_gram, b_gamma, k, layout);
        }
    }
    return out;
}

}  // namespace eit
