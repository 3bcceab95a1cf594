#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "eit/calderon.hpp"

namespace eit {

NormalizedPatterns normalize_patterns(const CurrentPatternSet& patterns, const MeasurementFrame& frame) {
    if (patterns.T.rows() != frame.V.rows() || patterns.T.cols() != frame.V.cols()) {
        throw InvalidArgument("current patterns and measurement frame have different shapes");
    }
    NormalizedPatterns out;
    out.t.resize(patterns.T.rows(), patterns.T.cols());
    out.v.resize(frame.V.rows(), frame.V.cols());
    for (Eigen::Index i = 0; i < patterns.T.rows(); ++i) {
        const double norm = patterns.T.row(i).norm();
        if (!(norm > 0.0)) {
            throw InvalidArgument("current pattern " + std::to_string(i + 1) + " has zero norm");
        }
        out.t.row(i) = patterns.T.row(i) / norm;
        out.v.row(i) = frame.V.row(i) / norm;
    }
    return out;
}

cplx cgo_value(const Vec2& x, const Vec2& k, CgoKind which) {
    const Vec2 kperp(-k.y(), k.x());
    const double sign = which == CgoKind::Growing ? 1.0 : -1.0;
    return std::exp(cplx(sign * kPi * kperp.dot(x), kPi * k.dot(x)));
}

Eigen::VectorXcd cgo_trace(const ElectrodeLayout& layout, const Vec2& k, CgoKind which) {
    Eigen::VectorXcd trace(layout.count);
    for (int l = 0; l < layout.count; ++l) {
        trace[l] = cgo_value(layout.midpoint(l), k, which);
    }
    return trace;
}

CoefficientExpander::CoefficientExpander(const Eigen::MatrixXcd& basis_rows, double relative_cutoff) {
    // Columns of A are the basis vectors: trace ~ A c.
    const Eigen::MatrixXcd A = basis_rows.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || !(s[0] > 0.0)) throw InvalidArgument("expansion basis is empty or zero");
    const double smallest = s[s.size() - 1];
    condition_ = s[0] / smallest;
    if (!(smallest > relative_cutoff * s[0])) {
        std::ostringstream msg;
        msg << "expansion basis is rank deficient: singular values span [" << smallest << ", " << s[0]
            << "], relative cutoff " << relative_cutoff;
        throw SolverError(msg.str());
    }
    pinv_ = svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
}

Eigen::VectorXcd CoefficientExpander::operator()(const Eigen::VectorXcd& trace) const {
    if (trace.size() != pinv_.cols()) throw InvalidArgument("trace length does not match the basis");
    return pinv_ * trace;
}

Eigen::VectorXcd expand_coefficients(const Eigen::VectorXcd& trace, const Eigen::MatrixXcd& basis_rows) {
    return CoefficientExpander(basis_rows)(trace);
}

}  // namespace eit
