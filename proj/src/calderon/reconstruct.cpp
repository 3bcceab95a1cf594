#include "eit/calderon.hpp"

namespace eit {

ReconstructionImage reconstruct(const MeasurementFrame& frame, const MeasurementFrame* reference,
                                const ReconstructionOptions& options) {
    const ElectrodeLayout& layout = frame.layout;
    layout.validate();
    if (reference) {
        if (!reference->layout.same_geometry(layout) || reference->V.rows() != frame.V.rows() ||
            reference->V.cols() != frame.V.cols()) {
            throw InvalidArgument("reference frame was recorded with a different electrode layout");
        }
        if (std::abs(reference->amplitude - frame.amplitude) > 1e-12 * std::abs(frame.amplitude)) {
            throw InvalidArgument("reference frame uses a different current amplitude");
        }
    }
    const CurrentPatternSet patterns = trig_current_patterns(layout.count, frame.amplitude);
    if (patterns.T.rows() != frame.V.rows()) {
        throw InvalidArgument("frame does not hold one row per trigonometric pattern");
    }

    const FrequencyGrid grid(options.radius, options.grid_points);
    const NormalizedPatterns data = normalize_patterns(patterns, frame);
    ScatteringData fhat;
    if (reference) {
        const NormalizedPatterns ref = normalize_patterns(patterns, *reference);
        fhat = scattering_transform(data, &ref, layout, grid);
    } else {
        fhat = scattering_transform(data, nullptr, layout, grid);
    }

    ReconstructionImage img = inverse_fourier_simpson(fhat, grid, options.pixels);
    img.mode = reference ? ReconstructionMode::Difference : ReconstructionMode::Absolute;
    img.background = reference ? options.background : cplx{1.0, 0.0};
    const int n = img.size();
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) img.pixels(r, c) += img.background;
    }
    return img;
}

}  // namespace eit
