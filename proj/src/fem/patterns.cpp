#include <cmath>

#include "eit/fem.hpp"

namespace eit {

CurrentPatternSet trig_current_patterns(int electrode_count, double amplitude) {
    const int L = electrode_count;
    if (L < 4 || L % 2 != 0) {
        throw InvalidArgument("trigonometric patterns need an even electrode count >= 4, got " +
                              std::to_string(L));
    }
    if (!(amplitude > 0.0)) throw InvalidArgument("current amplitude must be positive");

    CurrentPatternSet set;
    set.amplitude = amplitude;
    set.T.resize(L - 1, L);
    const int half = L / 2;
    for (int i = 1; i <= L - 1; ++i) {
        for (int l = 1; l <= L; ++l) {
            const double theta = 2.0 * kPi * l / L;
            double value;
            if (i < half) {
                value = std::cos(i * theta);
            } else if (i == half) {
                value = (l % 2 == 0) ? 1.0 : -1.0;  // cos(pi l)
            } else {
                value = std::sin((i - half) * theta);
            }
            set.T(i - 1, l - 1) = amplitude * value;
        }
        // Kirchhoff holds analytically; remove the rounding residue so rows sum to zero.
        const double mean = set.T.row(i - 1).mean();
        if (i != half) {
            set.T.row(i - 1).array() -= mean;
            for (int l = 0; l < L; ++l) {
                if (std::abs(set.T(i - 1, l)) < 1e-15 * amplitude) set.T(i - 1, l) = 0.0;
            }
        }
    }
    return set;
}

}  // namespace eit
