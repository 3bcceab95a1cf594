#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace eit::cli {

enum ExitCode : int { kSuccess = 0, kRuntimeFailure = 1, kUsageError = 2 };

/// Runs the command line with argv[0] omitted. Output goes to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct Probe {
    int row = 0;
    int col = 0;
};

/// Parses "r,c;r,c;..." probe lists.
std::vector<Probe> parse_probes(const std::string& text);

struct EvaluationReport {
    double mse = 0.0;
    struct Region {
        double truth = 0.0;
        std::size_t pixels = 0;
        double pred_mean = 0.0;
    };
    std::vector<Region> regions;  // one per distinct truth value (real part)
    struct ProbeValue {
        Probe at;
        double truth = 0.0;
        double pred = 0.0;
    };
    std::vector<ProbeValue> probes;
};

EvaluationReport evaluate(const Eigen::MatrixXcd& pred, const Eigen::MatrixXcd& truth,
                          const std::vector<Probe>& probes);

/// Pixels whose |delta| is at least half the peak, as a fraction of the disk.
double half_max_area(const Eigen::MatrixXcd& pixels, std::complex<double> background);

}  // namespace eit::cli
