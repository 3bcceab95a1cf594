#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "eit/calderon.hpp"
#include "eit/cli.hpp"
#include "eit/dataset.hpp"
#include "eit/io.hpp"
#include "eit/phantom.hpp"

namespace eit::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<Probe> parse_probes(const std::string& text) {
    std::vector<Probe> probes;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ';')) {
        if (item.empty()) continue;
        Probe p;
        char comma = 0;
        std::istringstream s(item);
        if (!(s >> p.row >> comma >> p.col) || comma != ',') {
            throw InvalidArgument("probe '" + item + "' is not of the form row,col");
        }
        probes.push_back(p);
    }
    return probes;
}

EvaluationReport evaluate(const Eigen::MatrixXcd& pred, const Eigen::MatrixXcd& truth,
                          const std::vector<Probe>& probes) {
    if (pred.rows() != truth.rows() || pred.cols() != truth.cols()) {
        throw InvalidArgument("prediction is " + std::to_string(pred.rows()) + "x" + std::to_string(pred.cols()) +
                              ", truth is " + std::to_string(truth.rows()) + "x" + std::to_string(truth.cols()));
    }
    EvaluationReport report;
    report.mse = (pred - truth).cwiseAbs2().mean();

    std::map<long long, EvaluationReport::Region> regions;
    for (Eigen::Index i = 0; i < truth.size(); ++i) {
        const double t = truth(i).real();
        auto& region = regions[std::llround(t * 1e6)];
        region.truth = t;
        region.pixels += 1;
        region.pred_mean += pred(i).real();
    }
    for (auto& [key, region] : regions) {
        region.pred_mean /= static_cast<double>(region.pixels);
        report.regions.push_back(region);
    }
    for (const auto& p : probes) {
        if (p.row < 0 || p.col < 0 || p.row >= truth.rows() || p.col >= truth.cols()) {
            throw InvalidArgument("probe (" + std::to_string(p.row) + "," + std::to_string(p.col) +
                                  ") lies outside the image");
        }
        report.probes.push_back({p, truth(p.row, p.col).real(), pred(p.row, p.col).real()});
    }
    return report;
}

double half_max_area(const Eigen::MatrixXcd& pixels, std::complex<double> background) {
    const int n = static_cast<int>(pixels.rows());
    double peak = 0.0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (ReconstructionImage::in_disk(r, c, n)) peak = std::max(peak, std::abs(pixels(r, c) - background));
    if (peak == 0.0) return 0.0;
    std::size_t above = 0, disk = 0;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            if (!ReconstructionImage::in_disk(r, c, n)) continue;
            ++disk;
            if (std::abs(pixels(r, c) - background) >= 0.5 * peak) ++above;
        }
    }
    return static_cast<double>(above) / static_cast<double>(disk);
}

namespace {

struct SimulateArgs {
    std::string phantom_case = "A";
    std::uint64_t seed = 0;
    double noise = 1e-4;
    int electrodes = 32;
    double mesh_edge = 0.04;
    double amplitude = 0.0033;
    std::string pathology;
    std::string templates;
    bool homogeneous = false;
    std::string out = "frame.dcmf";
    std::string truth;
    int pixels = 0;
};

struct ReconstructArgs {
    std::string frame;
    std::string reference;
    std::string mode;
    double radius = 1.3;
    int pixels = 64;
    int grid_points = 33;
    double background_re = 1.0;
    double background_im = 0.0;
    std::string out = "image.dcmi";
    std::string preview;
};

struct DatasetArgs {
    std::string phantom_case = "A";
    int count = 256;
    std::uint64_t seed = 0;
    double noise = 1e-4;
    double radius = 1.3;
    int electrodes = 32;
    int pixels = 0;
    double mesh_edge = 0.04;
    std::string templates;
    int workers = 1;
    std::string out = "dataset";
};

struct EvaluateArgs {
    std::string pred;
    std::string truth;
    std::string probes;
    bool as_json = false;
};

ElectrodeLayout layout_for(PhantomCase c, int electrodes) {
    ElectrodeLayout layout;
    layout.count = electrodes;
    layout.depth_m = c == PhantomCase::D ? 0.016 : 0.01;
    return layout;
}

Pathology parse_pathology(const std::string& text) {
    if (text == "none") return Pathology::None;
    if (text == "high") return Pathology::High;
    if (text == "low") return Pathology::Low;
    throw InvalidArgument("unknown pathology '" + text + "' (expected none, high or low)");
}

void require_templates(const std::string& path) {
    if (!fs::exists(path)) throw InvalidArgument("organ template file '" + path + "' does not exist");
}

// Values of one subcommand in the same format --config accepts.
std::string effective_config(const CLI::App* sub) {
    return "[" + sub->get_name() + "]\n" + sub->config_to_str(true, false);
}

int cmd_simulate(const SimulateArgs& a, const std::string& effective_config, std::ostream& out) {
    const PhantomCase pc = parse_case(a.phantom_case);
    const std::string template_path = a.templates.empty() ? default_template_path() : a.templates;
    Phantom phantom;
    if (pc != PhantomCase::D) {
        require_templates(template_path);
        const OrganTemplates templates = load_templates(template_path);
        if (pc == PhantomCase::A) {
            phantom = chest_phantom_case_a(templates, a.seed);
        } else {
            const Pathology kind = !a.pathology.empty()       ? parse_pathology(a.pathology)
                                   : pc == PhantomCase::B ? Pathology::High
                                                          : Pathology::Low;
            phantom = chest_phantom_pathology(templates, a.seed, kind, pc);
        }
    } else {
        phantom = cucumber_phantom(a.seed);
    }

    const ElectrodeLayout layout = layout_for(pc, a.electrodes);
    const TriMesh mesh = build_disk_mesh(a.mesh_edge, layout);
    const CurrentPatternSet patterns = trig_current_patterns(layout.count, a.amplitude);
    const ConductivityField field =
        a.homogeneous ? ConductivityField::constant(mesh, phantom.background) : phantom_to_field(phantom, mesh);
    MeasurementFrame frame = simulate_measurements(mesh, field, patterns, layout);
    frame = add_noise(frame, a.homogeneous ? 0.0 : a.noise, a.seed);

    save_frame(a.out, frame);
    std::ofstream(a.out + ".config") << effective_config;
    if (!a.truth.empty()) {
        const int n = a.pixels > 0 ? a.pixels : (pc == PhantomCase::B || pc == PhantomCase::C ? 128 : 64);
        const RasterImage raster = rasterize(phantom, n);
        save_image(a.truth, ImageFile{raster.pixels, 0.0, "truth", raster.background});
    }
    out << "wrote " << a.out << " (" << frame.pattern_count() << " patterns x " << frame.electrode_count()
        << " electrodes)\n"
        << effective_config;
    return kSuccess;
}

int cmd_reconstruct(const ReconstructArgs& a, const std::string& effective_config, std::ostream& out) {
    const MeasurementFrame frame = load_frame(a.frame);
    std::optional<MeasurementFrame> reference;
    if (!a.reference.empty()) reference = load_frame(a.reference);

    std::string mode = a.mode.empty() ? (reference ? "difference" : "absolute") : a.mode;
    const ReconstructionMode m = parse_mode(mode);
    if (m == ReconstructionMode::Difference && !reference) {
        throw InvalidArgument("difference mode needs --reference");
    }
    ReconstructionOptions opts;
    opts.radius = a.radius;
    opts.pixels = a.pixels;
    opts.grid_points = a.grid_points;
    opts.background = {a.background_re, a.background_im};
    const ReconstructionImage img =
        reconstruct(frame, m == ReconstructionMode::Difference ? &*reference : nullptr, opts);

    save_image(a.out, to_image_file(img));
    std::ofstream(a.out + ".config") << effective_config;
    if (!a.preview.empty()) save_preview_pgm(a.preview, img.pixels);

    double max_delta = 0.0;
    for (Eigen::Index i = 0; i < img.pixels.size(); ++i) {
        max_delta = std::max(max_delta, std::abs(img.pixels(i) - img.background));
    }
    json summary{{"image", a.out},
                 {"mode", to_string(img.mode)},
                 {"R", img.radius},
                 {"pixels", img.size()},
                 {"max_abs_delta", max_delta},
                 {"half_max_area", half_max_area(img.pixels, img.background)}};
    out << summary.dump(2) << '\n';
    return kSuccess;
}

int cmd_gen_dataset(const DatasetArgs& a, std::ostream& out) {
    DatasetConfig cfg;
    cfg.phantom_case = parse_case(a.phantom_case);
    cfg.count = a.count;
    cfg.seed = a.seed;
    cfg.noise_level = a.noise;
    cfg.radius = a.radius;
    cfg.electrodes = a.electrodes;
    cfg.pixels = a.pixels;
    cfg.mesh_edge = a.mesh_edge;
    cfg.template_path = a.templates;
    cfg.workers = a.workers;
    if (cfg.phantom_case != PhantomCase::D) require_templates(cfg.resolved().template_path);
    cfg.validate();

    const Dataset ds = generate_dataset(cfg);
    export_dataset(ds, a.out);
    std::size_t none = 0, high = 0, low = 0;
    for (const auto& s : ds.samples) {
        none += s.pathology == Pathology::None;
        high += s.pathology == Pathology::High;
        low += s.pathology == Pathology::Low;
    }
    out << "wrote " << ds.count() << " samples (" << ds.split.train.size() << " train, " << ds.split.validation.size()
        << " validation) to " << a.out << "\n"
        << "pathology mix: none " << none << ", high " << high << ", low " << low << "\n";
    return kSuccess;
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
    const ImageFile pred = load_image(a.pred);
    const ImageFile truth = load_image(a.truth);
    const EvaluationReport report = evaluate(pred.pixels, truth.pixels, parse_probes(a.probes));
    if (a.as_json) {
        json j{{"mse", report.mse}, {"regions", json::array()}, {"probes", json::array()}};
        for (const auto& r : report.regions) {
            j["regions"].push_back({{"truth", r.truth}, {"pixels", r.pixels}, {"pred_mean", r.pred_mean}});
        }
        for (const auto& p : report.probes) {
            j["probes"].push_back({{"row", p.at.row}, {"col", p.at.col}, {"truth", p.truth}, {"pred", p.pred}});
        }
        out << j.dump(2) << '\n';
        return kSuccess;
    }
    out << std::fixed << std::setprecision(6) << "mse " << report.mse << "\n\n";
    out << std::setprecision(3) << "region_truth  pixels  pred_mean\n";
    for (const auto& r : report.regions) {
        out << std::setw(12) << r.truth << "  " << std::setw(6) << r.pixels << "  " << std::setw(9) << r.pred_mean << '\n';
    }
    if (!report.probes.empty()) {
        out << "\nlocation     conductivity  pred\n";
        for (const auto& p : report.probes) {
            std::ostringstream loc;
            loc << '(' << p.at.row << ',' << p.at.col << ')';
            out << std::left << std::setw(11) << loc.str() << std::right << "  " << std::setw(12) << p.truth << "  "
                << std::setw(6) << p.pred << '\n';
        }
    }
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Calderon EIT toolkit: forward simulation, reconstruction and training data", "eit"};
    app.set_config("--config", "", "TOML/INI file with option values; command-line flags take precedence");
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate one measurement frame for a random phantom");
    simulate->add_option("--case", sim.phantom_case, "Phantom family (A, B, C, D)")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "Phantom and noise seed")->capture_default_str();
    simulate->add_option("--noise", sim.noise, "Relative Gaussian noise level")->capture_default_str();
    simulate->add_option("--L", sim.electrodes, "Electrode count")->capture_default_str();
    simulate->add_option("--mesh-edge", sim.mesh_edge, "Target FEM edge length")->capture_default_str();
    simulate->add_option("--amplitude", sim.amplitude, "Current amplitude (A)")->capture_default_str();
    simulate->add_option("--pathology", sim.pathology, "Pathology for B/C: none, high, low");
    simulate->add_option("--templates", sim.templates, "Organ template file");
    simulate->add_flag("--homogeneous", sim.homogeneous, "Simulate the noise-free constant-background reference");
    simulate->add_option("--out", sim.out, "Output frame file")->capture_default_str();
    simulate->add_option("--truth", sim.truth, "Also write the rasterized phantom to this image file");
    simulate->add_option("--pixels", sim.pixels, "Truth image size (0: 64 for A/D, 128 for B/C)")
        ->capture_default_str();

    ReconstructArgs rec;
    auto* reconstruct_cmd = app.add_subcommand("reconstruct", "Reconstruct an admittivity image from a frame");
    reconstruct_cmd->add_option("--frame", rec.frame, "Measurement frame")->required();
    reconstruct_cmd->add_option("--reference", rec.reference, "Reference frame for difference imaging");
    reconstruct_cmd->add_option("--mode", rec.mode, "difference or absolute")
        ->check(CLI::IsMember({"difference", "absolute"}));
    reconstruct_cmd->add_option("--R", rec.radius, "Truncation radius")->capture_default_str();
    reconstruct_cmd->add_option("--pixels", rec.pixels, "Image size")->capture_default_str();
    reconstruct_cmd->add_option("--grid-points", rec.grid_points, "k-grid points per axis (odd)")->capture_default_str();
    reconstruct_cmd->add_option("--background", rec.background_re, "Reference admittivity, real part")
        ->capture_default_str();
    reconstruct_cmd->add_option("--background-im", rec.background_im, "Reference admittivity, imaginary part")
        ->capture_default_str();
    reconstruct_cmd->add_option("--out", rec.out, "Output image file")->capture_default_str();
    reconstruct_cmd->add_option("--preview", rec.preview, "Optional PGM preview of the real part");

    DatasetArgs ds;
    auto* gen = app.add_subcommand("gen-dataset", "Generate a paired training dataset");
    gen->add_option("--case", ds.phantom_case, "Phantom family (A, B, C, D)")->capture_default_str();
    gen->add_option("--n", ds.count, "Sample count")->capture_default_str();
    gen->add_option("--seed", ds.seed, "Base seed; sample i uses seed + i")->capture_default_str();
    gen->add_option("--noise", ds.noise, "Relative Gaussian noise level")->capture_default_str();
    gen->add_option("--R", ds.radius, "Truncation radius")->capture_default_str();
    gen->add_option("--L", ds.electrodes, "Electrode count")->capture_default_str();
    gen->add_option("--pixels", ds.pixels, "Image size (0: 64 for A/D, 128 for B/C)")->capture_default_str();
    gen->add_option("--mesh-edge", ds.mesh_edge, "Target FEM edge length")->capture_default_str();
    gen->add_option("--templates", ds.templates, "Organ template file");
    gen->add_option("--workers", ds.workers, "Worker threads")->capture_default_str();
    gen->add_option("--out", ds.out, "Output directory")->capture_default_str();

    EvaluateArgs ev;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Compare a predicted image with the ground truth");
    evaluate_cmd->add_option("--pred", ev.pred, "Predicted image")->required();
    evaluate_cmd->add_option("--truth", ev.truth, "Ground-truth image")->required();
    evaluate_cmd->add_option("--probes", ev.probes, "Probe pixels as 'row,col;row,col'");
    evaluate_cmd->add_flag("--json", ev.as_json, "Emit JSON instead of a table");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }

    try {
        if (*simulate) return cmd_simulate(sim, effective_config(simulate), out);
        if (*reconstruct_cmd) return cmd_reconstruct(rec, effective_config(reconstruct_cmd), out);
        if (*gen) return cmd_gen_dataset(ds, out);
        if (*evaluate_cmd) return cmd_evaluate(ev, out);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeFailure;
    }
    return kUsageError;
}

}  // namespace eit::cli
