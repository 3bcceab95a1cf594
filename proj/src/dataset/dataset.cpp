#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>
#include <zlib.h>

#include "eit/dataset.hpp"
#include "eit/io.hpp"

namespace eit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// splitmix64 finalizer; decorrelates the noise stream from the phantom stream.
std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

bool is_complex_case(PhantomCase c) { return c == PhantomCase::D; }

cplx nominal_background(PhantomCase c) {
    switch (c) {
        case PhantomCase::A: return ChestNominal::case_a().background;
        case PhantomCase::B:
        case PhantomCase::C: return ChestNominal::case_bc().background;
        case PhantomCase::D: return CucumberConfig{}.background;
    }
    return {1.0, 0.0};
}

}  // namespace

std::string crc32_hex(const void* data, std::size_t bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    const auto* p = static_cast<const Bytef*>(data);
    // zlib takes 32-bit lengths.
    while (bytes > 0) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes, 1u << 30));
        crc = crc32(crc, p, chunk);
        p += chunk;
        bytes -= chunk;
    }
    std::ostringstream hex;
    hex << std::hex << std::setw(8) << std::setfill('0') << crc;
    return hex.str();
}

DatasetConfig DatasetConfig::resolved() const {
    DatasetConfig c = *this;
    const bool chest_bc = phantom_case == PhantomCase::B || phantom_case == PhantomCase::C;
    if (c.pixels == 0) c.pixels = chest_bc ? 128 : 64;
    if (c.bath_depth_m == 0.0) c.bath_depth_m = phantom_case == PhantomCase::D ? 0.016 : 0.01;
    if (c.template_path.empty()) c.template_path = default_template_path();
    return c;
}

ElectrodeLayout DatasetConfig::layout() const {
    const DatasetConfig c = resolved();
    return {c.electrodes, c.electrode_width_m, c.bath_depth_m, c.tank_radius_m};
}

void DatasetConfig::validate() const {
    if (count < 1) throw InvalidArgument("dataset needs at least one sample");
    if (noise_level < 0.0) throw InvalidArgument("noise level must be non-negative");
    if (!(radius > 0.0)) throw InvalidArgument("truncation radius must be positive");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw InvalidArgument("train fraction must lie in (0, 1)");
    if (workers < 1) throw InvalidArgument("worker count must be at least 1");
    if (pixels != 0 && pixels < 8) throw InvalidArgument("image size must be at least 8 pixels");
    layout().validate();
}

Pathology pathology_schedule(std::size_t index) {
    if (index % 2 == 0) return Pathology::None;
    return index % 4 == 1 ? Pathology::Low : Pathology::High;
}

SampleGenerator::SampleGenerator(const DatasetConfig& config)
    : config_(config.resolved()),
      templates_(config_.phantom_case == PhantomCase::D ? OrganTemplates{} : load_templates(config_.template_path)),
      layout_(config_.layout()),
      mesh_(build_disk_mesh(config_.mesh_edge, layout_)),
      patterns_(trig_current_patterns(layout_.count, config_.amplitude)) {
    config_.validate();
    reference_ = simulate_measurements(mesh_, ConductivityField::constant(mesh_, nominal_background(config_.phantom_case)),
                                       patterns_, layout_);
}

Phantom SampleGenerator::phantom(std::size_t index) const {
    const std::uint64_t seed = config_.seed + index;
    switch (config_.phantom_case) {
        case PhantomCase::A: return chest_phantom_case_a(templates_, seed);
        case PhantomCase::B:
        case PhantomCase::C:
            return chest_phantom_pathology(templates_, seed, pathology_schedule(index), config_.phantom_case);
        case PhantomCase::D: return cucumber_phantom(seed);
    }
    throw InvalidArgument("unknown phantom case");
}

SamplePair SampleGenerator::generate(std::size_t index) const {
    const Phantom ph = phantom(index);
    const ConductivityField field = phantom_to_field(ph, mesh_);
    const MeasurementFrame clean = simulate_measurements(mesh_, field, patterns_, layout_);
    const MeasurementFrame noisy = add_noise(clean, config_.noise_level, mix_seed(ph.seed));

    ReconstructionOptions opts;
    opts.radius = config_.radius;
    opts.grid_points = config_.grid_points;
    opts.pixels = config_.pixels;
    opts.background = nominal_background(config_.phantom_case);
    const ReconstructionImage rec = reconstruct(noisy, &reference_, opts);

    SamplePair pair;
    pair.input = rec.pixels;
    pair.truth = rasterize(ph, config_.pixels).pixels;
    pair.seed = ph.seed;
    pair.phantom_case = ph.tag;
    pair.pathology = ph.pathology ? ph.pathology->kind : Pathology::None;
    pair.noise_level = config_.noise_level;
    pair.radius = config_.radius;
    return pair;
}

std::vector<SamplePair> generate_samples(const SampleGenerator& generator) {
    const auto n = static_cast<std::size_t>(generator.config().count);
    std::vector<SamplePair> out(n);
    std::vector<std::string> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = generator.generate(i);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const int workers = std::max(1, std::min<int>(generator.config().workers, static_cast<int>(n)));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    std::ostringstream failed;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i].empty()) continue;
        if (failures++ < 5) failed << "\n  sample " << i << ": " << errors[i];
    }
    if (failures > 0) {
        throw Error("dataset generation failed for " + std::to_string(failures) + " sample(s):" + failed.str());
    }
    return out;
}

namespace {

Eigen::MatrixXcd unpack(const Dataset& ds, const std::vector<float>& blob, std::size_t index) {
    if (index >= ds.count()) throw InvalidArgument("sample index out of range");
    const int pixels = ds.pixels;
    const auto& normalization = ds.normalization;
    const std::size_t plane = ds.plane_size();
    Eigen::MatrixXcd m(pixels, pixels);
    const float* re = blob.data() + index * 2 * plane;
    const float* im = re + plane;
    for (int r = 0; r < pixels; ++r) {
        for (int c = 0; c < pixels; ++c) {
            const std::size_t off = static_cast<std::size_t>(r) * pixels + c;
            m(r, c) = {normalization.real.denormalize(re[off]),
                       normalization.imag ? normalization.imag->denormalize(im[off]) : double(im[off])};
        }
    }
    return m;
}

}  // namespace

Eigen::MatrixXcd Dataset::input(std::size_t index) const { return unpack(*this, inputs, index); }
Eigen::MatrixXcd Dataset::truth(std::size_t index) const { return unpack(*this, truths, index); }

Dataset assemble_dataset(const std::vector<SamplePair>& samples, const DatasetConfig& config,
                         const std::string& template_checksum) {
    if (samples.empty()) throw InvalidArgument("no samples to assemble");
    Dataset ds;
    ds.config = config.resolved();
    ds.pixels = static_cast<int>(samples.front().input.rows());
    ds.complex_valued = is_complex_case(ds.config.phantom_case);
    ds.template_checksum = template_checksum;

    // Inputs and truths share one range per plane so they stay comparable.
    std::vector<Eigen::MatrixXcd> planes;
    planes.reserve(2 * samples.size());
    for (const auto& s : samples) {
        if (s.input.rows() != ds.pixels || s.truth.rows() != ds.pixels) {
            throw InvalidArgument("sample resolutions differ");
        }
        Eigen::MatrixXcd in = s.input;
        Eigen::MatrixXcd tr = s.truth;
        if (!ds.complex_valued) {
            in = in.real().cast<cplx>();
            tr = tr.real().cast<cplx>();
        }
        planes.push_back(std::move(in));
        planes.push_back(std::move(tr));
        ds.samples.push_back({s.seed, s.phantom_case, s.pathology});
    }
    auto [normalized, record] = normalize_unit_range(planes, ds.complex_valued);
    ds.normalization = record;

    const std::size_t plane = ds.plane_size();
    ds.inputs.resize(samples.size() * 2 * plane);
    ds.truths.resize(samples.size() * 2 * plane);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (int which = 0; which < 2; ++which) {
            const Eigen::MatrixXcd& m = normalized[2 * i + which];
            float* dst = (which == 0 ? ds.inputs.data() : ds.truths.data()) + i * 2 * plane;
            for (int r = 0; r < ds.pixels; ++r) {
                for (int c = 0; c < ds.pixels; ++c) {
                    const std::size_t off = static_cast<std::size_t>(r) * ds.pixels + c;
                    dst[off] = static_cast<float>(m(r, c).real());
                    dst[plane + off] = static_cast<float>(m(r, c).imag());
                }
            }
        }
    }
    ds.split = split_indices(samples.size(), ds.config.train_fraction, ds.config.seed);
    return ds;
}

Dataset generate_dataset(const DatasetConfig& config) {
    config.validate();
    const SampleGenerator generator(config);
    return assemble_dataset(generate_samples(generator), config, generator.template_checksum());
}

namespace {

json config_to_json(const DatasetConfig& c) {
    return json{{"case", to_string(c.phantom_case)},
                {"count", c.count},
                {"seed", c.seed},
                {"noise_level", c.noise_level},
                {"R", c.radius},
                {"grid_points", c.grid_points},
                {"pixels", c.pixels},
                {"mesh_edge", c.mesh_edge},
                {"electrodes", c.electrodes},
                {"electrode_width_m", c.electrode_width_m},
                {"bath_depth_m", c.bath_depth_m},
                {"tank_radius_m", c.tank_radius_m},
                {"amplitude", c.amplitude},
                {"train_fraction", c.train_fraction}};
}

DatasetConfig config_from_json(const json& j) {
    DatasetConfig c;
    c.phantom_case = parse_case(j.at("case").get<std::string>());
    c.count = j.at("count").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.noise_level = j.at("noise_level").get<double>();
    c.radius = j.at("R").get<double>();
    c.grid_points = j.at("grid_points").get<int>();
    c.pixels = j.at("pixels").get<int>();
    c.mesh_edge = j.at("mesh_edge").get<double>();
    c.electrodes = j.at("electrodes").get<int>();
    c.electrode_width_m = j.at("electrode_width_m").get<double>();
    c.bath_depth_m = j.at("bath_depth_m").get<double>();
    c.tank_radius_m = j.at("tank_radius_m").get<double>();
    c.amplitude = j.at("amplitude").get<double>();
    c.train_fraction = j.at("train_fraction").get<double>();
    return c;
}

json jitter_to_json(PhantomCase c) {
    if (c == PhantomCase::D) {
        const CucumberConfig cc;
        return json{{"inclusion_admittivity", cc.admittivity_jitter}};
    }
    const ChestJitter j = c == PhantomCase::A ? ChestJitter::case_a() : ChestJitter::case_bc();
    return json{{"heart_size", j.heart_size},
                {"lung_size", j.lung_size},
                {"heart_admittivity", j.heart_admittivity},
                {"lung_admittivity", j.lung_admittivity},
                {"background_admittivity", j.background_admittivity}};
}

json range_to_json(const PlaneRange& r) { return json{{"min", r.min}, {"max", r.max}}; }
PlaneRange range_from_json(const json& j) { return {j.at("min").get<double>(), j.at("max").get<double>()}; }

std::vector<unsigned char> blob_bytes(const std::vector<float>& values) {
    std::vector<unsigned char> buf;
    buf.reserve(values.size() * 4);
    for (float v : values) append_le_f32(buf, v);
    return buf;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
}

void write_file(const fs::path& path, const std::vector<unsigned char>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::vector<unsigned char> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

void export_dataset(const Dataset& ds, const std::string& directory) {
    fs::create_directories(directory);
    const auto in_bytes = blob_bytes(ds.inputs);
    const auto tr_bytes = blob_bytes(ds.truths);

    json samples = json::array();
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        const auto& s = ds.samples[i];
        samples.push_back(
            {{"index", i}, {"seed", s.seed}, {"case", to_string(s.phantom_case)}, {"pathology", to_string(s.pathology)}});
    }
    json norm{{"real", range_to_json(ds.normalization.real)},
              {"imag", ds.normalization.imag ? range_to_json(*ds.normalization.imag) : json(nullptr)}};
    json manifest{
        {"format", kDatasetFormat},
        {"count", ds.count()},
        {"pixels", ds.pixels},
        {"complex", ds.complex_valued},
        {"layout", "float32 little-endian, sample-major, real plane then imaginary plane, row-major"},
        {"config", config_to_json(ds.config)},
        {"jitter", jitter_to_json(ds.config.phantom_case)},
        {"normalization", norm},
        {"split", {{"fraction", ds.config.train_fraction},
                   {"seed", ds.config.seed},
                   {"train", ds.split.train},
                   {"validation", ds.split.validation}}},
        {"samples", samples},
        {"template_checksum", ds.template_checksum},
        {"files",
         {{"inputs", {{"name", "inputs.bin"}, {"bytes", in_bytes.size()}, {"crc32", crc32_hex(in_bytes.data(), in_bytes.size())}}},
          {"truths", {{"name", "truths.bin"}, {"bytes", tr_bytes.size()}, {"crc32", crc32_hex(tr_bytes.data(), tr_bytes.size())}}}}},
    };
    const fs::path dir(directory);
    write_file(dir / "inputs.bin", in_bytes);
    write_file(dir / "truths.bin", tr_bytes);
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

Dataset import_dataset(const std::string& directory) {
    const fs::path dir(directory);
    const auto manifest_bytes = read_file(dir / "manifest.json");
    json m;
    try {
        m = json::parse(manifest_bytes.begin(), manifest_bytes.end());
    } catch (const json::exception& e) {
        throw FormatError(std::string("manifest is not valid JSON: ") + e.what());
    }
    try {
        if (m.at("format").get<std::string>() != kDatasetFormat) {
            throw FormatError("dataset format '" + m.at("format").get<std::string>() + "' is not " + kDatasetFormat);
        }
        Dataset ds;
        ds.config = config_from_json(m.at("config"));
        ds.pixels = m.at("pixels").get<int>();
        ds.complex_valued = m.at("complex").get<bool>();
        ds.template_checksum = m.at("template_checksum").get<std::string>();
        ds.normalization.real = range_from_json(m.at("normalization").at("real"));
        if (!m.at("normalization").at("imag").is_null()) {
            ds.normalization.imag = range_from_json(m.at("normalization").at("imag"));
        }
        ds.split.train = m.at("split").at("train").get<std::vector<std::size_t>>();
        ds.split.validation = m.at("split").at("validation").get<std::vector<std::size_t>>();
        for (const auto& s : m.at("samples")) {
            ds.samples.push_back({s.at("seed").get<std::uint64_t>(), parse_case(s.at("case").get<std::string>()),
                                  s.at("pathology").get<std::string>() == "high"  ? Pathology::High
                                  : s.at("pathology").get<std::string>() == "low" ? Pathology::Low
                                                                                  : Pathology::None});
        }
        const std::size_t expected = ds.count() * 2 * ds.plane_size() * 4;
        auto load_blob = [&](const char* key) {
            const json& f = m.at("files").at(key);
            const auto bytes = read_file(dir / f.at("name").get<std::string>());
            if (bytes.size() != f.at("bytes").get<std::size_t>() || bytes.size() != expected) {
                throw ChecksumError(std::string(key) + " blob has " + std::to_string(bytes.size()) + " bytes, expected " +
                                    std::to_string(expected));
            }
            if (crc32_hex(bytes.data(), bytes.size()) != f.at("crc32").get<std::string>()) {
                throw ChecksumError(std::string(key) + " blob checksum mismatch");
            }
            std::vector<float> values(bytes.size() / 4);
            for (std::size_t i = 0; i < values.size(); ++i) values[i] = read_le_f32(bytes.data() + 4 * i);
            return values;
        };
        ds.inputs = load_blob("inputs");
        ds.truths = load_blob("truths");
        return ds;
    } catch (const json::exception& e) {
        throw FormatError(std::string("manifest is incomplete: ") + e.what());
    }
}

}  // namespace eit
