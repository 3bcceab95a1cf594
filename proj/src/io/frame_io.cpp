#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "eit/io.hpp"
#include "format_detail.hpp"

namespace eit {

namespace {

template <typename UInt>
void append_le(std::vector<unsigned char>& buf, UInt bits) {
    for (std::size_t i = 0; i < sizeof(UInt); ++i) {
        buf.push_back(static_cast<unsigned char>((bits >> (8 * i)) & 0xFF));
    }
}

template <typename UInt>
UInt read_le(const unsigned char* p) {
    UInt bits = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i) bits |= static_cast<UInt>(p[i]) << (8 * i);
    return bits;
}

}  // namespace

void append_le_f32(std::vector<unsigned char>& buf, float value) {
    append_le(buf, std::bit_cast<std::uint32_t>(value));
}
void append_le_f64(std::vector<unsigned char>& buf, double value) {
    append_le(buf, std::bit_cast<std::uint64_t>(value));
}
float read_le_f32(const unsigned char* p) { return std::bit_cast<float>(read_le<std::uint32_t>(p)); }
double read_le_f64(const unsigned char* p) { return std::bit_cast<double>(read_le<std::uint64_t>(p)); }

void write_frame(std::ostream& out, const MeasurementFrame& frame) {
    std::ostringstream h;
    h << std::setprecision(17);
    h << kFrameMagic << '\n'
      << "electrodes " << frame.electrode_count() << '\n'
      << "patterns " << frame.pattern_count() << '\n'
      << "amplitude " << frame.amplitude << '\n'
      << "noise_level " << frame.noise.level << '\n'
      << "noise_seed " << frame.noise.seed << '\n'
      << "electrode_width_m " << frame.layout.width_m << '\n'
      << "bath_depth_m " << frame.layout.depth_m << '\n'
      << "tank_radius_m " << frame.layout.tank_radius_m << '\n'
      << "end_header\n";
    out << h.str();
    std::vector<unsigned char> buf;
    buf.reserve(static_cast<std::size_t>(frame.V.size()) * 16);
    for (Eigen::Index i = 0; i < frame.V.rows(); ++i) {
        for (Eigen::Index l = 0; l < frame.V.cols(); ++l) {
            append_le_f64(buf, frame.V(i, l).real());
            append_le_f64(buf, frame.V(i, l).imag());
        }
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

MeasurementFrame read_frame(std::istream& in) {
    const auto kv = detail::read_header(in, kFrameMagic);
    MeasurementFrame frame;
    const int L = static_cast<int>(detail::number(kv, "electrodes"));
    const int P = static_cast<int>(detail::number(kv, "patterns"));
    if (L < 1 || P < 1) throw FormatError("frame dimensions must be positive");
    frame.amplitude = detail::number(kv, "amplitude");
    frame.noise.level = detail::number(kv, "noise_level");
    frame.noise.seed = std::stoull(detail::field(kv, "noise_seed"));
    frame.layout.count = L;
    frame.layout.width_m = detail::number(kv, "electrode_width_m");
    frame.layout.depth_m = detail::number(kv, "bath_depth_m");
    frame.layout.tank_radius_m = detail::number(kv, "tank_radius_m");
    const auto buf = detail::read_payload(in, static_cast<std::size_t>(L) * P * 16);
    frame.V.resize(P, L);
    const unsigned char* p = buf.data();
    for (int i = 0; i < P; ++i) {
        for (int l = 0; l < L; ++l, p += 16) frame.V(i, l) = {read_le_f64(p), read_le_f64(p + 8)};
    }
    return frame;
}

void save_frame(const std::string& path, const MeasurementFrame& frame) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write frame file '" + path + "'");
    write_frame(out, frame);
}

MeasurementFrame load_frame(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open frame file '" + path + "'");
    return read_frame(in);
}

}  // namespace eit
