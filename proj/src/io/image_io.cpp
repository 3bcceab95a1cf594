#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "eit/io.hpp"
#include "format_detail.hpp"

namespace eit {

ImageFile to_image_file(const ReconstructionImage& img) {
    return {img.pixels, img.radius, to_string(img.mode), img.background};
}

void write_image(std::ostream& out, const ImageFile& image) {
    std::ostringstream h;
    h << std::setprecision(9);
    h << kImageMagic << '\n'
      << "n " << image.size() << '\n'
      << "R " << image.radius << '\n'
      << "mode " << (image.mode.empty() ? "truth" : image.mode) << '\n'
      << "background_re " << image.background.real() << '\n'
      << "background_im " << image.background.imag() << '\n'
      << "end_header\n";
    out << h.str();
    const int n = image.size();
    std::vector<unsigned char> buf;
    buf.reserve(static_cast<std::size_t>(n) * n * 8);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) append_le_f32(buf, static_cast<float>(image.pixels(r, c).real()));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) append_le_f32(buf, static_cast<float>(image.pixels(r, c).imag()));
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

ImageFile read_image(std::istream& in) {
    const auto kv = detail::read_header(in, kImageMagic);
    ImageFile img;
    const int n = static_cast<int>(detail::number(kv, "n"));
    if (n < 1) throw FormatError("image size must be positive");
    img.radius = detail::number(kv, "R");
    img.mode = detail::field(kv, "mode");
    img.background = {detail::number(kv, "background_re"), detail::number(kv, "background_im")};
    const auto buf = detail::read_payload(in, static_cast<std::size_t>(n) * n * 8);
    img.pixels.resize(n, n);
    const unsigned char* re = buf.data();
    const unsigned char* im = buf.data() + static_cast<std::size_t>(n) * n * 4;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const std::size_t off = (static_cast<std::size_t>(r) * n + c) * 4;
            img.pixels(r, c) = {read_le_f32(re + off), read_le_f32(im + off)};
        }
    }
    return img;
}

void save_image(const std::string& path, const ImageFile& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write image file '" + path + "'");
    write_image(out, image);
}

ImageFile load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open image file '" + path + "'");
    return read_image(in);
}


void save_preview_pgm(const std::string& path, const Eigen::MatrixXcd& pixels) {
    const Eigen::MatrixXd re = pixels.real();
    const double lo = re.minCoeff();
    const double hi = re.maxCoeff();
    const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write preview '" + path + "'");
    out << "P5\n" << re.cols() << ' ' << re.rows() << "\n255\n";
    for (Eigen::Index r = 0; r < re.rows(); ++r) {
        for (Eigen::Index c = 0; c < re.cols(); ++c) {
            const double v = std::clamp((re(r, c) - lo) * scale, 0.0, 255.0);
            out.put(static_cast<char>(static_cast<unsigned char>(v + 0.5)));
        }
    }
}

}  // namespace eit
