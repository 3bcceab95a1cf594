#include <fstream>
#include <iomanip>
#include <sstream>

#include <zlib.h>

#include "eit/phantom.hpp"

namespace eit {

const OrganBoundary& OrganTemplates::get(const std::string& name) const {
    for (const auto& o : organs) {
        if (o.name == name) return o;
    }
    throw InvalidArgument("organ template '" + name + "' not found");
}

std::string default_template_path() { return EIT_DEFAULT_TEMPLATE_PATH; }

OrganTemplates load_templates(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open organ template file '" + path + "'");
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    OrganTemplates out;
    const uLong crc = crc32(crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(bytes.data()),
                            static_cast<uInt>(bytes.size()));
    std::ostringstream hex;
    hex << std::hex << std::setw(8) << std::setfill('0') << crc;
    out.checksum = hex.str();

    std::istringstream text(bytes);
    std::string line;
    int line_no = 0;
    auto fail = [&](const std::string& what) {
        throw FormatError(path + ":" + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(text, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream head(line);
        std::string keyword;
        OrganBoundary organ;
        double re = 0.0, im = 0.0;
        int count = 0;
        if (!(head >> keyword >> organ.name >> re >> im >> count) || keyword != "organ" || count < 3) {
            fail("expected 'organ <name> <re> <im> <count>'");
        }
        organ.admittivity = {re, im};
        for (int k = 0; k < count; ++k) {
            if (!std::getline(text, line)) fail("unexpected end of file in organ '" + organ.name + "'");
            ++line_no;
            std::istringstream xy(line);
            double x = 0.0, y = 0.0;
            if (!(xy >> x >> y)) fail("expected 'x y'");
            organ.points.emplace_back(x, y);
        }
        for (const auto& p : organ.points) {
            if (p.norm() >= 1.0) fail("organ '" + organ.name + "' leaves the unit disk");
        }
        out.organs.push_back(std::move(organ));
    }
    if (out.organs.empty()) throw FormatError(path + ": no organs defined");
    return out;
}

}  // namespace eit
