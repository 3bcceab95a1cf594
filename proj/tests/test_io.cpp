#include <cstring>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "eit/io.hpp"
#include "support.hpp"

using namespace eit;
using eit::test::TempDir;

namespace {

MeasurementFrame sample_frame() {
    MeasurementFrame f;
    f.V = Eigen::MatrixXcd::Random(31, 32);
    f.amplitude = 0.0033;
    f.noise = {1e-4, 12345678901234ULL};
    f.layout.depth_m = 0.016;
    return f;
}

}  // namespace

TEST_SUITE("io") {
    TEST_CASE("frame round trip is exact") {
        const MeasurementFrame f = sample_frame();
        std::stringstream buf;
        write_frame(buf, f);
        const MeasurementFrame g = read_frame(buf);
        CHECK(std::memcmp(f.V.data(), g.V.data(), sizeof(cplx) * f.V.size()) == 0);
        CHECK(g.amplitude == f.amplitude);
        CHECK(g.noise.level == f.noise.level);
        CHECK(g.noise.seed == f.noise.seed);
        CHECK(g.layout.same_geometry(f.layout));
    }

    TEST_CASE("frame payload layout") {
        MeasurementFrame f;
        f.V = Eigen::MatrixXcd::Zero(3, 4);
        f.V(0, 1) = {1.5, -2.0};
        f.layout.count = 4;
        f.amplitude = 1.0;
        std::stringstream buf;
        write_frame(buf, f);
        const std::string s = buf.str();
        CHECK(s.rfind("dcm-frame-1\n", 0) == 0);
        const std::size_t start = s.find("end_header\n") + 11;
        REQUIRE(s.size() - start == 3 * 4 * 16);
        const auto* p = reinterpret_cast<const unsigned char*>(s.data() + start);
        CHECK(read_le_f64(p + 16) == 1.5);
        CHECK(read_le_f64(p + 24) == -2.0);
    }

    TEST_CASE("image round trip") {
        ImageFile img;
        img.pixels = Eigen::MatrixXcd::Random(16, 16);
        img.radius = 1.3;
        img.mode = "difference";
        img.background = {0.18, 0.0};
        std::stringstream buf;
        write_image(buf, img);
        const ImageFile back = read_image(buf);
        CHECK(back.size() == 16);
        CHECK(back.mode == "difference");
        CHECK(back.radius == 1.3);
        CHECK(back.background == img.background);
        CHECK((back.pixels - img.pixels).cwiseAbs().maxCoeff() < 1e-7);
        const std::string s = buf.str();
        CHECK(s.size() - (s.find("end_header\n") + 11) == 2 * 16 * 16 * 4);
    }

    TEST_CASE("malformed input") {
        std::stringstream wrong("dcm-image-1\nn 4\nend_header\n");
        CHECK_THROWS_AS(read_frame(wrong), FormatError);

        std::stringstream buf;
        write_frame(buf, sample_frame());
        std::stringstream truncated(buf.str().substr(0, buf.str().size() - 8));
        CHECK_THROWS_AS(read_frame(truncated), FormatError);

        std::stringstream missing_key("dcm-frame-1\nelectrodes 4\nend_header\n");
        CHECK_THROWS_AS(read_frame(missing_key), FormatError);
        CHECK_THROWS_AS(load_frame("/nonexistent/frame.dcmf"), InvalidArgument);
    }

    TEST_CASE("files on disk and preview") {
        TempDir dir("io");
        const MeasurementFrame f = sample_frame();
        save_frame(dir / "f.dcmf", f);
        CHECK(load_frame(dir / "f.dcmf").V == f.V);
        save_preview_pgm(dir / "p.pgm", Eigen::MatrixXcd::Random(12, 12));
        const std::string pgm = eit::test::read_bytes(dir.path() / "p.pgm");
        CHECK(pgm.rfind("P5\n12 12\n255\n", 0) == 0);
        CHECK(pgm.size() == std::string("P5\n12 12\n255\n").size() + 144);
    }
}
