#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <doctest.h>

#include "eit/phantom.hpp"
#include "support.hpp"

using namespace eit;

namespace {

const OrganTemplates& templates() {
    static const OrganTemplates t = load_templates(default_template_path());
    return t;
}

// Kolmogorov-Smirnov distance between a sample and U[lo, hi].
double ks_uniform(std::vector<double> xs, double lo, double hi) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = std::clamp((xs[i] - lo) / (hi - lo), 0.0, 1.0);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        return (q.x() - p.x()) * (r.y() - p.y()) - (q.y() - p.y()) * (r.x() - p.x());
    };
    return orient(a, b, c) * orient(a, b, d) < 0 && orient(c, d, a) * orient(c, d, b) < 0;
}

bool is_simple(const OrganBoundary& o) {
    const std::size_t n = o.points.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            if (segments_cross(o.points[i], o.points[(i + 1) % n], o.points[j], o.points[(j + 1) % n])) return false;
        }
    }
    return true;
}

double outermost(const OrganBoundary& o) {
    double r = 0.0;
    for (const auto& p : o.points) r = std::max(r, p.norm());
    return r;
}

bool physical(const Phantom& p) {
    if (!(p.background.real() > 0.0)) return false;
    return std::all_of(p.organs.begin(), p.organs.end(), [](const auto& o) { return o.admittivity.real() > 0.0; });
}

std::vector<double> raster_fractions(const RasterImage& img, const std::vector<cplx>& values) {
    const int n = img.size();
    std::vector<double> f(values.size(), 0.0);
    double total = 0.0;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            if (!ReconstructionImage::in_disk(r, c, n)) continue;
            total += 1.0;
            for (std::size_t v = 0; v < values.size(); ++v) f[v] += img.pixels(r, c) == values[v] ? 1.0 : 0.0;
        }
    }
    for (auto& x : f) x /= total;
    return f;
}

}  // namespace

TEST_SUITE("geometry") {
    TEST_CASE("center of a regular polygon") {
        const OrganBoundary hex = make_disc("hex", {0.3, -0.2}, 0.1, 1.0, 6);
        CHECK(organ_center(hex).isApprox(Vec2{0.3, -0.2}, 1e-14));
        OrganBoundary two{"two", {{0, 0}, {1, 0}}, 1.0};
        CHECK_THROWS_AS(organ_center(two), InvalidArgument);
    }

    TEST_CASE("left lung center lies inside the lung") {
        const OrganBoundary& lung = templates().get("left_lung");
        CHECK(lung.contains(organ_center(lung)));
    }

    TEST_CASE("point in polygon") {
        const OrganBoundary square{"sq", {{0, 0}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}}, 1.0};
        CHECK(square.contains({0.25, 0.25}));
        CHECK_FALSE(square.contains({0.6, 0.25}));
        CHECK_FALSE(square.contains({-0.1, 0.1}));
        CHECK(square.max_radius() == doctest::Approx(std::sqrt(0.125)));
    }

    TEST_CASE("size variation 0 is the identity") {
        const OrganBoundary& heart = templates().get("heart");
        const OrganBoundary out = vary_organ_size(heart, 0.0, 17ULL);
        CHECK(out.points == heart.points);
    }

    TEST_CASE("size variation is reproducible and rigid") {
        const OrganBoundary& lung = templates().get("right_lung");
        const OrganBoundary a = vary_organ_size(lung, 0.15, 3ULL);
        const OrganBoundary b = vary_organ_size(lung, 0.15, 3ULL);
        CHECK(a.points == b.points);
        const Vec2 c = organ_center(lung);
        const double s = (a.points[0] - c).norm() / (lung.points[0] - c).norm();
        CHECK(s >= 0.85);
        CHECK(s <= 1.15);
        for (std::size_t i = 0; i < lung.points.size(); ++i) CHECK(a.points[i].isApprox(c + s * (lung.points[i] - c), 1e-12));
        CHECK_THROWS_AS(vary_organ_size(lung, 1.0, 3ULL), InvalidArgument);
    }

    TEST_CASE("size factors are uniform (KS at 1%)") {
        const OrganBoundary disc = make_disc("d", {0.1, 0.2}, 0.1, 1.0);
        std::vector<double> factors;
        const int n = 10000;
        for (int seed = 0; seed < n; ++seed) {
            const OrganBoundary out = vary_organ_size(disc, 0.15, static_cast<std::uint64_t>(seed));
            factors.push_back((out.points[0] - Vec2{0.1, 0.2}).norm() / 0.1);
        }
        CHECK(ks_uniform(factors, 0.85, 1.15) < 1.63 / std::sqrt(n));
    }

    TEST_CASE("resizing keeps organs in the disk") {
        const OrganBoundary edge = make_disc("edge", {0.8, 0.0}, 0.15, 1.0);
        for (std::uint64_t seed = 0; seed < 200; ++seed) CHECK(outermost(vary_organ_size(edge, 0.5, seed)) < 1.0);
    }
}

TEST_SUITE("templates") {
    TEST_CASE("bundled outlines") {
        const OrganTemplates& t = templates();
        CHECK(t.checksum.size() == 8);
        for (const char* name : {"left_lung", "right_lung", "heart", "aorta", "spine"}) {
            CAPTURE(name);
            const OrganBoundary& o = t.get(name);
            CHECK(o.points.size() >= 3);
            CHECK(outermost(o) < 1.0);
            CHECK(is_simple(o));
        }
        CHECK_THROWS_AS(t.get("liver"), InvalidArgument);
    }

    TEST_CASE("missing and malformed files") {
        CHECK_THROWS_AS(load_templates("/nonexistent/organs.txt"), InvalidArgument);
        eit::test::TempDir dir("templates");
        std::ofstream(dir / "bad.txt") << "organ heart 0.67 0 3\n0 0\n0.1 0\n";
        CHECK_THROWS_AS(load_templates(dir / "bad.txt"), FormatError);
        std::ofstream(dir / "empty.txt") << "# nothing\n";
        CHECK_THROWS_AS(load_templates(dir / "empty.txt"), FormatError);
    }
}

TEST_SUITE("chest") {
    TEST_CASE("Case A nominal values") {
        const Phantom p = chest_phantom_case_a(templates(), 1, ChestJitter::none());
        CHECK(p.background == cplx(0.3));
        std::map<std::string, cplx> got;
        for (const auto& o : p.organs) got[o.name] = o.admittivity;
        CHECK(got.at("left_lung") == cplx(0.1));
        CHECK(got.at("right_lung") == cplx(0.1));
        CHECK(got.at("heart") == cplx(0.67));
        CHECK(got.at("aorta") == cplx(0.67));
        CHECK(got.at("spine") == cplx(0.1));
        CHECK(p.find("heart")->points == templates().get("heart").points);
    }

    TEST_CASE("Case A jitter ranges") {
        double lo = 1.0, hi = 0.0;
        std::vector<double> heart_values;
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            const Phantom p = chest_phantom_case_a(templates(), seed);
            CHECK(physical(p));
            for (const char* lung : {"left_lung", "right_lung"}) {
                const double v = p.find(lung)->admittivity.real();
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            CHECK(p.background.real() >= 0.27 - 1e-12);
            CHECK(p.background.real() <= 0.33 + 1e-12);
            heart_values.push_back(p.find("heart")->admittivity.real());
            CHECK(p.find("aorta")->points == templates().get("aorta").points);
            CHECK(p.find("spine")->admittivity == cplx(0.1));
        }
        CHECK(lo >= 0.07 - 1e-12);
        CHECK(hi <= 0.13 + 1e-12);
        CHECK(lo < 0.072);
        CHECK(hi > 0.128);
        CHECK(ks_uniform(heart_values, 0.67 * 0.8, 0.67 * 1.2) < 1.63 / std::sqrt(1000.0));
    }

    TEST_CASE("Case A is a function of the seed") {
        const Phantom a = chest_phantom_case_a(templates(), 42);
        const Phantom b = chest_phantom_case_a(templates(), 42);
        const Phantom c = chest_phantom_case_a(templates(), 43);
        CHECK(rasterize(a, 32).pixels == rasterize(b, 32).pixels);
        CHECK(rasterize(a, 32).pixels != rasterize(c, 32).pixels);
    }

    TEST_CASE("no pathology") {
        const Phantom p = chest_phantom_pathology(templates(), 5, Pathology::None);
        CHECK(p.find("pathology") == nullptr);
        CHECK_FALSE(p.pathology.has_value());
        CHECK(p.organs.size() == 3);
        CHECK(p.tag == PhantomCase::B);
        CHECK(chest_phantom_pathology(templates(), 5, Pathology::None, PhantomCase::C).tag == PhantomCase::C);
    }

    TEST_CASE("r = 0 places the pathology at the lung center") {
        const OrganBoundary& lung = templates().get("left_lung");
        CHECK(pathology_center(lung, 7, 0.0).isApprox(organ_center(lung), 1e-14));
        CHECK(pathology_center(lung, 7, 1.0).isApprox(lung.points[7], 1e-14));
        CHECK_THROWS_AS(pathology_center(lung, lung.points.size(), 0.5), InvalidArgument);
    }

    TEST_CASE("pathology values and placement bound") {
        const double radius = 0.5 * 0.022 / 0.15;
        std::set<std::string> hosts;
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            const Pathology kind = seed % 2 ? Pathology::High : Pathology::Low;
            const Phantom p = chest_phantom_pathology(templates(), seed, kind);
            REQUIRE(p.pathology.has_value());
            CHECK(physical(p));
            CHECK(p.tag == (kind == Pathology::High ? PhantomCase::B : PhantomCase::C));
            const OrganBoundary* path = p.find("pathology");
            REQUIRE(path != nullptr);
            CHECK(path == &p.organs.back());
            CHECK(path->admittivity == cplx(kind == Pathology::High ? 0.8 : 0.01));
            CHECK((path->points[0] - p.pathology->center).norm() == doctest::Approx(radius));
            const OrganBoundary* host = p.find(p.pathology->host);
            REQUIRE(host != nullptr);
            hosts.insert(host->name);
            CHECK((p.pathology->center - organ_center(*host)).norm() <= host->max_radius() + 1e-12);
        }
        CHECK(hosts == std::set<std::string>{"left_lung", "right_lung"});
    }

    TEST_CASE("Case B/C values and jitter") {
        const Phantom nominal = chest_phantom_pathology(templates(), 1, Pathology::None, PhantomCase::B, ChestJitter::none());
        CHECK(nominal.background == cplx(0.19));
        CHECK(nominal.find("left_lung")->admittivity == cplx(0.123));
        CHECK(nominal.find("heart")->admittivity == cplx(0.323));
        for (std::uint64_t seed = 0; seed < 300; ++seed) {
            const Phantom p = chest_phantom_pathology(templates(), seed, Pathology::None);
            CHECK(p.background == cplx(0.19));
            const double lung = p.find("right_lung")->admittivity.real();
            CHECK(lung >= 0.123 * 0.8 - 1e-12);
            CHECK(lung <= 0.123 * 1.2 + 1e-12);
        }
    }
}

TEST_SUITE("cucumber") {
    TEST_CASE("nominal values") {
        CucumberConfig cfg;
        cfg.admittivity_jitter = 0.0;
        const Phantom p = cucumber_phantom(3, cfg);
        CHECK(p.tag == PhantomCase::D);
        CHECK(p.background == cplx(0.18));
        REQUIRE(p.organs.size() == 3);
        for (const auto& o : p.organs) CHECK(o.admittivity == cplx(0.23, 0.01));
    }

    TEST_CASE("bands, disjointness and jitter over 1000 seeds") {
        const double radius = 0.5 * 0.049 / 0.15;
        const CucumberConfig cfg;
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            const Phantom p = cucumber_phantom(seed);
            REQUIRE(p.organs.size() == 3);
            CHECK(physical(p));
            std::vector<Vec2> centers;
            for (std::size_t i = 0; i < 3; ++i) {
                const OrganBoundary& o = p.organs[i];
                const Vec2 c = organ_center(o);
                centers.push_back(c);
                CHECK(c.norm() >= cfg.radius_bands[i].first - 1e-12);
                CHECK(c.norm() <= cfg.radius_bands[i].second + 1e-12);
                CHECK((o.points[0] - c).norm() == doctest::Approx(radius));
                const double s = o.admittivity.real() / 0.23;
                CHECK(s >= 0.9 - 1e-12);
                CHECK(s <= 1.1 + 1e-12);
                CHECK(o.admittivity.imag() == doctest::Approx(0.01 * s));
            }
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j) CHECK((centers[i] - centers[j]).norm() >= 2.0 * radius);
        }
    }

    TEST_CASE("infeasible placement reports an error") {
        CucumberConfig cfg;
        cfg.radius_bands = {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
        cfg.max_retries = 5;
        CHECK_THROWS_AS(cucumber_phantom(1, cfg), InvalidArgument);
    }
}

TEST_SUITE("raster") {
    TEST_CASE("empty phantom") {
        Phantom p;
        p.background = {0.2, 0.05};
        const RasterImage img = rasterize(p, 16);
        CHECK((img.pixels.array() == cplx(0.2, 0.05)).all());
        CHECK_THROWS_AS(rasterize(p, 4), InvalidArgument);
    }

    TEST_CASE("disc area") {
        Phantom p;
        p.organs.push_back(make_disc("d", {0.0, 0.0}, 0.5, 2.0, 256));
        const int n = 64;
        const RasterImage img = rasterize(p, n);
        const double filled = (img.pixels.array() == cplx(2.0)).count();
        const double expected = kPi * 0.25 / 4.0 * n * n;
        CHECK(std::abs(filled - expected) < 0.03 * expected);
    }

    TEST_CASE("outside the disk is background and paint order wins") {
        const Phantom p = chest_phantom_pathology(templates(), 9, Pathology::High);
        const RasterImage img = rasterize(p, 128);
        for (int r = 0; r < 128; ++r)
            for (int c = 0; c < 128; ++c)
                if (!ReconstructionImage::in_disk(r, c, 128)) CHECK(img.pixels(r, c) == p.background);
        const Vec2 center = p.pathology->center;
        const int col = static_cast<int>((center.x() + 1.0) * 64.0);
        const int row = static_cast<int>((1.0 - center.y()) * 64.0);
        CHECK(img.pixels(row, col) == cplx(0.8));
    }

    TEST_CASE("n and 2n agree") {
        const Phantom p = chest_phantom_case_a(templates(), 77);
        const int n = 64;
        const RasterImage small = rasterize(p, n);
        const RasterImage big = rasterize(p, 2 * n);
        int agree = 0;
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) {
                std::map<std::pair<double, double>, int> votes;
                for (int dr = 0; dr < 2; ++dr)
                    for (int dc = 0; dc < 2; ++dc) {
                        const cplx v = big.pixels(2 * r + dr, 2 * c + dc);
                        votes[{v.real(), v.imag()}] += 1;
                    }
                const cplx s = small.pixels(r, c);
                int best = 0;
                for (const auto& [v, k] : votes) best = std::max(best, k);
                agree += votes[{s.real(), s.imag()}] == best ? 1 : 0;
            }
        }
        CHECK(agree >= 0.98 * n * n);
    }
}

TEST_SUITE("field") {
    TEST_CASE("empty phantom gives a constant field") {
        const TriMesh mesh = build_disk_mesh(0.1, ElectrodeLayout{});
        Phantom p;
        p.background = 0.4;
        const ConductivityField f = phantom_to_field(p, mesh);
        CHECK(f.values.size() == mesh.element_count());
        CHECK(std::all_of(f.values.begin(), f.values.end(), [](cplx v) { return v == cplx(0.4); }));
        CHECK(f.is_real());
    }

    TEST_CASE("Case A field takes the phantom's values") {
        const TriMesh mesh = build_disk_mesh(0.03, ElectrodeLayout{});
        const Phantom p = chest_phantom_case_a(templates(), 8);
        std::set<std::pair<double, double>> expected{{p.background.real(), 0.0}};
        for (const auto& o : p.organs) expected.insert({o.admittivity.real(), o.admittivity.imag()});
        std::set<std::pair<double, double>> got;
        for (cplx v : phantom_to_field(p, mesh).values) got.insert({v.real(), v.imag()});
        CHECK(got == expected);
    }

    TEST_CASE("volume fractions approach raster fractions") {
        const Phantom p = chest_phantom_case_a(templates(), 8);
        std::vector<cplx> values{p.background};
        for (const auto& o : p.organs) {
            if (std::find(values.begin(), values.end(), o.admittivity) == values.end()) values.push_back(o.admittivity);
        }
        const std::vector<double> raster = raster_fractions(rasterize(p, 512), values);
        double coarse_err = 0.0, fine_err = 0.0;
        for (double h : {0.08, 0.025}) {
            const TriMesh mesh = build_disk_mesh(h, ElectrodeLayout{});
            const ConductivityField f = phantom_to_field(p, mesh);
            std::vector<double> frac(values.size(), 0.0);
            double total = 0.0;
            for (std::size_t e = 0; e < mesh.element_count(); ++e) {
                const double a = mesh.signed_area(e);
                total += a;
                frac[std::find(values.begin(), values.end(), f.values[e]) - values.begin()] += a;
            }
            double err = 0.0;
            for (std::size_t v = 0; v < values.size(); ++v) err = std::max(err, std::abs(frac[v] / total - raster[v]));
            (h > 0.05 ? coarse_err : fine_err) = err;
        }
        CHECK(fine_err < 0.02);
        CHECK(fine_err <= coarse_err);
    }
}
