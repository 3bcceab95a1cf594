#include "eit/calderon.hpp"
#include "eit/phantom.hpp"

namespace eit {

RasterImage rasterize(const Phantom& phantom, int n) {
    if (n < 8) throw InvalidArgument("raster size must be at least 8 pixels");
    RasterImage img;
    img.background = phantom.background;
    img.pixels = Eigen::MatrixXcd::Constant(n, n, phantom.background);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            if (!ReconstructionImage::in_disk(r, c, n)) continue;
            img.pixels(r, c) = phantom.admittivity_at(ReconstructionImage::pixel_center(r, c, n));
        }
    }
    return img;
}

ConductivityField phantom_to_field(const Phantom& phantom, const TriMesh& mesh) {
    ConductivityField field;
    field.background = phantom.background;
    field.values.resize(mesh.element_count());
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        field.values[e] = phantom.admittivity_at(mesh.centroid(e));
    }
    return field;
}

}  // namespace eit
