#pragma once

// Binary file formats. All payloads are little-endian; each file starts with
// a short text header terminated by an "end_header" line.
//
//   frame:  "dcm-frame-1", then key/value lines, then (L-1) x L complex
//           entries as interleaved float64 (re, im), row-major.
//   image:  "dcm-image-1", then key/value lines, then n x n float32 real
//           plane followed by the n x n float32 imaginary plane, row-major.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "eit/calderon.hpp"
#include "eit/fem.hpp"

namespace eit {

inline constexpr const char* kFrameMagic = "dcm-frame-1";
inline constexpr const char* kImageMagic = "dcm-image-1";

void write_frame(std::ostream& out, const MeasurementFrame& frame);
MeasurementFrame read_frame(std::istream& in);
void save_frame(const std::string& path, const MeasurementFrame& frame);
MeasurementFrame load_frame(const std::string& path);

struct ImageFile {
    Eigen::MatrixXcd pixels;
    double radius = 0.0;
    std::string mode;  // "difference", "absolute" or "truth"
    cplx background{};

    int size() const { return static_cast<int>(pixels.rows()); }
};

ImageFile to_image_file(const ReconstructionImage& img);

void write_image(std::ostream& out, const ImageFile& image);
ImageFile read_image(std::istream& in);
void save_image(const std::string& path, const ImageFile& image);
ImageFile load_image(const std::string& path);

/// 8-bit greyscale preview of the real plane, linearly scaled to the data range.
void save_preview_pgm(const std::string& path, const Eigen::MatrixXcd& pixels);

// Little-endian scalar helpers shared by the dataset blobs.
void append_le_f32(std::vector<unsigned char>& buf, float value);
void append_le_f64(std::vector<unsigned char>& buf, double value);
float read_le_f32(const unsigned char* p);
double read_le_f64(const unsigned char* p);

}  // namespace eit
