#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "duadmm/model.hpp"

namespace duadmm::io {

/// Binary (P5) graymap with real pixels in row-major order.
struct GrayImage {
  GridShape shape;
  RVector pixels;  // raw values in [0, maxval]
  unsigned maxval = 255;
};

GrayImage parse_pgm(const std::vector<unsigned char>& bytes);
GrayImage read_pgm(const std::filesystem::path& path);

/// Writes row-major values in [0, 1] (clamped) at 8 or 16 bits.
std::vector<unsigned char> encode_pgm(GridShape shape, const RVector& unit_pixels, int bits);
void write_pgm(const std::filesystem::path& path, GridShape shape, const RVector& unit_pixels, int bits);

/// Loads a PGM as a real image scaled to [0, 1] by its peak value.
Image load_image(const std::filesystem::path& path);

// k-space container:
//   "DKSP" | rows u32 | cols u32 | p u32 | mask bits (row-major, MSB first, byte padded)
//   | p x (re f64, im f64), all little-endian.
std::vector<unsigned char> encode_kspace(const KSpaceData& data);
KSpaceData decode_kspace(const std::vector<unsigned char>& bytes);
void write_kspace(const std::filesystem::path& path, const KSpaceData& data);
KSpaceData read_kspace(const std::filesystem::path& path);

std::vector<unsigned char> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);
void write_file(const std::filesystem::path& path, const std::vector<unsigned char>& contents);

/// Trace CSV with header iter,sigma,psnr,rlne,eta_p,eta_d,eta_1,eta_2,relerr,time_s.
/// Missing metrics are empty fields.
std::string format_trace(const IterationTrace& trace, bool include_time = true);

}  // namespace duadmm::io
