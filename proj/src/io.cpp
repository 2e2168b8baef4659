#include "duadmm/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

namespace duadmm::io {

namespace {

constexpr char kMagic[4] = {'D', 'K', 'S', 'P'};
constexpr std::size_t kHeaderBytes = 16;

template <class T>
void put_le(std::vector<unsigned char>& out, T value) {
  unsigned char raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(std::begin(raw), std::end(raw));
  out.insert(out.end(), std::begin(raw), std::end(raw));
}

template <class T>
T get_le(const unsigned char* p) {
  unsigned char raw[sizeof(T)];
  std::memcpy(raw, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(std::begin(raw), std::end(raw));
  T v;
  std::memcpy(&v, raw, sizeof(T));
  return v;
}

// Cursor over PGM header tokens: whitespace separated, '#' comments to end of line.
struct PgmCursor {
  const std::vector<unsigned char>& bytes;
  std::size_t pos = 0;

  void skip_space() {
    while (pos < bytes.size()) {
      const unsigned char c = bytes[pos];
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos;
      } else {
        break;
      }
    }
  }

  unsigned long number(const char* what) {
    skip_space();
    const std::size_t start = pos;
    unsigned long v = 0;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
      v = v * 10 + (bytes[pos] - '0');
      if (v > 1'000'000'000UL) throw ParseError(std::string("PGM ") + what + " too large", start);
      ++pos;
    }
    if (pos == start) throw ParseError(std::string("PGM: expected ") + what, start);
    return v;
  }
};

}  // namespace

GrayImage parse_pgm(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') throw ParseError("not a binary PGM (P5)", 0);
  PgmCursor cur{bytes, 2};
  const auto width = cur.number("width");
  const auto height = cur.number("height");
  const auto maxval = cur.number("maxval");
  if (width < 2 || height < 2) throw ParseError("PGM image must be at least 2x2", cur.pos);
  if (maxval == 0 || maxval > 65535) throw ParseError("PGM maxval out of range", cur.pos);
  if (cur.pos >= bytes.size()) throw ParseError("PGM header ends early", cur.pos);
  ++cur.pos;  // single whitespace before the raster

  GrayImage img;
  img.shape = GridShape{height, width};
  img.maxval = static_cast<unsigned>(maxval);
  const std::size_t bpp = maxval < 256 ? 1 : 2;
  const std::size_t needed = img.shape.size() * bpp;
  if (bytes.size() - cur.pos < needed) throw ParseError("PGM raster truncated", bytes.size());
  img.pixels.resize(img.shape.size());
  const unsigned char* p = bytes.data() + cur.pos;
  for (std::size_t k = 0; k < img.pixels.size(); ++k) {
    img.pixels[k] = bpp == 1 ? p[k] : static_cast<double>((p[2 * k] << 8) | p[2 * k + 1]);
  }
  return img;
}

GrayImage read_pgm(const std::filesystem::path& path) { return parse_pgm(read_file(path)); }

std::vector<unsigned char> encode_pgm(GridShape shape, const RVector& unit_pixels, int bits) {
  if (bits != 8 && bits != 16) throw ParameterError("PGM depth must be 8 or 16 bits");
  if (unit_pixels.size() != shape.size()) throw DimensionError("PGM pixel count does not match shape");
  const unsigned maxval = bits == 8 ? 255 : 65535;
  const std::string header =
      "P5\n" + std::to_string(shape.cols) + " " + std::to_string(shape.rows) + "\n" + std::to_string(maxval) + "\n";
  std::vector<unsigned char> out(header.begin(), header.end());
  out.reserve(out.size() + shape.size() * (bits / 8));
  for (double v : unit_pixels) {
    const double c = std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0;
    const auto q = static_cast<unsigned>(std::lround(c * maxval));
    if (bits == 16) out.push_back(static_cast<unsigned char>(q >> 8));
    out.push_back(static_cast<unsigned char>(q & 0xff));
  }
  return out;
}

void write_pgm(const std::filesystem::path& path, GridShape shape, const RVector& unit_pixels, int bits) {
  write_file(path, encode_pgm(shape, unit_pixels, bits));
}

Image load_image(const std::filesystem::path& path) {
  const GrayImage g = read_pgm(path);
  const double peak = *std::max_element(g.pixels.begin(), g.pixels.end());
  RVector unit(g.pixels.size());
  for (std::size_t k = 0; k < unit.size(); ++k) unit[k] = peak > 0.0 ? g.pixels[k] / peak : 0.0;
  return Image::from_row_major(g.shape, unit);
}

std::vector<unsigned char> encode_kspace(const KSpaceData& data) {
  const SamplingMask& m = data.mask;
  if (data.samples.size() != m.count()) throw DimensionError("k-space sample count does not match mask");
  std::vector<unsigned char> out(std::begin(kMagic), std::end(kMagic));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.shape().rows));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.shape().cols));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.count()));
  const auto& bits = m.bits();
  for (std::size_t k = 0; k < bits.size(); k += 8) {
    unsigned char byte = 0;
    for (std::size_t b = 0; b < 8 && k + b < bits.size(); ++b) {
      if (bits[k + b]) byte |= static_cast<unsigned char>(0x80u >> b);
    }
    out.push_back(byte);
  }
  for (const Complex& z : data.samples) {
    put_le<double>(out, z.real());
    put_le<double>(out, z.imag());
  }
  return out;
}

KSpaceData decode_kspace(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < kHeaderBytes) throw ParseError("k-space header truncated", bytes.size());
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw ParseError("bad k-space magic (expected DKSP)", 0);
  const auto rows = get_le<std::uint32_t>(bytes.data() + 4);
  const auto cols = get_le<std::uint32_t>(bytes.data() + 8);
  const auto p = get_le<std::uint32_t>(bytes.data() + 12);
  if (rows < 2 || cols < 2) throw ParseError("k-space grid must be at least 2x2", 4);
  const std::size_t d = static_cast<std::size_t>(rows) * cols;
  const std::size_t mask_bytes = (d + 7) / 8;
  if (bytes.size() < kHeaderBytes + mask_bytes) throw ParseError("k-space mask truncated", bytes.size());

  std::vector<std::uint8_t> bits(d);
  for (std::size_t k = 0; k < d; ++k) {
    bits[k] = (bytes[kHeaderBytes + k / 8] >> (7 - k % 8)) & 1u;
  }
  const std::size_t popcount = static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1));
  if (popcount != p) {
    throw DimensionError("k-space header declares " + std::to_string(p) + " samples but the mask selects " +
                         std::to_string(popcount));
  }
  const std::size_t data_start = kHeaderBytes + mask_bytes;
  const std::size_t expected = data_start + static_cast<std::size_t>(p) * 16;
  if (bytes.size() < expected) throw ParseError("k-space samples truncated", bytes.size());
  if (bytes.size() > expected) throw ParseError("trailing bytes after k-space samples", expected);

  KSpaceData out{SamplingMask(GridShape{rows, cols}, std::move(bits)), CVector(p)};
  for (std::size_t k = 0; k < p; ++k) {
    const unsigned char* at = bytes.data() + data_start + 16 * k;
    out.samples[k] = Complex(get_le<double>(at), get_le<double>(at + 8));
  }
  return out;
}

void write_kspace(const std::filesystem::path& path, const KSpaceData& data) {
  write_file(path, encode_kspace(data));
}

KSpaceData read_kspace(const std::filesystem::path& path) { return decode_kspace(read_file(path)); }

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, const std::vector<unsigned char>& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(contents.data()), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  write_file(path, std::vector<unsigned char>(contents.begin(), contents.end()));
}

std::string format_trace(const IterationTrace& trace, bool include_time) {
  std::string out = "iter,sigma,psnr,rlne,eta_p,eta_d,eta_1,eta_2,relerr,time_s\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.12e", v);
    out += buf;
  };
  for (const TraceRow& r : trace) {
    out += std::to_string(r.iter);
    out += ',';
    num(r.sigma);
    out += ',';
    if (r.psnr) num(*r.psnr);
    out += ',';
    if (r.rlne) num(*r.rlne);
    for (double v : {r.eta_p, r.eta_d, r.eta_1, r.eta_2, r.relerr}) {
      out += ',';
      num(v);
    }
    out += ',';
    if (include_time) {
      std::snprintf(buf, sizeof buf, "%.6f", r.time_s);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace duadmm::io
