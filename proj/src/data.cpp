#include "duadmm/data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace duadmm {

namespace {

// Uniform and Gaussian draws built directly on the engine output so that
// seeded results are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  // Two independent standard normals (Box-Muller).
  std::pair<double, double> normal_pair() {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = 2.0 * std::numbers::pi * uniform();
    return {r * std::cos(t), r * std::sin(t)};
  }

 private:
  std::mt19937_64 engine_;
};

void check_spec(const MaskSpec& spec) {
  if (spec.grid.rows < 2 || spec.grid.cols < 2) throw ParameterError("mask grid must be at least 2x2");
  if (!(spec.target_rate > 0.0 && spec.target_rate <= 1.0)) {
    throw ParameterError("sampling rate must lie in (0, 1]");
  }
}

std::size_t radial_coverage(GridShape g, std::size_t spokes, std::vector<std::uint8_t>& bits) {
  std::fill(bits.begin(), bits.end(), 0);
  const long cr = static_cast<long>(g.rows / 2), cc = static_cast<long>(g.cols / 2);
  const double reach = std::hypot(static_cast<double>(g.rows), static_cast<double>(g.cols)) / 2.0 + 1.0;
  const long steps = static_cast<long>(std::ceil(reach));  // unit radius steps
  std::size_t count = 0;
  auto mark = [&](long r, long c) {
    if (r < 0 || c < 0 || r >= static_cast<long>(g.rows) || c >= static_cast<long>(g.cols)) return;
    auto& b = bits[static_cast<std::size_t>(r) * g.cols + static_cast<std::size_t>(c)];
    if (!b) {
      b = 1;
      ++count;
    }
  };
  mark(cr, cc);
  for (std::size_t s = 0; s < spokes; ++s) {
    const double theta = std::numbers::pi * static_cast<double>(s) / static_cast<double>(spokes);
    const double sy = std::sin(theta), sx = std::cos(theta);
    for (long k = -steps; k <= steps; ++k) {
      const double t = static_cast<double>(k);
      // Round the offset, not the position, so the spoke is point-symmetric about the center.
      mark(cr + std::lround(t * sy), cc + std::lround(t * sx));
    }
  }
  return count;
}

}  // namespace

std::string to_string(MaskKind kind) {
  switch (kind) {
    case MaskKind::pseudo_radial: return "radial";
    case MaskKind::cartesian: return "cartesian";
    case MaskKind::random_2d: break;
  }
  return "random2d";
}

MaskKind parse_mask_kind(const std::string& name) {
  if (name == "radial") return MaskKind::pseudo_radial;
  if (name == "cartesian") return MaskKind::cartesian;
  if (name == "random2d") return MaskKind::random_2d;
  throw ParameterError("unknown mask '" + name + "' (expected radial, cartesian or random2d)");
}

bool Ellipse::contains(double x, double y) const {
  const double phi = angle_deg * std::numbers::pi / 180.0;
  const double dx = x - center_x, dy = y - center_y;
  const double xr = dx * std::cos(phi) + dy * std::sin(phi);
  const double yr = -dx * std::sin(phi) + dy * std::cos(phi);
  return (xr * xr) / (semi_x * semi_x) + (yr * yr) / (semi_y * semi_y) <= 1.0;
}

const std::array<Ellipse, 10>& shepp_logan_ellipses() {
  static const std::array<Ellipse, 10> e{{
      {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
      {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
      {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
      {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
      {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
      {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
      {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
      {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
      {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
      {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
  }};
  return e;
}

double pixel_x(std::size_t col, std::size_t cols) {
  return -1.0 + (2.0 * static_cast<double>(col) + 1.0) / static_cast<double>(cols);
}

double pixel_y(std::size_t row, std::size_t rows) {
  return 1.0 - (2.0 * static_cast<double>(row) + 1.0) / static_cast<double>(rows);
}

Image shepp_logan(std::size_t rows, std::size_t cols) {
  if (rows < 16 || cols < 16) throw ParameterError("phantom grid must be at least 16x16");
  Image img(GridShape{rows, cols});
  for (std::size_t j = 0; j < cols; ++j) {
    const double x = pixel_x(j, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      const double y = pixel_y(i, rows);
      double v = 0.0;
      for (const Ellipse& e : shepp_logan_ellipses()) {
        if (e.contains(x, y)) v += e.intensity;
      }
      img.at(i, j) = std::clamp(v, 0.0, 1.0);
    }
  }
  return img;
}

SamplingMask pseudo_radial_mask(const MaskSpec& spec) {
  check_spec(spec);
  const GridShape g = spec.grid;
  if (spec.target_rate >= 1.0) return SamplingMask::full(g);
  const auto needed = static_cast<std::size_t>(std::ceil(spec.target_rate * static_cast<double>(g.size())));
  std::vector<std::uint8_t> bits(g.size());
  auto enough = [&](std::size_t n) { return radial_coverage(g, n, bits) >= needed; };

  std::size_t hi = 8 * std::max(g.rows, g.cols);
  if (!enough(hi)) throw ParameterError("radial sampling cannot reach the requested rate");
  std::size_t lo = 0;  // enough(lo) is false by convention
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (enough(mid) ? hi : lo) = mid;
  }
  // Coverage is not strictly monotone in the spoke count; step back while fewer spokes still suffice.
  while (hi > 1 && enough(hi - 1)) --hi;
  radial_coverage(g, hi, bits);
  return SamplingMask(g, std::move(bits));
}

SamplingMask cartesian_mask(const MaskSpec& spec) {
  check_spec(spec);
  const GridShape g = spec.grid;
  const auto target_rows = static_cast<std::size_t>(std::lround(spec.target_rate * static_cast<double>(g.rows)));
  if (target_rows == 0) throw ParameterError("cartesian sampling rate selects no rows");

  std::vector<std::uint8_t> chosen(g.rows, 0);
  const auto band = std::min(target_rows, static_cast<std::size_t>(std::ceil(0.08 * static_cast<double>(g.rows))));
  const std::size_t start = g.rows / 2 - band / 2;
  for (std::size_t r = start; r < start + band; ++r) chosen[r] = 1;

  const double center = static_cast<double>(g.rows / 2);
  const double width = static_cast<double>(g.rows) / 4.0;
  std::vector<double> weight(g.rows);
  for (std::size_t r = 0; r < g.rows; ++r) {
    const double z = (static_cast<double>(r) - center) / width;
    weight[r] = chosen[r] ? 0.0 : std::exp(-0.5 * z * z);
  }
  Rng rng(spec.seed);
  for (std::size_t have = band; have < target_rows; ++have) {
    const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
    double pick = rng.uniform() * total;
    std::size_t r = 0;
    for (; r + 1 < g.rows; ++r) {
      if (weight[r] > 0.0 && pick < weight[r]) break;
      pick -= weight[r];
    }
    while (weight[r] == 0.0) r = (r == 0) ? g.rows - 1 : r - 1;  // rounding landed past the end
    chosen[r] = 1;
    weight[r] = 0.0;
  }

  std::vector<std::uint8_t> bits(g.size(), 0);
  for (std::size_t r = 0; r < g.rows; ++r) {
    if (chosen[r]) std::fill_n(bits.begin() + static_cast<std::ptrdiff_t>(r * g.cols), g.cols, 1);
  }
  return SamplingMask(g, std::move(bits));
}

SamplingMask random_2d_mask(const MaskSpec& spec) {
  check_spec(spec);
  const GridShape g = spec.grid;
  const auto target = static_cast<std::size_t>(std::lround(spec.target_rate * static_cast<double>(g.size())));
  if (target == 0) throw ParameterError("random sampling rate selects no points");
  if (target >= g.size()) return SamplingMask::full(g);

  const std::size_t dc = (g.rows / 2) * g.cols + g.cols / 2;
  const double cr = static_cast<double>(g.rows / 2), cc = static_cast<double>(g.cols / 2);
  // Weighted sampling without replacement: keep the largest log(U)/w keys.
  Rng rng(spec.seed);
  std::vector<std::pair<double, std::size_t>> keys;
  keys.reserve(g.size() - 1);
  for (std::size_t r = 0; r < g.rows; ++r) {
    for (std::size_t c = 0; c < g.cols; ++c) {
      const std::size_t loc = r * g.cols + c;
      const double dist = std::hypot(static_cast<double>(r) - cr, static_cast<double>(c) - cc);
      const double w = 1.0 / ((1.0 + dist) * (1.0 + dist));
      const double key = std::log(rng.uniform()) / w;
      if (loc != dc) keys.emplace_back(key, loc);
    }
  }
  const std::size_t extra = target - 1;
  std::nth_element(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(extra), keys.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::uint8_t> bits(g.size(), 0);
  bits[dc] = 1;
  for (std::size_t k = 0; k < extra; ++k) bits[keys[k].second] = 1;
  return SamplingMask(g, std::move(bits));
}

SamplingMask make_mask(const MaskSpec& spec) {
  switch (spec.kind) {
    case MaskKind::pseudo_radial: return pseudo_radial_mask(spec);
    case MaskKind::cartesian: return cartesian_mask(spec);
    case MaskKind::random_2d: break;
  }
  return random_2d_mask(spec);
}

KSpaceData add_noise(const KSpaceData& kspace, const NoiseSpec& spec) {
  if (kspace.samples.size() != kspace.mask.count()) throw DimensionError("k-space samples do not match mask");
  if (!(spec.stddev >= 0.0)) throw ParameterError("noise level must be nonnegative");
  KSpaceData out = kspace;
  if (spec.stddev == 0.0) return out;
  Rng rng(spec.seed);
  for (Complex& z : out.samples) {
    const auto [g, h] = rng.normal_pair();
    z += spec.stddev * Complex(g, h);
  }
  return out;
}

Image normalize_unit(const Image& image) {
  double peak = 0.0;
  for (const Complex& z : image.vec()) peak = std::max(peak, std::abs(z));
  if (peak == 0.0) return image;
  CVector v = image.vec();
  for (Complex& z : v) z /= peak;
  return Image(image.shape(), std::move(v));
}

}  // namespace duadmm
