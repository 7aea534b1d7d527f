#include "c2f/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

namespace c2f {

ScalePyramid::ScalePyramid(std::vector<double> factors_) : factors(std::move(factors_)) {
  if (factors.empty() || factors.size() % 2 == 0)
    throw std::invalid_argument("ScalePyramid: level count must be odd and >= 1");
  for (std::size_t i = 1; i < factors.size(); ++i)
    if (!(factors[i] > factors[i - 1]))
      throw std::invalid_argument("ScalePyramid: factors must be strictly increasing");
  if (std::abs(factors[factors.size() / 2] - 1.0) > 1e-12)
    throw std::invalid_argument("ScalePyramid: must be centered on 1.0");
}

ScalePyramid ScalePyramid::centered(int levels, double step) {
  if (levels < 1 || levels % 2 == 0) throw std::invalid_argument("ScalePyramid: levels must be odd");
  if (!(step > 1.0)) throw std::invalid_argument("ScalePyramid: step must exceed 1");
  std::vector<double> f(levels);
  const int half = levels / 2;
  for (int i = 0; i < levels; ++i) f[i] = (i == half) ? 1.0 : std::pow(step, i - half);
  return ScalePyramid(std::move(f));
}

std::uint64_t FeatureConfig::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<std::uint64_t>(cell_size));
  mix(static_cast<std::uint64_t>(gradient_bins));
  return h;
}

FeatureStack feature_channels(const Patch& patch, const FeatureConfig& config) {
  const int cell = config.cell_size;
  const int bins = config.gradient_bins;
  const int rows = patch.rows / cell;
  const int cols = patch.cols / cell;
  if (rows < 1 || cols < 1) throw std::invalid_argument("feature_channels: patch smaller than one cell");

  // Grayscale in [0, 1].
  std::vector<double> gray(static_cast<std::size_t>(patch.rows) * patch.cols);
  for (int r = 0; r < patch.rows; ++r)
    for (int c = 0; c < patch.cols; ++c)
      gray[static_cast<std::size_t>(r) * patch.cols + c] =
          (patch.at(r, c, 0) + patch.at(r, c, 1) + patch.at(r, c, 2)) / (3.0 * 255.0);
  auto g = [&](int r, int c) {
    r = std::clamp(r, 0, patch.rows - 1);
    c = std::clamp(c, 0, patch.cols - 1);
    return gray[static_cast<std::size_t>(r) * patch.cols + c];
  };

  FeatureStack out(1 + bins, rows, cols, cell);
  const double inv_cell_area = 1.0 / (cell * cell);
  for (int r = 0; r < rows * cell; ++r) {
    const int cr = std::min(r / cell, rows - 1);
    for (int c = 0; c < cols * cell; ++c) {
      const int cc = std::min(c / cell, cols - 1);
      out.at(0, cr, cc) += g(r, c) * inv_cell_area;

      const double gx = 0.5 * (g(r, c + 1) - g(r, c - 1));
      const double gy = 0.5 * (g(r + 1, c) - g(r - 1, c));
      const double mag = std::hypot(gx, gy);
      if (mag <= 0.0) continue;
      double theta = std::atan2(gy, gx);
      if (theta < 0.0) theta += std::numbers::pi;
      if (theta >= std::numbers::pi) theta -= std::numbers::pi;
      // Soft assignment between the two nearest orientation bins.
      const double pos = theta / std::numbers::pi * bins;
      const int b0 = std::min(static_cast<int>(std::floor(pos)), bins - 1);
      const int b1 = (b0 + 1) % bins;
      const double frac = pos - b0;
      out.at(1 + b0, cr, cc) += mag * (1.0 - frac) * inv_cell_area;
      out.at(1 + b1, cr, cc) += mag * frac * inv_cell_area;
    }
  }

  // Per-channel mean subtraction.
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  for (int ch = 0; ch < out.channels; ++ch) {
    double* p = out.channel(ch);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += p[i];
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) p[i] -= mean;
  }
  return out;
}

FeatureStack apply_window(const FeatureStack& stack) {
  auto hann = [](int n) {
    std::vector<double> w(n, 1.0);
    if (n == 1) return w;
    const double c = 0.5 * (n - 1);
    for (int i = 0; i < n; ++i) w[i] = 0.5 * (1.0 + std::cos(std::numbers::pi * (i - c) / c));
    return w;
  };
  const std::vector<double> wr = hann(stack.rows);
  const std::vector<double> wc = hann(stack.cols);
  FeatureStack out = stack;
  for (int ch = 0; ch < stack.channels; ++ch)
    for (int r = 0; r < stack.rows; ++r)
      for (int c = 0; c < stack.cols; ++c) out.at(ch, r, c) *= wr[r] * wc[c];
  return out;
}

namespace {
constexpr char kMagic[8] = {'C', '2', 'F', 'F', 'E', 'A', 'T', '1'};
}

void save_features(const std::filesystem::path& path, const FeatureStack& stack) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FeatureFileError("save_features: cannot open " + path.string());
  f.write(kMagic, 8);
  const std::uint32_t dims[3] = {static_cast<std::uint32_t>(stack.channels),
                                 static_cast<std::uint32_t>(stack.rows),
                                 static_cast<std::uint32_t>(stack.cols)};
  f.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  for (double v : stack.data) {
    const float x = static_cast<float>(v);
    f.write(reinterpret_cast<const char*>(&x), sizeof(x));
  }
  if (!f) throw FeatureFileError("save_features: write failed for " + path.string());
}

FeatureStack load_external_features(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FeatureFileError("load_external_features: cannot open " + path.string());
  char magic[8];
  if (!f.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
    throw FeatureFileError("load_external_features: bad magic bytes in " + path.string());
  std::uint32_t dims[3];
  if (!f.read(reinterpret_cast<char*>(dims), sizeof(dims)))
    throw FeatureFileError("load_external_features: truncated header (C, Hf, Wf) in " + path.string());
  if (dims[0] < 1 || dims[1] < 1 || dims[2] < 1)
    throw FeatureFileError("load_external_features: invalid dimensions in header of " + path.string());
  FeatureStack stack(static_cast<int>(dims[0]), static_cast<int>(dims[1]), static_cast<int>(dims[2]));
  for (std::size_t i = 0; i < stack.data.size(); ++i) {
    float x;
    if (!f.read(reinterpret_cast<char*>(&x), sizeof(x)))
      throw FeatureFileError("load_external_features: truncated payload (expected " +
                             std::to_string(stack.data.size()) + " values) in " + path.string());
    stack.data[i] = x;
  }
  return stack;
}

}  // namespace c2f
