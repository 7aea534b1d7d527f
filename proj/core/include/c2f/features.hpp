#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "c2f/image.hpp"

namespace c2f {

/// C-channel 2-D feature array over a sampled patch, channel-major storage.
struct FeatureStack {
  int channels = 0;
  int rows = 0;
  int cols = 0;
  int cell_size = 1;  // pixels per feature cell
  std::vector<double> data;

  FeatureStack() = default;
  FeatureStack(int channels_, int rows_, int cols_, int cell_size_ = 1)
      : channels(channels_), rows(rows_), cols(cols_), cell_size(cell_size_),
        data(static_cast<std::size_t>(channels_) * rows_ * cols_, 0.0) {
    if (channels < 1 || rows < 1 || cols < 1)
      throw std::invalid_argument("FeatureStack: empty dimensions");
  }

  double& at(int ch, int r, int c) {
    return data[(static_cast<std::size_t>(ch) * rows + r) * cols + c];
  }
  double at(int ch, int r, int c) const {
    return data[(static_cast<std::size_t>(ch) * rows + r) * cols + c];
  }
  const double* channel(int ch) const { return data.data() + static_cast<std::size_t>(ch) * rows * cols; }
  double* channel(int ch) { return data.data() + static_cast<std::size_t>(ch) * rows * cols; }
};

/// Symmetric multiplicative scale pyramid centered on 1.0; T levels, T odd.
struct ScalePyramid {
  std::vector<double> factors;

  explicit ScalePyramid(std::vector<double> factors_);
  static ScalePyramid centered(int levels, double step);

  int count() const { return static_cast<int>(factors.size()); }
  /// Index of the level with factor 1.0 (always present by construction).
  int unit_index() const { return count() / 2; }
};

struct FeatureConfig {
  int cell_size = 4;
  int gradient_bins = 8;

  /// FNV-1a over the layout-determining fields; persisted with scorer heads.
  std::uint64_t hash() const;
};

/// 1 normalized grayscale channel + gradient_bins orientation-histogram
/// channels (soft-assigned over [0, pi)), pooled over cell_size x cell_size
/// cells and mean-subtracted per channel.
FeatureStack feature_channels(const Patch& patch, const FeatureConfig& config = {});

/// Multiplies each channel by a 2-D raised-cosine window: 1 at the spatial
/// center, 0 on the outermost ring.
FeatureStack apply_window(const FeatureStack& stack);

/// Binary feature-file format: magic "C2FFEAT1", u32le C, Hf, Wf, then
/// C*Hf*Wf f32le values in channel-major order.
void save_features(const std::filesystem::path& path, const FeatureStack& stack);
FeatureStack load_external_features(const std::filesystem::path& path);

struct FeatureFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace c2f
