#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace c2f {

/// 8-bit RGB video frame.
struct Frame {
  int rows = 0;
  int cols = 0;
  int frame_index = 1;
  std::vector<std::uint8_t> rgb;  // row-major, interleaved

  Frame() = default;
  Frame(int rows_, int cols_, int index = 1)
      : rows(rows_), cols(cols_), frame_index(index), rgb(static_cast<std::size_t>(rows_) * cols_ * 3, 0) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("Frame: empty dimensions");
  }

  std::uint8_t& at(int r, int c, int ch) { return rgb[(static_cast<std::size_t>(r) * cols + c) * 3 + ch]; }
  std::uint8_t at(int r, int c, int ch) const { return rgb[(static_cast<std::size_t>(r) * cols + c) * 3 + ch]; }
};

/// Resampled RGB image patch with continuous-valued pixels.
struct Patch {
  int rows = 0;
  int cols = 0;
  std::vector<double> rgb;

  Patch() = default;
  Patch(int rows_, int cols_) : rows(rows_), cols(cols_), rgb(static_cast<std::size_t>(rows_) * cols_ * 3, 0.0) {}

  double& at(int r, int c, int ch) { return rgb[(static_cast<std::size_t>(r) * cols + c) * 3 + ch]; }
  double at(int r, int c, int ch) const { return rgb[(static_cast<std::size_t>(r) * cols + c) * 3 + ch]; }
};

/// Thrown when the tracker lost the frame entirely (sampling center outside it).
struct TrackingLostError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Crops a (size * scale) window centered at (cx, cy) and resamples it to
/// out_cols x out_rows by bilinear interpolation. Pixels outside the frame
/// replicate the nearest border pixel.
Patch extract_patch(const Frame& frame, double cx, double cy, double size_w, double size_h,
                    double scale, int out_cols, int out_rows);

}  // namespace c2f
