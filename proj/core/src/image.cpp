#include "c2f/image.hpp"

#include <algorithm>
#include <cmath>

namespace c2f {

Patch extract_patch(const Frame& frame, double cx, double cy, double size_w, double size_h,
                    double scale, int out_cols, int out_rows) {
  if (!(scale > 0.0)) throw std::invalid_argument("extract_patch: scale must be positive");
  if (out_cols < 1 || out_rows < 1) throw std::invalid_argument("extract_patch: empty output size");
  if (cx < 0.0 || cx > frame.cols - 1 || cy < 0.0 || cy > frame.rows - 1)
    throw TrackingLostError("extract_patch: center outside frame bounds");

  const double win_w = size_w * scale;
  const double win_h = size_h * scale;
  const double x0 = cx - 0.5 * win_w;
  const double y0 = cy - 0.5 * win_h;

  Patch out(out_rows, out_cols);
  for (int r = 0; r < out_rows; ++r) {
    const double sy = y0 + (r + 0.5) * win_h / out_rows - 0.5;
    const int iy = static_cast<int>(std::floor(sy));
    const double fy = sy - iy;
    const int y1 = std::clamp(iy, 0, frame.rows - 1);
    const int y2 = std::clamp(iy + 1, 0, frame.rows - 1);
    for (int c = 0; c < out_cols; ++c) {
      const double sx = x0 + (c + 0.5) * win_w / out_cols - 0.5;
      const int ix = static_cast<int>(std::floor(sx));
      const double fx = sx - ix;
      const int x1 = std::clamp(ix, 0, frame.cols - 1);
      const int x2 = std::clamp(ix + 1, 0, frame.cols - 1);
      for (int ch = 0; ch < 3; ++ch) {
        const double v00 = frame.at(y1, x1, ch);
        const double v01 = frame.at(y1, x2, ch);
        const double v10 = frame.at(y2, x1, ch);
        const double v11 = frame.at(y2, x2, ch);
        out.at(r, c, ch) = (1.0 - fy) * ((1.0 - fx) * v00 + fx * v01) + fy * ((1.0 - fx) * v10 + fx * v11);
      }
    }
  }
  return out;
}

}  // namespace c2f
