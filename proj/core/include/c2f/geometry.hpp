#pragma once

#include <cmath>
#include <stdexcept>

namespace c2f {

/// Axis-aligned rectangle in continuous left-top-width-height form.
/// Zero-area boxes are rejected at construction.
struct BoundingBox {
  double x;
  double y;
  double w;
  double h;

  BoundingBox(double x_, double y_, double w_, double h_) : x(x_), y(y_), w(w_), h(h_) {
    if (!(w > 0.0) || !(h > 0.0))
      throw std::invalid_argument("BoundingBox: width and height must be positive");
  }

  double area() const { return w * h; }
  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double cx() const { return x + 0.5 * w; }
  double cy() const { return y + 0.5 * h; }
  double diagonal() const { return std::hypot(w, h); }

  bool operator==(const BoundingBox&) const = default;
};

/// Target state: box plus the selected scale-pyramid level.
struct TargetState {
  BoundingBox box;
  int scale_index;
};

/// Intersection over union, in [0, 1]. 0 for disjoint boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Generalized IoU, in [-1, 1]: IoU minus the normalized empty area of the
/// smallest enclosing box. Stays informative for disjoint boxes.
double giou(const BoundingBox& a, const BoundingBox& b);

/// Euclidean distance between box centers, in pixels.
double center_error(const BoundingBox& a, const BoundingBox& b);

}  // namespace c2f
