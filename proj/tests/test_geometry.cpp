#include <doctest.h>

#include <random>

#include "c2f/geometry.hpp"

using c2f::BoundingBox;

namespace {

// Independent pixel-rasterized area counting on a fine grid.
double rasterized_giou(const BoundingBox& a, const BoundingBox& b, double step = 0.05) {
  const double x0 = std::min(a.x, b.x), x1 = std::max(a.right(), b.right());
  const double y0 = std::min(a.y, b.y), y1 = std::max(a.bottom(), b.bottom());
  auto inside = [](const BoundingBox& box, double x, double y) {
    return x >= box.x && x < box.right() && y >= box.y && y < box.bottom();
  };
  long long inter = 0, uni = 0, total = 0;
  for (double y = y0 + step / 2; y < y1; y += step)
    for (double x = x0 + step / 2; x < x1; x += step) {
      const bool ia = inside(a, x, y), ib = inside(b, x, y);
      inter += ia && ib;
      uni += ia || ib;
      ++total;
    }
  const double cell = step * step;
  const double inter_area = inter * cell, uni_area = uni * cell, enc_area = total * cell;
  return inter_area / uni_area - (enc_area - uni_area) / enc_area;
}

// Exact corner-form arithmetic, written independently of the implementation.
double exact_giou(const BoundingBox& a, const BoundingBox& b) {
  const double ax1 = a.x, ay1 = a.y, ax2 = a.x + a.w, ay2 = a.y + a.h;
  const double bx1 = b.x, by1 = b.y, bx2 = b.x + b.w, by2 = b.y + b.h;
  const double iw = std::max(0.0, std::min(ax2, bx2) - std::max(ax1, bx1));
  const double ih = std::max(0.0, std::min(ay2, by2) - std::max(ay1, by1));
  const double inter = iw * ih;
  const double uni = (ax2 - ax1) * (ay2 - ay1) + (bx2 - bx1) * (by2 - by1) - inter;
  const double enc = (std::max(ax2, bx2) - std::min(ax1, bx1)) * (std::max(ay2, by2) - std::min(ay1, by1));
  return inter / uni - (enc - uni) / enc;
}

BoundingBox random_box(std::mt19937_64& rng, double span, double max_side) {
  std::uniform_real_distribution<double> pos(-span, span);
  std::uniform_real_distribution<double> side(0.5, max_side);
  return BoundingBox(pos(rng), pos(rng), side(rng), side(rng));
}

}  // namespace

TEST_CASE("BoundingBox rejects degenerate boxes") {
  CHECK_THROWS_AS(BoundingBox(0, 0, 0, 10), std::invalid_argument);
  CHECK_THROWS_AS(BoundingBox(0, 0, 10, -1), std::invalid_argument);
  const BoundingBox b(1, 2, 3, 4);
  CHECK(b.area() == doctest::Approx(12.0));
  CHECK(b.cx() == doctest::Approx(2.5));
}

TEST_CASE("iou examples") {
  const BoundingBox a(0, 0, 10, 10);
  CHECK(c2f::iou(a, a) == doctest::Approx(1.0));
  CHECK(c2f::iou(BoundingBox(0, 0, 2, 2), BoundingBox(5, 5, 2, 2)) == doctest::Approx(0.0));
  CHECK(c2f::iou(BoundingBox(0, 0, 4, 4), BoundingBox(1, 1, 2, 2)) == doctest::Approx(0.25));
}

TEST_CASE("giou examples") {
  const BoundingBox a(0, 0, 10, 10);
  CHECK(c2f::giou(a, a) == doctest::Approx(1.0));
  CHECK(c2f::giou(BoundingBox(0, 0, 2, 2), BoundingBox(2, 2, 2, 2)) == doctest::Approx(-0.5));
  // Nested boxes: enclosing equals the outer box, so GIoU = IoU.
  CHECK(c2f::giou(BoundingBox(0, 0, 4, 4), BoundingBox(1, 1, 2, 2)) == doctest::Approx(0.25));
}

TEST_CASE("center_error examples") {
  const BoundingBox a(0, 0, 10, 10);
  CHECK(c2f::center_error(a, a) == doctest::Approx(0.0));
  CHECK(c2f::center_error(BoundingBox(-1.5, -2, 3, 4), BoundingBox(1.5, 2, 3, 4)) == doctest::Approx(5.0));
  CHECK(c2f::center_error(BoundingBox(0, 0, 10, 10), BoundingBox(10, 0, 10, 10)) == doctest::Approx(10.0));
}

TEST_CASE("giou bounds, symmetry, and relation to iou") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const BoundingBox a = random_box(rng, 20, 15);
    const BoundingBox b = random_box(rng, 20, 15);
    const double g = c2f::giou(a, b);
    const double o = c2f::iou(a, b);
    CHECK(g <= o + 1e-12);
    CHECK(g >= -1.0);
    CHECK(g <= 1.0);
    CHECK(o >= 0.0);
    CHECK(o <= 1.0);
    CHECK(c2f::giou(a, b) == doctest::Approx(c2f::giou(b, a)));
    CHECK(c2f::iou(a, b) == doctest::Approx(c2f::iou(b, a)));
    CHECK(c2f::center_error(a, b) == doctest::Approx(c2f::center_error(b, a)));
  }
}

TEST_CASE("giou equals iou for nested boxes") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 0.4);
  for (int i = 0; i < 1000; ++i) {
    const BoundingBox outer = random_box(rng, 10, 12);
    const double ix = outer.x + u(rng) * outer.w;
    const double iy = outer.y + u(rng) * outer.h;
    const BoundingBox inner(ix, iy, u(rng) * outer.w, u(rng) * outer.h);
    CHECK(c2f::giou(outer, inner) == doctest::Approx(c2f::iou(outer, inner)).epsilon(1e-12));
  }
}

TEST_CASE("giou matches the pixel-rasterized oracle on integer boxes") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pos(0, 12);
  std::uniform_int_distribution<int> side(1, 8);
  for (int i = 0; i < 1000; ++i) {
    const BoundingBox a(pos(rng), pos(rng), side(rng), side(rng));
    const BoundingBox b(pos(rng), pos(rng), side(rng), side(rng));
    CHECK(std::abs(c2f::giou(a, b) - rasterized_giou(a, b)) < 1e-3);
  }
}

TEST_CASE("giou matches exact arithmetic on 10000 random pairs") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10000; ++i) {
    const BoundingBox a = random_box(rng, 50, 30);
    const BoundingBox b = random_box(rng, 50, 30);
    CHECK(std::abs(c2f::giou(a, b) - exact_giou(a, b)) < 1e-9);
  }
}
