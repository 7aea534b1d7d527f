#include "c2f/bench.hpp"

#include <algorithm>
#include <cmath>

namespace c2f {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double hash01(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  const std::uint64_t h = mix64(seed ^ mix64(a ^ mix64(b ^ mix64(c))));
  return static_cast<double>(h >> 11) / 9007199254740992.0;  // [0, 1)
}

// Overlap of unit pixel [px, px+1] x [py, py+1] with the target box.
double coverage(double px, double py, const BoundingBox& box) {
  const double ox = std::min(px + 1.0, box.right()) - std::max(px, box.x);
  const double oy = std::min(py + 1.0, box.bottom()) - std::max(py, box.y);
  if (ox <= 0.0 || oy <= 0.0) return 0.0;
  return ox * oy;
}

BoundingBox box_at(const SynthSpec& spec, int frame) {
  const BoundingBox start(spec.target_x, spec.target_y, spec.target_w, spec.target_h);
  if (spec.motion == "static") return start;
  if (spec.motion == "linear")
    return BoundingBox(start.x + spec.velocity_x * frame, start.y + spec.velocity_y * frame,
                       start.w, start.h);
  if (spec.motion == "jump") {
    if (spec.jump_period < 1) throw SynthSpecError("synth_sequence: jump_period must be >= 1");
    const int jumps = frame / spec.jump_period;
    return BoundingBox(start.x + jumps * spec.jump_dx, start.y + jumps * spec.jump_dy, start.w,
                       start.h);
  }
  if (spec.motion == "scale") {
    const double f = std::pow(1.0 + spec.scale_rate, frame);
    const double w = start.w * f, h = start.h * f;
    return BoundingBox(start.cx() - 0.5 * w, start.cy() - 0.5 * h, w, h);
  }
  throw SynthSpecError("synth_sequence: unknown motion \"" + spec.motion + "\"");
}

}  // namespace

Sequence synth_sequence(const SynthSpec& spec) {
  if (spec.width < 8 || spec.height < 8) throw SynthSpecError("synth_sequence: frame too small (width/height)");
  if (spec.frame_count < 1) throw SynthSpecError("synth_sequence: frame_count must be >= 1");

  Sequence seq;
  seq.name = spec.name;
  seq.frames.reserve(spec.frame_count);
  seq.ground_truth.reserve(spec.frame_count);

  for (int i = 0; i < spec.frame_count; ++i) {
    const BoundingBox box = box_at(spec, i);
    if (box.x < 0.0 || box.y < 0.0 || box.right() > spec.width || box.bottom() > spec.height)
      throw SynthSpecError("synth_sequence: motion schedule drives the target out of frame at frame " +
                           std::to_string(i + 1));

    Frame frame(spec.height, spec.width, i + 1);
    for (int r = 0; r < spec.height; ++r) {
      for (int c = 0; c < spec.width; ++c) {
        // Static background texture (seeded), target checker anchored to the box.
        double value = 96.0 + 48.0 * hash01(spec.seed, static_cast<std::uint64_t>(r),
                                            static_cast<std::uint64_t>(c), 0xb6c0u);
        const double alpha = coverage(c, r, box);
        if (alpha > 0.0) {
          const int checker = (static_cast<int>(std::floor((c + 0.5 - box.x) / 8.0)) +
                               static_cast<int>(std::floor((r + 0.5 - box.y) / 8.0))) &
                              1;
          const double target_value = checker ? 220.0 : 52.0;
          value = (1.0 - alpha) * value + alpha * target_value;
        }
        if (spec.noise > 0.0)
          value += spec.noise * (2.0 * hash01(spec.seed, static_cast<std::uint64_t>(r),
                                              static_cast<std::uint64_t>(c),
                                              0xf00du + static_cast<std::uint64_t>(i)) -
                                 1.0);
        const auto byte = static_cast<std::uint8_t>(std::clamp(value, 0.0, 255.0));
        frame.at(r, c, 0) = byte;
        frame.at(r, c, 1) = byte;
        frame.at(r, c, 2) = byte;
      }
    }
    seq.frames.push_back(std::move(frame));
    seq.ground_truth.push_back(box);
  }
  return seq;
}

}  // namespace c2f
