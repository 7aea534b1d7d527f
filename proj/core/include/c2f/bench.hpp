#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "c2f/geometry.hpp"
#include "c2f/image.hpp"

namespace c2f {

/// An annotated tracking sequence. Frames either live on disk (frame_paths)
/// or in memory (frames); ground truth is stored 0-indexed internally.
struct Sequence {
  std::string name;
  std::vector<std::filesystem::path> frame_paths;
  std::vector<BoundingBox> ground_truth;
  std::vector<Frame> frames;  // populated for in-memory (synthetic) sequences
  std::vector<std::string> attributes;

  std::size_t size() const { return ground_truth.size(); }
  Frame frame(int index) const;
};

struct TrackResult {
  std::vector<BoundingBox> predicted;
  std::vector<double> times;  // seconds per frame, excluding init
  std::vector<bool> low_confidence;
};

struct SequenceLoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Loads an OTB-style directory: img/ + groundtruth_rect.txt with one
/// "x,y,w,h" line per frame (comma or whitespace separated, 1-indexed pixel
/// origin, converted to 0-indexed internally). Frames pair with
/// lexicographically sorted image files.
Sequence load_sequence(const std::filesystem::path& dir);

/// Writes a sequence to the same OTB-style layout (PPM frames; ground truth
/// written back 1-indexed).
void write_sequence(const std::filesystem::path& dir, const Sequence& seq);

/// Mean success rate over thresholds t = 0.00, 0.05, ..., 1.00 with the
/// strict iou > t convention (21 points).
double success_auc(const TrackResult& result, const Sequence& seq);

/// Per-threshold success-curve points (21 values).
std::vector<double> success_curve(const TrackResult& result, const Sequence& seq);

/// Fraction of frames with center error <= threshold pixels.
double precision_at(const TrackResult& result, const Sequence& seq, double threshold = 20.0);

/// Frames divided by total tracking wall time (init excluded).
double fps(const TrackResult& result);

/// Deterministic synthetic sequence with exact ground truth.
struct SynthSpec {
  int width = 240;
  int height = 160;
  int frame_count = 100;
  double target_x = 60.0;  // initial left-top
  double target_y = 60.0;
  double target_w = 32.0;
  double target_h = 32.0;
  std::string motion = "static";  // static | linear | jump | scale
  double velocity_x = 0.0;        // linear: pixels per frame
  double velocity_y = 0.0;
  int jump_period = 10;           // jump: frames between jumps
  double jump_dx = 8.0;
  double jump_dy = 0.0;
  double scale_rate = 0.0;        // scale: multiplicative growth per frame
  double noise = 0.0;             // per-frame additive pixel noise amplitude
  std::uint64_t seed = 1;
  std::string name = "synthetic";
};

struct SynthSpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Sequence synth_sequence(const SynthSpec& spec);

}  // namespace c2f
