#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "c2f/bench.hpp"
#include "c2f/ppm.hpp"

using namespace c2f;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

Frame solid_frame(int rows, int cols, std::uint8_t value) {
  Frame f(rows, cols);
  std::fill(f.rgb.begin(), f.rgb.end(), value);
  return f;
}

// A result whose predictions are the ground truth shifted and scaled per
// frame, for exact metric fixtures.
TrackResult result_from(const std::vector<BoundingBox>& boxes, double seconds_per_frame = 0.01) {
  TrackResult r;
  r.predicted = boxes;
  r.times.assign(boxes.size(), seconds_per_frame);
  r.low_confidence.assign(boxes.size(), false);
  return r;
}

}  // namespace

TEST_CASE("load_sequence: three-frame fixture with 1-indexed ground truth") {
  TempDir dir("c2f_seq_fixture");
  fs::create_directories(dir.path / "img");
  for (int i = 0; i < 3; ++i) {
    char name[16];
    std::snprintf(name, sizeof(name), "%04d.ppm", i + 1);
    write_ppm(dir.path / "img" / name, solid_frame(40, 60, static_cast<std::uint8_t>(50 + i)));
  }
  {
    std::ofstream gt(dir.path / "groundtruth_rect.txt");
    gt << "120,50,30,60\n";
    gt << "121 51 30 60\n";
    gt << "122,52,30,60\n";
  }

  const Sequence seq = load_sequence(dir.path);
  CHECK(seq.size() == 3);
  CHECK(seq.frame_paths.size() == 3);
  CHECK(seq.ground_truth[0].x == doctest::Approx(119.0));
  CHECK(seq.ground_truth[0].y == doctest::Approx(49.0));
  CHECK(seq.ground_truth[0].w == doctest::Approx(30.0));
  CHECK(seq.ground_truth[1].x == doctest::Approx(120.0));
  const Frame f = seq.frame(2);
  CHECK(f.rows == 40);
  CHECK(f.cols == 60);
  CHECK(f.at(0, 0, 0) == 52);
}

TEST_CASE("load_sequence: frame/annotation count mismatch is an error") {
  TempDir dir("c2f_seq_mismatch");
  fs::create_directories(dir.path / "img");
  write_ppm(dir.path / "img" / "0001.ppm", solid_frame(10, 10, 1));
  write_ppm(dir.path / "img" / "0002.ppm", solid_frame(10, 10, 2));
  {
    std::ofstream gt(dir.path / "groundtruth_rect.txt");
    gt << "5,5,3,3\n";
  }
  CHECK_THROWS_AS(load_sequence(dir.path), SequenceLoadError);

  TempDir missing("c2f_seq_missing");
  CHECK_THROWS_AS(load_sequence(missing.path), SequenceLoadError);
}

TEST_CASE("write_sequence then load_sequence round-trips the ground truth") {
  TempDir dir("c2f_seq_roundtrip");
  Sequence seq;
  seq.name = "roundtrip";
  seq.frames.push_back(solid_frame(20, 30, 10));
  seq.frames.push_back(solid_frame(20, 30, 20));
  seq.ground_truth.emplace_back(3.25, 4.5, 7.0, 8.0);
  seq.ground_truth.emplace_back(4.25, 5.5, 7.0, 8.0);

  write_sequence(dir.path, seq);
  const Sequence back = load_sequence(dir.path);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back.ground_truth[i].x == doctest::Approx(seq.ground_truth[i].x));
    CHECK(back.ground_truth[i].y == doctest::Approx(seq.ground_truth[i].y));
    CHECK(back.ground_truth[i].w == doctest::Approx(seq.ground_truth[i].w));
    CHECK(back.ground_truth[i].h == doctest::Approx(seq.ground_truth[i].h));
  }
  CHECK(back.frame(1).at(5, 5, 0) == 20);
}

TEST_CASE("success_auc fixtures over the 21-threshold grid") {
  Sequence seq;
  seq.ground_truth.assign(4, BoundingBox(10, 10, 20, 20));
  seq.frames.assign(4, Frame(1, 1));

  SUBCASE("perfect overlap: iou 1.0 beats 20 of 21 thresholds") {
    const TrackResult r = result_from(seq.ground_truth);
    CHECK(success_auc(r, seq) == doctest::Approx(20.0 / 21.0));
    const auto curve = success_curve(r, seq);
    REQUIRE(curve.size() == 21);
    for (int i = 0; i < 20; ++i) CHECK(curve[i] == doctest::Approx(1.0));
    CHECK(curve[20] == doctest::Approx(0.0));  // strict: iou > 1.0 never holds
  }

  SUBCASE("disjoint predictions score zero") {
    const TrackResult r = result_from(std::vector<BoundingBox>(4, BoundingBox(100, 100, 5, 5)));
    CHECK(success_auc(r, seq) == doctest::Approx(0.0));
  }

  SUBCASE("iou exactly 0.5 beats thresholds 0.00..0.45") {
    // Half-overlapping equal boxes: inter 200, union 600 -> iou = 1/3. Use a
    // box built for iou 0.5 instead: same corner, half the height -> inter
    // 200, union 400.
    const TrackResult r = result_from(std::vector<BoundingBox>(4, BoundingBox(10, 10, 20, 10)));
    CHECK(iou(r.predicted[0], seq.ground_truth[0]) == doctest::Approx(0.5));
    CHECK(success_auc(r, seq) == doctest::Approx(10.0 / 21.0));
  }

  SUBCASE("mixed frames average per threshold") {
    std::vector<BoundingBox> boxes(4, BoundingBox(10, 10, 20, 20));
    boxes[2] = BoundingBox(200, 200, 5, 5);  // one lost frame
    boxes[3] = BoundingBox(200, 200, 5, 5);
    const TrackResult r = result_from(boxes);
    CHECK(success_auc(r, seq) == doctest::Approx(0.5 * 20.0 / 21.0));
  }
}

TEST_CASE("success metrics are invariant to frame order") {
  Sequence seq;
  seq.ground_truth = {BoundingBox(10, 10, 20, 20), BoundingBox(40, 40, 20, 20)};
  seq.frames.assign(2, Frame(1, 1));
  TrackResult r = result_from({BoundingBox(12, 12, 20, 20), BoundingBox(60, 60, 20, 20)});
  const double auc = success_auc(r, seq);

  std::swap(seq.ground_truth[0], seq.ground_truth[1]);
  std::swap(r.predicted[0], r.predicted[1]);
  CHECK(success_auc(r, seq) == doctest::Approx(auc));
}

TEST_CASE("precision_at counts center errors within the threshold inclusively") {
  Sequence seq;
  seq.ground_truth.assign(4, BoundingBox(0, 0, 10, 10));
  seq.frames.assign(4, Frame(1, 1));
  std::vector<BoundingBox> boxes;
  for (double shift : {5.0, 15.0, 25.0, 35.0}) boxes.emplace_back(shift, 0.0, 10.0, 10.0);
  const TrackResult r = result_from(boxes);
  CHECK(precision_at(r, seq, 20.0) == doctest::Approx(0.5));
  CHECK(precision_at(r, seq, 15.0) == doctest::Approx(0.5));  // inclusive boundary
  CHECK(precision_at(r, seq, 14.9) == doctest::Approx(0.25));
  CHECK(precision_at(r, seq, 40.0) == doctest::Approx(1.0));
}

TEST_CASE("fps counts only frames with positive recorded time") {
  TrackResult r;
  r.predicted.assign(100, BoundingBox(0, 0, 1, 1));
  r.times.assign(100, 0.02);
  CHECK(fps(r) == doctest::Approx(50.0));

  TrackResult one;
  one.predicted.assign(1, BoundingBox(0, 0, 1, 1));
  one.times.assign(1, 0.04);
  CHECK(fps(one) == doctest::Approx(25.0));

  TrackResult with_init;
  with_init.predicted.assign(3, BoundingBox(0, 0, 1, 1));
  with_init.times = {0.0, 0.01, 0.01};  // init frame excluded
  CHECK(fps(with_init) == doctest::Approx(100.0));

  TrackResult zeros;
  zeros.predicted.assign(2, BoundingBox(0, 0, 1, 1));
  zeros.times = {0.0, 0.0};
  CHECK_THROWS_AS(fps(zeros), std::invalid_argument);
  TrackResult empty;
  CHECK_THROWS_AS(fps(empty), std::invalid_argument);
}

TEST_CASE("synth_sequence: static motion keeps the box and pixels fixed") {
  SynthSpec spec;
  spec.width = 80;
  spec.height = 60;
  spec.frame_count = 5;
  spec.target_x = 20;
  spec.target_y = 15;
  spec.target_w = 16;
  spec.target_h = 16;
  const Sequence seq = synth_sequence(spec);
  REQUIRE(seq.size() == 5);
  for (const auto& b : seq.ground_truth) {
    CHECK(b.x == doctest::Approx(20.0));
    CHECK(b.y == doctest::Approx(15.0));
  }
  CHECK(seq.frame(0).rgb == seq.frame(4).rgb);

  // Target pixels differ from the background.
  const Frame f = seq.frame(0);
  CHECK(f.at(18, 24, 0) != f.at(2, 2, 0));
}

TEST_CASE("synth_sequence: linear motion advances the box by the velocity") {
  SynthSpec spec;
  spec.width = 200;
  spec.height = 80;
  spec.frame_count = 10;
  spec.target_x = 10;
  spec.target_y = 20;
  spec.target_w = 20;
  spec.target_h = 20;
  spec.motion = "linear";
  spec.velocity_x = 3.0;
  spec.velocity_y = 1.5;
  const Sequence seq = synth_sequence(spec);
  for (int i = 0; i < 10; ++i) {
    CHECK(seq.ground_truth[i].x == doctest::Approx(10.0 + 3.0 * i));
    CHECK(seq.ground_truth[i].y == doctest::Approx(20.0 + 1.5 * i));
  }
}

TEST_CASE("synth_sequence: identical seeds give identical pixels, different seeds differ") {
  SynthSpec spec;
  spec.width = 64;
  spec.height = 48;
  spec.frame_count = 3;
  spec.noise = 8.0;
  spec.target_x = 20;
  spec.target_y = 14;
  spec.target_w = 16;
  spec.target_h = 16;
  const Sequence a = synth_sequence(spec);
  const Sequence b = synth_sequence(spec);
  for (int i = 0; i < 3; ++i) CHECK(a.frame(i).rgb == b.frame(i).rgb);

  spec.seed = 99;
  const Sequence c = synth_sequence(spec);
  CHECK(a.frame(0).rgb != c.frame(0).rgb);
}

TEST_CASE("synth_sequence rejects motion that leaves the frame") {
  SynthSpec spec;
  spec.width = 60;
  spec.height = 60;
  spec.frame_count = 30;
  spec.target_x = 30;
  spec.target_y = 20;
  spec.target_w = 16;
  spec.target_h = 16;
  spec.motion = "linear";
  spec.velocity_x = 4.0;
  CHECK_THROWS_AS(synth_sequence(spec), SynthSpecError);

  spec.motion = "sideways";
  CHECK_THROWS_AS(synth_sequence(spec), SynthSpecError);
}
