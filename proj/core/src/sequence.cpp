#include "c2f/bench.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "c2f/ppm.hpp"

namespace c2f {

Frame Sequence::frame(int index) const {
  if (!frames.empty()) return frames.at(static_cast<std::size_t>(index));
  Frame f = read_ppm(frame_paths.at(static_cast<std::size_t>(index)));
  f.frame_index = index + 1;
  return f;
}

namespace {

BoundingBox parse_gt_line(const std::string& line, int line_number, const std::filesystem::path& file) {
  std::string cleaned = line;
  std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
  std::istringstream in(cleaned);
  double x, y, w, h;
  if (!(in >> x >> y >> w >> h))
    throw SequenceLoadError("load_sequence: unparseable ground-truth line " +
                            std::to_string(line_number) + " in " + file.string());
  try {
    return BoundingBox(x - 1.0, y - 1.0, w, h);  // 1-indexed origin to 0-indexed
  } catch (const std::invalid_argument&) {
    throw SequenceLoadError("load_sequence: degenerate box on line " + std::to_string(line_number) +
                            " in " + file.string());
  }
}

}  // namespace

Sequence load_sequence(const std::filesystem::path& dir) {
  const std::filesystem::path img_dir = dir / "img";
  const std::filesystem::path gt_file = dir / "groundtruth_rect.txt";
  if (!std::filesystem::is_directory(img_dir))
    throw SequenceLoadError("load_sequence: missing image directory " + img_dir.string());
  if (!std::filesystem::is_regular_file(gt_file))
    throw SequenceLoadError("load_sequence: missing ground-truth file " + gt_file.string());

  Sequence seq;
  seq.name = dir.filename().string();
  for (const auto& entry : std::filesystem::directory_iterator(img_dir))
    if (entry.is_regular_file()) seq.frame_paths.push_back(entry.path());
  std::sort(seq.frame_paths.begin(), seq.frame_paths.end());

  std::ifstream f(gt_file);
  std::string line;
  int line_number = 0;
  while (std::getline(f, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    seq.ground_truth.push_back(parse_gt_line(line, line_number, gt_file));
  }

  if (seq.ground_truth.size() != seq.frame_paths.size())
    throw SequenceLoadError("load_sequence: " + std::to_string(seq.frame_paths.size()) +
                            " frames but " + std::to_string(seq.ground_truth.size()) +
                            " ground-truth lines in " + dir.string());
  return seq;
}

void write_sequence(const std::filesystem::path& dir, const Sequence& seq) {
  std::filesystem::create_directories(dir / "img");
  std::ofstream gt(dir / "groundtruth_rect.txt");
  gt.precision(17);
  for (const auto& box : seq.ground_truth)
    gt << box.x + 1.0 << ',' << box.y + 1.0 << ',' << box.w << ',' << box.h << '\n';
  for (std::size_t i = 0; i < seq.size(); ++i) {
    char name[16];
    std::snprintf(name, sizeof(name), "%04zu.ppm", i + 1);
    write_ppm(dir / "img" / name, seq.frame(static_cast<int>(i)));
  }
}

}  // namespace c2f
