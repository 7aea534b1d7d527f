#include "c2f/ppm.hpp"

#include <fstream>

namespace c2f {

void write_ppm(const std::filesystem::path& path, const Frame& frame) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ImageFileError("write_ppm: cannot open " + path.string());
  f << "P6\n" << frame.cols << ' ' << frame.rows << "\n255\n";
  f.write(reinterpret_cast<const char*>(frame.rgb.data()), static_cast<std::streamsize>(frame.rgb.size()));
  if (!f) throw ImageFileError("write_ppm: write failed for " + path.string());
}

Frame read_ppm(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ImageFileError("read_ppm: cannot open " + path.string());
  std::string magic;
  int cols = 0, rows = 0, maxval = 0;
  f >> magic >> cols >> rows >> maxval;
  if (magic != "P6" || maxval != 255 || cols < 1 || rows < 1)
    throw ImageFileError("read_ppm: unsupported or malformed header in " + path.string());
  f.get();  // single whitespace after the header
  Frame frame(rows, cols);
  f.read(reinterpret_cast<char*>(frame.rgb.data()), static_cast<std::streamsize>(frame.rgb.size()));
  if (!f) throw ImageFileError("read_ppm: truncated pixel data in " + path.string());
  return frame;
}

}  // namespace c2f
