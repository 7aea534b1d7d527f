#pragma once

#include <filesystem>

#include "c2f/image.hpp"

namespace c2f {

/// Binary PPM (P6, 8-bit) frame I/O.
void write_ppm(const std::filesystem::path& path, const Frame& frame);
Frame read_ppm(const std::filesystem::path& path);

struct ImageFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace c2f
