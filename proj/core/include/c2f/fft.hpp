#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "c2f/features.hpp"

namespace c2f {

/// Dense complex 2-D grid (one frequency-domain channel).
struct ComplexGrid {
  int rows = 0;
  int cols = 0;
  std::vector<std::complex<double>> v;

  ComplexGrid() = default;
  ComplexGrid(int rows_, int cols_) : rows(rows_), cols(cols_), v(static_cast<std::size_t>(rows_) * cols_) {}

  std::complex<double>& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
  std::complex<double> at(int r, int c) const { return v[static_cast<std::size_t>(r) * cols + c]; }
};

/// Forward 2-D DFT of a real grid (row-major, rows x cols).
ComplexGrid fft2(const double* data, int rows, int cols);

/// Inverse 2-D DFT; returns the real part, normalized by 1/(rows*cols).
std::vector<double> ifft2_real(const ComplexGrid& g);

/// Per-channel forward DFT of a feature stack.
std::vector<ComplexGrid> to_spectrum(const FeatureStack& stack);

}  // namespace c2f
