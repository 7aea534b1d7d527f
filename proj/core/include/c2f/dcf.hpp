#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "c2f/fft.hpp"
#include "c2f/geometry.hpp"

namespace c2f {

/// Desired-response map: wrapped Gaussian with unit peak.
struct GaussianLabel {
  int rows = 0;
  int cols = 0;
  double sigma = 1.0;  // cells
  int peak_r = 0;
  int peak_c = 0;
  std::vector<double> map;
};

/// Per-channel complex filter coefficients.
struct FrequencyFilter {
  std::vector<ComplexGrid> channels;

  int channel_count() const { return static_cast<int>(channels.size()); }
  int rows() const { return channels.empty() ? 0 : channels.front().rows; }
  int cols() const { return channels.empty() ? 0 : channels.front().cols; }
};

/// Weighted training-sample buffer. Weights stay normalized to sum 1; when
/// full, the lowest-weight sample is evicted first.
struct SampleMemory {
  struct Entry {
    std::vector<ComplexGrid> spectrum;
    double weight;
  };

  explicit SampleMemory(int capacity_) : capacity(capacity_) {}

  int capacity;
  std::vector<Entry> samples;

  int count() const { return static_cast<int>(samples.size()); }
};

struct DcfConfig {
  double lambda = 0.01;          // Tikhonov regularization scalar
  int cg_init_iterations = 50;   // CG budget when training from scratch
  int cg_iterations = 5;         // per-frame CG budget (warm-started)
  double cg_tolerance = 1e-6;    // relative residual-norm stop
  int memory_capacity = 30;
  double sample_decay = 0.02;
  double label_sigma_factor = 1.0 / 16.0;  // fraction of the grid diagonal
  double learning_rate = 0.01;
};

/// Real correlation response over the search grid.
struct ResponseMap {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;

  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
};

/// map[p] = exp(-d(p, peak)^2 / (2 sigma^2)) with circular wrap-around distance.
GaussianLabel gaussian_label(int rows, int cols, double sigma, int peak_r, int peak_c);

/// Inserts a sample: existing weights scaled by (1 - decay), the new sample
/// enters with weight decay, weights renormalized. First sample gets weight 1.
void update_memory(SampleMemory& memory, std::vector<ComplexGrid> spectrum, double decay);

/// Solves the weighted multi-channel ridge regression in the frequency domain
/// by conjugate-residual iterations on the per-bin normal equations (residual
/// norm non-increasing per step), optionally warm-started from a previous
/// filter.
FrequencyFilter train_filter(const SampleMemory& memory, const GaussianLabel& label,
                             const DcfConfig& config, const FrequencyFilter* warm_start = nullptr,
                             int iteration_budget = -1);

/// response = real(ifft(sum_i conj(X_i) .* W_i)); equals circular
/// cross-correlation summed over channels in the spatial domain.
ResponseMap detect(const FrequencyFilter& filter, const std::vector<ComplexGrid>& spectra);

/// Element-wise (1 - lr) * previous + lr * fresh.
FrequencyFilter update_filter(const FrequencyFilter& previous, const FrequencyFilter& fresh, double lr);

/// Geometry needed to map a response-grid peak back to frame pixels.
struct ScaleContext {
  BoundingBox base_box;             // last target state
  std::vector<double> scale_factors;
  double window_w = 0.0;            // search window at scale 1, pixels
  double window_h = 0.0;
  int out_cols = 0;                 // resampled patch size, pixels
  int out_rows = 0;
  int cell_size = 1;
};

struct ScaleSelection {
  TargetState state;
  double peak = 0.0;
};

/// Global maximum across pyramid levels; exact ties prefer the scale factor
/// closest to 1.0, then the smallest linear grid index (which maps to zero
/// displacement, i.e. the center position).
ScaleSelection select_scale(const std::vector<ResponseMap>& responses, const ScaleContext& ctx);

}  // namespace c2f
