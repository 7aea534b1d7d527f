#include "c2f/dcf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace c2f {

GaussianLabel gaussian_label(int rows, int cols, double sigma, int peak_r, int peak_c) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_label: sigma must be positive");
  if (peak_r < 0 || peak_r >= rows || peak_c < 0 || peak_c >= cols)
    throw std::invalid_argument("gaussian_label: peak outside grid");
  GaussianLabel label;
  label.rows = rows;
  label.cols = cols;
  label.sigma = sigma;
  label.peak_r = peak_r;
  label.peak_c = peak_c;
  label.map.resize(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    const int ar = std::abs(r - peak_r);
    const double dr = std::min(ar, rows - ar);
    for (int c = 0; c < cols; ++c) {
      const int ac = std::abs(c - peak_c);
      const double dc = std::min(ac, cols - ac);
      label.map[static_cast<std::size_t>(r) * cols + c] =
          std::exp(-(dr * dr + dc * dc) / (2.0 * sigma * sigma));
    }
  }
  return label;
}

void update_memory(SampleMemory& memory, std::vector<ComplexGrid> spectrum, double decay) {
  if (memory.samples.empty()) {
    memory.samples.push_back({std::move(spectrum), 1.0});
    return;
  }
  if (memory.count() >= memory.capacity) {
    auto lowest = std::min_element(memory.samples.begin(), memory.samples.end(),
                                   [](const auto& a, const auto& b) { return a.weight < b.weight; });
    memory.samples.erase(lowest);
  }
  for (auto& entry : memory.samples) entry.weight *= 1.0 - decay;
  memory.samples.push_back({std::move(spectrum), decay});
  double sum = 0.0;
  for (const auto& entry : memory.samples) sum += entry.weight;
  for (auto& entry : memory.samples) entry.weight /= sum;
}

namespace {

using CVec = std::vector<std::complex<double>>;

double real_dot(const CVec& a, const CVec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return s;
}

// Applies the per-bin normal-equations operator:
// (A w)_{i,k} = sum_j mu_j X_{ji,k} (sum_i' conj(X_{ji',k}) w_{i',k}) + lambda^2 w_{i,k}
void apply_gram(const SampleMemory& memory, double lambda_sq, int channels, std::size_t bins,
                const CVec& w, CVec& out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = lambda_sq * w[i];
  for (const auto& entry : memory.samples) {
    for (std::size_t k = 0; k < bins; ++k) {
      std::complex<double> t{0.0, 0.0};
      for (int i = 0; i < channels; ++i) t += std::conj(entry.spectrum[i].v[k]) * w[i * bins + k];
      t *= entry.weight;
      for (int i = 0; i < channels; ++i) out[i * bins + k] += entry.spectrum[i].v[k] * t;
    }
  }
}

}  // namespace

FrequencyFilter train_filter(const SampleMemory& memory, const GaussianLabel& label,
                             const DcfConfig& config, const FrequencyFilter* warm_start,
                             int iteration_budget) {
  if (memory.samples.empty()) throw std::invalid_argument("train_filter: empty sample memory");
  const int channels = static_cast<int>(memory.samples.front().spectrum.size());
  const int rows = memory.samples.front().spectrum.front().rows;
  const int cols = memory.samples.front().spectrum.front().cols;
  if (rows != label.rows || cols != label.cols)
    throw std::invalid_argument("train_filter: label dimensions do not match samples");
  for (const auto& entry : memory.samples)
    if (static_cast<int>(entry.spectrum.size()) != channels || entry.spectrum.front().rows != rows ||
        entry.spectrum.front().cols != cols)
      throw std::invalid_argument("train_filter: inconsistent sample dimensions");

  const std::size_t bins = static_cast<std::size_t>(rows) * cols;
  const std::size_t n = static_cast<std::size_t>(channels) * bins;
  const double lambda_sq = config.lambda * config.lambda;

  const ComplexGrid label_spec = fft2(label.map.data(), rows, cols);

  // Right-hand side b_{i,k} = sum_j mu_j X_{ji,k} Y_k.
  CVec b(n, {0.0, 0.0});
  for (const auto& entry : memory.samples)
    for (int i = 0; i < channels; ++i)
      for (std::size_t k = 0; k < bins; ++k)
        b[i * bins + k] += entry.weight * entry.spectrum[i].v[k] * label_spec.v[k];

  CVec w(n, {0.0, 0.0});
  if (warm_start) {
    if (warm_start->channel_count() != channels || warm_start->rows() != rows || warm_start->cols() != cols)
      throw std::invalid_argument("train_filter: warm start dimensions do not match samples");
    for (int i = 0; i < channels; ++i)
      std::copy(warm_start->channels[i].v.begin(), warm_start->channels[i].v.end(), w.begin() + i * bins);
  }

  const int max_iterations =
      iteration_budget >= 0 ? iteration_budget
                            : (warm_start ? config.cg_iterations : config.cg_init_iterations);

  // Conjugate-residual iteration on the Hermitian positive-definite per-bin
  // systems: same Krylov spaces as plain conjugate gradients but minimizes
  // the residual norm, so ||r|| is non-increasing per iteration.
  CVec r(n), p(n), ar(n), ap(n);
  apply_gram(memory, lambda_sq, channels, bins, w, ar);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ar[i];
  p = r;
  apply_gram(memory, lambda_sq, channels, bins, r, ar);
  ap = ar;
  double rho = real_dot(r, ar);
  double rr = real_dot(r, r);
  const double stop = config.cg_tolerance * config.cg_tolerance * rr;

  for (int iter = 0; iter < max_iterations && rr > stop && rho > 0.0; ++iter) {
    const double denom = real_dot(ap, ap);
    if (denom <= 0.0) break;
    const double alpha = rho / denom;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    apply_gram(memory, lambda_sq, channels, bins, r, ar);
    const double rho_next = real_dot(r, ar);
    rr = real_dot(r, r);
    if (rho_next <= 0.0) break;
    const double beta = rho_next / rho;
    rho = rho_next;
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = r[i] + beta * p[i];
      ap[i] = ar[i] + beta * ap[i];
    }
  }

  FrequencyFilter filter;
  filter.channels.reserve(channels);
  for (int i = 0; i < channels; ++i) {
    ComplexGrid g(rows, cols);
    std::copy(w.begin() + i * bins, w.begin() + (i + 1) * bins, g.v.begin());
    filter.channels.push_back(std::move(g));
  }
  return filter;
}

ResponseMap detect(const FrequencyFilter& filter, const std::vector<ComplexGrid>& spectra) {
  if (filter.channel_count() != static_cast<int>(spectra.size()))
    throw std::invalid_argument("detect: channel count mismatch");
  const int rows = filter.rows();
  const int cols = filter.cols();
  ComplexGrid sum(rows, cols);
  for (int i = 0; i < filter.channel_count(); ++i) {
    if (spectra[i].rows != rows || spectra[i].cols != cols)
      throw std::invalid_argument("detect: spectrum dimensions mismatch");
    for (std::size_t k = 0; k < sum.v.size(); ++k)
      sum.v[k] += std::conj(spectra[i].v[k]) * filter.channels[i].v[k];
  }
  ResponseMap map;
  map.rows = rows;
  map.cols = cols;
  map.values = ifft2_real(sum);
  return map;
}

FrequencyFilter update_filter(const FrequencyFilter& previous, const FrequencyFilter& fresh, double lr) {
  if (previous.channel_count() != fresh.channel_count() || previous.rows() != fresh.rows() ||
      previous.cols() != fresh.cols())
    throw std::invalid_argument("update_filter: dimension mismatch");
  if (lr < 0.0 || lr > 1.0) throw std::invalid_argument("update_filter: lr must be in [0, 1]");
  FrequencyFilter out = previous;
  for (int i = 0; i < out.channel_count(); ++i)
    for (std::size_t k = 0; k < out.channels[i].v.size(); ++k)
      out.channels[i].v[k] = (1.0 - lr) * previous.channels[i].v[k] + lr * fresh.channels[i].v[k];
  return out;
}

ScaleSelection select_scale(const std::vector<ResponseMap>& responses, const ScaleContext& ctx) {
  if (responses.empty()) throw std::invalid_argument("select_scale: no responses");
  if (responses.size() != ctx.scale_factors.size())
    throw std::invalid_argument("select_scale: response/pyramid level count mismatch");

  // Visit levels closest to scale 1.0 first so exact ties resolve toward it;
  // inside a level, row-major order makes index (0, 0) (zero displacement) win.
  std::vector<int> order(responses.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(std::log(ctx.scale_factors[a])) < std::abs(std::log(ctx.scale_factors[b]));
  });

  int best_level = order.front();
  int best_r = 0, best_c = 0;
  double best_value = responses[best_level].at(0, 0);
  for (int level : order) {
    const ResponseMap& map = responses[level];
    for (int r = 0; r < map.rows; ++r)
      for (int c = 0; c < map.cols; ++c)
        if (map.at(r, c) > best_value) {
          best_value = map.at(r, c);
          best_level = level;
          best_r = r;
          best_c = c;
        }
  }

  const ResponseMap& map = responses[best_level];
  const int dr = best_r <= map.rows / 2 ? best_r : best_r - map.rows;
  const int dc = best_c <= map.cols / 2 ? best_c : best_c - map.cols;
  const double s = ctx.scale_factors[best_level];
  const double px_per_cell_x = ctx.cell_size * ctx.window_w * s / ctx.out_cols;
  const double px_per_cell_y = ctx.cell_size * ctx.window_h * s / ctx.out_rows;

  // With response = ifft(sum conj(X) .* W), a target displaced by +d peaks at
  // grid index -d, so the pixel shift negates the wrapped peak index.
  const double cx = ctx.base_box.cx() - dc * px_per_cell_x;
  const double cy = ctx.base_box.cy() - dr * px_per_cell_y;
  const double w = ctx.base_box.w * s;
  const double h = ctx.base_box.h * s;
  ScaleSelection sel{TargetState{BoundingBox(cx - 0.5 * w, cy - 0.5 * h, w, h), best_level}, best_value};
  return sel;
}

}  // namespace c2f
