#include "c2f/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace c2f {

namespace {

// FFTW plan creation is not thread-safe; execution via the new-array API is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan plan(int rows, int cols, int sign) {
    std::scoped_lock lock(mutex_);
    const auto key = std::make_tuple(rows, cols, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<fftw_complex> buf(static_cast<std::size_t>(rows) * cols);
    fftw_plan p = fftw_plan_dft_2d(rows, cols, buf.data(), buf.data(), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

void run(const ComplexGrid& in, ComplexGrid& out, int sign) {
  fftw_plan p = PlanCache::instance().plan(in.rows, in.cols, sign);
  out.v = in.v;  // plans are in-place; transform out's buffer
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(out.v.data()),
                   reinterpret_cast<fftw_complex*>(out.v.data()));
}

}  // namespace

ComplexGrid fft2(const double* data, int rows, int cols) {
  ComplexGrid in(rows, cols);
  for (std::size_t i = 0; i < in.v.size(); ++i) in.v[i] = data[i];
  ComplexGrid out(rows, cols);
  run(in, out, FFTW_FORWARD);
  return out;
}

std::vector<double> ifft2_real(const ComplexGrid& g) {
  ComplexGrid out(g.rows, g.cols);
  run(g, out, FFTW_BACKWARD);
  const double norm = 1.0 / (static_cast<double>(g.rows) * g.cols);
  std::vector<double> real(out.v.size());
  for (std::size_t i = 0; i < out.v.size(); ++i) real[i] = out.v[i].real() * norm;
  return real;
}

std::vector<ComplexGrid> to_spectrum(const FeatureStack& stack) {
  std::vector<ComplexGrid> spectra;
  spectra.reserve(stack.channels);
  for (int ch = 0; ch < stack.channels; ++ch)
    spectra.push_back(fft2(stack.channel(ch), stack.rows, stack.cols));
  return spectra;
}

}  // namespace c2f
