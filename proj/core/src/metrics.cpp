#include "c2f/bench.hpp"

namespace c2f {

namespace {

void check_lengths(const TrackResult& result, const Sequence& seq) {
  if (result.predicted.size() != seq.ground_truth.size())
    throw std::invalid_argument("metrics: prediction/ground-truth length mismatch");
}

}  // namespace

std::vector<double> success_curve(const TrackResult& result, const Sequence& seq) {
  check_lengths(result, seq);
  std::vector<double> curve(21, 0.0);
  for (std::size_t i = 0; i < result.predicted.size(); ++i) {
    const double overlap = iou(result.predicted[i], seq.ground_truth[i]);
    for (int t = 0; t < 21; ++t)
      if (overlap > 0.05 * t) curve[t] += 1.0;
  }
  for (double& v : curve) v /= static_cast<double>(result.predicted.size());
  return curve;
}

double success_auc(const TrackResult& result, const Sequence& seq) {
  const std::vector<double> curve = success_curve(result, seq);
  double sum = 0.0;
  for (double v : curve) sum += v;
  return sum / static_cast<double>(curve.size());
}

double precision_at(const TrackResult& result, const Sequence& seq, double threshold) {
  check_lengths(result, seq);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < result.predicted.size(); ++i)
    if (center_error(result.predicted[i], seq.ground_truth[i]) <= threshold) ++hits;
  return static_cast<double>(hits) / static_cast<double>(result.predicted.size());
}

double fps(const TrackResult& result) {
  if (result.times.empty()) throw std::invalid_argument("fps: no timings");
  double total = 0.0;
  std::size_t counted = 0;
  for (double t : result.times)
    if (t > 0.0) {
      total += t;
      ++counted;
    }
  if (!(total > 0.0)) throw std::invalid_argument("fps: invalid measurement, total time is zero");
  return static_cast<double>(counted) / total;
}

}  // namespace c2f
