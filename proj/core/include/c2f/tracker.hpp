#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "c2f/dcf.hpp"
#include "c2f/localizer.hpp"

namespace c2f {

struct TrackerConfig {
  DcfConfig dcf;
  int pyramid_levels = 5;
  double pyramid_step = 1.02;
  int n_proposals = 64;              // tracking-time proposal count
  double proposal_pos_sigma = 0.05;  // fraction of the box diagonal
  double proposal_scale_sigma = 0.02;
  double search_factor = 4.0;        // search side / sqrt(target area)
  double template_factor = 2.0;
  int search_out = 128;              // resampled search patch, pixels
  int template_out = 64;
  double confidence_floor = 0.05;    // coarse peaks below this flag the frame
  int update_interval = 1;           // frames between filter updates
  std::uint64_t seed = 0;
  FeatureConfig features;
  bool use_fine_stage = true;        // false = coarse-only ablation
};

struct StepResult {
  TargetState state;
  double coarse_peak = 0.0;
  bool low_confidence = false;
};

/// N Gaussian-perturbed boxes around the coarse state; proposal 0 is always
/// the unperturbed coarse box.
std::vector<BoundingBox> sample_proposals(const TargetState& coarse, const TrackerConfig& config,
                                          std::mt19937_64& rng);

/// Coarse-to-fine single-object tracker: an online correlation filter
/// proposes a coarse state per frame, Gaussian-sampled proposals around it
/// are ranked by the template-attentive scorer, and the best proposal wins.
class Tracker {
 public:
  /// Initializes on the first frame: trains the filter with the full CG
  /// budget and derives channel weights and the template descriptor from the
  /// ground-truth template.
  Tracker(const Frame& frame, const BoundingBox& ground_truth, const TrackerConfig& config,
          std::optional<ScorerHead> head = std::nullopt);

  /// Runs one frame of the tracking loop and updates the model.
  StepResult step(const Frame& frame);

  const TargetState& state() const { return state_; }
  const FrequencyFilter& filter() const { return filter_; }
  const SampleMemory& memory() const { return memory_; }
  const ChannelWeights& weights() const { return channel_weights_; }
  const TrackerConfig& config() const { return config_; }

 private:
  FeatureStack search_features(const Frame& frame, double cx, double cy, double side,
                               double scale) const;
  std::vector<ComplexGrid> training_sample(const Frame& frame, const BoundingBox& box) const;
  double search_side(const BoundingBox& box) const;

  TrackerConfig config_;
  GaussianLabel label_;
  FrequencyFilter filter_;
  SampleMemory memory_;
  ChannelWeights channel_weights_;
  std::vector<double> template_desc_;
  std::optional<ScorerHead> head_;
  TargetState state_;
  std::mt19937_64 rng_;
  int frame_count_ = 0;
};

}  // namespace c2f
