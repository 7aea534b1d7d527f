#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "c2f/features.hpp"
#include "c2f/geometry.hpp"

namespace c2f {

/// Per-channel multiplicative attention weights, normalized to mean 1.
struct ChannelWeights {
  std::vector<double> weights;
};

/// weight_c = (mean |feature| inside target box + eps) / (mean |feature|
/// outside + eps), normalized to mean 1. Falls back to uniform weights when
/// the box leaves no background cells.
ChannelWeights channel_weights(const FeatureStack& tmpl, const BoundingBox& target_box_cells);

/// Exact-integral ROI pooling: divides the box into k x k equal cells and
/// averages the continuous bilinear interpolant of each channel over every
/// cell in closed form (border values extend past the grid). Returns C*k*k
/// values.
std::vector<double> proi_pool(const FeatureStack& stack, const BoundingBox& box_cells, int k);

/// Concatenated 3x3 and 5x5 pooled grids of the channel-weighted stack;
/// dimension C * (9 + 25).
std::vector<double> describe(const FeatureStack& stack, const ChannelWeights& weights,
                             const BoundingBox& box_cells);

/// Linear scorer over [proposal, proposal .* template] interaction features.
struct ScorerHead {
  std::vector<double> weights;
  double bias = 0.0;
};

double score(const ScorerHead& head, const std::vector<double>& template_desc,
             const std::vector<double>& proposal_desc);

struct TrainingPair {
  std::vector<double> template_desc;
  std::vector<double> proposal_desc;
  BoundingBox proposal{0.0, 0.0, 1.0, 1.0};
  BoundingBox ground_truth{0.0, 0.0, 1.0, 1.0};
  double target;  // giou(proposal, ground_truth), >= sampler's min_giou
};

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Full-batch adaptive-moment gradient descent on the mean squared error
/// between score and the GIoU target; returns the lowest-loss head observed.
ScorerHead train_head(const std::vector<TrainingPair>& pairs, int steps, double step_size,
                      const AdamConfig& adam = {});

/// Mean squared error of a head over a pair set.
double head_loss(const ScorerHead& head, const std::vector<TrainingPair>& pairs);

using FrameSource = std::function<Frame(int)>;

struct PairSamplerConfig {
  int max_gap = 50;
  int n_proposals = 16;
  double min_giou = 0.1;
  double pos_sigma = 0.1;    // fraction of the box diagonal
  double scale_sigma = 0.2;  // log-scale std
  int max_rejections = 100;  // then clamp to the ground-truth box
  double search_factor = 4.0;
  double template_factor = 2.0;
  int search_out = 128;
  int template_out = 64;
  FeatureConfig features;
};

/// Draws (template frame, search frame) pairs with index gap <= max_gap and
/// emits n_proposals Gaussian-perturbed proposals per search frame, rejection
/// resampled until giou(proposal, gt) >= min_giou. Deterministic under seed.
std::vector<TrainingPair> sample_training_pairs(const std::vector<BoundingBox>& annotations,
                                                const FrameSource& frames,
                                                const PairSamplerConfig& config, std::uint64_t seed);

/// Head persistence: plain-text document with the feature-configuration hash;
/// loading refuses on hash or dimension mismatch.
void save_head(const std::filesystem::path& path, const ScorerHead& head, std::uint64_t feature_hash);
ScorerHead load_head(const std::filesystem::path& path, std::uint64_t expected_feature_hash);

struct HeadFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace c2f
