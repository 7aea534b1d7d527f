#include "c2f/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace c2f {

namespace {

BoundingBox clamp_center(const BoundingBox& box, const Frame& frame) {
  const double cx = std::clamp(box.cx(), 0.0, static_cast<double>(frame.cols - 1));
  const double cy = std::clamp(box.cy(), 0.0, static_cast<double>(frame.rows - 1));
  return BoundingBox(cx - 0.5 * box.w, cy - 0.5 * box.h, box.w, box.h);
}

BoundingBox to_grid(const BoundingBox& box_px, double center_x, double center_y, double side,
                    int out, int cell) {
  const double s = out / side / cell;
  return BoundingBox((box_px.x - (center_x - 0.5 * side)) * s,
                     (box_px.y - (center_y - 0.5 * side)) * s, box_px.w * s, box_px.h * s);
}

}  // namespace

std::vector<BoundingBox> sample_proposals(const TargetState& coarse, const TrackerConfig& config,
                                          std::mt19937_64& rng) {
  std::vector<BoundingBox> proposals;
  proposals.reserve(config.n_proposals);
  proposals.push_back(coarse.box);
  std::normal_distribution<double> unit_normal(0.0, 1.0);
  const double pos_sigma = config.proposal_pos_sigma * coarse.box.diagonal();
  for (int i = 1; i < config.n_proposals; ++i) {
    const double dx = pos_sigma * unit_normal(rng);
    const double dy = pos_sigma * unit_normal(rng);
    const double sf = std::exp(config.proposal_scale_sigma * unit_normal(rng));
    const double w = coarse.box.w * sf, h = coarse.box.h * sf;
    proposals.emplace_back(coarse.box.cx() + dx - 0.5 * w, coarse.box.cy() + dy - 0.5 * h, w, h);
  }
  return proposals;
}

Tracker::Tracker(const Frame& frame, const BoundingBox& ground_truth, const TrackerConfig& config,
                 std::optional<ScorerHead> head)
    : config_(config),
      memory_(config.dcf.memory_capacity),
      channel_weights_{},
      head_(std::move(head)),
      state_{ground_truth, config.pyramid_levels / 2},
      rng_(config.seed) {
  if (ground_truth.x < 0 || ground_truth.y < 0 || ground_truth.right() > frame.cols ||
      ground_truth.bottom() > frame.rows)
    throw std::invalid_argument("Tracker: ground truth outside frame");

  const int grid = config_.search_out / config_.features.cell_size;
  label_ = gaussian_label(grid, grid, config_.dcf.label_sigma_factor * std::hypot(grid, grid), 0, 0);

  update_memory(memory_, training_sample(frame, ground_truth), config_.dcf.sample_decay);
  filter_ = train_filter(memory_, label_, config_.dcf);

  // Template descriptor and channel weights from the ground-truth template.
  const double tside = config_.template_factor * std::sqrt(ground_truth.w * ground_truth.h);
  const Patch tpatch = extract_patch(frame, ground_truth.cx(), ground_truth.cy(), tside, tside, 1.0,
                                     config_.template_out, config_.template_out);
  const FeatureStack tstack = feature_channels(tpatch, config_.features);
  const BoundingBox tbox = to_grid(ground_truth, ground_truth.cx(), ground_truth.cy(), tside,
                                   config_.template_out, config_.features.cell_size);
  channel_weights_ = channel_weights(tstack, tbox);
  template_desc_ = describe(tstack, channel_weights_, tbox);
}

double Tracker::search_side(const BoundingBox& box) const {
  return config_.search_factor * std::sqrt(box.w * box.h);
}

FeatureStack Tracker::search_features(const Frame& frame, double cx, double cy, double side,
                                      double scale) const {
  const Patch patch =
      extract_patch(frame, cx, cy, side, side, scale, config_.search_out, config_.search_out);
  return feature_channels(patch, config_.features);
}

std::vector<ComplexGrid> Tracker::training_sample(const Frame& frame, const BoundingBox& box) const {
  const BoundingBox safe = clamp_center(box, frame);
  const FeatureStack stack =
      search_features(frame, safe.cx(), safe.cy(), search_side(safe), 1.0);
  return to_spectrum(apply_window(stack));
}

StepResult Tracker::step(const Frame& frame) {
  ++frame_count_;
  const BoundingBox base = clamp_center(state_.box, frame);
  const double side = search_side(base);
  const ScalePyramid pyramid = ScalePyramid::centered(config_.pyramid_levels, config_.pyramid_step);

  // Coarse stage: multi-scale correlation responses.
  std::vector<FeatureStack> stacks;
  std::vector<ResponseMap> responses;
  stacks.reserve(pyramid.count());
  responses.reserve(pyramid.count());
  for (double factor : pyramid.factors) {
    stacks.push_back(search_features(frame, base.cx(), base.cy(), side, factor));
    responses.push_back(detect(filter_, to_spectrum(apply_window(stacks.back()))));
  }

  ScaleContext ctx{base,
                   pyramid.factors,
                   side,
                   side,
                   config_.search_out,
                   config_.search_out,
                   config_.features.cell_size};
  const ScaleSelection sel = select_scale(responses, ctx);
  TargetState coarse{clamp_center(sel.state.box, frame), sel.state.scale_index};

  // Fine stage: rank Gaussian proposals with the template-attentive scorer.
  TargetState fine = coarse;
  if (config_.use_fine_stage && head_) {
    const std::vector<BoundingBox> proposals = sample_proposals(coarse, config_, rng_);
    const FeatureStack& stack = stacks[coarse.scale_index];
    const double window = side * pyramid.factors[coarse.scale_index];
    const int grid = stack.cols;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < proposals.size(); ++i) {
      const BoundingBox gbox = to_grid(proposals[i], base.cx(), base.cy(), window,
                                       config_.search_out, config_.features.cell_size);
      if (gbox.right() <= 0.0 || gbox.x >= grid || gbox.bottom() <= 0.0 || gbox.y >= grid)
        continue;  // no feature support
      const double s = score(*head_, template_desc_, describe(stack, channel_weights_, gbox));
      if (s > best) {  // strict: the coarse box (index 0) wins exact ties
        best = s;
        fine = TargetState{proposals[i], coarse.scale_index};
      }
    }
    fine.box = clamp_center(fine.box, frame);
  }

  state_ = fine;

  // Model update runs after state emission, on the fine state.
  if (frame_count_ % config_.update_interval == 0) {
    update_memory(memory_, training_sample(frame, state_.box), config_.dcf.sample_decay);
    const FrequencyFilter fresh = train_filter(memory_, label_, config_.dcf, &filter_);
    filter_ = update_filter(filter_, fresh, config_.dcf.learning_rate);
  }

  return StepResult{state_, sel.peak, sel.peak < config_.confidence_floor};
}

}  // namespace c2f
