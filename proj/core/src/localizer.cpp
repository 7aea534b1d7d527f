#include "c2f/localizer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace c2f {

namespace {
constexpr double kEps = 1e-6;
}

ChannelWeights channel_weights(const FeatureStack& tmpl, const BoundingBox& target_box_cells) {
  ChannelWeights out;
  out.weights.assign(tmpl.channels, 1.0);

  std::vector<bool> inside(static_cast<std::size_t>(tmpl.rows) * tmpl.cols);
  int inside_count = 0;
  for (int r = 0; r < tmpl.rows; ++r)
    for (int c = 0; c < tmpl.cols; ++c) {
      const double cx = c + 0.5, cy = r + 0.5;
      const bool in = cx >= target_box_cells.x && cx < target_box_cells.right() &&
                      cy >= target_box_cells.y && cy < target_box_cells.bottom();
      inside[static_cast<std::size_t>(r) * tmpl.cols + c] = in;
      inside_count += in;
    }
  const int total = tmpl.rows * tmpl.cols;
  if (inside_count == 0 || inside_count == total) return out;  // no fore/background split

  for (int ch = 0; ch < tmpl.channels; ++ch) {
    double in_sum = 0.0, out_sum = 0.0;
    const double* p = tmpl.channel(ch);
    for (int i = 0; i < total; ++i) (inside[i] ? in_sum : out_sum) += std::abs(p[i]);
    out.weights[ch] = (in_sum / inside_count + kEps) / (out_sum / (total - inside_count) + kEps);
  }
  double mean = 0.0;
  for (double w : out.weights) mean += w;
  mean /= tmpl.channels;
  for (double& w : out.weights) w /= mean;
  return out;
}

namespace {

// Integral of the border-clamped bilinear interpolant of one channel over
// [x0, x1] x [y0, y1], in interpolant coordinates (values at integer points).
double bilinear_integral(const double* v, int rows, int cols, double x0, double x1, double y0,
                         double y1) {
  auto val = [&](int r, int c) {
    r = std::clamp(r, 0, rows - 1);
    c = std::clamp(c, 0, cols - 1);
    return v[static_cast<std::size_t>(r) * cols + c];
  };
  double total = 0.0;
  const int jy0 = static_cast<int>(std::floor(y0));
  const int jy1 = static_cast<int>(std::ceil(y1)) - 1;
  const int jx0 = static_cast<int>(std::floor(x0));
  const int jx1 = static_cast<int>(std::ceil(x1)) - 1;
  for (int jy = jy0; jy <= jy1; ++jy) {
    const double lo_y = std::max(y0, static_cast<double>(jy)) - jy;
    const double hi_y = std::min(y1, static_cast<double>(jy + 1)) - jy;
    if (hi_y <= lo_y) continue;
    const double iv1 = 0.5 * (hi_y * hi_y - lo_y * lo_y);
    const double iv0 = (hi_y - lo_y) - iv1;
    for (int jx = jx0; jx <= jx1; ++jx) {
      const double lo_x = std::max(x0, static_cast<double>(jx)) - jx;
      const double hi_x = std::min(x1, static_cast<double>(jx + 1)) - jx;
      if (hi_x <= lo_x) continue;
      const double iu1 = 0.5 * (hi_x * hi_x - lo_x * lo_x);
      const double iu0 = (hi_x - lo_x) - iu1;
      total += val(jy, jx) * iu0 * iv0 + val(jy, jx + 1) * iu1 * iv0 + val(jy + 1, jx) * iu0 * iv1 +
               val(jy + 1, jx + 1) * iu1 * iv1;
    }
  }
  return total;
}

}  // namespace

std::vector<double> proi_pool(const FeatureStack& stack, const BoundingBox& box_cells, int k) {
  if (k < 1) throw std::invalid_argument("proi_pool: k must be >= 1");
  if (box_cells.right() <= 0.0 || box_cells.x >= stack.cols || box_cells.bottom() <= 0.0 ||
      box_cells.y >= stack.rows)
    throw std::invalid_argument("proi_pool: box entirely outside the feature grid");

  // Feature values live at cell centers: interpolant coordinate = cell - 0.5.
  const double bx = box_cells.x - 0.5;
  const double by = box_cells.y - 0.5;
  const double cw = box_cells.w / k;
  const double ch = box_cells.h / k;
  const double inv_area = 1.0 / (cw * ch);

  std::vector<double> out(static_cast<std::size_t>(stack.channels) * k * k);
  for (int c = 0; c < stack.channels; ++c) {
    const double* v = stack.channel(c);
    for (int gy = 0; gy < k; ++gy)
      for (int gx = 0; gx < k; ++gx)
        out[(static_cast<std::size_t>(c) * k + gy) * k + gx] =
            bilinear_integral(v, stack.rows, stack.cols, bx + gx * cw, bx + (gx + 1) * cw,
                              by + gy * ch, by + (gy + 1) * ch) *
            inv_area;
  }
  return out;
}

std::vector<double> describe(const FeatureStack& stack, const ChannelWeights& weights,
                             const BoundingBox& box_cells) {
  if (static_cast<int>(weights.weights.size()) != stack.channels)
    throw std::invalid_argument("describe: weight count does not match channels");
  const std::vector<double> p3 = proi_pool(stack, box_cells, 3);
  const std::vector<double> p5 = proi_pool(stack, box_cells, 5);
  std::vector<double> out;
  out.reserve(p3.size() + p5.size());
  for (int c = 0; c < stack.channels; ++c)
    for (int i = 0; i < 9; ++i) out.push_back(weights.weights[c] * p3[c * 9 + i]);
  for (int c = 0; c < stack.channels; ++c)
    for (int i = 0; i < 25; ++i) out.push_back(weights.weights[c] * p5[c * 25 + i]);
  return out;
}

double score(const ScorerHead& head, const std::vector<double>& template_desc,
             const std::vector<double>& proposal_desc) {
  if (template_desc.size() != proposal_desc.size() ||
      head.weights.size() != 2 * proposal_desc.size())
    throw std::invalid_argument("score: descriptor/head dimension mismatch");
  const std::size_t d = proposal_desc.size();
  double s = head.bias;
  for (std::size_t i = 0; i < d; ++i) {
    s += head.weights[i] * proposal_desc[i];
    s += head.weights[d + i] * proposal_desc[i] * template_desc[i];
  }
  return s;
}

double head_loss(const ScorerHead& head, const std::vector<TrainingPair>& pairs) {
  double loss = 0.0;
  for (const auto& pair : pairs) {
    const double e = score(head, pair.template_desc, pair.proposal_desc) - pair.target;
    loss += e * e;
  }
  return loss / static_cast<double>(pairs.size());
}

ScorerHead train_head(const std::vector<TrainingPair>& pairs, int steps, double step_size,
                      const AdamConfig& adam) {
  if (pairs.empty()) throw std::invalid_argument("train_head: empty training-pair list");
  if (!(step_size > 0.0)) throw std::invalid_argument("train_head: step size must be positive");
  const std::size_t d = pairs.front().proposal_desc.size();
  const std::size_t n = 2 * d + 1;  // weights + bias

  std::vector<double> theta(n, 0.0), m(n, 0.0), v(n, 0.0), grad(n);
  ScorerHead head;
  head.weights.assign(2 * d, 0.0);

  auto unpack = [&](const std::vector<double>& t) {
    ScorerHead h;
    h.weights.assign(t.begin(), t.begin() + 2 * d);
    h.bias = t.back();
    return h;
  };

  double best_loss = head_loss(unpack(theta), pairs);
  std::vector<double> best_theta = theta;

  const double inv_m = 1.0 / static_cast<double>(pairs.size());
  for (int step = 1; step <= steps; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    ScorerHead current = unpack(theta);
    double loss = 0.0;
    for (const auto& pair : pairs) {
      const double e = score(current, pair.template_desc, pair.proposal_desc) - pair.target;
      loss += e * e;
      const double g = 2.0 * e * inv_m;
      for (std::size_t i = 0; i < d; ++i) {
        grad[i] += g * pair.proposal_desc[i];
        grad[d + i] += g * pair.proposal_desc[i] * pair.template_desc[i];
      }
      grad[2 * d] += g;
    }
    loss *= inv_m;
    if (loss < best_loss) {
      best_loss = loss;
      best_theta = theta;
    }

    const double bc1 = 1.0 - std::pow(adam.beta1, step);
    const double bc2 = 1.0 - std::pow(adam.beta2, step);
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = adam.beta1 * m[i] + (1.0 - adam.beta1) * grad[i];
      v[i] = adam.beta2 * v[i] + (1.0 - adam.beta2) * grad[i] * grad[i];
      theta[i] -= step_size * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + adam.epsilon);
    }
  }
  if (head_loss(unpack(theta), pairs) < best_loss) best_theta = theta;
  return unpack(best_theta);
}

namespace {

BoundingBox to_grid(const BoundingBox& box_px, double center_x, double center_y, double side,
                    int out, int cell) {
  const double s = out / side / cell;
  return BoundingBox((box_px.x - (center_x - 0.5 * side)) * s, (box_px.y - (center_y - 0.5 * side)) * s,
                     box_px.w * s, box_px.h * s);
}

}  // namespace

std::vector<TrainingPair> sample_training_pairs(const std::vector<BoundingBox>& annotations,
                                                const FrameSource& frames,
                                                const PairSamplerConfig& config, std::uint64_t seed) {
  const int n = static_cast<int>(annotations.size());
  if (n < 2) throw std::invalid_argument("sample_training_pairs: need at least 2 annotated frames");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit_normal(0.0, 1.0);
  std::vector<TrainingPair> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * config.n_proposals);

  for (int s = 0; s < n; ++s) {
    const int lo = std::max(0, s - config.max_gap);
    const int hi = std::min(n - 1, s + config.max_gap);
    std::uniform_int_distribution<int> pick(lo, hi - 1);
    int t = pick(rng);
    if (t >= s) ++t;  // skip the search frame itself

    // Template side: descriptor of the ground-truth box inside its 2x region.
    const BoundingBox& gt_t = annotations[t];
    const double tside = config.template_factor * std::sqrt(gt_t.w * gt_t.h);
    const Patch tpatch = extract_patch(frames(t), gt_t.cx(), gt_t.cy(), tside, tside, 1.0,
                                       config.template_out, config.template_out);
    const FeatureStack tstack = feature_channels(tpatch, config.features);
    const BoundingBox tbox =
        to_grid(gt_t, gt_t.cx(), gt_t.cy(), tside, config.template_out, config.features.cell_size);
    const ChannelWeights weights = channel_weights(tstack, tbox);
    const std::vector<double> template_desc = describe(tstack, weights, tbox);

    // Search side: proposals perturbed around the ground truth.
    const BoundingBox& gt_s = annotations[s];
    const double sside = config.search_factor * std::sqrt(gt_s.w * gt_s.h);
    const Patch spatch = extract_patch(frames(s), gt_s.cx(), gt_s.cy(), sside, sside, 1.0,
                                       config.search_out, config.search_out);
    const FeatureStack sstack = feature_channels(spatch, config.features);

    const double pos_sigma = config.pos_sigma * gt_s.diagonal();
    for (int i = 0; i < config.n_proposals; ++i) {
      BoundingBox proposal = gt_s;
      bool accepted = false;
      for (int attempt = 0; attempt < config.max_rejections; ++attempt) {
        const double dx = pos_sigma * unit_normal(rng);
        const double dy = pos_sigma * unit_normal(rng);
        const double sf = std::exp(config.scale_sigma * unit_normal(rng));
        const double w = gt_s.w * sf, h = gt_s.h * sf;
        const BoundingBox candidate(gt_s.cx() + dx - 0.5 * w, gt_s.cy() + dy - 0.5 * h, w, h);
        if (giou(candidate, gt_s) >= config.min_giou) {
          proposal = candidate;
          accepted = true;
          break;
        }
      }
      if (!accepted) proposal = gt_s;  // clamp to ground truth

      const BoundingBox pbox =
          to_grid(proposal, gt_s.cx(), gt_s.cy(), sside, config.search_out, config.features.cell_size);
      pairs.push_back(TrainingPair{template_desc, describe(sstack, weights, pbox), proposal, gt_s,
                                   giou(proposal, gt_s)});
    }
  }
  return pairs;
}

void save_head(const std::filesystem::path& path, const ScorerHead& head, std::uint64_t feature_hash) {
  std::ofstream f(path);
  if (!f) throw HeadFileError("save_head: cannot open " + path.string());
  f << "c2f-scorer-head v1\n";
  f << "feature_hash " << std::hex << feature_hash << std::dec << "\n";
  f << "dim " << head.weights.size() << "\n";
  f.precision(17);
  f << "bias " << head.bias << "\n";
  f << "weights";
  for (double w : head.weights) f << ' ' << w;
  f << "\n";
  if (!f) throw HeadFileError("save_head: write failed for " + path.string());
}

ScorerHead load_head(const std::filesystem::path& path, std::uint64_t expected_feature_hash) {
  std::ifstream f(path);
  if (!f) throw HeadFileError("load_head: cannot open " + path.string());
  std::string line;
  std::getline(f, line);
  if (line != "c2f-scorer-head v1") throw HeadFileError("load_head: unrecognized header in " + path.string());

  std::string key;
  std::uint64_t hash = 0;
  std::size_t dim = 0;
  ScorerHead head;
  f >> key >> std::hex >> hash >> std::dec;
  if (key != "feature_hash" || !f) throw HeadFileError("load_head: missing feature_hash field");
  if (hash != expected_feature_hash)
    throw HeadFileError("load_head: feature-configuration hash mismatch in " + path.string() +
                        " (head was trained under a different feature configuration)");
  f >> key >> dim;
  if (key != "dim" || !f) throw HeadFileError("load_head: missing dim field");
  f >> key >> head.bias;
  if (key != "bias" || !f) throw HeadFileError("load_head: missing bias field");
  f >> key;
  if (key != "weights") throw HeadFileError("load_head: missing weights field");
  head.weights.resize(dim);
  for (std::size_t i = 0; i < dim; ++i)
    if (!(f >> head.weights[i])) throw HeadFileError("load_head: truncated weight vector");
  return head;
}

}  // namespace c2f
