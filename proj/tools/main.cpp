// c2ftrack: coarse-to-fine correlation-filter tracker CLI.
//
// Subcommands: track, eval, train-scorer, synth. All randomness flows from a
// single seed; the effective merged configuration is written beside outputs.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "c2f/bench.hpp"
#include "c2f/localizer.hpp"
#include "c2f/tracker.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
  c2f::TrackerConfig tracker;
  c2f::PairSamplerConfig sampler;
  int training_steps = 2000;
  double training_step_size = 1e-3;
  double precision_threshold = 20.0;
};

void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& scope) {
  for (const auto& [key, value] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw std::runtime_error("config: unknown key \"" + scope + key + "\"");
}

template <typename T>
void read_key(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

RunConfig parse_config(const json& j) {
  RunConfig cfg;
  reject_unknown_keys(j, {"seed", "tracker", "dcf", "features", "sampler", "training",
                          "precision_threshold"},
                      "");
  read_key(j, "seed", cfg.tracker.seed);
  read_key(j, "precision_threshold", cfg.precision_threshold);

  if (j.contains("tracker")) {
    const json& t = j.at("tracker");
    reject_unknown_keys(t,
                        {"pyramid_levels", "pyramid_step", "n_proposals", "proposal_pos_sigma",
                         "proposal_scale_sigma", "search_factor", "template_factor", "search_out",
                         "template_out", "confidence_floor", "update_interval", "use_fine_stage"},
                        "tracker.");
    read_key(t, "pyramid_levels", cfg.tracker.pyramid_levels);
    read_key(t, "pyramid_step", cfg.tracker.pyramid_step);
    read_key(t, "n_proposals", cfg.tracker.n_proposals);
    read_key(t, "proposal_pos_sigma", cfg.tracker.proposal_pos_sigma);
    read_key(t, "proposal_scale_sigma", cfg.tracker.proposal_scale_sigma);
    read_key(t, "search_factor", cfg.tracker.search_factor);
    read_key(t, "template_factor", cfg.tracker.template_factor);
    read_key(t, "search_out", cfg.tracker.search_out);
    read_key(t, "template_out", cfg.tracker.template_out);
    read_key(t, "confidence_floor", cfg.tracker.confidence_floor);
    read_key(t, "update_interval", cfg.tracker.update_interval);
    read_key(t, "use_fine_stage", cfg.tracker.use_fine_stage);
  }
  if (j.contains("dcf")) {
    const json& d = j.at("dcf");
    reject_unknown_keys(d,
                        {"lambda", "cg_init_iterations", "cg_iterations", "cg_tolerance",
                         "memory_capacity", "sample_decay", "label_sigma_factor", "learning_rate"},
                        "dcf.");
    read_key(d, "lambda", cfg.tracker.dcf.lambda);
    read_key(d, "cg_init_iterations", cfg.tracker.dcf.cg_init_iterations);
    read_key(d, "cg_iterations", cfg.tracker.dcf.cg_iterations);
    read_key(d, "cg_tolerance", cfg.tracker.dcf.cg_tolerance);
    read_key(d, "memory_capacity", cfg.tracker.dcf.memory_capacity);
    read_key(d, "sample_decay", cfg.tracker.dcf.sample_decay);
    read_key(d, "label_sigma_factor", cfg.tracker.dcf.label_sigma_factor);
    read_key(d, "learning_rate", cfg.tracker.dcf.learning_rate);
  }
  if (j.contains("features")) {
    const json& f = j.at("features");
    reject_unknown_keys(f, {"cell_size", "gradient_bins"}, "features.");
    read_key(f, "cell_size", cfg.tracker.features.cell_size);
    read_key(f, "gradient_bins", cfg.tracker.features.gradient_bins);
  }
  if (j.contains("sampler")) {
    const json& s = j.at("sampler");
    reject_unknown_keys(s,
                        {"max_gap", "n_proposals", "min_giou", "pos_sigma", "scale_sigma",
                         "max_rejections"},
                        "sampler.");
    read_key(s, "max_gap", cfg.sampler.max_gap);
    read_key(s, "n_proposals", cfg.sampler.n_proposals);
    read_key(s, "min_giou", cfg.sampler.min_giou);
    read_key(s, "pos_sigma", cfg.sampler.pos_sigma);
    read_key(s, "scale_sigma", cfg.sampler.scale_sigma);
    read_key(s, "max_rejections", cfg.sampler.max_rejections);
  }
  if (j.contains("training")) {
    const json& t = j.at("training");
    reject_unknown_keys(t, {"steps", "step_size"}, "training.");
    read_key(t, "steps", cfg.training_steps);
    read_key(t, "step_size", cfg.training_step_size);
  }

  // The pair sampler and tracker share one feature/geometry configuration.
  cfg.sampler.features = cfg.tracker.features;
  cfg.sampler.search_factor = cfg.tracker.search_factor;
  cfg.sampler.template_factor = cfg.tracker.template_factor;
  cfg.sampler.search_out = cfg.tracker.search_out;
  cfg.sampler.template_out = cfg.tracker.template_out;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  if (path.empty()) return parse_config(json::object());
  std::ifstream f(path);
  if (!f) throw std::runtime_error("config: cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config: parse failure in " + path + ": " + e.what());
  }
  return parse_config(j);
}

json effective_config_json(const RunConfig& cfg) {
  return json{
      {"seed", cfg.tracker.seed},
      {"precision_threshold", cfg.precision_threshold},
      {"tracker",
       {{"pyramid_levels", cfg.tracker.pyramid_levels},
        {"pyramid_step", cfg.tracker.pyramid_step},
        {"n_proposals", cfg.tracker.n_proposals},
        {"proposal_pos_sigma", cfg.tracker.proposal_pos_sigma},
        {"proposal_scale_sigma", cfg.tracker.proposal_scale_sigma},
        {"search_factor", cfg.tracker.search_factor},
        {"template_factor", cfg.tracker.template_factor},
        {"search_out", cfg.tracker.search_out},
        {"template_out", cfg.tracker.template_out},
        {"confidence_floor", cfg.tracker.confidence_floor},
        {"update_interval", cfg.tracker.update_interval},
        {"use_fine_stage", cfg.tracker.use_fine_stage}}},
      {"dcf",
       {{"lambda", cfg.tracker.dcf.lambda},
        {"cg_init_iterations", cfg.tracker.dcf.cg_init_iterations},
        {"cg_iterations", cfg.tracker.dcf.cg_iterations},
        {"cg_tolerance", cfg.tracker.dcf.cg_tolerance},
        {"memory_capacity", cfg.tracker.dcf.memory_capacity},
        {"sample_decay", cfg.tracker.dcf.sample_decay},
        {"label_sigma_factor", cfg.tracker.dcf.label_sigma_factor},
        {"learning_rate", cfg.tracker.dcf.learning_rate}}},
      {"features",
       {{"cell_size", cfg.tracker.features.cell_size},
        {"gradient_bins", cfg.tracker.features.gradient_bins}}},
      {"sampler",
       {{"max_gap", cfg.sampler.max_gap},
        {"n_proposals", cfg.sampler.n_proposals},
        {"min_giou", cfg.sampler.min_giou},
        {"pos_sigma", cfg.sampler.pos_sigma},
        {"scale_sigma", cfg.sampler.scale_sigma},
        {"max_rejections", cfg.sampler.max_rejections}}},
      {"training", {{"steps", cfg.training_steps}, {"step_size", cfg.training_step_size}}}};
}

json boxes_json(const std::vector<c2f::BoundingBox>& boxes) {
  json out = json::array();
  for (const auto& b : boxes) out.push_back({b.x, b.y, b.w, b.h});
  return out;
}

std::vector<c2f::BoundingBox> boxes_from_json(const json& j) {
  std::vector<c2f::BoundingBox> out;
  for (const auto& b : j) out.emplace_back(b.at(0).get<double>(), b.at(1).get<double>(),
                                           b.at(2).get<double>(), b.at(3).get<double>());
  return out;
}

std::vector<fs::path> sequence_dirs(const fs::path& data_dir) {
  if (fs::is_regular_file(data_dir / "groundtruth_rect.txt")) return {data_dir};
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(data_dir))
    if (entry.is_directory() && fs::is_regular_file(entry.path() / "groundtruth_rect.txt"))
      dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) throw std::runtime_error("no sequences found under " + data_dir.string());
  return dirs;
}

int cmd_track(const RunConfig& cfg, const fs::path& seq_dir, const fs::path& out_dir,
              const std::string& head_path) {
  const c2f::Sequence seq = c2f::load_sequence(seq_dir);
  std::optional<c2f::ScorerHead> head;
  if (!head_path.empty()) head = c2f::load_head(head_path, cfg.tracker.features.hash());

  c2f::TrackResult result;
  result.predicted.reserve(seq.size());
  result.times.assign(seq.size(), 0.0);
  result.low_confidence.assign(seq.size(), false);

  c2f::Tracker tracker(seq.frame(0), seq.ground_truth.front(), cfg.tracker, head);
  result.predicted.push_back(seq.ground_truth.front());
  for (std::size_t i = 1; i < seq.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const c2f::StepResult step = tracker.step(seq.frame(static_cast<int>(i)));
    result.times[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.predicted.push_back(step.state.box);
    result.low_confidence[i] = step.low_confidence;
  }

  fs::create_directories(out_dir);
  // Deterministic result document; wall times go to a separate sidecar so the
  // result file is byte-identical under a fixed config and seed.
  json doc{{"name", seq.name},
           {"boxes", boxes_json(result.predicted)},
           {"low_confidence", result.low_confidence},
           {"metrics",
            {{"auc", c2f::success_auc(result, seq)},
             {"precision", c2f::precision_at(result, seq, cfg.precision_threshold)}}}};
  std::ofstream(out_dir / (seq.name + ".result.json")) << doc.dump(2) << '\n';
  std::ofstream(out_dir / (seq.name + ".timing.json"))
      << json{{"name", seq.name}, {"times", result.times}, {"fps", c2f::fps(result)}}.dump(2)
      << '\n';
  std::ofstream(out_dir / "effective_config.json") << effective_config_json(cfg).dump(2) << '\n';
  std::cout << seq.name << ": auc=" << doc["metrics"]["auc"].get<double>()
            << " precision=" << doc["metrics"]["precision"].get<double>() << '\n';
  return 0;
}

int cmd_eval(const RunConfig& cfg, const fs::path& results_dir, const fs::path& data_dir) {
  const std::vector<fs::path> dirs = sequence_dirs(data_dir);
  std::vector<std::string> missing;
  json report{{"sequences", json::array()}};
  std::ofstream curves(results_dir / "curves.csv");
  curves << "sequence,threshold,success_rate\n";
  double sum_auc = 0.0, sum_pr = 0.0, sum_fps = 0.0;
  int fps_count = 0, evaluated = 0;

  std::cout << "sequence            auc     precision fps\n";
  for (const auto& dir : dirs) {
    const c2f::Sequence seq = c2f::load_sequence(dir);
    const fs::path result_file = results_dir / (seq.name + ".result.json");
    if (!fs::is_regular_file(result_file)) {
      missing.push_back(seq.name);
      continue;
    }
    json doc;
    std::ifstream(result_file) >> doc;
    c2f::TrackResult result;
    result.predicted = boxes_from_json(doc.at("boxes"));
    const double auc = c2f::success_auc(result, seq);
    const double pr = c2f::precision_at(result, seq, cfg.precision_threshold);
    double seq_fps = 0.0;
    const fs::path timing_file = results_dir / (seq.name + ".timing.json");
    if (fs::is_regular_file(timing_file)) {
      json timing;
      std::ifstream(timing_file) >> timing;
      seq_fps = timing.at("fps").get<double>();
      sum_fps += seq_fps;
      ++fps_count;
    }
    const std::vector<double> curve = c2f::success_curve(result, seq);
    for (int t = 0; t < 21; ++t) curves << seq.name << ',' << 0.05 * t << ',' << curve[t] << '\n';

    report["sequences"].push_back(
        {{"name", seq.name}, {"auc", auc}, {"precision", pr}, {"fps", seq_fps}});
    sum_auc += auc;
    sum_pr += pr;
    ++evaluated;
    std::printf("%-18s  %.4f  %.4f    %.1f\n", seq.name.c_str(), auc, pr, seq_fps);
  }

  if (!missing.empty()) {
    std::cerr << "missing results for:";
    for (const auto& name : missing) std::cerr << ' ' << name;
    std::cerr << '\n';
    return 1;
  }
  report["mean"] = {{"auc", sum_auc / evaluated},
                    {"precision", sum_pr / evaluated},
                    {"fps", fps_count ? sum_fps / fps_count : 0.0}};
  std::ofstream(results_dir / "report.json") << report.dump(2) << '\n';
  std::printf("%-18s  %.4f  %.4f    %.1f\n", "mean", sum_auc / evaluated, sum_pr / evaluated,
              fps_count ? sum_fps / fps_count : 0.0);
  return 0;
}

int cmd_train_scorer(const RunConfig& cfg, const fs::path& data_dir, const fs::path& out_file) {
  const std::vector<fs::path> dirs = sequence_dirs(data_dir);
  std::vector<c2f::TrainingPair> pairs;
  std::uint64_t seq_index = 0;
  for (const auto& dir : dirs) {
    const c2f::Sequence seq = c2f::load_sequence(dir);
    auto source = [&seq](int i) { return seq.frame(i); };
    auto seq_pairs = c2f::sample_training_pairs(seq.ground_truth, source, cfg.sampler,
                                                cfg.tracker.seed + seq_index++);
    pairs.insert(pairs.end(), std::make_move_iterator(seq_pairs.begin()),
                 std::make_move_iterator(seq_pairs.end()));
  }

  c2f::ScorerHead zero;
  zero.weights.assign(2 * pairs.front().proposal_desc.size(), 0.0);
  std::cout << "pairs: " << pairs.size() << "\ninitial loss: " << c2f::head_loss(zero, pairs) << '\n';
  const c2f::ScorerHead head = c2f::train_head(pairs, cfg.training_steps, cfg.training_step_size);
  std::cout << "final loss: " << c2f::head_loss(head, pairs) << '\n';
  if (out_file.has_parent_path()) fs::create_directories(out_file.parent_path());
  c2f::save_head(out_file, head, cfg.tracker.features.hash());

  const fs::path config_copy = out_file.string() + ".config.json";
  std::ofstream(config_copy) << effective_config_json(cfg).dump(2) << '\n';
  return 0;
}

int cmd_synth(const fs::path& spec_file, const fs::path& out_dir) {
  std::ifstream f(spec_file);
  if (!f) throw std::runtime_error("synth: cannot open spec " + spec_file.string());
  json j;
  f >> j;
  reject_unknown_keys(j,
                      {"width", "height", "frame_count", "target_x", "target_y", "target_w",
                       "target_h", "motion", "velocity_x", "velocity_y", "jump_period", "jump_dx",
                       "jump_dy", "scale_rate", "noise", "seed", "name"},
                      "synth.");
  c2f::SynthSpec spec;
  read_key(j, "width", spec.width);
  read_key(j, "height", spec.height);
  read_key(j, "frame_count", spec.frame_count);
  read_key(j, "target_x", spec.target_x);
  read_key(j, "target_y", spec.target_y);
  read_key(j, "target_w", spec.target_w);
  read_key(j, "target_h", spec.target_h);
  read_key(j, "motion", spec.motion);
  read_key(j, "velocity_x", spec.velocity_x);
  read_key(j, "velocity_y", spec.velocity_y);
  read_key(j, "jump_period", spec.jump_period);
  read_key(j, "jump_dx", spec.jump_dx);
  read_key(j, "jump_dy", spec.jump_dy);
  read_key(j, "scale_rate", spec.scale_rate);
  read_key(j, "noise", spec.noise);
  read_key(j, "seed", spec.seed);
  read_key(j, "name", spec.name);
  if (spec.name.empty()) spec.name = out_dir.filename().string();

  c2f::Sequence seq = c2f::synth_sequence(spec);
  seq.name = out_dir.filename().string();
  c2f::write_sequence(out_dir, seq);
  std::cout << "wrote " << seq.size() << " frames to " << out_dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coarse-to-fine correlation-filter tracker"};
  app.require_subcommand(1);

  std::string config_path, seq_dir, out_path, head_path, results_dir, data_dir, spec_file;
  std::int64_t seed_override = -1;

  auto* track = app.add_subcommand("track", "Track one sequence and write result documents");
  track->add_option("--config", config_path, "JSON configuration file");
  track->add_option("--seq", seq_dir, "Sequence directory (img/ + groundtruth_rect.txt)")->required();
  track->add_option("--out", out_path, "Output directory")->required();
  track->add_option("--head", head_path, "Trained scorer-head file");
  track->add_option("--seed", seed_override, "Seed override");

  auto* eval = app.add_subcommand("eval", "Compute metrics over tracked results");
  eval->add_option("--config", config_path, "JSON configuration file");
  eval->add_option("--results", results_dir, "Directory with *.result.json")->required();
  eval->add_option("--data", data_dir, "Dataset directory")->required();

  auto* train = app.add_subcommand("train-scorer", "Train the proposal scorer head");
  train->add_option("--config", config_path, "JSON configuration file");
  train->add_option("--data", data_dir, "Dataset directory")->required();
  train->add_option("--out", out_path, "Output head file")->required();
  train->add_option("--seed", seed_override, "Seed override");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic OTB-style sequence");
  synth->add_option("--spec", spec_file, "JSON motion specification")->required();
  synth->add_option("--out", out_path, "Output sequence directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = load_config(config_path);
    if (seed_override >= 0) cfg.tracker.seed = static_cast<std::uint64_t>(seed_override);
    if (track->parsed()) return cmd_track(cfg, seq_dir, out_path, head_path);
    if (eval->parsed()) return cmd_eval(cfg, results_dir, data_dir);
    if (train->parsed()) return cmd_train_scorer(cfg, data_dir, out_path);
    if (synth->parsed()) return cmd_synth(spec_file, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
