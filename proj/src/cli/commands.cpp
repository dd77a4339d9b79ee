/* Copyright 2026 The SCS Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "scs/cli/commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "scs/data/synthetic.hpp"
#include "scs/errors.hpp"
#include "scs/model/checkpoint.hpp"

namespace scs::cli {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path resolve_output_dir(const fs::path& explicit_dir) {
  fs::path dir = explicit_dir;
  if (dir.empty()) {
    const char* env = std::getenv(kOutputDirEnv);
    dir = (env && *env) ? fs::path(env) : fs::current_path();
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_json_artifact(const fs::path& path, const std::string& command, const json& run_config, json payload) {
  json doc = {{"schema_version", kOutputSchemaVersion}, {"command", command}, {"run_config", run_config}};
  for (auto& [k, v] : payload.items()) doc[k] = std::move(v);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("failed writing " + path.string());
}

void write_csv_artifact(const fs::path& path, const json& run_config, const std::vector<std::string>& comments,
                        const std::string& table) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "# schema_version: " << kOutputSchemaVersion << "\n# run_config: " << run_config.dump() << "\n";
  for (const auto& c : comments) out << "# " << c << "\n";
  out << table;
  if (!out) throw IoError("failed writing " + path.string());
}

model::ModelConfig ModelFlags::to_config() const {
  model::ModelConfig c;
  c.mog.model_dim = dim;
  c.mog.num_heads = heads;
  c.mog.dilations = dilations;
  c.sce_blocks = sce_blocks;
  c.scd_blocks = scd_blocks;
  c.ssd_blocks = ssd_blocks;
  c.num_queries = queries;
  c.image_size = image_size;
  c.patch_size = patch_size;
  c.ffn_mult = ffn_mult;
  c.validate();
  return c;
}

json to_json(const ModelFlags& f) { return model::to_json(f.to_config()); }

void TrainToyOptions::apply_full_schedule() {
  lr = 1e-4;
  projector_lr = 1e-5;
  freeze_projector_epochs = 10;
  epochs = 90;
  stop_when_perfect = false;
}

json to_json(const TrainToyOptions& o) {
  return {{"seed", o.seed},
          {"scenes", o.scenes},
          {"annotations", o.annotations.string()},
          {"model", to_json(o.model)},
          {"steps", o.steps},
          {"epochs", o.epochs},
          {"batch_size", o.batch_size},
          {"lr", o.lr},
          {"projector_lr", o.projector_lr},
          {"freeze_projector_epochs", o.freeze_projector_epochs},
          {"clip_norm", o.clip_norm},
          {"eval_every", o.eval_every},
          {"stop_when_perfect", o.stop_when_perfect},
          {"tag", o.tag}};
}

std::uint64_t data_seed(std::uint64_t seed) { return RngState(seed).fork(0).next_u64(); }
std::uint64_t model_seed(std::uint64_t seed) { return RngState(seed).fork(1).next_u64(); }
std::uint64_t shuffle_seed(std::uint64_t seed) { return RngState(seed).fork(2).next_u64(); }

namespace {

std::vector<data::Scene> synthetic_scenes(std::size_t count, std::size_t grid, std::uint64_t seed,
                                          const std::string& prefix) {
  data::SyntheticSceneSpec spec;
  spec.grid_size = grid;
  return data::generate_dataset(count, spec, seed, prefix);
}

std::string loss_table(const std::vector<model::StepRecord>& log) {
  std::string t = "step,epoch,loss\n";
  char buf[96];
  for (const auto& r : log) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g\n", r.step, r.epoch, r.loss);
    t += buf;
  }
  return t;
}

}  // namespace

TrainToyOutcome cmd_train_toy(const TrainToyOptions& o, const model::StepCallback& on_step) {
  const json rc = to_json(o);
  const model::ModelConfig cfg = o.model.to_config();
  std::vector<model::Sample> samples;
  if (o.annotations.empty()) {
    samples = model::samples_from_scenes(synthetic_scenes(o.scenes, cfg.image_size, data_seed(o.seed), "train"));
  } else {
    samples = model::samples_from_records(data::load_annotations(o.annotations), o.annotations.parent_path());
  }

  model::ScsModel m(cfg, model_seed(o.seed));
  model::TrainConfig tc;
  tc.steps = o.steps;
  tc.epochs = o.epochs;
  tc.batch_size = o.batch_size;
  tc.adam.lr = o.lr;
  tc.projector_lr = o.projector_lr;
  tc.freeze_projector_epochs = o.freeze_projector_epochs;
  tc.clip_norm = o.clip_norm;
  tc.shuffle_seed = shuffle_seed(o.seed);
  tc.eval_every = o.eval_every;
  tc.stop_when_perfect = o.stop_when_perfect;

  TrainToyOutcome out;
  const fs::path dir = resolve_output_dir(o.output_dir);
  out.loss_csv = dir / (o.tag + "_loss.csv");
  out.checkpoint = dir / (o.tag + "_checkpoint.json");
  out.summary = dir / (o.tag + "_summary.json");

  out.result = model::train(m, samples, tc, on_step);
  write_csv_artifact(out.loss_csv, rc, {"loss: mean matched set loss over the minibatch, per optimizer step"},
                     loss_table(out.result.log));
  model::save_checkpoint(m, out.checkpoint, {{"schema_version", kOutputSchemaVersion}, {"run_config", rc}});
  write_json_artifact(out.summary, "train-toy", rc,
                      {{"steps_run", out.result.steps_run},
                       {"final_loss", out.result.log.empty() ? 0.0 : out.result.log.back().loss},
                       {"train_p50", out.result.train_p50},
                       {"reached_perfect", out.result.reached_perfect},
                       {"samples", samples.size()},
                       {"parameters", m.parameters().scalar_count()}});
  return out;
}

json to_json(const EvalOptions& o) {
  json j = {{"checkpoint", o.checkpoint.string()},
            {"annotations", o.annotations.string()},
            {"predictor", o.predictor},
            {"thresholds", o.thresholds},
            {"tag", o.tag}};
  if (o.model) j["model"] = to_json(*o.model);
  return j;
}

EvalOutcome cmd_eval(const EvalOptions& o) {
  const json rc = to_json(o);
  if (o.annotations.empty()) throw ValidationError("eval: --annotations is required");
  const std::vector<data::AnnotationRecord> records = data::load_annotations(o.annotations);
  if (records.empty()) throw ValidationError("eval: annotation file has no records");

  EvalOutcome out;
  if (o.predictor == "model") {
    if (o.checkpoint.empty()) throw ValidationError("eval: --checkpoint is required for the model predictor");
    const json doc = model::read_checkpoint(o.checkpoint);
    const model::ModelConfig cfg = o.model ? o.model->to_config() : model::checkpoint_config(doc);
    model::ScsModel m(cfg, 0);
    model::load_parameters(m, doc);
    const auto samples = model::samples_from_records(records, o.annotations.parent_path());
    out.ious = model::sample_ious(m, samples);
    for (const auto& s : samples) out.ids.push_back(s.id);
  } else if (o.predictor == "oracle" || o.predictor == "center") {
    for (std::size_t i = 0; i < records.size(); ++i) {
      data::validate_record(records[i], i);
      const auto targets = data::normalized_targets(records[i]);
      const matching::BBox pred = o.predictor == "oracle" ? targets.front() : matching::BBox{0.5, 0.5, 0.5, 0.5};
      out.ious.push_back(model::best_target_iou(pred, targets));
      out.ids.push_back(records[i].image_id);
    }
  } else {
    throw ValidationError("eval: unknown predictor '" + o.predictor + "' (model, oracle, center)");
  }
  out.result = metrics::mean_precision_ious(out.ious, o.thresholds);

  const fs::path dir = resolve_output_dir(o.output_dir);
  out.json = dir / (o.tag + ".json");
  out.csv = dir / (o.tag + ".csv");
  json per_sample = json::array();
  for (std::size_t i = 0; i < out.ious.size(); ++i) per_sample.push_back({{"id", out.ids[i]}, {"iou", out.ious[i]}});
  write_json_artifact(out.json, "eval", rc, {{"result", metrics::to_json(out.result)}, {"per_sample", per_sample}});
  write_csv_artifact(out.csv, rc,
                     {"precision in percent; a prediction counts when IoU > threshold (strict); mP = mean over thresholds"},
                     metrics::csv_header(o.thresholds) + "\n" + metrics::csv_row(out.result) + "\n");
  return out;
}

json to_json(const SweepOptions& o) {
  json model = to_json(o.model);
  model["dilations"] = "1..G per row";
  return {{"g_max", o.g_max},         {"seed", o.seed},       {"train_scenes", o.train_scenes},
          {"eval_scenes", o.eval_scenes}, {"steps", o.steps}, {"batch_size", o.batch_size},
          {"lr", o.lr},               {"model", model},       {"jobs", o.jobs},
          {"thresholds", o.thresholds}};
}

SweepOutcome cmd_sweep_granularity(const SweepOptions& o) {
  const json rc = to_json(o);
  if (o.g_max < 1) throw ValidationError("sweep: --g-max must be >= 1");
  const std::size_t grid = o.model.image_size;
  const auto train_samples = model::samples_from_scenes(synthetic_scenes(o.train_scenes, grid, data_seed(o.seed), "train"));
  const auto eval_samples =
      model::samples_from_scenes(synthetic_scenes(o.eval_scenes, grid, RngState(o.seed).fork(3).next_u64(), "heldout"));

  SweepOutcome out;
  out.rows.resize(o.g_max);
  auto run = [&](std::size_t g) {
    ModelFlags flags = o.model;
    flags.dilations.clear();
    for (std::size_t d = 1; d <= g; ++d) flags.dilations.push_back(static_cast<int>(d));
    model::ScsModel m(flags.to_config(), model_seed(o.seed));
    model::TrainConfig tc;
    tc.steps = o.steps;
    tc.batch_size = o.batch_size;
    tc.adam.lr = o.lr;
    tc.shuffle_seed = shuffle_seed(o.seed);
    const model::TrainResult tr = model::train(m, train_samples, tc);
    SweepRow row;
    row.granularities = g;
    row.result = metrics::mean_precision_ious(model::sample_ious(m, eval_samples), o.thresholds);
    row.final_loss = tr.log.empty() ? 0.0 : tr.log.back().loss;
    out.rows[g - 1] = row;
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(o.jobs, o.g_max));
  if (jobs == 1) {
    for (std::size_t g = 1; g <= o.g_max; ++g) run(g);
  } else {
    std::mutex mu;
    std::size_t next = 1;
    std::exception_ptr error;
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (;;) {
          std::size_t g;
          {
            std::lock_guard lock(mu);
            if (next > o.g_max || error) return;
            g = next++;
          }
          try {
            run(g);
          } catch (...) {
            std::lock_guard lock(mu);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : workers) t.join();
    if (error) std::rethrow_exception(error);
  }

  const fs::path dir = resolve_output_dir(o.output_dir);
  out.csv = dir / "sweep_granularity.csv";
  out.json = dir / "sweep_granularity.json";
  std::string table = "Granularity," + metrics::csv_header(o.thresholds) + "\n";
  json rows = json::array();
  for (const SweepRow& r : out.rows) {
    table += std::to_string(r.granularities) + "," + metrics::csv_row(r.result) + "\n";
    rows.push_back({{"granularity", r.granularities}, {"result", metrics::to_json(r.result)}, {"final_loss", r.final_loss}});
  }
  write_csv_artifact(out.csv, rc,
                     {"held-out synthetic precision in percent per granularity count G (dilations 1..G)",
                      "reference (full-scale published result, not asserted): G=4 P@0.5 28.15"},
                     table);
  write_json_artifact(out.json, "sweep-granularity", rc,
                      {{"rows", rows},
                       {"reference", {{"granularity", 4}, {"P@0.5", 28.15}, {"asserted", false},
                                      {"note", "full-scale published result; toy-scale rows are not comparable"}}}});
  return out;
}

json to_json(const StatsOptions& o) {
  json j = {{"annotations", o.annotations.string()}, {"tag", o.tag}};
  j["category"] = o.category ? json(*o.category) : json(nullptr);
  return j;
}

StatsOutcome cmd_stats(const StatsOptions& o) {
  const json rc = to_json(o);
  if (o.annotations.empty()) throw ValidationError("stats: --annotations is required");
  std::vector<data::AnnotationRecord> records = data::load_annotations(o.annotations);
  if (o.category) {
    std::erase_if(records, [&](const data::AnnotationRecord& r) { return r.category != o.category; });
    if (records.empty()) throw ValidationError("stats: no records left after filtering on category '" + *o.category + "'");
  }
  StatsOutcome out;
  out.stats = metrics::dataset_stats(records);
  const fs::path dir = resolve_output_dir(o.output_dir);
  out.json = dir / (o.tag + ".json");
  out.csv = dir / (o.tag + ".csv");
  const json definitions = {
      {"o2s_percent", "per box: 100 * box area / image area; Mean (population Std) over all boxes"},
      {"words_per_expression", "whitespace tokens containing a letter or digit; Mean (population Std) over records"},
      {"targets_per_image", "bbox_count / number of distinct image ids"},
      {"mean_resolution", "mean image width and height over records"}};
  write_json_artifact(out.json, "stats", rc, {{"stats", metrics::to_json(out.stats)}, {"definitions", definitions}});
  std::vector<std::string> comments;
  for (const auto& [k, v] : definitions.items()) comments.push_back(k + ": " + v.get<std::string>());
  write_csv_artifact(out.csv, rc, comments, metrics::stats_csv(out.stats));
  return out;
}

json to_json(const GenerateOptions& o) {
  return {{"count", o.count},           {"seed", o.seed},     {"grid_size", o.grid_size},
          {"distractors", o.distractors}, {"prefix", o.prefix}, {"dump_images", o.dump_images}};
}

GenerateOutcome cmd_generate(const GenerateOptions& o) {
  const json rc = to_json(o);
  data::SyntheticSceneSpec spec;
  spec.grid_size = o.grid_size;
  spec.distractors = o.distractors;
  std::vector<data::Scene> scenes = data::generate_dataset(o.count, spec, o.seed, o.prefix);

  GenerateOutcome out;
  const fs::path dir = resolve_output_dir(o.output_dir);
  std::vector<data::AnnotationRecord> records;
  if (o.dump_images) fs::create_directories(dir / "images");
  for (data::Scene& s : scenes) {
    if (o.dump_images) {
      const std::string rel = "images/" + s.record.image_id + ".ppm";
      data::write_ppm(s.image, dir / rel);
      s.record.image_path = rel;
      out.images.push_back(dir / rel);
    }
    records.push_back(s.record);
  }
  out.annotations = dir / "annotations.json";
  json doc = data::annotations_to_json(records);
  doc["schema_version"] = kOutputSchemaVersion;
  doc["run_config"] = rc;
  std::ofstream f(out.annotations);
  if (!f) throw IoError("cannot write " + out.annotations.string());
  f << doc.dump(2) << "\n";
  return out;
}

}  // namespace scs::cli
