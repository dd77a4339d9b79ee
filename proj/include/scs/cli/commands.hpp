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
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scs/metrics/eval.hpp"
#include "scs/metrics/stats.hpp"
#include "scs/model/config.hpp"
#include "scs/model/trainer.hpp"

namespace scs::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitValidation = 3, kExitNumerical = 4, kExitIo = 5 };

inline constexpr int kOutputSchemaVersion = 1;
inline constexpr const char* kOutputDirEnv = "SCS_OUTPUT_DIR";

// Explicit directory, else $SCS_OUTPUT_DIR, else the working directory. Created if missing.
std::filesystem::path resolve_output_dir(const std::filesystem::path& explicit_dir);

// {"schema_version", "command", "run_config", ...payload}
void write_json_artifact(const std::filesystem::path& path, const std::string& command,
                         const nlohmann::json& run_config, nlohmann::json payload);
// "# schema_version: 1" and "# run_config: {...}" lines, then the table.
void write_csv_artifact(const std::filesystem::path& path, const nlohmann::json& run_config,
                        const std::vector<std::string>& comments, const std::string& table);

struct ModelFlags {
  std::size_t dim = 64;
  std::size_t heads = 4;
  std::vector<int> dilations{1, 2, 3, 4};
  std::size_t sce_blocks = 2;
  std::size_t scd_blocks = 1;
  std::size_t ssd_blocks = 1;
  std::size_t queries = 4;
  std::size_t image_size = 64;
  std::size_t patch_size = 8;
  std::size_t ffn_mult = 2;

  model::ModelConfig to_config() const;
};

nlohmann::json to_json(const ModelFlags& f);

struct TrainToyOptions {
  std::uint64_t seed = 0;
  std::size_t scenes = 16;
  std::filesystem::path annotations;  // empty: synthetic scenes
  ModelFlags model;
  std::size_t steps = 2000;
  std::size_t epochs = 0;
  std::size_t batch_size = 4;
  double lr = 1e-3;
  double projector_lr = 0.0;
  std::size_t freeze_projector_epochs = 0;
  double clip_norm = 0.0;
  std::size_t eval_every = 50;
  bool stop_when_perfect = true;
  std::filesystem::path output_dir;
  std::string tag = "train";

  // lr 1e-4, projector lr 1e-5, projector frozen for 10 epochs, 90 epochs, no early stop.
  void apply_full_schedule();
};

nlohmann::json to_json(const TrainToyOptions& o);

struct TrainToyOutcome {
  model::TrainResult result;
  std::filesystem::path loss_csv;
  std::filesystem::path checkpoint;
  std::filesystem::path summary;
};

// Derived seeds: scenes, model init and batch order each use their own fork of seed.
std::uint64_t data_seed(std::uint64_t seed);
std::uint64_t model_seed(std::uint64_t seed);
std::uint64_t shuffle_seed(std::uint64_t seed);

TrainToyOutcome cmd_train_toy(const TrainToyOptions& o, const model::StepCallback& on_step = {});

struct EvalOptions {
  std::filesystem::path checkpoint;
  std::filesystem::path annotations;
  // model | oracle (first target echoed) | center (0.5, 0.5, 0.5, 0.5)
  std::string predictor = "model";
  std::optional<ModelFlags> model;  // when set, must match the checkpoint
  std::vector<double> thresholds = metrics::kDefaultThresholds;
  std::filesystem::path output_dir;
  std::string tag = "eval";
};

nlohmann::json to_json(const EvalOptions& o);

struct EvalOutcome {
  metrics::EvalResult result;
  std::vector<std::string> ids;
  std::vector<double> ious;
  std::filesystem::path json;
  std::filesystem::path csv;
};

EvalOutcome cmd_eval(const EvalOptions& o);

struct SweepOptions {
  std::size_t g_max = 6;
  std::uint64_t seed = 0;
  std::size_t train_scenes = 16;
  std::size_t eval_scenes = 32;
  std::size_t steps = 300;
  std::size_t batch_size = 4;
  double lr = 1e-3;
  ModelFlags model;  // dilations are replaced by {1..G} per row
  std::size_t jobs = 1;
  std::vector<double> thresholds = metrics::kDefaultThresholds;
  std::filesystem::path output_dir;
};

nlohmann::json to_json(const SweepOptions& o);

struct SweepRow {
  std::size_t granularities = 0;
  metrics::EvalResult result;
  double final_loss = 0.0;
};

struct SweepOutcome {
  std::vector<SweepRow> rows;
  std::filesystem::path csv;
  std::filesystem::path json;
};

SweepOutcome cmd_sweep_granularity(const SweepOptions& o);

struct StatsOptions {
  std::filesystem::path annotations;
  std::optional<std::string> category;  // keep only records with this category
  std::filesystem::path output_dir;
  std::string tag = "stats";
};

nlohmann::json to_json(const StatsOptions& o);

struct StatsOutcome {
  metrics::DatasetStats stats;
  std::filesystem::path json;
  std::filesystem::path csv;
};

StatsOutcome cmd_stats(const StatsOptions& o);

struct GenerateOptions {
  std::size_t count = 16;
  std::uint64_t seed = 0;
  std::size_t grid_size = 64;
  std::size_t distractors = 3;
  std::string prefix = "scene";
  bool dump_images = true;
  std::filesystem::path output_dir;
};

nlohmann::json to_json(const GenerateOptions& o);

struct GenerateOutcome {
  std::filesystem::path annotations;
  std::vector<std::filesystem::path> images;
};

GenerateOutcome cmd_generate(const GenerateOptions& o);

}  // namespace scs::cli
