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
#include <functional>
#include <string>
#include <vector>

#include "scs/data/annotation.hpp"
#include "scs/data/synthetic.hpp"
#include "scs/matching/loss.hpp"
#include "scs/metrics/eval.hpp"
#include "scs/model/model.hpp"
#include "scs/model/optimizer.hpp"

namespace scs::model {

struct Sample {
  std::string id;
  data::Image image;
  std::vector<int> ids;
  std::vector<matching::BBox> targets;
};

std::vector<Sample> samples_from_scenes(const std::vector<data::Scene>& scenes);
// Loads each record's raster from image_path (relative paths resolve against base_dir).
std::vector<Sample> samples_from_records(const std::vector<data::AnnotationRecord>& records,
                                         const std::filesystem::path& base_dir);

struct TrainConfig {
  std::size_t steps = 2000;
  // When > 0, overrides steps with epochs * ceil(samples / batch_size).
  std::size_t epochs = 0;
  std::size_t batch_size = 4;
  AdamConfig adam;
  // Projector parameters use this rate when > 0.
  double projector_lr = 0.0;
  std::size_t freeze_projector_epochs = 0;
  double clip_norm = 0.0;
  matching::LossWeights loss_weights;
  std::uint64_t shuffle_seed = 0;
  // Training-set P@0.5 is measured every eval_every steps (0 disables);
  // training stops early once it reaches 1.0 when stop_when_perfect is set.
  std::size_t eval_every = 0;
  bool stop_when_perfect = false;
};

struct StepRecord {
  std::size_t step = 0;  // 1-based
  std::size_t epoch = 0;
  double loss = 0.0;
};

struct TrainResult {
  std::vector<StepRecord> log;
  std::size_t steps_run = 0;
  double train_p50 = -1.0;  // last measured training-set P@0.5, -1 when never measured
  bool reached_perfect = false;
};

using StepCallback = std::function<void(const StepRecord&)>;

// Throws NumericalError naming the step when the loss becomes non-finite.
TrainResult train(ScsModel& model, const std::vector<Sample>& samples, const TrainConfig& config,
                  const StepCallback& on_step = {});

// Box of the most confident query (lowest index on ties).
matching::BBox predict_box(ScsModel& model, const Sample& sample);
// Per-sample IoU of the predicted box against the best-matching target box.
std::vector<double> sample_ious(ScsModel& model, const std::vector<Sample>& samples);
double best_target_iou(const matching::BBox& predicted, const std::vector<matching::BBox>& targets);

}  // namespace scs::model
