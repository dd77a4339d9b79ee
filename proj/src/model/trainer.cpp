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
#include "scs/model/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scs/data/tokenizer.hpp"
#include "scs/errors.hpp"

namespace scs::model {

std::vector<Sample> samples_from_scenes(const std::vector<data::Scene>& scenes) {
  std::vector<Sample> out;
  out.reserve(scenes.size());
  for (const data::Scene& s : scenes) {
    out.push_back({s.record.image_id, s.image, data::tokenize(s.record.expression, data::Vocabulary::builtin()),
                   data::normalized_targets(s.record)});
  }
  return out;
}

std::vector<Sample> samples_from_records(const std::vector<data::AnnotationRecord>& records,
                                         const std::filesystem::path& base_dir) {
  std::vector<Sample> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const data::AnnotationRecord& r = records[i];
    data::validate_record(r, i);
    if (!r.image_path) {
      throw ValidationError("record " + std::to_string(i) + " (image '" + r.image_id + "'): field 'image_path' is missing");
    }
    std::filesystem::path p(*r.image_path);
    if (p.is_relative()) p = base_dir / p;
    data::Image img = data::read_ppm(p);
    if (img.width != r.image_w || img.height != r.image_h) {
      throw ValidationError("record " + std::to_string(i) + " (image '" + r.image_id + "'): raster is " +
                            std::to_string(img.width) + "x" + std::to_string(img.height) + " but annotation says " +
                            std::to_string(r.image_w) + "x" + std::to_string(r.image_h));
    }
    out.push_back({r.image_id, std::move(img), data::tokenize(r.expression, data::Vocabulary::builtin()),
                   data::normalized_targets(r)});
  }
  return out;
}

double best_target_iou(const matching::BBox& predicted, const std::vector<matching::BBox>& targets) {
  double best = 0.0;
  for (const auto& t : targets) best = std::max(best, matching::iou(predicted, t));
  return best;
}

matching::BBox predict_box(ScsModel& model, const Sample& sample) {
  NoGradGuard no_grad;
  Prediction p = model.forward(sample.image, sample.ids);
  const Tensor& conf = p.confidence.value();
  std::size_t best = 0;
  for (std::size_t q = 1; q < conf.dim(1); ++q)
    if (conf[q] > conf[best]) best = q;
  const Tensor& b = p.boxes.value();
  return {b[best * 4 + 0], b[best * 4 + 1], b[best * 4 + 2], b[best * 4 + 3]};
}

std::vector<double> sample_ious(ScsModel& model, const std::vector<Sample>& samples) {
  std::vector<double> ious;
  ious.reserve(samples.size());
  for (const Sample& s : samples) ious.push_back(best_target_iou(predict_box(model, s), s.targets));
  return ious;
}

TrainResult train(ScsModel& model, const std::vector<Sample>& samples, const TrainConfig& config,
                  const StepCallback& on_step) {
  if (samples.empty()) throw ValidationError("training needs at least one sample");
  if (config.batch_size == 0) throw ValidationError("batch_size must be >= 1");
  const std::size_t per_epoch = (samples.size() + config.batch_size - 1) / config.batch_size;
  const std::size_t total = config.epochs > 0 ? config.epochs * per_epoch : config.steps;

  Adam adam(model.parameters(), config.adam);
  const RngState shuffle_root(config.shuffle_seed);
  std::vector<std::size_t> order(samples.size());
  TrainResult result;

  for (std::size_t step = 1; step <= total; ++step) {
    const std::size_t epoch = (step - 1) / per_epoch;
    const std::size_t slot = (step - 1) % per_epoch;
    if (slot == 0) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      RngState rng = shuffle_root.fork(epoch);
      for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    }
    const std::size_t begin = slot * config.batch_size;
    const std::size_t end = std::min(begin + config.batch_size, samples.size());
    const double inv = 1.0 / static_cast<double>(end - begin);

    model.parameters().zero_grad();
    double loss_sum = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      const Sample& s = samples[order[k]];
      const auto fail = [&] {
        throw NumericalError("non-finite loss at step " + std::to_string(step) + " (sample '" + s.id + "')");
      };
      Prediction p = model.forward(s.image, s.ids);
      if (!p.boxes.value().all_finite() || !p.confidence.value().all_finite()) fail();
      matching::MatchResult m = matching::match_and_loss(p.boxes, p.confidence, {s.targets}, config.loss_weights);
      const double l = m.loss.item();
      if (!std::isfinite(l)) fail();
      loss_sum += l;
      backward(ops::scale(m.loss, inv));
    }
    if (config.clip_norm > 0.0) clip_grad_norm(model.parameters(), config.clip_norm);

    const bool frozen = epoch < config.freeze_projector_epochs;
    adam.step([&](const Parameter& prm, double base) {
      if (!ScsModel::is_projector_parameter(prm.name())) return base;
      if (frozen) return 0.0;
      return config.projector_lr > 0.0 ? config.projector_lr : base;
    });

    StepRecord rec{step, epoch + 1, loss_sum * inv};
    result.log.push_back(rec);
    result.steps_run = step;
    if (on_step) on_step(rec);

    if (config.eval_every > 0 && (step % config.eval_every == 0 || step == total)) {
      result.train_p50 = metrics::precision_at_ious(sample_ious(model, samples), 0.5);
      if (result.train_p50 == 1.0) {
        result.reached_perfect = true;
        if (config.stop_when_perfect) break;
      }
    }
  }
  return result;
}

}  // namespace scs::model
