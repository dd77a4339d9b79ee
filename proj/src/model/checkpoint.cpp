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
#include "scs/model/checkpoint.hpp"

#include <fstream>

#include "scs/errors.hpp"

namespace scs::model {

nlohmann::json checkpoint_to_json(const ScsModel& model, const nlohmann::json& meta) {
  nlohmann::json params = nlohmann::json::object();
  for (const Parameter& p : model.parameters()) {
    params[p.name()] = {{"shape", p.shape()}, {"data", p.value().values()}};
  }
  return {{"format", "scs-checkpoint"},
          {"version", kCheckpointVersion},
          {"config", to_json(model.config())},
          {"parameters", params},
          {"meta", meta}};
}

void save_checkpoint(const ScsModel& model, const std::filesystem::path& path, const nlohmann::json& meta) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out << checkpoint_to_json(model, meta).dump();
  if (!out) throw IoError("failed writing checkpoint " + path.string());
}

nlohmann::json read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("checkpoint " + path.string() + " is not valid JSON: " + e.what());
  }
  return doc;
}

ModelConfig checkpoint_config(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("format", "") != "scs-checkpoint") throw ValidationError("not an scs checkpoint");
  if (doc.value("version", 0) != kCheckpointVersion) {
    throw ValidationError("unsupported checkpoint version " + doc.value("version", nlohmann::json()).dump());
  }
  return model_config_from_json(doc.at("config"));
}

void load_parameters(ScsModel& model, const nlohmann::json& doc) {
  const ModelConfig stored = checkpoint_config(doc);
  if (!(stored == model.config())) {
    throw ValidationError("checkpoint config " + to_json(stored).dump() + " does not match model config " +
                          to_json(model.config()).dump());
  }
  const auto& params = doc.at("parameters");
  for (Parameter& p : model.parameters()) {
    auto it = params.find(p.name());
    if (it == params.end()) throw ValidationError("checkpoint is missing parameter '" + p.name() + "'");
    const Shape shape = it->at("shape").get<Shape>();
    if (shape != p.shape()) {
      throw ValidationError("parameter '" + p.name() + "' has shape " + shape_to_string(shape) +
                            " in checkpoint but " + shape_to_string(p.shape()) + " in model");
    }
    std::vector<double> data = it->at("data").get<std::vector<double>>();
    if (data.size() != p.value().size()) throw ValidationError("parameter '" + p.name() + "' data length mismatch");
    p.value() = Tensor(shape, std::move(data));
  }
  if (params.size() != model.parameters().size()) {
    throw ValidationError("checkpoint holds " + std::to_string(params.size()) + " parameters, model has " +
                          std::to_string(model.parameters().size()));
  }
}

}  // namespace scs::model
