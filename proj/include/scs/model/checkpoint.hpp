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

#include <filesystem>

#include <json.hpp>

#include "scs/model/model.hpp"

namespace scs::model {

inline constexpr int kCheckpointVersion = 1;

// {"format": "scs-checkpoint", "version": 1, "config": {...},
//  "parameters": {name: {"shape": [...], "data": [...]}}, "meta": {...}}
nlohmann::json checkpoint_to_json(const ScsModel& model, const nlohmann::json& meta = nlohmann::json::object());
void save_checkpoint(const ScsModel& model, const std::filesystem::path& path,
                     const nlohmann::json& meta = nlohmann::json::object());

// Reads the config stored in a checkpoint.
ModelConfig checkpoint_config(const nlohmann::json& doc);
nlohmann::json read_checkpoint(const std::filesystem::path& path);

// Copies parameter values into model. Throws ValidationError when the stored
// config, a parameter name or a shape differs from the model.
void load_parameters(ScsModel& model, const nlohmann::json& doc);

}  // namespace scs::model
