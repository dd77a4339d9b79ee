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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scs/matching/bbox.hpp"

namespace scs::data {

inline constexpr int kAnnotationSchemaVersion = 1;

// Pixel-space box, top-left corner plus size.
struct PixelBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  friend bool operator==(const PixelBox&, const PixelBox&) = default;
};

struct AnnotationRecord {
  std::string image_id;
  std::size_t image_w = 0;
  std::size_t image_h = 0;
  std::string expression;
  std::vector<PixelBox> target_boxes;
  std::optional<std::string> category;
  // Raster location relative to the annotation file, when one exists.
  std::optional<std::string> image_path;

  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

matching::BBox normalize(const PixelBox& box, std::size_t image_w, std::size_t image_h);
std::vector<matching::BBox> normalized_targets(const AnnotationRecord& record);

// Throws ValidationError naming the record index and field.
void validate_record(const AnnotationRecord& record, std::size_t index);

nlohmann::json to_json(const AnnotationRecord& record);
AnnotationRecord record_from_json(const nlohmann::json& j, std::size_t index);

// File layout: {"schema": "scs-annotations", "version": 1, "records": [...]}.
// A bare JSON array of records is accepted on input.
std::vector<AnnotationRecord> parse_annotations(const nlohmann::json& doc);
std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path);
nlohmann::json annotations_to_json(const std::vector<AnnotationRecord>& records);
void save_annotations(const std::vector<AnnotationRecord>& records, const std::filesystem::path& path);

}  // namespace scs::data
