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
#include "scs/data/annotation.hpp"

#include <cmath>
#include <fstream>

#include "scs/errors.hpp"

namespace scs::data {

using nlohmann::json;

matching::BBox normalize(const PixelBox& box, std::size_t image_w, std::size_t image_h) {
  const double iw = static_cast<double>(image_w), ih = static_cast<double>(image_h);
  return {(box.x + 0.5 * box.w) / iw, (box.y + 0.5 * box.h) / ih, box.w / iw, box.h / ih};
}

std::vector<matching::BBox> normalized_targets(const AnnotationRecord& record) {
  std::vector<matching::BBox> out;
  out.reserve(record.target_boxes.size());
  for (const auto& b : record.target_boxes) out.push_back(normalize(b, record.image_w, record.image_h));
  return out;
}

void validate_record(const AnnotationRecord& r, std::size_t index) {
  const std::string where = "record " + std::to_string(index) + " (image '" + r.image_id + "')";
  if (r.image_id.empty()) throw ValidationError(where + ": field 'image_id' is empty");
  if (r.image_w == 0) throw ValidationError(where + ": field 'image_w' must be positive");
  if (r.image_h == 0) throw ValidationError(where + ": field 'image_h' must be positive");
  if (r.target_boxes.empty()) throw ValidationError(where + ": field 'target_boxes' is empty");
  const double iw = static_cast<double>(r.image_w), ih = static_cast<double>(r.image_h);
  for (std::size_t k = 0; k < r.target_boxes.size(); ++k) {
    const PixelBox& b = r.target_boxes[k];
    const std::string field = "target_boxes[" + std::to_string(k) + "]";
    const double vals[4] = {b.x, b.y, b.w, b.h};
    const char* names[4] = {"x", "y", "w", "h"};
    for (int c = 0; c < 4; ++c) {
      if (!std::isfinite(vals[c])) throw ValidationError(where + ": field '" + field + "." + names[c] + "' is not finite");
      if (vals[c] < 0.0) throw ValidationError(where + ": field '" + field + "." + names[c] + "' is negative");
    }
    if (b.x + b.w > iw || b.y + b.h > ih) {
      throw ValidationError(where + ": field '" + field + "' exceeds the " + std::to_string(r.image_w) + "x" +
                            std::to_string(r.image_h) + " image bounds");
    }
  }
}

json to_json(const AnnotationRecord& r) {
  json boxes = json::array();
  for (const auto& b : r.target_boxes) boxes.push_back({b.x, b.y, b.w, b.h});
  json j = {{"image_id", r.image_id},     {"image_w", r.image_w},     {"image_h", r.image_h},
            {"expression", r.expression}, {"target_boxes", boxes}};
  if (r.category) j["category"] = *r.category;
  if (r.image_path) j["image_path"] = *r.image_path;
  return j;
}

namespace {

template <typename T>
T required(const json& j, const char* field, std::size_t index) {
  const std::string where = "record " + std::to_string(index);
  if (!j.contains(field)) throw ValidationError(where + ": missing field '" + std::string(field) + "'");
  try {
    return j.at(field).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(where + ": field '" + std::string(field) + "' has the wrong type");
  }
}

}  // namespace

AnnotationRecord record_from_json(const json& j, std::size_t index) {
  if (!j.is_object()) throw ValidationError("record " + std::to_string(index) + ": not a JSON object");
  AnnotationRecord r;
  r.image_id = required<std::string>(j, "image_id", index);
  const auto w = required<double>(j, "image_w", index);
  const auto h = required<double>(j, "image_h", index);
  if (w <= 0 || h <= 0 || w != std::floor(w) || h != std::floor(h)) {
    throw ValidationError("record " + std::to_string(index) + ": field 'image_w'/'image_h' must be positive integers");
  }
  r.image_w = static_cast<std::size_t>(w);
  r.image_h = static_cast<std::size_t>(h);
  r.expression = required<std::string>(j, "expression", index);
  const auto boxes = required<json>(j, "target_boxes", index);
  if (!boxes.is_array()) throw ValidationError("record " + std::to_string(index) + ": field 'target_boxes' is not an array");
  for (std::size_t k = 0; k < boxes.size(); ++k) {
    const auto& b = boxes[k];
    if (!b.is_array() || b.size() != 4 || !std::all_of(b.begin(), b.end(), [](const json& v) { return v.is_number(); })) {
      throw ValidationError("record " + std::to_string(index) + ": field 'target_boxes[" + std::to_string(k) +
                            "]' must be [x, y, w, h]");
    }
    r.target_boxes.push_back({b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()});
  }
  if (j.contains("category") && !j["category"].is_null()) r.category = required<std::string>(j, "category", index);
  if (j.contains("image_path") && !j["image_path"].is_null()) r.image_path = required<std::string>(j, "image_path", index);
  validate_record(r, index);
  return r;
}

std::vector<AnnotationRecord> parse_annotations(const json& doc) {
  const json* records = &doc;
  if (doc.is_object()) {
    const int version = doc.value("version", -1);
    if (version != kAnnotationSchemaVersion) {
      throw ValidationError("annotation file: unsupported schema version " + std::to_string(version));
    }
    if (!doc.contains("records") || !doc["records"].is_array()) {
      throw ValidationError("annotation file: missing 'records' array");
    }
    records = &doc["records"];
  } else if (!doc.is_array()) {
    throw ValidationError("annotation file: expected an object or an array of records");
  }
  std::vector<AnnotationRecord> out;
  out.reserve(records->size());
  for (std::size_t i = 0; i < records->size(); ++i) out.push_back(record_from_json((*records)[i], i));
  return out;
}

std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open annotation file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return parse_annotations(doc);
}

json annotations_to_json(const std::vector<AnnotationRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back(to_json(r));
  return {{"schema", "scs-annotations"}, {"version", kAnnotationSchemaVersion}, {"records", arr}};
}

void save_annotations(const std::vector<AnnotationRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << annotations_to_json(records).dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace scs::data
