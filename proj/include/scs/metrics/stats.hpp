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

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "scs/data/annotation.hpp"

namespace scs::metrics {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

MeanStd mean_std(const std::vector<double>& values);

struct DatasetStats {
  std::size_t record_count = 0;
  std::size_t image_count = 0;  // distinct image ids
  std::size_t bbox_count = 0;
  double targets_per_image = 0.0;
  MeanStd o2s_percent;        // per box, 100 * box area / image area
  MeanStd words_per_expression;
  double mean_width = 0.0;
  double mean_height = 0.0;
  std::map<std::string, std::size_t> resolution_histogram;  // "WxH" -> records
  std::map<std::string, std::size_t> category_frequency;
  std::map<std::size_t, std::size_t> sentence_length_histogram;
};

// Whitespace word count after stripping punctuation-only tokens.
std::size_t word_count(const std::string& expression);
double o2s_percent(const data::PixelBox& box, std::size_t image_w, std::size_t image_h);

// Throws ValidationError for an empty record list or invalid boxes (listing record ids).
DatasetStats dataset_stats(const std::vector<data::AnnotationRecord>& records);

nlohmann::json to_json(const DatasetStats& s);
// Table layout: O2S Ratio, Word No. as "Mean (Std)", Target No., Bbox No., Resolution.
std::string stats_csv(const DatasetStats& s);

}  // namespace scs::metrics
