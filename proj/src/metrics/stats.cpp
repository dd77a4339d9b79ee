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
#include "scs/metrics/stats.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "scs/errors.hpp"

namespace scs::metrics {

MeanStd mean_std(const std::vector<double>& values) {
  if (values.empty()) throw ValidationError("mean/std of an empty sample");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size()))};
}

std::size_t word_count(const std::string& expression) {
  std::istringstream in(expression);
  std::string tok;
  std::size_t n = 0;
  while (in >> tok) {
    for (unsigned char c : tok) {
      if (std::isalnum(c)) {
        ++n;
        break;
      }
    }
  }
  return n;
}

double o2s_percent(const data::PixelBox& box, std::size_t image_w, std::size_t image_h) {
  return 100.0 * box.w * box.h / (static_cast<double>(image_w) * static_cast<double>(image_h));
}

DatasetStats dataset_stats(const std::vector<data::AnnotationRecord>& records) {
  if (records.empty()) throw ValidationError("dataset statistics need at least one record");

  std::string bad;
  for (std::size_t i = 0; i < records.size(); ++i) {
    try {
      data::validate_record(records[i], i);
    } catch (const ValidationError& e) {
      bad += (bad.empty() ? "" : "; ") + std::string(e.what());
    }
  }
  if (!bad.empty()) throw ValidationError("invalid annotations: " + bad);

  DatasetStats s;
  s.record_count = records.size();
  std::set<std::string> images;
  std::vector<double> o2s;
  std::vector<double> words;
  double wsum = 0.0;
  double hsum = 0.0;
  for (const auto& r : records) {
    images.insert(r.image_id);
    for (const auto& b : r.target_boxes) o2s.push_back(o2s_percent(b, r.image_w, r.image_h));
    s.bbox_count += r.target_boxes.size();
    const std::size_t wc = word_count(r.expression);
    words.push_back(static_cast<double>(wc));
    s.sentence_length_histogram[wc] += 1;
    wsum += static_cast<double>(r.image_w);
    hsum += static_cast<double>(r.image_h);
    s.resolution_histogram[std::to_string(r.image_w) + "x" + std::to_string(r.image_h)] += 1;
    if (r.category) s.category_frequency[*r.category] += 1;
  }
  s.image_count = images.size();
  s.targets_per_image = static_cast<double>(s.bbox_count) / static_cast<double>(s.image_count);
  s.o2s_percent = mean_std(o2s);
  s.words_per_expression = mean_std(words);
  s.mean_width = wsum / static_cast<double>(records.size());
  s.mean_height = hsum / static_cast<double>(records.size());
  return s;
}

nlohmann::json to_json(const DatasetStats& s) {
  nlohmann::json j;
  j["record_count"] = s.record_count;
  j["image_count"] = s.image_count;
  j["bbox_count"] = s.bbox_count;
  j["targets_per_image"] = s.targets_per_image;
  j["o2s_percent"] = {{"mean", s.o2s_percent.mean}, {"std", s.o2s_percent.std}};
  j["words_per_expression"] = {{"mean", s.words_per_expression.mean}, {"std", s.words_per_expression.std}};
  j["mean_resolution"] = {{"width", s.mean_width}, {"height", s.mean_height}};
  j["resolution_histogram"] = s.resolution_histogram;
  j["category_frequency"] = s.category_frequency;
  nlohmann::json lengths = nlohmann::json::object();
  for (const auto& [len, n] : s.sentence_length_histogram) lengths[std::to_string(len)] = n;
  j["sentence_length_histogram"] = lengths;
  return j;
}

std::string stats_csv(const DatasetStats& s) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "O2S Ratio,Word No.,Target No.,Bbox No.,Resolution\n"
                "%.2f (%.2f),%.2f (%.2f),%.2f,%zu,%gx%g\n",
                s.o2s_percent.mean, s.o2s_percent.std, s.words_per_expression.mean, s.words_per_expression.std,
                s.targets_per_image, s.bbox_count, s.mean_width, s.mean_height);
  return buf;
}

}  // namespace scs::metrics
