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
#include "scs/metrics/eval.hpp"

#include <cmath>
#include <cstdio>

#include "scs/errors.hpp"

namespace scs::metrics {

double precision_at_ious(const std::vector<double>& ious, double theta) {
  if (ious.empty()) throw ValidationError("precision_at: no prediction/ground-truth pairs");
  if (!(theta > 0.0 && theta < 1.0)) throw ValidationError("precision_at: threshold must lie in (0, 1)");
  std::size_t hits = 0;
  for (double v : ious) hits += v > theta ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(ious.size());
}

double precision_at(const std::vector<BoxPair>& pairs, double theta) {
  std::vector<double> ious;
  ious.reserve(pairs.size());
  for (const auto& [p, g] : pairs) ious.push_back(matching::iou(p, g));
  return precision_at_ious(ious, theta);
}

double mean_of(const std::vector<double>& precisions) {
  if (precisions.empty()) throw ValidationError("mean precision over an empty threshold list");
  double s = 0.0;
  for (double p : precisions) s += p;
  return s / static_cast<double>(precisions.size());
}

EvalResult mean_precision_ious(const std::vector<double>& ious, const std::vector<double>& thresholds) {
  EvalResult r;
  r.thresholds = thresholds;
  for (double t : thresholds) r.precision.push_back(precision_at_ious(ious, t));
  r.mean_precision = mean_of(r.precision);
  r.count = ious.size();
  return r;
}

EvalResult mean_precision(const std::vector<BoxPair>& pairs, const std::vector<double>& thresholds) {
  std::vector<double> ious;
  ious.reserve(pairs.size());
  for (const auto& [p, g] : pairs) ious.push_back(matching::iou(p, g));
  return mean_precision_ious(ious, thresholds);
}

double EvalResult::at(double theta) const {
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (thresholds[i] == theta) return precision[i];
  }
  throw ValidationError("no precision recorded at threshold " + threshold_label(theta));
}

std::string threshold_label(double theta) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "P@%g", theta);
  return buf;
}

nlohmann::json to_json(const EvalResult& r) {
  nlohmann::json j;
  j["thresholds"] = r.thresholds;
  j["precision"] = r.precision;
  j["mean_precision"] = r.mean_precision;
  j["count"] = r.count;
  nlohmann::json table = nlohmann::json::object();
  for (std::size_t i = 0; i < r.thresholds.size(); ++i) table[threshold_label(r.thresholds[i])] = 100.0 * r.precision[i];
  table["mP"] = 100.0 * r.mean_precision;
  j["table_percent"] = table;
  return j;
}

EvalResult eval_result_from_json(const nlohmann::json& j) {
  EvalResult r;
  try {
    r.thresholds = j.at("thresholds").get<std::vector<double>>();
    r.precision = j.at("precision").get<std::vector<double>>();
    r.mean_precision = j.at("mean_precision").get<double>();
    r.count = j.at("count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("EvalResult JSON: ") + e.what());
  }
  if (r.thresholds.size() != r.precision.size()) throw ValidationError("EvalResult JSON: thresholds/precision length mismatch");
  return r;
}

std::string csv_header(const std::vector<double>& thresholds) {
  std::string h;
  for (double t : thresholds) h += threshold_label(t) + ",";
  return h + "mP";
}

std::string csv_row(const EvalResult& r) {
  std::string row;
  char buf[64];
  for (double p : r.precision) {
    std::snprintf(buf, sizeof buf, "%.2f,", 100.0 * p);
    row += buf;
  }
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * r.mean_precision);
  return row + buf;
}

}  // namespace scs::metrics
