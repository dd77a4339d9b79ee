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
#include <utility>
#include <vector>

#include <json.hpp>

#include "scs/matching/bbox.hpp"

namespace scs::metrics {

using BoxPair = std::pair<matching::BBox, matching::BBox>;  // (predicted, ground truth)

inline const std::vector<double> kDefaultThresholds{0.5, 0.6, 0.7, 0.8};

// Fraction of pairs with IoU strictly greater than theta.
double precision_at(const std::vector<BoxPair>& pairs, double theta);
double precision_at_ious(const std::vector<double>& ious, double theta);

struct EvalResult {
  std::vector<double> thresholds;
  std::vector<double> precision;  // parallel to thresholds, fractions in [0, 1]
  double mean_precision = 0.0;
  std::size_t count = 0;

  double at(double theta) const;
  friend bool operator==(const EvalResult&, const EvalResult&) = default;
};

EvalResult mean_precision(const std::vector<BoxPair>& pairs,
                          const std::vector<double>& thresholds = kDefaultThresholds);
EvalResult mean_precision_ious(const std::vector<double>& ious,
                               const std::vector<double>& thresholds = kDefaultThresholds);
// mP over precomputed per-threshold precisions (any unit).
double mean_of(const std::vector<double>& precisions);

// Column header for a threshold: "P@0.5".
std::string threshold_label(double theta);

// Percent-valued columns named like the published tables (P@0.5 ... mP).
nlohmann::json to_json(const EvalResult& r);
EvalResult eval_result_from_json(const nlohmann::json& j);
std::string csv_header(const std::vector<double>& thresholds);
std::string csv_row(const EvalResult& r);

}  // namespace scs::metrics
