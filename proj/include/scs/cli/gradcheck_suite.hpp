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
#include <string>
#include <vector>

#include <json.hpp>

namespace scs::cli {

struct GradcheckOptions {
  std::uint64_t seed = 0;
  double step = 1e-5;
  double tolerance = 1e-4;
  // Op whose backward pass is sign-flipped, to exercise failure reporting.
  std::string inject_fault;
  // Restrict the run to these ops; empty runs all.
  std::vector<std::string> only;
};

struct GradcheckEntry {
  std::string op;
  double worst_relative_error = 0.0;
  std::size_t coordinates = 0;
  bool passed = false;
};

struct GradcheckReport {
  std::vector<GradcheckEntry> entries;
  double tolerance = 0.0;
  double step = 0.0;
  bool passed = false;

  std::vector<std::string> failed_ops() const;
};

std::vector<std::string> gradcheck_op_names();
GradcheckReport run_gradcheck(const GradcheckOptions& options);
nlohmann::json to_json(const GradcheckReport& r);

}  // namespace scs::cli
