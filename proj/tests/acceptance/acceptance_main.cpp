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
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/reference.hpp"
#include "scs/cli/commands.hpp"
#include "scs/cli/gradcheck_suite.hpp"
#include "scs/matching/bbox.hpp"
#include "scs/matching/hungarian.hpp"
#include "scs/metrics/eval.hpp"
#include "scs/mog/attention.hpp"
#include "scs/mog/mask.hpp"
#include "scs/numerics/rng.hpp"

namespace {

namespace fs = std::filesystem;
using namespace scs;
using Clock = std::chrono::steady_clock;

// Pinned tolerances and budgets.
constexpr double kMaskSeconds = 1.0;
constexpr double kRowSumTol = 1e-12;
constexpr double kReductionTol = 1e-10;
constexpr double kConvexTol = 1e-12;
constexpr double kGradRelTol = 1e-4;
constexpr double kGradStep = 1e-5;
constexpr double kGradcheckSeconds = 60.0;
constexpr double kHungarianSeconds = 10.0;
constexpr double kHungarianTol = 1e-9;
constexpr double kRasterTol = 1e-3;
constexpr double kHandTol = 1e-9;
constexpr double kPublishedMp = 16.39;
constexpr double kPublishedMpTol = 0.005;
constexpr std::size_t kOverfitSteps = 2000;
constexpr double kOverfitSeconds = 300.0;
constexpr std::size_t kSweepSteps = 60;

struct Outcome {
  bool passed = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Tensor random_tensor(Shape shape, RngState& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(lo, hi);
  return t;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("scs_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Outcome mask_correctness() {
  const auto t0 = Clock::now();
  std::size_t mismatches = 0;
  for (std::size_t n = 1; n <= 64; ++n) {
    for (int d = 1; d <= 6; ++d) {
      const mog::GranularityMask m = mog::build_mask(n, d);
      for (std::size_t i = 0; i < n; ++i) {
        if (!m.at(i, i)) ++mismatches;
        for (std::size_t j = 0; j < n; ++j) {
          if (m.at(i, j) != oracle::mask_predicate(i, j, d)) ++mismatches;
          if (m.at(i, j) != m.at(j, i)) ++mismatches;
          if (d == 1 && !m.at(i, j)) ++mismatches;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < kMaskSeconds,
          std::to_string(mismatches) + " mismatches, " + fmt("%.3f s", secs)};
}

Outcome exact_zero_masking() {
  RngState rng(101);
  std::size_t nonzero = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(48);
    const int d = 1 + static_cast<int>(rng.below(6));
    const Tensor a = random_tensor({2, 3, n, n}, rng, -30, 30);
    const mog::GranularityMask& m = mog::cached_mask(n, n, d);
    const Tensor p = ops::masked_softmax(constant(a), m.as_tensor()).value();
    for (std::size_t row = 0; row < 6 * n; ++row) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double v = p[row * n + j];
        if (!m.at(row % n, j) && v != 0.0) ++nonzero;
        s += v;
      }
      worst = std::max(worst, std::abs(s - 1.0));
    }
  }
  return {nonzero == 0 && worst <= kRowSumTol,
          "200 cases, " + std::to_string(nonzero) + " nonzero masked weights, worst |row sum - 1| " +
              fmt("%.2e", worst)};
}

struct MoGCase {
  ParameterSet params;
  mog::MoGParams p;
  mog::MoGConfig cfg;
  Tensor x;

  MoGCase(std::size_t b, std::size_t n, std::size_t d, std::size_t h, std::vector<int> dilations, std::uint64_t seed) {
    cfg.model_dim = d;
    cfg.num_heads = h;
    cfg.dilations = std::move(dilations);
    RngState rng(seed);
    p = mog::MoGParams::create(params, "m", cfg, rng);
    for (double& v : p.gate.b->value().data()) v = rng.uniform(-1, 1);
    x = random_tensor({b, n, d}, rng);
  }
};

Outcome reduction_equivalence() {
  MoGCase c(2, 16, 64, 4, {1}, 202);
  const Tensor y = mog::mog_forward(constant(c.x), c.cfg, mog::MoGWeights::bind(c.p)).value();
  const Tensor ref = oracle::attention(c.x, c.x, c.p.proj.w_q->value(), c.p.proj.w_k->value(),
                                       c.p.proj.w_v->value(), 4, 0);
  const double diff = max_abs_diff(y, ref);
  return {diff <= kReductionTol, "max abs diff " + fmt("%.2e", diff)};
}

Outcome convex_gating() {
  RngState rng(303);
  double worst_sum = 0.0;
  double min_weight = 1.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t g = 1 + rng.below(6), d = 4 + rng.below(13);
    const double scale = std::pow(10.0, rng.uniform(-3, 3));
    const Tensor x = random_tensor({3, 1 + rng.below(12), d}, rng, -scale, scale);
    const Tensor w = random_tensor({d, g}, rng, -scale, scale);
    const Tensor b = random_tensor({g}, rng, -scale, scale);
    const Tensor gamma = mog::gate_weights(constant(x), constant(w), constant(b)).value();
    for (std::size_t r = 0; r < 3; ++r) {
      double s = 0.0;
      for (std::size_t k = 0; k < g; ++k) {
        min_weight = std::min(min_weight, gamma.at(r, k));
        s += gamma.at(r, k);
      }
      worst_sum = std::max(worst_sum, std::abs(s - 1.0));
    }
  }
  MoGCase c(3, 13, 16, 2, {1, 2, 3, 4}, 304);
  const mog::MoGTrace t = mog::mog_forward_traced(constant(c.x), c.cfg, mog::MoGWeights::bind(c.p));
  Tensor mixed(t.output.shape());
  const std::size_t per_sample = mixed.size() / 3;
  for (std::size_t g = 0; g < t.branches.size(); ++g) {
    const Tensor& yg = t.branches[g].value();
    for (std::size_t i = 0; i < mixed.size(); ++i) mixed[i] += t.gamma.value().at(i / per_sample, g) * yg[i];
  }
  const double diff = max_abs_diff(t.output.value(), mixed);
  return {min_weight >= 0.0 && worst_sum <= kConvexTol && diff <= kConvexTol,
          "min gamma " + fmt("%.2e", min_weight) + ", worst |sum - 1| " + fmt("%.2e", worst_sum) +
              ", |out - sum gamma Y| " + fmt("%.2e", diff)};
}

Outcome gradient_fidelity() {
  const auto t0 = Clock::now();
  cli::GradcheckOptions o;
  o.step = kGradStep;
  o.tolerance = kGradRelTol;
  const cli::GradcheckReport r = cli::run_gradcheck(o);
  const double secs = seconds_since(t0);
  double worst = 0.0;
  std::string worst_op;
  bool has_end_to_end = false;
  for (const auto& e : r.entries) {
    if (e.worst_relative_error >= worst) {
      worst = e.worst_relative_error;
      worst_op = e.op;
    }
    has_end_to_end = has_end_to_end || e.op == "scs_forward+match_and_loss";
  }
  std::string detail = std::to_string(r.entries.size()) + " ops, worst rel err " + fmt("%.2e", worst) + " (" +
                       worst_op + "), " + fmt("%.2f s", secs);
  for (const auto& f : r.failed_ops()) detail += ", failed " + f;
  return {r.passed && has_end_to_end && worst < kGradRelTol && secs < kGradcheckSeconds, detail};
}

Outcome hungarian_optimality() {
  const auto t0 = Clock::now();
  RngState rng(606);
  std::size_t wrong = 0, total = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 150; ++trial) {
      std::vector<std::vector<double>> c(n, std::vector<double>(n));
      matching::CostMatrix m(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = c[i][j] = rng.uniform(-10, 10);
      const matching::Assignment a = matching::hungarian(m);
      if (std::abs(a.cost - oracle::brute_force_assignment(c)) > kHungarianTol) ++wrong;
      ++total;
    }
  }
  const double secs = seconds_since(t0);
  return {wrong == 0 && secs < kHungarianSeconds,
          std::to_string(total) + " matrices, " + std::to_string(wrong) + " suboptimal, " + fmt("%.3f s", secs)};
}

Outcome geometry_oracles() {
  RngState rng(707);
  // Corners on the raster's 1/512 lattice.
  const auto box = [&] {
    const auto a = static_cast<double>(rng.below(380)), b = static_cast<double>(rng.below(380));
    const auto w = static_cast<double>(1 + rng.below(131)), h = static_cast<double>(1 + rng.below(131));
    return matching::BBox{(a + 0.5 * w) / 512, (b + 0.5 * h) / 512, w / 512, h / 512};
  };
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const matching::BBox a = box(), b = box();
    worst = std::max(worst, std::abs(matching::iou(a, b) - oracle::raster_iou(a, b)));
    worst = std::max(worst, std::abs(matching::giou(a, b) - oracle::raster_giou(a, b)));
  }
  const double third = matching::iou({0.25, 0.5, 0.5, 0.5}, {0.5, 0.5, 0.5, 0.5});
  const double far = matching::giou({0.1, 0.1, 0.2, 0.2}, {0.9, 0.9, 0.2, 0.2});
  const double hand = std::max(std::abs(third - 1.0 / 3.0), std::abs(far + 0.92));
  return {worst <= kRasterTol && hand <= kHandTol,
          "200 pairs, worst raster diff " + fmt("%.2e", worst) + ", hand-case error " + fmt("%.2e", hand)};
}

Outcome metric_protocol() {
  const double boundary = metrics::precision_at_ious({0.5, 0.7}, 0.5);
  const matching::BBox a{0.25, 0.5, 0.5, 0.5}, b{0.5, 0.5, 0.5, 0.5};  // IoU 1/3
  const double box_boundary = metrics::precision_at({{a, b}}, matching::iou(a, b));
  const double mp = metrics::mean_of({26.53, 20.47, 13.15, 5.41});
  return {boundary == 0.5 && box_boundary == 0.0 && std::abs(mp - kPublishedMp) <= kPublishedMpTol,
          "P@0.5{0.5,0.7} = " + fmt("%g", boundary) + ", SegVG mP = " + fmt("%.4f", mp)};
}

Outcome overfit_sanity() {
  const fs::path dir = scratch("overfit");
  cli::TrainToyOptions o;  // defaults: D 64, H 4, dilations {1,2,3,4}, 16 scenes, seed 0
  o.steps = kOverfitSteps;
  o.output_dir = dir;
  const auto t0 = Clock::now();
  const cli::TrainToyOutcome first = cli::cmd_train_toy(o);
  const double secs = seconds_since(t0);
  const std::string log1 = read_file(first.loss_csv);
  const cli::TrainToyOutcome second = cli::cmd_train_toy(o);
  const std::string log2 = read_file(second.loss_csv);
  bool identical = first.result.log.size() == second.result.log.size() && log1 == log2;
  for (std::size_t i = 0; identical && i < first.result.log.size(); ++i) {
    identical = std::memcmp(&first.result.log[i].loss, &second.result.log[i].loss, sizeof(double)) == 0;
  }
  const bool config_ok = o.model.dim == 64 && o.model.dilations == std::vector<int>{1, 2, 3, 4} && o.scenes == 16;
  return {config_ok && first.result.reached_perfect && first.result.train_p50 == 1.0 &&
              first.result.steps_run <= kOverfitSteps && secs < kOverfitSeconds && identical,
          "P@0.5 " + fmt("%g", first.result.train_p50) + " after " + std::to_string(first.result.steps_run) +
              " steps, " + fmt("%.1f s", secs) + ", rerun log " + (identical ? "bit-identical" : "DIFFERS")};
}

Outcome ablation_harness() {
  cli::SweepOptions o;
  o.steps = kSweepSteps;
  o.eval_scenes = 16;
  o.output_dir = scratch("sweep");
  const auto t0 = Clock::now();
  const cli::SweepOutcome s = cli::cmd_sweep_granularity(o);
  const double secs = seconds_since(t0);
  std::istringstream csv(read_file(s.csv));
  std::vector<std::string> lines;
  for (std::string line; std::getline(csv, line);)
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  bool ok = lines.size() == 7 && lines[0] == "Granularity,P@0.5,P@0.6,P@0.7,P@0.8,mP" && s.rows.size() == 6;
  for (std::size_t g = 1; ok && g <= 6; ++g) {
    ok = lines[g].rfind(std::to_string(g) + ",", 0) == 0 && s.rows[g - 1].granularities == g;
    for (double p : s.rows[g - 1].result.precision) ok = ok && p >= 0.0 && p <= 1.0;
  }
  return {ok, std::to_string(s.rows.size()) + " rows, " + std::to_string(kSweepSteps) + " steps each, " +
                  fmt("%.1f s", secs)};
}

Outcome stats_correctness() {
  cli::StatsOptions o;
  o.annotations = fs::path(SCS_FIXTURE_DIR) / "annotations_fixture.json";
  o.output_dir = scratch("stats");
  const cli::StatsOutcome s = cli::cmd_stats(o);
  const auto expected = nlohmann::json::parse(read_file(fs::path(SCS_FIXTURE_DIR) / "stats_expected.json"));
  const auto got = nlohmann::json::parse(read_file(s.json));
  const std::string csv = read_file(s.csv);
  const std::string table = read_file(fs::path(SCS_FIXTURE_DIR) / "stats_expected.csv");
  const bool json_ok = got.at("stats") == expected.at("stats");
  const bool csv_ok = csv.size() >= table.size() && csv.substr(csv.size() - table.size()) == table;
  bool documented = got.contains("definitions");
  for (const char* key : {"o2s_percent", "words_per_expression", "targets_per_image"}) {
    documented = documented && got["definitions"].contains(key) &&
                 csv.find(std::string("# ") + key + ": ") != std::string::npos;
  }
  return {json_ok && csv_ok && documented, std::string("json ") + (json_ok ? "exact" : "DIFFERS") + ", csv " +
                                               (csv_ok ? "exact" : "DIFFERS") +
                                               (documented ? ", definitions in headers" : ", definitions MISSING")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"mask correctness", mask_correctness},
      {"exact-zero masking", exact_zero_masking},
      {"reduction equivalence", reduction_equivalence},
      {"convex gating", convex_gating},
      {"gradient fidelity", gradient_fidelity},
      {"hungarian optimality", hungarian_optimality},
      {"geometry oracles", geometry_oracles},
      {"metric protocol", metric_protocol},
      {"overfit sanity", overfit_sanity},
      {"ablation harness", ablation_harness},
      {"stats correctness", stats_correctness},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    if (!r.passed) ++failures;
    std::printf("%s %2zu %s: %s\n", r.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
