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
#include "scs/cli/gradcheck_suite.hpp"

#include <algorithm>
#include <functional>
#include <memory>

#include "scs/data/synthetic.hpp"
#include "scs/data/tokenizer.hpp"
#include "scs/errors.hpp"
#include "scs/matching/loss.hpp"
#include "scs/model/model.hpp"
#include "scs/mog/attention.hpp"
#include "scs/numerics/gradcheck.hpp"

namespace scs::cli {
namespace {

// Toy dimensions: D=8, H=2, G=3.
constexpr std::size_t kDim = 8;
constexpr std::size_t kHeads = 2;

mog::MoGConfig toy_mog() { return mog::MoGConfig::with_granularities(kDim, kHeads, 3); }

// Identity forward, negated backward.
Var flip_backward(const Var& y) {
  return make_op(y.value(), {y}, [](const Tensor& g, std::vector<Tensor*>& in) {
    if (!in[0]) return;
    for (std::size_t i = 0; i < g.size(); ++i) (*in[0])[i] -= g[i];
  });
}

struct Case {
  ParameterSet params;
  RngState rng;
  Tensor weights;  // random projection of the op output onto a scalar
  bool has_weights = false;
  std::function<Var()> build;
  // Parameters to check when they live outside `params` (the end-to-end model).
  ParameterSet* checked = nullptr;
  std::shared_ptr<void> keep_alive;

  explicit Case(std::uint64_t seed) : rng(seed) {}

  Parameter& input(const std::string& name, Shape shape, double lo = -1.0, double hi = 1.0) {
    return params.add(name, uniform_tensor(std::move(shape), lo, hi, rng));
  }

  Var reduce(const Var& y) {
    if (!has_weights) {
      weights = uniform_tensor(y.shape(), -1.0, 1.0, rng);
      has_weights = true;
    }
    return ops::sum(ops::mul(y, constant(weights)));
  }
};

using Builder = std::function<void(Case&, const std::function<Var(const Var&)>& out)>;

std::vector<std::pair<std::string, Builder>> registry() {
  std::vector<std::pair<std::string, Builder>> r;
  auto unary = [&](const std::string& name, Shape shape, std::function<Var(const Var&)> f) {
    r.emplace_back(name, [shape, f](Case& c, const auto& out) {
      Parameter& x = c.input("x", shape);
      c.build = [&c, &x, f, out] { return c.reduce(out(f(leaf(x)))); };
    });
  };
  auto binary = [&](const std::string& name, Shape sa, Shape sb, std::function<Var(const Var&, const Var&)> f) {
    r.emplace_back(name, [sa, sb, f](Case& c, const auto& out) {
      Parameter& a = c.input("a", sa);
      Parameter& b = c.input("b", sb);
      c.build = [&c, &a, &b, f, out] { return c.reduce(out(f(leaf(a), leaf(b)))); };
    });
  };

  binary("matmul", {3, 4}, {4, 5}, ops::matmul);
  binary("matmul_batched", {2, 2, 3, 4}, {2, 2, 4, 3}, ops::matmul);
  binary("matmul_rank3x2", {2, 3, 4}, {4, 5}, ops::matmul);
  binary("matmul_nt", {2, 3, 4}, {2, 5, 4}, ops::matmul_nt);
  r.emplace_back("linear", [](Case& c, const auto& out) {
    Parameter& x = c.input("x", {2, 3, 4});
    Parameter& w = c.input("w", {4, 5});
    Parameter& b = c.input("b", {5});
    c.build = [&c, &x, &w, &b, out] { return c.reduce(out(ops::linear(leaf(x), leaf(w), leaf(b)))); };
  });
  binary("add", {2, 3, 4}, {2, 3, 4}, ops::add);
  binary("sub", {2, 3, 4}, {2, 3, 4}, ops::sub);
  binary("mul", {2, 3, 4}, {2, 3, 4}, ops::mul);
  unary("scale", {2, 3, 4}, [](const Var& x) { return ops::scale(x, -1.7); });
  binary("add_broadcast", {2, 3, 4}, {3, 4}, ops::add_broadcast);
  unary("gelu", {2, 3, 4}, ops::gelu);
  unary("sigmoid", {2, 3, 4}, ops::sigmoid);
  unary("softmax", {2, 3, 5}, ops::softmax);
  unary("masked_softmax", {2, 2, 5, 5}, [](const Var& x) {
    return ops::masked_softmax(x, mog::build_mask(5, 2).as_tensor());
  });
  unary("layernorm", {2, 3, 6}, [](const Var& x) { return ops::layernorm(x); });
  r.emplace_back("affine", [](Case& c, const auto& out) {
    Parameter& x = c.input("x", {2, 3, 4});
    Parameter& g = c.input("gamma", {4});
    Parameter& b = c.input("beta", {4});
    c.build = [&c, &x, &g, &b, out] { return c.reduce(out(ops::affine(leaf(x), leaf(g), leaf(b)))); };
  });
  unary("mean_pool", {2, 3, 4}, ops::mean_pool);
  unary("split_heads", {2, 3, 8}, [](const Var& x) { return ops::split_heads(x, 2); });
  unary("merge_heads", {2, 2, 3, 4}, ops::merge_heads);
  r.emplace_back("mix", [](Case& c, const auto& out) {
    Parameter& g = c.input("gamma", {2, 3});
    std::vector<Parameter*> ys;
    for (int i = 0; i < 3; ++i) ys.push_back(&c.input("y" + std::to_string(i), {2, 3, 4}));
    c.build = [&c, &g, ys, out] {
      std::vector<Var> v;
      for (Parameter* p : ys) v.push_back(leaf(*p));
      return c.reduce(out(ops::mix(leaf(g), v)));
    };
  });
  r.emplace_back("weighted_sum", [](Case& c, const auto& out) {
    Parameter& w = c.input("w", {3});
    std::vector<Parameter*> ys;
    for (int i = 0; i < 3; ++i) ys.push_back(&c.input("y" + std::to_string(i), {2, 3, 4}));
    c.build = [&c, &w, ys, out] {
      std::vector<Var> v;
      for (Parameter* p : ys) v.push_back(leaf(*p));
      return c.reduce(out(ops::weighted_sum(leaf(w), v)));
    };
  });
  binary("concat_tokens", {2, 3, 4}, {2, 2, 4}, ops::concat_tokens);
  unary("embedding", {6, 4}, [](const Var& t) { return ops::embedding(t, {{0, 2, 2}, {5, 1, 0}}); });
  unary("slice_last", {2, 3, 6}, [](const Var& x) { return ops::slice_last(x, 1, 3); });
  unary("reshape", {2, 3, 4}, [](const Var& x) { return ops::reshape(x, {6, 4}); });
  unary("sum", {2, 3, 4}, ops::sum);

  // Attention components at toy dims.
  auto attention_case = [&](const std::string& name, std::function<Var(Case&, const Var&, const Var&,
                                                                       const mog::MoGParams&)> f, bool cross) {
    r.emplace_back(name, [f, cross](Case& c, const auto& out) {
      Parameter& xq = c.input("x_query", {2, cross ? std::size_t{3} : std::size_t{6}, kDim});
      Parameter& xkv = c.input("x_kv", {2, 6, kDim});
      mog::MoGParams p = mog::MoGParams::create(c.params, "mog", toy_mog(), c.rng);
      for (double& v : p.gate.b->value().data()) v = c.rng.uniform(-0.5, 0.5);
      c.build = [&c, &xq, &xkv, p, f, out, cross] {
        Var q = leaf(xq);
        return c.reduce(out(f(c, q, cross ? leaf(xkv) : q, p)));
      };
    });
  };
  attention_case("attention_logits", [](Case&, const Var& q, const Var& kv, const mog::MoGParams& p) {
    return mog::attention_logits(q, kv, mog::ProjectionWeights::bind(p.proj), kHeads).a;
  }, false);
  attention_case("branch_attention", [](Case&, const Var& q, const Var& kv, const mog::MoGParams& p) {
    mog::AttentionLogits l = mog::attention_logits(q, kv, mog::ProjectionWeights::bind(p.proj), kHeads);
    return mog::branch_attention(l.a, mog::build_mask(6, 2), l.v);
  }, false);
  attention_case("gate_weights", [](Case&, const Var& q, const Var&, const mog::MoGParams& p) {
    return mog::gate_weights(q, leaf(*p.gate.w), leaf(*p.gate.b));
  }, false);
  attention_case("standard_attention", [](Case&, const Var& q, const Var& kv, const mog::MoGParams& p) {
    return mog::standard_attention(q, kv, mog::ProjectionWeights::bind(p.proj), kHeads);
  }, true);
  attention_case("mog_forward", [](Case&, const Var& q, const Var&, const mog::MoGParams& p) {
    return mog::mog_forward(q, toy_mog(), mog::MoGWeights::bind(p));
  }, false);
  attention_case("mog_cross", [](Case&, const Var& q, const Var& kv, const mog::MoGParams& p) {
    return mog::mog_cross(q, kv, toy_mog(), mog::MoGWeights::bind(p));
  }, true);

  r.emplace_back("set_loss", [](Case& c, const auto& out) {
    Parameter& boxes = c.input("boxes", {2, 3, 4}, 0.2, 0.4);
    Parameter& conf = c.input("confidence", {2, 3}, 0.1, 0.9);
    for (std::size_t i = 0; i < boxes.value().size(); ++i)
      if (i % 4 < 2) boxes.value()[i] = c.rng.uniform(0.3, 0.7);
    std::vector<std::vector<matching::BBox>> targets{{{0.45, 0.5, 0.3, 0.2}},
                                                    {{0.3, 0.6, 0.25, 0.35}, {0.7, 0.4, 0.2, 0.3}}};
    std::vector<matching::Assignment> assign;
    {
      NoGradGuard ng;
      assign = matching::match_and_loss(leaf(boxes), leaf(conf), targets).assignments;
    }
    c.build = [&boxes, &conf, targets, assign, out] {
      return matching::set_loss(out(leaf(boxes)), leaf(conf), targets, assign);
    };
  });

  r.emplace_back("scs_forward+match_and_loss", [](Case& c, const auto& out) {
    model::ModelConfig cfg;
    cfg.mog = toy_mog();
    cfg.num_queries = 2;
    cfg.image_size = 16;
    cfg.patch_size = 8;
    auto m = std::make_shared<model::ScsModel>(cfg, c.rng.next_u64());
    // Randomise the zero-initialised biases and fusion logits so every path is exercised.
    for (Parameter& p : m->parameters()) {
      if (p.name().find(".b") != std::string::npos || p.name() == "fuse.logits")
        for (double& v : p.value().data()) v = c.rng.uniform(-0.3, 0.3);
    }
    data::SyntheticSceneSpec spec;
    spec.grid_size = 16;
    spec.distractors = 1;
    spec.size_classes = {data::SizeClass::kMedium, data::SizeClass::kLarge};
    RngState scene_rng = c.rng.fork(1);
    auto scene = std::make_shared<data::Scene>(data::generate_scene(spec, scene_rng, "gc"));
    auto ids = data::tokenize(scene->record.expression, data::Vocabulary::builtin());
    auto targets = data::normalized_targets(scene->record);
    std::vector<matching::Assignment> assign;
    {
      NoGradGuard ng;
      model::Prediction p = m->forward(scene->image, ids);
      assign = matching::match_and_loss(p.boxes, p.confidence, {targets}).assignments;
    }
    c.build = [m, scene, ids, targets, assign, out] {
      model::Prediction p = m->forward(scene->image, ids);
      return matching::set_loss(out(p.boxes), p.confidence, {targets}, assign);
    };
    c.checked = &m->parameters();
    c.keep_alive = m;
  });
  return r;
}

}  // namespace

std::vector<std::string> GradcheckReport::failed_ops() const {
  std::vector<std::string> out;
  for (const auto& e : entries)
    if (!e.passed) out.push_back(e.op);
  return out;
}

std::vector<std::string> gradcheck_op_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : registry()) names.push_back(name);
  return names;
}

GradcheckReport run_gradcheck(const GradcheckOptions& options) {
  const auto cases = registry();
  auto known = [&](const std::string& op) {
    return std::any_of(cases.begin(), cases.end(), [&](const auto& e) { return e.first == op; });
  };
  if (!options.inject_fault.empty() && !known(options.inject_fault)) {
    throw ValidationError("--inject-fault: unknown op '" + options.inject_fault + "'");
  }
  for (const auto& op : options.only)
    if (!known(op)) throw ValidationError("--only: unknown op '" + op + "'");

  GradcheckReport report;
  report.tolerance = options.tolerance;
  report.step = options.step;
  const RngState root(options.seed);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& [name, builder] = cases[i];
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), name) == options.only.end()) {
      continue;
    }
    Case c(root.fork(i).next_u64());
    const bool faulty = name == options.inject_fault;
    builder(c, [faulty](const Var& y) { return faulty ? flip_backward(y) : y; });
    ParameterSet& ps = c.checked ? *c.checked : c.params;

    ps.zero_grad();
    backward(c.build());
    GradcheckEntry e;
    e.op = name;
    auto eval = [&c] {
      NoGradGuard ng;
      return c.build().item();
    };
    for (Parameter& p : ps) {
      const Tensor numeric = finite_difference_grad(eval, p, options.step);
      e.worst_relative_error = std::max(e.worst_relative_error, max_relative_error(p.grad(), numeric));
      e.coordinates += p.value().size();
    }
    e.passed = e.worst_relative_error < options.tolerance;
    report.entries.push_back(e);
  }
  report.passed = std::all_of(report.entries.begin(), report.entries.end(), [](const auto& e) { return e.passed; });
  return report;
}

nlohmann::json to_json(const GradcheckReport& r) {
  nlohmann::json ops = nlohmann::json::array();
  for (const auto& e : r.entries) {
    ops.push_back({{"op", e.op},
                   {"worst_relative_error", e.worst_relative_error},
                   {"coordinates", e.coordinates},
                   {"passed", e.passed}});
  }
  return {{"tolerance", r.tolerance}, {"step", r.step}, {"passed", r.passed}, {"failed_ops", r.failed_ops()},
          {"ops", ops}};
}

}  // namespace scs::cli
