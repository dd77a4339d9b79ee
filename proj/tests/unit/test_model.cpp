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
#include <cmath>
#include <filesystem>
#include <limits>

#include <gtest/gtest.h>

#include "oracles/reference.hpp"
#include "scs/data/synthetic.hpp"
#include "scs/data/tokenizer.hpp"
#include "scs/errors.hpp"
#include "scs/matching/loss.hpp"
#include "scs/model/checkpoint.hpp"
#include "scs/model/model.hpp"
#include "scs/model/optimizer.hpp"
#include "scs/model/trainer.hpp"
#include "unit/test_util.hpp"

namespace scs::model {
namespace {

namespace fs = std::filesystem;

ModelConfig tiny_config(std::vector<int> dilations = {1, 2}) {
  ModelConfig c;
  c.mog.model_dim = 16;
  c.mog.num_heads = 2;
  c.mog.dilations = std::move(dilations);
  c.image_size = 16;
  c.patch_size = 8;
  c.num_queries = 2;
  return c;
}

data::Image noise_image(std::size_t side, std::uint64_t seed) {
  RngState rng(seed);
  data::Image img(side, side);
  for (double& v : img.rgb) v = rng.uniform(0.0, 1.0);
  return img;
}

const Tensor& param(ScsModel& m, const std::string& name) {
  Parameter* p = m.parameters().find(name);
  if (p == nullptr) throw std::runtime_error("no parameter " + name);
  return p->value();
}

std::vector<Sample> tiny_samples(std::size_t n, std::uint64_t seed) {
  data::SyntheticSceneSpec spec;
  spec.grid_size = 16;
  spec.distractors = 1;
  spec.size_classes = {data::SizeClass::kSmall};
  return samples_from_scenes(data::generate_dataset(n, spec, seed));
}

TEST(Tokens, ShapesAndModalities) {
  ScsModel m(tiny_config(), 1);
  const data::Image img = noise_image(16, 2);
  const auto ids = data::tokenize("the red square", data::Vocabulary::builtin());
  TokenSequence t = m.project_tokens({&img}, {ids});
  EXPECT_EQ(t.n_visual, 4u);
  EXPECT_EQ(t.n_text, 3u);
  EXPECT_EQ(t.combined.shape(), (Shape{1, 7, 16}));

  TokenSequence empty = m.project_tokens({&img}, {{}});
  EXPECT_EQ(empty.combined.shape(), (Shape{1, 4, 16}));
  EXPECT_FALSE(empty.text.defined());
}

TEST(Tokens, IdenticalImagesGiveIdenticalVisualTokens) {
  ScsModel m(tiny_config(), 1);
  const data::Image img = noise_image(16, 3);
  TokenSequence t = m.project_tokens({&img, &img}, {{1, 2}, {3, 4}});
  const Tensor& v = t.visual.value();
  const std::size_t half = v.size() / 2;
  for (std::size_t i = 0; i < half; ++i) EXPECT_EQ(v[i], v[half + i]);
}

TEST(Tokens, RejectsBadInput) {
  ScsModel m(tiny_config(), 1);
  const data::Image img = noise_image(16, 3);
  const data::Image wrong = noise_image(24, 3);
  EXPECT_THROW(m.project_tokens({&wrong}, {{1}}), DimensionError);
  const int oov = static_cast<int>(m.config().effective_vocab());
  EXPECT_THROW(m.project_tokens({&img}, {{oov}}), std::exception);
  EXPECT_THROW(m.project_tokens({&img, &img}, {{1}, {1, 2}}), DimensionError);
}

TEST(Blocks, ZeroedOutputProjectionsMakeResidualIdentity) {
  ScsModel m(tiny_config(), 4);
  m.zero_output_projections();
  const data::Image img = noise_image(16, 5);
  TokenSequence t = m.project_tokens({&img}, {{1, 2, 3}});
  SceOutput enc = m.sce_forward(t.combined);
  EXPECT_EQ(enc.memory.value(), t.combined.value());
  Var coarse = m.scd_forward(m.initial_queries(1), enc.memory);
  EXPECT_EQ(coarse.value(), m.initial_queries(1).value());
  EXPECT_EQ(m.ssd_forward(coarse, m.fuse_hierarchy(enc.per_block)).value(), coarse.value());
}

TEST(Blocks, FuseWeighsBlocksBySoftmaxOfLogits) {
  ModelConfig c = tiny_config();
  RngState rng(6);
  Var a = constant(testing::random_tensor({1, 3, 16}, rng));
  Var b = constant(testing::random_tensor({1, 3, 16}, rng));

  c.sce_blocks = 1;
  ScsModel single(c, 1);
  EXPECT_EQ(single.fuse_hierarchy({a}).value(), ops::layernorm(a).value());
  EXPECT_THROW(single.fuse_hierarchy({}), DimensionError);

  c.sce_blocks = 2;
  ScsModel two(c, 1);
  testing::expect_near(two.fuse_hierarchy({a, b}).value(),
                       ops::layernorm(ops::scale(ops::add(a, b), 0.5)).value(), 1e-12);
  Tensor& logits = two.parameters().find("fuse.logits")->value();
  logits[0] = 60.0;
  logits[1] = -60.0;
  testing::expect_near(two.fuse_hierarchy({a, b}).value(), ops::layernorm(a).value(), 1e-12);
  EXPECT_THROW(two.fuse_hierarchy({a}), DimensionError);
}

Tensor ln_rows(const Tensor& x, double eps) {
  const std::size_t d = x.shape().back();
  Tensor y(x.shape());
  for (std::size_t r = 0; r < x.size() / d; ++r) {
    double mu = 0.0, var = 0.0;
    for (std::size_t c = 0; c < d; ++c) mu += x[r * d + c] / static_cast<double>(d);
    for (std::size_t c = 0; c < d; ++c) var += (x[r * d + c] - mu) * (x[r * d + c] - mu) / static_cast<double>(d);
    for (std::size_t c = 0; c < d; ++c) y[r * d + c] = (x[r * d + c] - mu) / std::sqrt(var + eps);
  }
  return y;
}

Tensor plus(const Tensor& a, const Tensor& b) {
  Tensor y = a;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += b[i % b.size()];
  return y;
}

Tensor gelu_ref(Tensor x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i];
    x[i] = 0.5 * v * (1.0 + std::tanh(0.7978845608028654 * (v + 0.044715 * v * v * v)));
  }
  return x;
}

TEST(Blocks, SingleGranularityDecoderMatchesStandardBlock) {
  ModelConfig c = tiny_config({1});
  ScsModel m(c, 7);
  RngState rng(8);
  const Tensor q0 = testing::random_tensor({2, 2, 16}, rng);
  const Tensor mem = testing::random_tensor({2, 5, 16}, rng);
  const double eps = c.mog.layernorm_eps;
  const auto p = [&](const std::string& n) { return param(m, "scd.0." + n); };

  Tensor q = q0;
  Tensor n = ln_rows(q, eps);
  q = plus(q, oracle::project(oracle::attention(n, n, p("self.w_q"), p("self.w_k"), p("self.w_v"), 2, 0), p("self_o")));
  const Tensor cross = oracle::attention(ln_rows(q, eps), ln_rows(mem, eps), p("cross.w_q"), p("cross.w_k"),
                                         p("cross.w_v"), 2, 0);
  q = plus(q, oracle::project(cross, p("cross_o")));
  const Tensor h = gelu_ref(plus(oracle::project(ln_rows(q, eps), p("ffn.w1")), p("ffn.b1")));
  q = plus(q, plus(oracle::project(h, p("ffn.w2")), p("ffn.b2")));

  testing::expect_near(m.scd_forward(constant(q0), constant(mem)).value(), q, 1e-10);
}

TEST(Head, OutputsAreSigmoidBounded) {
  ScsModel m(tiny_config(), 9);
  RngState rng(10);
  Var states = constant(testing::random_tensor({1, 2, 16}, rng));
  m.parameters().find("head.w2")->value().fill(0.0);
  Prediction p = m.regression_head(states);
  EXPECT_EQ(p.boxes.shape(), (Shape{1, 2, 4}));
  EXPECT_EQ(p.confidence.shape(), (Shape{1, 2}));
  for (double v : p.boxes.value().values()) EXPECT_DOUBLE_EQ(v, 0.5);
  m.parameters().find("head.b2")->value().fill(20.0);
  p = m.regression_head(states);
  for (double v : p.confidence.value().values()) EXPECT_NEAR(v, 1.0, 1e-8);
}

TEST(Forward, SingleQueryAndDeterminism) {
  ModelConfig c = tiny_config();
  c.num_queries = 1;
  ScsModel a(c, 11), b(c, 11);
  const data::Image img = noise_image(16, 12);
  Prediction pa = a.forward(img, {1, 2, 3});
  Prediction pb = b.forward(img, {1, 2, 3});
  EXPECT_EQ(pa.boxes.shape(), (Shape{1, 1, 4}));
  EXPECT_EQ(pa.boxes.value(), pb.boxes.value());
  EXPECT_EQ(pa.confidence.value(), pb.confidence.value());
  ScsModel other(c, 12);
  EXPECT_NE(other.forward(img, {1, 2, 3}).boxes.value(), pa.boxes.value());
}

TEST(Forward, EveryParameterReceivesGradient) {
  ScsModel m(tiny_config(), 13);
  auto samples = tiny_samples(2, 14);
  std::vector<const data::Image*> imgs{&samples[0].image, &samples[1].image};
  // Pad to equal expression length.
  std::vector<std::vector<int>> ids{samples[0].ids, samples[1].ids};
  const std::size_t len = std::max(ids[0].size(), ids[1].size());
  for (auto& row : ids) row.resize(len, data::Vocabulary::kUnk);
  Prediction p = m.forward(imgs, ids);
  auto r = matching::match_and_loss(p.boxes, p.confidence, {samples[0].targets, samples[1].targets});
  m.parameters().zero_grad();
  backward(r.loss);
  for (const Parameter& prm : m.parameters()) {
    double norm = 0.0;
    for (double g : prm.grad().values()) norm += g * g;
    EXPECT_GT(norm, 0.0) << prm.name();
  }
}

TEST(Checkpoint, RoundTripRestoresOutputs) {
  ScsModel a(tiny_config(), 15);
  const fs::path p = fs::temp_directory_path() / "scs_test_model_ckpt.json";
  save_checkpoint(a, p, {{"note", "x"}});
  const nlohmann::json doc = read_checkpoint(p);
  EXPECT_EQ(checkpoint_config(doc), a.config());
  ScsModel b(tiny_config(), 99);
  load_parameters(b, doc);
  const data::Image img = noise_image(16, 16);
  EXPECT_EQ(a.forward(img, {4, 5}).boxes.value(), b.forward(img, {4, 5}).boxes.value());
  EXPECT_EQ(doc.at("meta").at("note"), "x");
}

TEST(Checkpoint, MismatchesAreReported) {
  ScsModel a(tiny_config(), 15);
  ScsModel wider([] {
    ModelConfig c = tiny_config();
    c.mog.model_dim = 32;
    return c;
  }(), 1);
  EXPECT_THROW(load_parameters(wider, checkpoint_to_json(a)), ValidationError);
  nlohmann::json doc = checkpoint_to_json(a);
  doc["parameters"].erase("head.w1");
  EXPECT_THROW(load_parameters(a, doc), ValidationError);
  doc = checkpoint_to_json(a);
  doc["parameters"]["head.b1"]["shape"] = {3};
  EXPECT_THROW(load_parameters(a, doc), ValidationError);
  EXPECT_THROW(read_checkpoint(fs::temp_directory_path() / "scs_no_such_checkpoint.json"), IoError);
}

TEST(Optimizer, AdamFirstStepMovesByLearningRate) {
  ParameterSet set;
  Parameter& w = set.add("w", Tensor::vector({1.0, -2.0, 3.0}));
  w.grad() = Tensor::vector({0.5, -4.0, 0.0});
  Adam adam(set, {.lr = 0.1});
  adam.step();
  // m_hat = g and v_hat = g^2 after one step.
  EXPECT_NEAR(w.value()[0], 1.0 - 0.1 * 0.5 / (0.5 + 1e-8), 1e-15);
  EXPECT_NEAR(w.value()[1], -2.0 + 0.1 * 4.0 / (4.0 + 1e-8), 1e-15);
  EXPECT_EQ(w.value()[2], 3.0);
  w.grad() = Tensor::vector({0.5, -4.0, 0.0});
  adam.step([](const Parameter&, double) { return 0.0; });
  EXPECT_NEAR(w.value()[0], 0.9, 1e-7);
}

TEST(Optimizer, ClipGradNorm) {
  ParameterSet set;
  Parameter& w = set.add("w", Tensor::vector({0.0, 0.0}));
  w.grad() = Tensor::vector({3.0, 4.0});
  EXPECT_DOUBLE_EQ(clip_grad_norm(set, 1.0), 5.0);
  EXPECT_NEAR(w.grad()[0], 0.6, 1e-15);
  EXPECT_NEAR(w.grad()[1], 0.8, 1e-15);
}

TEST(Training, ZeroStepsLeavesInitialWeights) {
  ScsModel a(tiny_config(), 17), b(tiny_config(), 17);
  TrainConfig cfg;
  cfg.steps = 0;
  const TrainResult r = train(a, tiny_samples(4, 1), cfg);
  EXPECT_EQ(r.steps_run, 0u);
  EXPECT_EQ(checkpoint_to_json(a), checkpoint_to_json(b));
}

TEST(Training, FrozenProjectorStaysPut) {
  ScsModel m(tiny_config(), 18);
  const nlohmann::json before = checkpoint_to_json(m);
  TrainConfig cfg;
  cfg.steps = 3;
  cfg.batch_size = 2;
  cfg.adam.lr = 1e-3;
  cfg.freeze_projector_epochs = 1;
  const TrainResult r = train(m, tiny_samples(8, 2), cfg);
  ASSERT_EQ(r.log.size(), 3u);
  const nlohmann::json after = checkpoint_to_json(m);
  for (auto it = before["parameters"].begin(); it != before["parameters"].end(); ++it) {
    const bool same = after["parameters"][it.key()] == it.value();
    EXPECT_EQ(same, ScsModel::is_projector_parameter(it.key())) << it.key();
  }
}

TEST(Training, SameSeedSameLog) {
  auto run = [] {
    ScsModel m(tiny_config(), 19);
    TrainConfig cfg;
    cfg.steps = 4;
    cfg.batch_size = 2;
    cfg.shuffle_seed = 3;
    return train(m, tiny_samples(6, 4), cfg).log;
  };
  const auto a = run(), b = run();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].loss, b[i].loss);
}

TEST(Training, NonFiniteLossIsReported) {
  ScsModel m(tiny_config(), 20);
  m.parameters().find("head.b2")->value()[0] = std::numeric_limits<double>::quiet_NaN();
  TrainConfig cfg;
  cfg.steps = 2;
  try {
    train(m, tiny_samples(2, 5), cfg);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("step 1"), std::string::npos) << e.what();
  }
}

TEST(Prediction, BestTargetIou) {
  const matching::BBox a{0.5, 0.5, 0.2, 0.2};
  EXPECT_NEAR(best_target_iou(a, {{0.1, 0.1, 0.1, 0.1}, a}), 1.0, 1e-12);
}

}  // namespace
}  // namespace scs::model
