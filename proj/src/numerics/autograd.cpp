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
#include "scs/numerics/autograd.hpp"

#include <unordered_set>

#include "scs/errors.hpp"

namespace scs {

namespace {
thread_local bool g_grad_enabled = true;
}

Parameter::Parameter(std::string name, Tensor value)
    : name_(std::move(name)), value_(std::move(value)), grad_(value_.shape()) {}

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

bool grad_enabled() { return g_grad_enabled; }

Var constant(Tensor value) {
  auto node = std::make_shared<autograd::Node>();
  node->value = std::move(value);
  return Var(std::move(node));
}

Var leaf(Parameter& p) {
  auto node = std::make_shared<autograd::Node>();
  node->value = p.value();
  if (g_grad_enabled) {
    node->requires_grad = true;
    node->param = &p;
  }
  return Var(std::move(node));
}

Var make_op(Tensor value, std::vector<Var> inputs, autograd::BackwardFn backward) {
  auto node = std::make_shared<autograd::Node>();
  node->value = std::move(value);
  bool any = false;
  for (const auto& in : inputs) any = any || in.requires_grad();
  if (any && g_grad_enabled) {
    node->requires_grad = true;
    node->inputs.reserve(inputs.size());
    for (auto& in : inputs) node->inputs.push_back(in.node());
    node->backward = std::move(backward);
  }
  return Var(std::move(node));
}

void backward(const Var& loss) {
  if (!loss.defined() || loss.value().size() != 1) {
    throw DimensionError("backward() needs a scalar loss, got shape " +
                         (loss.defined() ? shape_to_string(loss.shape()) : std::string("<none>")));
  }
  if (!loss.requires_grad()) return;

  // Iterative post-order DFS gives a topological order without recursion.
  std::vector<autograd::Node*> order;
  std::unordered_set<autograd::Node*> seen;
  std::vector<std::pair<autograd::Node*, std::size_t>> stack;
  stack.emplace_back(loss.node().get(), 0);
  seen.insert(loss.node().get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->inputs.size()) {
      autograd::Node* child = node->inputs[next++].get();
      if (child->requires_grad && seen.insert(child).second) stack.emplace_back(child, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  for (auto* n : order) n->grad = Tensor(n->value.shape());
  loss.node()->grad[0] = 1.0;

  std::vector<Tensor*> in_grads;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    autograd::Node* n = *it;
    if (n->param) {
      auto dst = n->param->grad().data();
      auto src = n->grad.data();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
    if (!n->backward) continue;
    in_grads.assign(n->inputs.size(), nullptr);
    for (std::size_t i = 0; i < n->inputs.size(); ++i) {
      if (n->inputs[i]->requires_grad) in_grads[i] = &n->inputs[i]->grad;
    }
    n->backward(n->grad, in_grads);
  }
  for (auto* n : order) n->grad = Tensor();
}

}  // namespace scs
