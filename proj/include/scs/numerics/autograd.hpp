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

// Tensor-level reverse-mode differentiation. Every op records a node with a
// closure that maps the output gradient onto its inputs' gradients; backward()
// walks the recorded graph in reverse topological order and accumulates into
// the Parameters reached through leaf() nodes.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "scs/numerics/tensor.hpp"

namespace scs {

class Parameter {
 public:
  Parameter(std::string name, Tensor value);

  const std::string& name() const noexcept { return name_; }
  Tensor& value() noexcept { return value_; }
  const Tensor& value() const noexcept { return value_; }
  Tensor& grad() noexcept { return grad_; }
  const Tensor& grad() const noexcept { return grad_; }
  const Shape& shape() const noexcept { return value_.shape(); }

  void zero_grad() { grad_.fill(0.0); }

 private:
  std::string name_;
  Tensor value_;
  Tensor grad_;
};

namespace autograd {

// Input gradients are nullptr for inputs that do not require a gradient.
using BackwardFn = std::function<void(const Tensor& out_grad, std::vector<Tensor*>& in_grads)>;

struct Node {
  Tensor value;
  Tensor grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> inputs;
  BackwardFn backward;
  Parameter* param = nullptr;
};

}  // namespace autograd

// Handle to a recorded value. Cheap to copy; copies share the node.
class Var {
 public:
  Var() = default;
  explicit Var(std::shared_ptr<autograd::Node> node) : node_(std::move(node)) {}

  const Tensor& value() const { return node_->value; }
  const Shape& shape() const { return node_->value.shape(); }
  std::size_t dim(std::size_t axis) const { return node_->value.dim(axis); }
  std::size_t rank() const { return node_->value.rank(); }
  bool requires_grad() const { return node_ && node_->requires_grad; }
  bool defined() const { return static_cast<bool>(node_); }
  double item() const { return node_->value.item(); }

  const std::shared_ptr<autograd::Node>& node() const { return node_; }

 private:
  std::shared_ptr<autograd::Node> node_;
};

Var constant(Tensor value);
// Leaf bound to a Parameter: its gradient is accumulated into p.grad().
// Under a NoGradGuard this returns a constant copy instead.
Var leaf(Parameter& p);

// Records an op output. The closure is dropped when no input requires grad.
Var make_op(Tensor value, std::vector<Var> inputs, autograd::BackwardFn backward);

// Accumulates d(loss)/d(value) into every Parameter reachable from loss.
void backward(const Var& loss);

// Disables graph recording on the current thread while alive.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

bool grad_enabled();

}  // namespace scs
