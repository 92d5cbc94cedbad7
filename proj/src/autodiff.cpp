/* Copyright (c) 2026 The eptpinn Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#include "eptpinn/autodiff.hpp"

#include <cmath>
#include <limits>

namespace eptpinn::ad {

void Tape::check_operand(Var v, const char* op) const {
  if (!v.valid()) {
    throw std::invalid_argument(std::string(op) + ": detached operand");
  }
  if (v.tape() != this) {
    throw std::invalid_argument(std::string(op) +
                                ": operands belong to different graphs");
  }
}

Var Tape::push(Op op, const char* name, std::uint32_t a, std::uint32_t b,
               double value, double da, double db) {
  if (!std::isfinite(value)) {
    throw NonFiniteError(name, static_cast<std::uint32_t>(nodes_.size()));
  }
  Node n;
  n.op = op;
  n.a = a;
  n.b = b;
  n.value = value;
  n.da = da;
  n.db = db;
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(n);
  return Var(this, index, value);
}

Var Tape::leaf(double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("leaf: non-finite value rejected");
  }
  return push(Op::kLeaf, "leaf", 0, 0, value, 0.0, 0.0);
}

Var Tape::parameter(double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("parameter: non-finite value rejected");
  }
  Var v = push(Op::kLeaf, "parameter", 0, 0, value, 0.0, 0.0);
  parameters_.push_back(v.index());
  return v;
}

Var Tape::add(Var a, Var b) {
  check_operand(a, "add");
  check_operand(b, "add");
  return push(Op::kAdd, "add", a.index(), b.index(), a.value() + b.value(),
              1.0, 1.0);
}

Var Tape::sub(Var a, Var b) {
  check_operand(a, "sub");
  check_operand(b, "sub");
  return push(Op::kSub, "sub", a.index(), b.index(), a.value() - b.value(),
              1.0, -1.0);
}

Var Tape::mul(Var a, Var b) {
  check_operand(a, "mul");
  check_operand(b, "mul");
  return push(Op::kMul, "mul", a.index(), b.index(), a.value() * b.value(),
              b.value(), a.value());
}

Var Tape::scale(Var a, double c) {
  check_operand(a, "scale");
  return push(Op::kScale, "scale", a.index(), 0, c * a.value(), c, 0.0);
}

Var Tape::shift(Var a, double c) {
  check_operand(a, "shift");
  return push(Op::kShift, "shift", a.index(), 0, a.value() + c, 1.0, 0.0);
}

Var Tape::sin(Var a) {
  check_operand(a, "sin");
  return push(Op::kSin, "sin", a.index(), 0, std::sin(a.value()),
              std::cos(a.value()), 0.0);
}

Var Tape::cos(Var a) {
  check_operand(a, "cos");
  return push(Op::kCos, "cos", a.index(), 0, std::cos(a.value()),
              -std::sin(a.value()), 0.0);
}

Var Tape::sum(std::span<const Var> terms) {
  if (terms.empty()) {
    return leaf(0.0);
  }
  Var acc = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) {
    acc = add(acc, terms[i]);
  }
  return acc;
}

std::vector<double> Tape::adjoints(Var root) const {
  check_operand(root, "backward");
  std::vector<double> adj(nodes_.size(), 0.0);
  if (adj.empty()) return adj;
  adj[root.index()] = 1.0;
  for (std::uint32_t i = root.index() + 1; i-- > 0;) {
    const Node& n = nodes_[i];
    const double a = adj[i];
    if (a == 0.0 || n.op == Op::kLeaf) continue;
    adj[n.a] += n.da * a;
    switch (n.op) {
      case Op::kAdd:
      case Op::kSub:
      case Op::kMul:
        adj[n.b] += n.db * a;
        break;
      default:
        break;
    }
  }
  return adj;
}

std::vector<double> Tape::gradients(Var root) const {
  const std::vector<double> adj = adjoints(root);
  std::vector<double> g(parameters_.size(), 0.0);
  for (std::size_t i = 0; i < parameters_.size(); ++i) {
    g[i] = adj[parameters_[i]];
  }
  return g;
}

double Tape::gradient_of(Var root, Var node) const {
  check_operand(node, "gradient_of");
  return adjoints(root)[node.index()];
}

}  // namespace eptpinn::ad
