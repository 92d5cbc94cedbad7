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

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace eptpinn::ad {

class Tape;

/// Handle to one scalar node of a recorded computation graph.
///
/// A default-constructed Var is detached (no tape); using it as an operand
/// is rejected. Copies are cheap, the node data lives on the tape.
class Var {
 public:
  Var() = default;

  double value() const { return value_; }
  const Tape* tape() const { return tape_; }
  std::uint32_t index() const { return index_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(const Tape* tape, std::uint32_t index, double value)
      : tape_(tape), index_(index), value_(value) {}

  const Tape* tape_ = nullptr;
  std::uint32_t index_ = 0;
  double value_ = 0.0;
};

/// Thrown when an operation would record a non-finite value. Training
/// iterations catch this and abort the step instead of letting NaNs reach
/// the optimizer moments.
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(const std::string& op, std::uint32_t node_index)
      : std::runtime_error("non-finite value produced by op '" + op +
                           "' at node " + std::to_string(node_index)),
        op_(op),
        node_index_(node_index) {}

  const std::string& op() const { return op_; }
  std::uint32_t node_index() const { return node_index_; }

 private:
  std::string op_;
  std::uint32_t node_index_;
};

/// Append-only tape of scalar operations with reverse-mode gradient
/// extraction. Nodes are stored in evaluation order, so the tape order is a
/// topological order and backward() is a single reverse sweep that visits
/// each node exactly once.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Constant leaf. Does not accumulate a gradient entry.
  Var leaf(double value);

  /// Parameter leaf; its adjoint is reported by gradients().
  Var parameter(double value);

  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var scale(Var a, double c);   // c * a
  Var shift(Var a, double c);   // a + c
  Var sin(Var a);
  Var cos(Var a);
  Var neg(Var a) { return scale(a, -1.0); }
  Var square(Var a) { return mul(a, a); }

  /// Fixed-order sum of a span of nodes (left fold). Empty span -> leaf 0.
  Var sum(std::span<const Var> terms);

  std::size_t size() const { return nodes_.size(); }
  std::size_t parameter_count() const { return parameters_.size(); }

  /// Adjoints of every node reachable from `root`; unreachable nodes get 0.
  std::vector<double> adjoints(Var root) const;

  /// Adjoints of the parameter leaves, in registration order.
  std::vector<double> gradients(Var root) const;

  /// Adjoint of an arbitrary node under the given root.
  double gradient_of(Var root, Var node) const;

 private:
  enum class Op : std::uint8_t { kLeaf, kAdd, kSub, kMul, kScale, kShift, kSin, kCos };

  struct Node {
    Op op;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    double value = 0.0;
    // Local partial derivatives w.r.t. the parents, frozen at record time.
    double da = 0.0;
    double db = 0.0;
  };

  Var push(Op op, const char* name, std::uint32_t a, std::uint32_t b,
           double value, double da, double db);
  void check_operand(Var v, const char* op) const;

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> parameters_;
};

}  // namespace eptpinn::ad
