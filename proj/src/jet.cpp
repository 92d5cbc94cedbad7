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

#include "eptpinn/jet.hpp"

#include <vector>

namespace eptpinn::ad {

namespace {

Tape& tape_of(const Jet3& j, const char* op) {
  if (!j.v.valid()) {
    throw std::invalid_argument(std::string(op) + ": detached jet");
  }
  return const_cast<Tape&>(*j.v.tape());
}

void check_same_tape(const Jet3& a, const Jet3& b, const char* op) {
  if (a.v.tape() != b.v.tape()) {
    throw std::invalid_argument(std::string(op) +
                                ": operands belong to different graphs");
  }
}

}  // namespace

int hessian_slot(int i, int j) {
  if (i > j) std::swap(i, j);
  // (0,0)->0 (0,1)->1 (0,2)->2 (1,1)->3 (1,2)->4 (2,2)->5
  static constexpr int slot[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
  return slot[i][j];
}

std::array<Jet3, 3> jet_seed(Tape& tape, const std::array<double, 3>& coords) {
  Var zero = tape.leaf(0.0);
  Var one = tape.leaf(1.0);
  std::array<Jet3, 3> seeds;
  for (int i = 0; i < 3; ++i) {
    Jet3 j;
    j.v = tape.leaf(coords[i]);
    for (int d = 0; d < 3; ++d) j.g[d] = (d == i) ? one : zero;
    for (int e = 0; e < 6; ++e) j.h[e] = zero;
    seeds[i] = j;
  }
  return seeds;
}

Jet3 jet_constant(Tape& tape, double c) {
  Var zero = tape.leaf(0.0);
  Jet3 j;
  j.v = tape.leaf(c);
  j.g = {zero, zero, zero};
  j.h = {zero, zero, zero, zero, zero, zero};
  return j;
}

Jet3 jet_from_scalar(Var s) {
  if (!s.valid()) {
    throw std::invalid_argument("jet_from_scalar: detached scalar");
  }
  Tape& tape = const_cast<Tape&>(*s.tape());
  Var zero = tape.leaf(0.0);
  Jet3 j;
  j.v = s;
  j.g = {zero, zero, zero};
  j.h = {zero, zero, zero, zero, zero, zero};
  return j;
}

Jet3 jet_add(const Jet3& a, const Jet3& b) {
  check_same_tape(a, b, "jet_add");
  Tape& t = tape_of(a, "jet_add");
  Jet3 r;
  r.v = t.add(a.v, b.v);
  for (int d = 0; d < 3; ++d) r.g[d] = t.add(a.g[d], b.g[d]);
  for (int e = 0; e < 6; ++e) r.h[e] = t.add(a.h[e], b.h[e]);
  return r;
}

Jet3 jet_sub(const Jet3& a, const Jet3& b) {
  check_same_tape(a, b, "jet_sub");
  Tape& t = tape_of(a, "jet_sub");
  Jet3 r;
  r.v = t.sub(a.v, b.v);
  for (int d = 0; d < 3; ++d) r.g[d] = t.sub(a.g[d], b.g[d]);
  for (int e = 0; e < 6; ++e) r.h[e] = t.sub(a.h[e], b.h[e]);
  return r;
}

Jet3 jet_mul(const Jet3& a, const Jet3& b) {
  check_same_tape(a, b, "jet_mul");
  Tape& t = tape_of(a, "jet_mul");
  Jet3 r;
  r.v = t.mul(a.v, b.v);
  for (int d = 0; d < 3; ++d) {
    r.g[d] = t.add(t.mul(a.v, b.g[d]), t.mul(b.v, a.g[d]));
  }
  for (int e = 0; e < 6; ++e) {
    const auto [i, j] = kHessianIndex[e];
    // a*h_b + b*h_a + g_a g_b^T + g_b g_a^T
    Var hh = t.add(t.mul(a.v, b.h[e]), t.mul(b.v, a.h[e]));
    Var gg = t.add(t.mul(a.g[i], b.g[j]), t.mul(a.g[j], b.g[i]));
    r.h[e] = t.add(hh, gg);
  }
  return r;
}

Jet3 jet_scale(const Jet3& a, double c) {
  Tape& t = tape_of(a, "jet_scale");
  Jet3 r;
  r.v = t.scale(a.v, c);
  for (int d = 0; d < 3; ++d) r.g[d] = t.scale(a.g[d], c);
  for (int e = 0; e < 6; ++e) r.h[e] = t.scale(a.h[e], c);
  return r;
}

Jet3 jet_sin(const Jet3& a) {
  Tape& t = tape_of(a, "jet_sin");
  Var s = t.sin(a.v);
  Var c = t.cos(a.v);
  Jet3 r;
  r.v = s;
  for (int d = 0; d < 3; ++d) r.g[d] = t.mul(c, a.g[d]);
  for (int e = 0; e < 6; ++e) {
    const auto [i, j] = kHessianIndex[e];
    // cos(v) h - sin(v) g g^T
    r.h[e] = t.sub(t.mul(c, a.h[e]), t.mul(s, t.mul(a.g[i], a.g[j])));
  }
  return r;
}

Jet3 jet_affine(std::span<const Var> weights, std::span<const Jet3> inputs,
                Var bias) {
  if (weights.size() != inputs.size()) {
    throw std::invalid_argument("jet_affine: weights/inputs size mismatch");
  }
  if (inputs.empty()) {
    throw std::invalid_argument("jet_affine: empty combination");
  }
  Tape& t = tape_of(inputs[0], "jet_affine");
  for (const Jet3& in : inputs) check_same_tape(inputs[0], in, "jet_affine");

  std::vector<Var> terms(inputs.size());
  Jet3 r;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    terms[k] = t.mul(weights[k], inputs[k].v);
  }
  r.v = t.add(t.sum(terms), bias);
  for (int d = 0; d < 3; ++d) {
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      terms[k] = t.mul(weights[k], inputs[k].g[d]);
    }
    r.g[d] = t.sum(terms);
  }
  for (int e = 0; e < 6; ++e) {
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      terms[k] = t.mul(weights[k], inputs[k].h[e]);
    }
    r.h[e] = t.sum(terms);
  }
  return r;
}

Var laplacian(const Jet3& j) {
  Tape& t = tape_of(j, "laplacian");
  return t.add(t.add(j.h[0], j.h[3]), j.h[5]);
}

}  // namespace eptpinn::ad
