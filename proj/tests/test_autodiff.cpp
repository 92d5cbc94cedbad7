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

#include <doctest.h>

#include <cmath>
#include <random>

#include "eptpinn/autodiff.hpp"

using eptpinn::ad::Tape;
using eptpinn::ad::Var;

namespace {

// Replayable random expression over P parameters: a straight-line program
// whose instructions can be evaluated either with plain doubles (for the
// finite-difference oracle) or on a tape (for reverse mode).
struct RandomProgram {
  enum class Kind { kAdd, kSub, kMul, kScale, kSin };
  struct Instr {
    Kind kind;
    int a;
    int b;
    double c;
  };
  int num_params;
  std::vector<Instr> instrs;

  static RandomProgram make(std::mt19937_64& rng, int num_params, int length) {
    RandomProgram p;
    p.num_params = num_params;
    std::uniform_real_distribution<double> coef(-1.5, 1.5);
    for (int i = 0; i < length; ++i) {
      const int avail = num_params + i;
      Instr ins;
      ins.a = static_cast<int>(rng() % avail);
      ins.b = static_cast<int>(rng() % avail);
      ins.c = coef(rng);
      switch (rng() % 5) {
        case 0: ins.kind = Kind::kAdd; break;
        case 1: ins.kind = Kind::kSub; break;
        case 2: ins.kind = Kind::kMul; break;
        case 3: ins.kind = Kind::kScale; break;
        default: ins.kind = Kind::kSin; break;
      }
      p.instrs.push_back(ins);
    }
    return p;
  }

  double eval(const std::vector<double>& params) const {
    std::vector<double> vals(params);
    for (const Instr& ins : instrs) {
      double v = 0.0;
      switch (ins.kind) {
        case Kind::kAdd: v = vals[ins.a] + vals[ins.b]; break;
        case Kind::kSub: v = vals[ins.a] - vals[ins.b]; break;
        case Kind::kMul: v = vals[ins.a] * vals[ins.b]; break;
        case Kind::kScale: v = ins.c * vals[ins.a]; break;
        case Kind::kSin: v = std::sin(vals[ins.a]); break;
      }
      vals.push_back(v);
    }
    return vals.back();
  }

  Var record(Tape& tape, const std::vector<double>& params) const {
    std::vector<Var> vals;
    for (double p : params) vals.push_back(tape.parameter(p));
    for (const Instr& ins : instrs) {
      Var v;
      switch (ins.kind) {
        case Kind::kAdd: v = tape.add(vals[ins.a], vals[ins.b]); break;
        case Kind::kSub: v = tape.sub(vals[ins.a], vals[ins.b]); break;
        case Kind::kMul: v = tape.mul(vals[ins.a], vals[ins.b]); break;
        case Kind::kScale: v = tape.scale(vals[ins.a], ins.c); break;
        case Kind::kSin: v = tape.sin(vals[ins.a]); break;
      }
      vals.push_back(v);
    }
    return vals.back();
  }
};

double central_difference(const RandomProgram& prog, std::vector<double> params,
                          int i, double step) {
  params[i] += step;
  const double up = prog.eval(params);
  params[i] -= 2.0 * step;
  const double down = prog.eval(params);
  return (up - down) / (2.0 * step);
}

}  // namespace

TEST_CASE("backward of a leaf is the identity derivative") {
  Tape tape;
  Var a = tape.parameter(3.0);
  auto g = tape.gradients(a);
  CHECK(g.size() == 1);
  CHECK(g[0] == 1.0);
}

TEST_CASE("product rule on two leaves") {
  Tape tape;
  Var a = tape.parameter(2.0);
  Var b = tape.parameter(5.0);
  Var p = tape.mul(a, b);
  auto g = tape.gradients(p);
  CHECK(g[0] == 5.0);
  CHECK(g[1] == 2.0);
}

TEST_CASE("sin gradient at zero") {
  Tape tape;
  Var a = tape.parameter(0.0);
  Var s = tape.sin(a);
  CHECK(tape.gradients(s)[0] == 1.0);
}

TEST_CASE("polynomial a^2 + b^2") {
  Tape tape;
  Var a = tape.parameter(1.0);
  Var b = tape.parameter(2.0);
  Var root = tape.add(tape.square(a), tape.square(b));
  auto g = tape.gradients(root);
  CHECK(g[0] == doctest::Approx(2.0));
  CHECK(g[1] == doctest::Approx(4.0));
}

TEST_CASE("parameter not reachable from the root gets zero gradient") {
  Tape tape;
  Var a = tape.parameter(1.0);
  Var unused = tape.parameter(7.0);
  (void)unused;
  Var root = tape.square(a);
  auto g = tape.gradients(root);
  CHECK(g[0] == 2.0);
  CHECK(g[1] == 0.0);
}

TEST_CASE("random expressions match the central finite-difference oracle") {
  std::mt19937_64 rng(20260809);
  std::uniform_real_distribution<double> val(-1.2, 1.2);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int num_params = 2 + static_cast<int>(rng() % 5);
    const auto prog = RandomProgram::make(rng, num_params, 30);
    std::vector<double> params(num_params);
    for (double& p : params) p = val(rng);

    Tape tape;
    Var root = prog.record(tape, params);
    const auto grads = tape.gradients(root);

    for (int i = 0; i < num_params; ++i) {
      const double fd = central_difference(prog, params, i, 1e-6);
      const double scale = std::max({std::abs(fd), std::abs(grads[i]), 1e-4});
      CHECK(std::abs(grads[i] - fd) / scale <= 1e-5);
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("gradients are bitwise identical across repeated runs") {
  std::mt19937_64 rng(11);
  const auto prog = RandomProgram::make(rng, 4, 50);
  const std::vector<double> params = {0.3, -0.7, 1.1, 0.2};

  Tape t1;
  auto g1 = t1.gradients(prog.record(t1, params));
  Tape t2;
  auto g2 = t2.gradients(prog.record(t2, params));
  for (std::size_t i = 0; i < g1.size(); ++i) {
    CHECK(g1[i] == g2[i]);  // exact
  }
}

TEST_CASE("non-finite leaves and results are rejected") {
  Tape tape;
  CHECK_THROWS_AS(tape.leaf(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(tape.parameter(INFINITY), std::invalid_argument);

  Var big = tape.parameter(1e308);
  CHECK_THROWS_AS(tape.mul(big, big), eptpinn::ad::NonFiniteError);
}

TEST_CASE("operands from different graphs are rejected") {
  Tape t1;
  Tape t2;
  Var a = t1.parameter(1.0);
  Var b = t2.parameter(2.0);
  CHECK_THROWS_AS(t1.add(a, b), std::invalid_argument);
  CHECK_THROWS_AS(t1.mul(b, a), std::invalid_argument);
}

TEST_CASE("sum uses a fixed left-to-right order") {
  Tape tape;
  std::vector<Var> terms;
  for (int i = 0; i < 5; ++i) terms.push_back(tape.parameter(0.1 * (i + 1)));
  Var s = tape.sum(terms);
  CHECK(s.value() == (((0.1 + 0.2) + 0.3) + 0.4) + 0.5);
  auto g = tape.gradients(s);
  for (double gi : g) CHECK(gi == 1.0);
}
