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
#include <complex>
#include <random>

#include "eptpinn/physics.hpp"

using namespace eptpinn;
using namespace eptpinn::physics;

namespace {

PhysicsConstants seven_tesla() { return PhysicsConstants{297.2e6}; }

// JetOutput stand-in holding analytically known values and second
// derivatives, expressed in the normalized coordinates of `map`.
net::TapedMlp::JetOutput analytic_jet(ad::Tape& tape, std::complex<double> value,
                                      std::complex<double> d2_physical_z,
                                      const CoordinateMap& map) {
  const double sz = map.scale()[2];
  net::TapedMlp::JetOutput out;
  out.value = {tape.leaf(value.real()), tape.leaf(value.imag())};
  for (int c = 0; c < 2; ++c) {
    const double d2 = (c == 0 ? d2_physical_z.real() : d2_physical_z.imag());
    out.hessian_diag.push_back(
        {tape.leaf(0.0), tape.leaf(0.0), tape.leaf(d2 / (sz * sz))});
    out.laplacian.push_back(out.hessian_diag[c][2]);
  }
  return out;
}

}  // namespace

TEST_CASE("vacuum permittivity conversion") {
  const auto k = seven_tesla();
  const auto eps = complex_permittivity(1.0, 0.0, k);
  CHECK(eps.re == 1.0);
  CHECK(eps.im == 0.0);
  const auto [er, sigma] = eps_to_props(eps, k);
  CHECK(er == 1.0);
  CHECK(sigma == 0.0);
}

TEST_CASE("phantom compartment conversions at 7 T") {
  const auto k = seven_tesla();
  const auto a = complex_permittivity(56.0, 0.69, k);
  CHECK(a.re == 56.0);
  CHECK(a.im == doctest::Approx(-41.73).epsilon(0.01 / 41.73));

  const auto b = complex_permittivity(76.0, 1.02, k);
  CHECK(b.im == doctest::Approx(-61.69).epsilon(0.01 / 61.69));

  const auto [er, sigma] = eps_to_props({65.0, -50.80}, k);
  CHECK(er == 65.0);
  CHECK(sigma == doctest::Approx(0.84).epsilon(1e-3 / 0.84));
}

TEST_CASE("conversion roundtrip is lossless for the four compartments") {
  const auto k = seven_tesla();
  const double eps_r[4] = {56.0, 51.0, 65.0, 76.0};
  const double sigma[4] = {0.69, 0.56, 0.84, 1.02};
  for (int i = 0; i < 4; ++i) {
    const auto eps = complex_permittivity(eps_r[i], sigma[i], k);
    const auto [er, sg] = eps_to_props(eps, k);
    CHECK(std::abs(er - eps_r[i]) <= 1e-12 * eps_r[i]);
    CHECK(std::abs(sg - sigma[i]) <= 1e-12 * sigma[i]);
  }
}

TEST_CASE("omega must be positive") {
  PhysicsConstants bad{0.0};
  CHECK_THROWS_AS(complex_permittivity(1.0, 0.0, bad), std::invalid_argument);
  CHECK_THROWS_AS(eps_to_props({1.0, 0.0}, bad), std::invalid_argument);
}

TEST_CASE("coordinate map roundtrips and scales") {
  CoordinateMap map;
  map.lo = Eigen::Vector3d(-0.07, -0.07, -0.07);
  map.hi = Eigen::Vector3d(0.07, 0.07, 0.07);
  map.validate();

  CHECK(map.scale()[0] == doctest::Approx(2.0 / 0.14).epsilon(1e-15));

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-0.07, 0.07);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d p(u(rng), u(rng), u(rng));
    const Eigen::Vector3d round = map.to_physical(map.to_normalized(p));
    CHECK((round - p).norm() <= 1e-12 * std::max(1e-3, p.norm()));
  }
  CHECK(map.to_normalized(map.lo) == Eigen::Vector3d(-1, -1, -1));
  CHECK(map.to_normalized(map.hi) == Eigen::Vector3d(1, 1, 1));
}

TEST_CASE("residual of the zero field is zero") {
  const auto k = seven_tesla();
  CoordinateMap map;
  map.lo = Eigen::Vector3d(-0.07, -0.07, -0.07);
  map.hi = Eigen::Vector3d(0.07, 0.07, 0.07);

  ad::Tape tape;
  auto jet = analytic_jet(tape, {0.0, 0.0}, {0.0, 0.0}, map);
  std::array<ad::Var, 2> eps = {tape.leaf(56.0), tape.leaf(-41.73)};
  const auto r = helmholtz_residual(tape, jet, eps, k, map);
  CHECK(r.re.value() == 0.0);
  CHECK(r.im.value() == 0.0);
}

TEST_CASE("plane wave in a homogeneous medium yields a tiny residual") {
  const auto k = seven_tesla();
  CoordinateMap map;
  map.lo = Eigen::Vector3d(-0.07, -0.07, -0.07);
  map.hi = Eigen::Vector3d(0.07, 0.07, 0.07);

  const std::complex<double> eps_c(56.0, -41.73);
  const double k0 = k.k0();
  const std::complex<double> kappa = k0 * std::sqrt(eps_c);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.06, 0.06);
  const double bound = 1e-9 * k0 * k0 * std::abs(eps_c);
  for (int i = 0; i < 20; ++i) {
    const double z = u(rng);
    // u(z) = exp(-i kappa z); d2u/dz2 = -kappa^2 u.
    const std::complex<double> val =
        std::exp(std::complex<double>(0.0, -1.0) * kappa * z);
    const std::complex<double> d2 = -(kappa * kappa) * val;

    ad::Tape tape;
    auto jet = analytic_jet(tape, val, d2, map);
    std::array<ad::Var, 2> eps = {tape.leaf(eps_c.real()),
                                  tape.leaf(eps_c.imag())};
    const auto r = helmholtz_residual(tape, jet, eps, k, map);
    const double mag = std::hypot(r.re.value(), r.im.value());
    CHECK(mag <= bound);
  }
}

TEST_CASE("residual of B = x^2 with real permittivity") {
  const auto k = seven_tesla();
  CoordinateMap map;
  map.lo = Eigen::Vector3d(-0.07, -0.07, -0.07);
  map.hi = Eigen::Vector3d(0.07, 0.07, 0.07);
  const double sx = map.scale()[0];

  const double x = 0.031;
  const double eps_re = 42.0;

  ad::Tape tape;
  net::TapedMlp::JetOutput jet;
  jet.value = {tape.leaf(x * x), tape.leaf(0.0)};
  jet.hessian_diag.push_back(
      {tape.leaf(2.0 / (sx * sx)), tape.leaf(0.0), tape.leaf(0.0)});
  jet.hessian_diag.push_back({tape.leaf(0.0), tape.leaf(0.0), tape.leaf(0.0)});
  jet.laplacian = {jet.hessian_diag[0][0], tape.leaf(0.0)};

  std::array<ad::Var, 2> eps = {tape.leaf(eps_re), tape.leaf(0.0)};
  const auto r = helmholtz_residual(tape, jet, eps, k, map);
  const double k0sq = k.k0() * k.k0();
  CHECK(r.re.value() ==
        doctest::Approx(2.0 + k0sq * eps_re * x * x).epsilon(1e-13));
  CHECK(r.im.value() == 0.0);
}

namespace {

struct ToySetup {
  net::MlpParams field;
  net::MlpParams eps;
  std::vector<FieldSample> data;
  std::vector<Eigen::Vector3d> colloc;
  PhysicsConstants k = seven_tesla();
  CoordinateMap map;

  ToySetup() {
    map.lo = Eigen::Vector3d(-0.07, -0.07, -0.07);
    map.hi = Eigen::Vector3d(0.07, 0.07, 0.07);
    net::MlpConfig cfg;
    cfg.hidden_layers = 1;
    cfg.hidden_width = 2;
    cfg.omega0 = 2.0;
    field = net::init_sine_mlp(cfg, 500);
    eps = net::init_sine_mlp(cfg, 501);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    for (int i = 0; i < 4; ++i) {
      const Eigen::Vector3d p(u(rng), u(rng), u(rng));
      data.push_back({p, {u(rng) * 10.0, u(rng) * 10.0}});
      colloc.push_back(p);
    }
  }
};

}  // namespace

TEST_CASE("perfectly fit constant field with zero permittivity gives zero loss") {
  ToySetup toy;
  for (auto& w : toy.field.weights) w.setZero();
  toy.field.biases.back() << 0.8, -0.2;
  for (auto& w : toy.eps.weights) w.setZero();
  toy.eps.biases.back().setZero();
  for (auto& s : toy.data) s.value = {0.8, -0.2};

  ad::Tape tape;
  net::TapedMlp field_net(tape, toy.field);
  net::TapedMlp eps_net(tape, toy.eps);
  const auto loss = total_loss(tape, toy.data, toy.colloc, field_net, eps_net,
                               1e-6, toy.k, toy.map);
  CHECK(loss.total.value() == 0.0);
  CHECK(loss.data.value() == 0.0);
  CHECK(loss.residual.value() == 0.0);
}

TEST_CASE("lambda = 0 reduces the loss to the data misfit") {
  ToySetup toy;
  ad::Tape tape;
  net::TapedMlp field_net(tape, toy.field);
  net::TapedMlp eps_net(tape, toy.eps);
  const auto loss = total_loss(tape, toy.data, toy.colloc, field_net, eps_net,
                               0.0, toy.k, toy.map);
  CHECK(loss.total.value() == loss.data.value());
  CHECK(loss.residual.value() > 0.0);
}

TEST_CASE("single point with unit error and zero residual gives loss 1") {
  ToySetup toy;
  for (auto& w : toy.field.weights) w.setZero();
  toy.field.biases.back() << 1.0, 0.0;
  for (auto& w : toy.eps.weights) w.setZero();
  toy.eps.biases.back().setZero();

  std::vector<FieldSample> data = {{Eigen::Vector3d(0.01, 0.0, 0.0), {0.0, 0.0}}};
  std::vector<Eigen::Vector3d> colloc = {Eigen::Vector3d(0.01, 0.0, 0.0)};

  ad::Tape tape;
  net::TapedMlp field_net(tape, toy.field);
  net::TapedMlp eps_net(tape, toy.eps);
  const auto loss = total_loss(tape, data, colloc, field_net, eps_net, 1e-6,
                               toy.k, toy.map);
  CHECK(loss.total.value() == 1.0);
}

TEST_CASE("empty batches are rejected") {
  ToySetup toy;
  ad::Tape tape;
  net::TapedMlp field_net(tape, toy.field);
  net::TapedMlp eps_net(tape, toy.eps);
  std::vector<FieldSample> nodata;
  std::vector<Eigen::Vector3d> nocolloc;
  CHECK_THROWS_AS(total_loss(tape, nodata, toy.colloc, field_net, eps_net,
                             1e-6, toy.k, toy.map),
                  std::invalid_argument);
  CHECK_THROWS_AS(total_loss(tape, toy.data, nocolloc, field_net, eps_net,
                             1e-6, toy.k, toy.map),
                  std::invalid_argument);
}

TEST_CASE("loss is invariant under batch reordering") {
  ToySetup toy;
  auto value_of = [&](const std::vector<FieldSample>& data,
                      const std::vector<Eigen::Vector3d>& colloc) {
    ad::Tape tape;
    net::TapedMlp field_net(tape, toy.field);
    net::TapedMlp eps_net(tape, toy.eps);
    return total_loss(tape, data, colloc, field_net, eps_net, 1e-6, toy.k,
                      toy.map)
        .total.value();
  };
  const double base = value_of(toy.data, toy.colloc);

  auto data = toy.data;
  auto colloc = toy.colloc;
  std::reverse(data.begin(), data.end());
  std::reverse(colloc.begin(), colloc.end());
  const double reordered = value_of(data, colloc);
  CHECK(reordered == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("loss gradients match finite differences on a toy network") {
  ToySetup toy;
  const double lambda = 1e-6;

  ad::Tape tape;
  net::TapedMlp field_net(tape, toy.field);
  net::TapedMlp eps_net(tape, toy.eps);
  const auto loss = total_loss(tape, toy.data, toy.colloc, field_net, eps_net,
                               lambda, toy.k, toy.map);
  const auto grads = tape.gradients(loss.total);

  const Eigen::VectorXd theta1 = toy.field.flatten();
  const Eigen::VectorXd theta2 = toy.eps.flatten();
  auto loss_at = [&](const Eigen::VectorXd& t1, const Eigen::VectorXd& t2) {
    auto f = net::MlpParams::unflatten(toy.field.config, t1);
    auto e = net::MlpParams::unflatten(toy.eps.config, t2);
    ad::Tape t;
    net::TapedMlp fn(t, f);
    net::TapedMlp en(t, e);
    return total_loss(t, toy.data, toy.colloc, fn, en, lambda, toy.k, toy.map)
        .total.value();
  };

  const Eigen::Index n1 = theta1.size();
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n_total = n1 + theta2.size();
    const Eigen::Index i = static_cast<Eigen::Index>(rng() % n_total);
    Eigen::VectorXd u1 = theta1;
    Eigen::VectorXd u2 = theta2;
    Eigen::VectorXd d1 = theta1;
    Eigen::VectorXd d2 = theta2;
    const double step = 1e-6;
    if (i < n1) {
      u1[i] += step;
      d1[i] -= step;
    } else {
      u2[i - n1] += step;
      d2[i - n1] -= step;
    }
    const double fd = (loss_at(u1, u2) - loss_at(d1, d2)) / (2.0 * step);
    const double scale = std::max({std::abs(fd), std::abs(grads[i]), 1e-9});
    CHECK(std::abs(grads[i] - fd) / scale <= 1e-4);
  }
}

TEST_CASE("loss is non-negative with strictly positive parts when imperfect") {
  ToySetup toy;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  for (int trial = 0; trial < 5; ++trial) {
    auto field = toy.field;
    auto eps = toy.eps;
    for (auto& w : field.weights) {
      for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] += u(rng);
    }
    ad::Tape tape;
    net::TapedMlp field_net(tape, field);
    net::TapedMlp eps_net(tape, eps);
    const auto loss = total_loss(tape, toy.data, toy.colloc, field_net,
                                 eps_net, 1e-6, toy.k, toy.map);
    CHECK(loss.total.value() >= 0.0);
    CHECK(loss.data.value() >= 0.0);
    CHECK(loss.residual.value() >= 0.0);
    CHECK(loss.total.value() ==
          loss.data.value() + 1e-6 * loss.residual.value());
    CHECK(loss.total.value() > 0.0);
  }
}

TEST_CASE("scaling the field by a complex constant scales the residual") {
  // Helmholtz is linear in B: a scaled exact solution still has (near) zero
  // residual, so the zero set is unchanged by common rescaling.
  const auto k = seven_tesla();
  CoordinateMap map;
  map.lo = Eigen::Vector3d(-0.07, -0.07, -0.07);
  map.hi = Eigen::Vector3d(0.07, 0.07, 0.07);
  const std::complex<double> eps_c(65.0, -50.80);
  const std::complex<double> kappa = k.k0() * std::sqrt(eps_c);
  const std::complex<double> c(2.5, -1.25);  // arbitrary nonzero rescale

  const double bound =
      std::abs(c) * 1e-9 * k.k0() * k.k0() * std::abs(eps_c);
  for (double z : {-0.05, -0.01, 0.02, 0.06}) {
    const std::complex<double> u =
        c * std::exp(std::complex<double>(0.0, -1.0) * kappa * z);
    const std::complex<double> d2 = -(kappa * kappa) * u;
    ad::Tape tape;
    auto jet = analytic_jet(tape, u, d2, map);
    std::array<ad::Var, 2> eps = {tape.leaf(eps_c.real()),
                                  tape.leaf(eps_c.imag())};
    const auto r = helmholtz_residual(tape, jet, eps, k, map);
    CHECK(std::hypot(r.re.value(), r.im.value()) <= bound);
  }
}
