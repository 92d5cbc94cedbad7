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

#include "eptpinn/trainer.hpp"

#include <cmath>
#include <stdexcept>

namespace eptpinn::train {

void TrainConfig::validate() const {
  if (total_iterations < 0) {
    throw std::invalid_argument("TrainConfig: negative iteration count");
  }
  if (lr_schedule.empty() || lr_schedule.front().start_iteration != 0) {
    throw std::invalid_argument("TrainConfig: schedule must start at 0");
  }
  for (std::size_t i = 0; i < lr_schedule.size(); ++i) {
    if (!(lr_schedule[i].rate > 0.0)) {
      throw std::invalid_argument("TrainConfig: rates must be > 0");
    }
    if (i > 0 && lr_schedule[i].start_iteration <=
                     lr_schedule[i - 1].start_iteration) {
      throw std::invalid_argument(
          "TrainConfig: schedule starts must be strictly increasing");
    }
  }
  if (lambda < 0.0) {
    throw std::invalid_argument("TrainConfig: lambda must be >= 0");
  }
  if (chunk_rows < 1) {
    throw std::invalid_argument("TrainConfig: chunk_rows must be >= 1");
  }
}

double lr_at(long iteration, std::span<const LrStage> schedule) {
  if (iteration < 0) {
    throw std::invalid_argument("lr_at: negative iteration");
  }
  double rate = schedule.empty() ? 0.0 : schedule.front().rate;
  for (const LrStage& stage : schedule) {
    if (stage.start_iteration <= iteration) {
      rate = stage.rate;
    } else {
      break;
    }
  }
  return rate;
}

void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grads,
               AdamState& state, double lr, double beta1, double beta2,
               double eps_hat) {
  if (params.size() != grads.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw std::invalid_argument("adam_step: size mismatch");
  }
  state.t += 1;
  state.m = beta1 * state.m + (1.0 - beta1) * grads;
  state.v = beta2 * state.v + (1.0 - beta2) * grads.cwiseProduct(grads);
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.t));
  params.array() -= lr * (state.m.array() / bc1) /
                    ((state.v.array() / bc2).sqrt() + eps_hat);
}

net::MlpParams TrainState::field_params() const {
  const auto n = static_cast<Eigen::Index>(field_config.parameter_count());
  return net::MlpParams::unflatten(field_config, theta.head(n));
}

net::MlpParams TrainState::eps_params() const {
  const auto n = static_cast<Eigen::Index>(eps_config.parameter_count());
  return net::MlpParams::unflatten(eps_config, theta.tail(theta.size() - n));
}

LossBatches build_batches(const sim::SyntheticDataset& dataset, double lambda,
                          double field_scale) {
  dataset.validate();
  const physics::CoordinateMap map = dataset.grid.coordinate_map();
  const Eigen::Index n_interior = dataset.interior_count();
  if (n_interior == 0) {
    throw std::invalid_argument("build_batches: dataset has no interior voxels");
  }

  LossBatches b;
  b.colloc_norm.resize(n_interior, 3);
  b.data_weight = Eigen::VectorXd::Zero(n_interior);
  b.measurements = Eigen::MatrixX2d::Zero(n_interior, 2);

  Eigen::Index row = 0;
  Eigen::Index idx = 0;
  const sim::Grid& g = dataset.grid;
  for (int kk = 0; kk < g.dims[2]; ++kk) {
    for (int jj = 0; jj < g.dims[1]; ++jj) {
      for (int ii = 0; ii < g.dims[0]; ++ii, ++idx) {
        if (!dataset.interior_mask[idx]) continue;
        b.colloc_norm.row(row) =
            map.to_normalized(g.point(ii, jj, kk)).transpose();
        if (dataset.availability_mask[idx]) {
          b.data_weight[row] = 1.0;
          b.measurements(row, 0) = dataset.noisy_field[idx].real() * field_scale;
          b.measurements(row, 1) = dataset.noisy_field[idx].imag() * field_scale;
        }
        ++row;
      }
    }
  }

  const Eigen::Vector3d s = map.scale();
  b.lap_scale = s.cwiseProduct(s);
  const double k0 = dataset.constants.k0();
  b.k0sq = k0 * k0;
  b.lambda = lambda;
  return b;
}

TrainState init_train_state(const sim::SyntheticDataset& dataset,
                            const net::MlpConfig& field_config,
                            const net::MlpConfig& eps_config,
                            const TrainConfig& config) {
  config.validate();
  dataset.validate();
  if (dataset.available_count() == 0) {
    throw std::invalid_argument("train: dataset has no available samples");
  }

  TrainState state;
  state.field_config = field_config;
  state.eps_config = eps_config;

  // Normalize the measured field so its peak magnitude is 1 during
  // training; recorded so exports can undo it.
  double peak = 0.0;
  for (std::size_t i = 0; i < dataset.noisy_field.size(); ++i) {
    if (dataset.availability_mask[i]) {
      peak = std::max(peak, std::abs(dataset.noisy_field[i]));
    }
  }
  if (!(peak > 0.0)) {
    throw std::invalid_argument("train: measured field is identically zero");
  }
  state.field_scale = 1.0 / peak;

  const auto field = net::init_sine_mlp(field_config, config.field_seed);
  const auto eps = net::init_sine_mlp(eps_config, config.eps_seed);
  const Eigen::VectorXd f1 = field.flatten();
  const Eigen::VectorXd f2 = eps.flatten();
  state.theta.resize(f1.size() + f2.size());
  state.theta << f1, f2;
  state.adam.m = Eigen::VectorXd::Zero(state.theta.size());
  state.adam.v = Eigen::VectorXd::Zero(state.theta.size());
  state.adam.t = 0;
  return state;
}

void train_steps(TrainState& state, const sim::SyntheticDataset& dataset,
                 const TrainConfig& config, long until,
                 const TrainCallbacks& callbacks) {
  config.validate();
  if (until > config.total_iterations) {
    throw std::invalid_argument("train_steps: until beyond total_iterations");
  }

  const LossBatches batches =
      build_batches(dataset, config.lambda, state.field_scale);
  const auto n_field =
      static_cast<Eigen::Index>(state.field_config.parameter_count());

  for (long it = state.iteration; it < until; ++it) {
    const double lr = lr_at(it, config.lr_schedule);
    const auto field = state.field_params();
    const auto eps = state.eps_params();
    const auto eval =
        loss_and_gradient(field, eps, batches, config.chunk_rows);

    const bool finite = std::isfinite(eval.value.total) &&
                        eval.grad_field.allFinite() &&
                        eval.grad_eps.allFinite();
    if (!finite) {
      state.nonfinite_aborts += 1;
      if (state.nonfinite_aborts > config.nonfinite_abort_limit) {
        throw std::runtime_error(
            "train: aborted after repeated non-finite iterations (" +
            std::to_string(state.nonfinite_aborts) + ")");
      }
      state.iteration = it + 1;
      continue;
    }

    if (callbacks.on_log &&
        (config.log_every > 0 && (it % config.log_every == 0 ||
                                  it + 1 == config.total_iterations))) {
      callbacks.on_log(
          {it, eval.value.total, eval.value.data, eval.value.residual, lr});
    }

    Eigen::VectorXd grads(state.theta.size());
    grads << eval.grad_field, eval.grad_eps;
    (void)n_field;
    adam_step(state.theta, grads, state.adam, lr, config.beta1, config.beta2,
              config.eps_hat);
    state.iteration = it + 1;

    if (callbacks.on_checkpoint &&
        ((config.checkpoint_every > 0 &&
          state.iteration % config.checkpoint_every == 0) ||
         state.iteration == config.total_iterations)) {
      callbacks.on_checkpoint(state);
    }
  }
}

TrainResult train(const sim::SyntheticDataset& dataset,
                  const net::MlpConfig& field_config,
                  const net::MlpConfig& eps_config, const TrainConfig& config,
                  const TrainCallbacks& callbacks) {
  TrainResult result;
  result.state = init_train_state(dataset, field_config, eps_config, config);

  TrainCallbacks cb = callbacks;
  cb.on_log = [&](const LossRecord& rec) {
    result.history.push_back(rec);
    if (callbacks.on_log) callbacks.on_log(rec);
  };
  train_steps(result.state, dataset, config, config.total_iterations, cb);
  return result;
}

}  // namespace eptpinn::train
