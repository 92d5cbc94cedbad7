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

#include <functional>
#include <span>

#include "eptpinn/dataset.hpp"
#include "eptpinn/loss.hpp"

namespace eptpinn::train {

struct LrStage {
  long start_iteration = 0;
  double rate = 1e-3;
};

struct TrainConfig {
  long total_iterations = 120000;
  std::vector<LrStage> lr_schedule = {{0, 1e-3}, {40000, 1e-4}, {80000, 1e-5}};
  double lambda = 1e-6;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_hat = 1e-8;
  std::uint64_t field_seed = 1;
  std::uint64_t eps_seed = 2;
  long log_every = 100;
  long checkpoint_every = 10000;
  int nonfinite_abort_limit = 10;
  Eigen::Index chunk_rows = 256;

  void validate() const;
};

/// Rate of the last schedule stage whose start is <= iteration.
double lr_at(long iteration, std::span<const LrStage> schedule);

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long t = 0;
};

/// One standard Adam update (bias-corrected) in place. The gradient must be
/// finite; callers abort the iteration on non-finite gradients so the
/// moments are never poisoned.
void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grads,
               AdamState& state, double lr, double beta1 = 0.9,
               double beta2 = 0.999, double eps_hat = 1e-8);

struct LossRecord {
  long iteration = 0;
  double total = 0.0;
  double data = 0.0;
  double residual = 0.0;
  double lr = 0.0;
};

/// Everything that evolves across iterations; checkpoints capture this
/// state so a resumed run reproduces the uninterrupted one bitwise.
struct TrainState {
  net::MlpConfig field_config;
  net::MlpConfig eps_config;
  Eigen::VectorXd theta;  // concatenated field || eps parameters
  AdamState adam;
  long iteration = 0;     // next iteration to run
  double field_scale = 1.0;
  long nonfinite_aborts = 0;

  net::MlpParams field_params() const;
  net::MlpParams eps_params() const;
};

struct TrainCallbacks {
  std::function<void(const LossRecord&)> on_log;
  std::function<void(const TrainState&)> on_checkpoint;
};

/// Fresh state: seeded networks, zero Adam moments, and the measurement
/// scale (peak |noisy field| over available voxels normalized to 1).
TrainState init_train_state(const sim::SyntheticDataset& dataset,
                            const net::MlpConfig& field_config,
                            const net::MlpConfig& eps_config,
                            const TrainConfig& config);

/// Full-batch loss batches for a dataset: collocation over every interior
/// voxel, measurements (scaled) where available.
LossBatches build_batches(const sim::SyntheticDataset& dataset, double lambda,
                          double field_scale);

/// Runs iterations [state.iteration, until) in place.
void train_steps(TrainState& state, const sim::SyntheticDataset& dataset,
                 const TrainConfig& config, long until,
                 const TrainCallbacks& callbacks = {});

struct TrainResult {
  TrainState state;
  std::vector<LossRecord> history;
};

/// init + all iterations; history holds every logged record.
TrainResult train(const sim::SyntheticDataset& dataset,
                  const net::MlpConfig& field_config,
                  const net::MlpConfig& eps_config, const TrainConfig& config,
                  const TrainCallbacks& callbacks = {});

}  // namespace eptpinn::train
