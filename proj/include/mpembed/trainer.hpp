/*
 * Copyright 2026 The mpembed Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef MPEMBED_TRAINER_HPP
#define MPEMBED_TRAINER_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpembed/alias.hpp"
#include "mpembed/hin.hpp"
#include "mpembed/meta_path.hpp"
#include "mpembed/model.hpp"
#include "mpembed/rng.hpp"
#include "mpembed/sampler.hpp"

namespace mpembed {

struct WeightedMetaPath {
  MetaPath path;
  double weight = 1.0;
};

struct TrainConfig {
  std::vector<WeightedMetaPath> meta_paths;
  LossMode mode = LossMode::kPairwise;
  std::size_t dim = 50;
  std::size_t negatives = 5;
  double gamma = 0.75;
  std::uint64_t total_samples = 1'000'000;
  double lr_init = 0.25;
  /// Defaults to 1e-4 * lr_init.
  std::optional<double> lr_floor;
  std::size_t threads = 1;
  std::uint64_t seed = 1;
  bool symmetric = false;
  /// Positive samples claimed by a worker at a time.
  std::uint64_t chunk_size = 10'000;

  double effective_lr_floor() const { return lr_floor.value_or(1e-4 * lr_init); }
};

/// Throws Error when the configuration breaks an invariant (weights positive
/// and summing to 1, K >= 1, budget >= 1, 0 < floor <= init, threads >= 1).
void validate(const TrainConfig& cfg);

/// Rescales weights to sum to 1. Returns true when they had to change.
bool normalize_weights(std::vector<WeightedMetaPath>& paths);

/// Linear decay from lr_init at step 0 to the floor at total_samples.
double schedule_lr(std::uint64_t step, const TrainConfig& cfg);

struct TrainReport {
  std::uint64_t samples = 0;
  std::uint64_t positive_updates = 0;
  std::uint64_t negative_updates = 0;
  double wall_seconds = 0.0;
  /// Mean loss per update, one entry per chunk in budget order.
  std::vector<double> window_loss;
  double final_lr = 0.0;
  std::vector<std::uint64_t> per_worker_samples;

  std::string to_json() const;
};

/// Everything one meta-path contributes to a training step.
struct PathTask {
  PathSampler sampler;
  PathScorer scorer;
  double weight = 1.0;
};

/// Sees each walk right before its update; used by tests and diagnostics.
struct StepObserver {
  virtual ~StepObserver() = default;
  virtual void on_update(std::size_t task, std::span<const VertexId> walk, Label label) = 0;
};

/// Per-chunk progress: samples done so far, current lr, chunk mean loss.
using ProgressFn = std::function<void(std::uint64_t samples, double lr, double window_loss)>;

struct StepWorkspace {
  std::vector<VertexId> positive;
  std::vector<VertexId> negative;
  GradientSet grads;
};

/// One iteration of the sampling loop: pick a meta-path by weight, update on
/// a positive instance, then on K negatives anchored at its first vertex.
/// Returns the summed loss of the K+1 updates (NaN if any was non-finite).
double train_step(ModelParameters& params, std::span<const PathTask> tasks,
                  const AliasTable& task_selector, std::size_t negatives, double lr, Rng& rng,
                  StepWorkspace& ws, StepObserver* observer = nullptr);

/// Lock-free multi-worker loop over cfg.total_samples positive samples.
/// Workers claim fixed-size chunks from an atomic counter and update
/// `params` without synchronization. With one thread the result depends
/// only on cfg.seed.
TrainReport run_workers(ModelParameters& params, std::span<const PathTask> tasks,
                        const TrainConfig& cfg, const ProgressFn& progress = {},
                        StepObserver* observer = nullptr);

struct TrainResult {
  ModelParameters params;
  TrainReport report;
};

/// Builds samplers and parameters for every configured meta-path, initializes
/// parameters uniformly in [-1, 1] and runs the workers.
TrainResult train(const Hin& hin, const TrainConfig& cfg, const ProgressFn& progress = {},
                  StepObserver* observer = nullptr);

}  // namespace mpembed

#endif  // MPEMBED_TRAINER_HPP
