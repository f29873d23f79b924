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
#include "mpembed/trainer.hpp"

#include <omp.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>

#include <json.hpp>

#include "mpembed/error.hpp"

namespace mpembed {

void validate(const TrainConfig& cfg) {
  if (cfg.meta_paths.empty()) throw Error("at least one meta-path is required");
  double sum = 0.0;
  for (const auto& wp : cfg.meta_paths) {
    if (!(wp.weight > 0.0) || !std::isfinite(wp.weight))
      throw Error("meta-path weight for " + wp.path.render() + " must be positive");
    sum += wp.weight;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error("meta-path weights must sum to 1");
  if (cfg.dim == 0) throw Error("dimension must be >= 1");
  if (cfg.negatives < 1) throw Error("negative ratio K must be >= 1");
  if (cfg.total_samples < 1) throw Error("total_samples must be >= 1");
  if (cfg.threads < 1) throw Error("threads must be >= 1");
  if (cfg.chunk_size < 1) throw Error("chunk_size must be >= 1");
  if (!std::isfinite(cfg.gamma)) throw Error("gamma must be finite");
  const double floor = cfg.effective_lr_floor();
  if (!(floor > 0.0) || !(floor <= cfg.lr_init) || !std::isfinite(cfg.lr_init))
    throw Error("learning rates must satisfy 0 < lr_floor <= lr_init");
}

bool normalize_weights(std::vector<WeightedMetaPath>& paths) {
  double sum = 0.0;
  for (const auto& wp : paths) {
    if (!(wp.weight > 0.0) || !std::isfinite(wp.weight))
      throw Error("meta-path weight for " + wp.path.render() + " must be positive");
    sum += wp.weight;
  }
  if (std::abs(sum - 1.0) <= 1e-9) return false;
  for (auto& wp : paths) wp.weight /= sum;
  return true;
}

double schedule_lr(std::uint64_t step, const TrainConfig& cfg) {
  const double floor = cfg.effective_lr_floor();
  if (step >= cfg.total_samples) return floor;
  const double frac = static_cast<double>(step) / static_cast<double>(cfg.total_samples);
  return cfg.lr_init + (floor - cfg.lr_init) * frac;
}

std::string TrainReport::to_json() const {
  nlohmann::json j;
  j["samples"] = samples;
  j["positive_updates"] = positive_updates;
  j["negative_updates"] = negative_updates;
  j["wall_seconds"] = wall_seconds;
  j["final_lr"] = final_lr;
  j["window_loss"] = window_loss;
  j["per_worker_samples"] = per_worker_samples;
  return j.dump();
}

double train_step(ModelParameters& params, std::span<const PathTask> tasks,
                  const AliasTable& task_selector, std::size_t negatives, double lr, Rng& rng,
                  StepWorkspace& ws, StepObserver* observer) {
  const std::size_t t = tasks.size() == 1 ? 0 : task_selector.view().sample(rng);
  const PathTask& task = tasks[t];
  const std::size_t walk_len = task.scorer.length() + 1;
  ws.positive.resize(walk_len);
  ws.negative.resize(walk_len);

  task.sampler.sample_positive(rng, ws.positive);
  if (observer) observer->on_update(t, ws.positive, Label::kPositive);
  double total = sgd_step(params, task.scorer, ws.positive, Label::kPositive, lr, ws.grads);

  const VertexId anchor = ws.positive.front();
  for (std::size_t k = 0; k < negatives; ++k) {
    task.sampler.sample_negative(anchor, rng, ws.negative);
    if (observer) observer->on_update(t, ws.negative, Label::kNegative);
    total += sgd_step(params, task.scorer, ws.negative, Label::kNegative, lr, ws.grads);
  }
  return total;
}

TrainReport run_workers(ModelParameters& params, std::span<const PathTask> tasks,
                        const TrainConfig& cfg, const ProgressFn& progress,
                        StepObserver* observer) {
  if (cfg.threads < 1) throw Error("threads must be >= 1");
  if (tasks.empty()) throw Error("no meta-path tasks to train");

  std::vector<double> weights;
  for (const auto& task : tasks) weights.push_back(task.weight);
  const AliasTable selector(weights);

  const std::uint64_t total = cfg.total_samples;
  const std::uint64_t chunk = cfg.chunk_size;
  const std::uint64_t num_chunks = (total + chunk - 1) / chunk;
  const int threads = static_cast<int>(cfg.threads);

  TrainReport report;
  report.window_loss.assign(num_chunks, 0.0);
  report.per_worker_samples.assign(cfg.threads, 0);

  std::atomic<std::uint64_t> next_chunk{0};
  std::atomic<std::uint64_t> done{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::mutex report_mutex;
  const Rng root(cfg.seed);

  const auto started = std::chrono::steady_clock::now();
#pragma omp parallel num_threads(threads)
  {
    const int worker = omp_get_thread_num();
    Rng rng = root.split(static_cast<std::uint64_t>(worker) + 1);
    StepWorkspace ws;
    ws.grads.reset(params.dim());
    std::uint64_t mine = 0;
    try {
      while (!stop.load(std::memory_order_relaxed)) {
        const std::uint64_t c = next_chunk.fetch_add(1, std::memory_order_relaxed);
        if (c >= num_chunks) break;
        const std::uint64_t begin = c * chunk;
        const std::uint64_t end = std::min(total, begin + chunk);
        double loss = 0.0;
        for (std::uint64_t s = begin; s < end; ++s) {
          const double l = train_step(params, tasks, selector, cfg.negatives, schedule_lr(s, cfg),
                                      rng, ws, observer);
          if (!std::isfinite(l))
            throw NumericError("non-finite loss at sample " + std::to_string(s) +
                               "; try a smaller learning rate");
          loss += l;
        }
        const std::uint64_t n = end - begin;
        mine += n;
        const double window = loss / static_cast<double>(n * (cfg.negatives + 1));
        report.window_loss[c] = window;
        const std::uint64_t so_far = done.fetch_add(n, std::memory_order_relaxed) + n;
        if (progress) {
          std::lock_guard lock(report_mutex);
          progress(so_far, schedule_lr(end, cfg), window);
        }
      }
    } catch (const NumericError& e) {
      std::lock_guard lock(report_mutex);
      if (!failure)
        failure = std::make_exception_ptr(
            NumericError("worker " + std::to_string(worker) + ": " + e.what()));
      stop.store(true);
    } catch (const std::exception& e) {
      std::lock_guard lock(report_mutex);
      if (!failure)
        failure = std::make_exception_ptr(
            Error("worker " + std::to_string(worker) + ": " + e.what()));
      stop.store(true);
    } catch (...) {
      std::lock_guard lock(report_mutex);
      if (!failure) failure = std::current_exception();
      stop.store(true);
    }
    report.per_worker_samples[static_cast<std::size_t>(worker)] = mine;
  }
  if (failure) std::rethrow_exception(failure);

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  report.samples = std::accumulate(report.per_worker_samples.begin(),
                                   report.per_worker_samples.end(), std::uint64_t{0});
  report.positive_updates = report.samples;
  report.negative_updates = report.samples * cfg.negatives;
  report.final_lr = schedule_lr(total, cfg);
  return report;
}

TrainResult train(const Hin& hin, const TrainConfig& cfg, const ProgressFn& progress,
                  StepObserver* observer) {
  validate(cfg);
  ModelParameters params(hin.num_vertices(), cfg.dim, cfg.symmetric);
  std::vector<PathTask> tasks;
  tasks.reserve(cfg.meta_paths.size());
  for (const auto& wp : cfg.meta_paths) {
    auto counts = precompute_counts(hin, wp.path);
    PathSampler sampler(hin, std::move(counts), cfg.gamma);
    auto scorer = PathScorer::build(params, wp.path, cfg.mode);
    tasks.push_back(PathTask{std::move(sampler), std::move(scorer), wp.weight});
  }
  Rng init = Rng(cfg.seed).split(0);
  params.randomize(init);
  TrainReport report = run_workers(params, tasks, cfg, progress, observer);
  return TrainResult{std::move(params), std::move(report)};
}

}  // namespace mpembed
