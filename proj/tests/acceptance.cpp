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
// Acceptance suite. Usage: acceptance [id...], ids 1..9, 10a, 10b, or
// 10 for both scaling checks; no ids runs everything. Prints one
// PASS/FAIL line per criterion and exits nonzero if any failed.
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mpembed/eval.hpp"
#include "mpembed/model.hpp"
#include "mpembed/sampler.hpp"
#include "mpembed/search.hpp"
#include "mpembed/trainer.hpp"
#include "oracles.hpp"

namespace mpembed {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// ---------------------------------------------------------------- 1

Outcome counts_match_enumeration() {
  const auto t0 = Clock::now();
  Rng rng(2026);
  std::size_t cells = 0;
  std::size_t mismatches = 0;
  for (int g = 0; g < 100; ++g) {
    auto net = oracle::random_network(rng, 30, 4);
    auto hin = net.load();
    auto m = MetaPath::from_relations(oracle::random_relations(hin.schema(), rng, 4),
                                      hin.shared_schema());
    auto expected = oracle::enumerate_counts(net, hin.schema(), m.relations());
    auto got = precompute_counts(hin, m);
    for (std::size_t i = 1; i <= m.length() + 1; ++i) {
      for (VertexId u = 0; u < hin.num_vertices(); ++u) {
        auto it = expected[i - 1].find(hin.vertex_name(u));
        const double want = it == expected[i - 1].end() ? 0.0 : it->second;
        ++cells;
        if (got.at(u, i) != want) ++mismatches;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 10.0,
          std::to_string(cells) + " cells, " + std::to_string(mismatches) + " mismatches, " +
              fmt("%.2f s (limit 10 s)", secs)};
}

// ---------------------------------------------------------------- 2

Outcome positive_distribution() {
  const auto t0 = Clock::now();
  auto hin = oracle::toy_hin();
  auto m = parse_meta_path("A-P-A", hin);
  auto counts = precompute_counts(hin, m);

  std::vector<std::vector<std::pair<std::string, std::string>>> steps;
  for (auto r : m.relations()) {
    // The toy network as a RandomNetwork-shaped raw edge list.
    oracle::RandomNetwork raw;
    raw.edges = {{"a1", "p1", "writes"}, {"a2", "p1", "writes"}, {"a2", "p2", "writes"},
                 {"p1", "v1", "published_in"}, {"p2", "v1", "published_in"}};
    steps.push_back(oracle::raw_steps(raw, hin.schema(), r));
  }
  auto instances = oracle::enumerate_walks(steps, {"a1", "a2"});
  std::map<std::string, double> per_start;
  for (const auto& w : instances) per_start[w.front()] += 1.0;

  std::string detail;
  bool pass = instances.size() == 5;
  for (double gamma : {1.0, 0.75}) {
    std::map<std::vector<std::string>, double> expected;
    for (const auto& w : instances) expected[w] = std::pow(per_start[w.front()], gamma - 1.0);
    expected = oracle::normalized(expected);

    PathSampler sampler(hin, counts, gamma);
    Rng rng(gamma == 1.0 ? 11 : 12);
    std::map<std::vector<std::string>, double> freq;
    const int n = 100000;
    for (int k = 0; k < n; ++k) {
      auto inst = sampler.sample_positive(rng);
      std::vector<std::string> key;
      for (auto v : inst.vertices) key.push_back(hin.vertex_name(v));
      freq[key] += 1.0 / n;
    }
    const double tv = oracle::total_variation(freq, expected);
    pass = pass && tv <= 0.02;
    detail += fmt("gamma=%.2f ", gamma) + fmt("TV=%.4f; ", tv);
  }
  const double secs = seconds_since(t0);
  pass = pass && secs < 5.0;
  return {pass, detail + "limit 0.02, " + fmt("%.2f s (limit 5 s)", secs)};
}

// ---------------------------------------------------------------- 3

Outcome negative_marginals() {
  auto hin = oracle::toy_hin();
  const double gamma = 0.75;
  bool pass = true;
  double worst = 0.0;
  std::size_t checked = 0;
  for (const char* spec : {"A-P-A", "A-P-V-P-A"}) {
    auto m = parse_meta_path(spec, hin);
    auto counts = precompute_counts(hin, m);
    PathSampler sampler(hin, counts, gamma);
    for (const char* start : {"a1", "a2"}) {
      Rng rng(31 + checked);
      const std::size_t L = m.length();
      std::vector<std::map<VertexId, double>> freq(L + 2);
      const int n = 100000;
      std::vector<VertexId> walk(L + 1);
      for (int k = 0; k < n; ++k) {
        sampler.sample_negative(hin.vertex(start), rng, walk);
        if (walk[0] != hin.vertex(start)) pass = false;
        for (std::size_t i = 2; i <= L + 1; ++i) freq[i][walk[i - 1]] += 1.0 / n;
      }
      for (std::size_t i = 2; i <= L + 1; ++i) {
        std::map<VertexId, double> expected;
        for (VertexId u = 0; u < hin.num_vertices(); ++u)
          if (counts.at(u, i) > 0.0) expected[u] = std::pow(counts.at(u, i), gamma);
        const double tv = oracle::total_variation(freq[i], oracle::normalized(expected));
        worst = std::max(worst, tv);
        ++checked;
      }
    }
  }
  pass = pass && worst <= 0.02;
  return {pass, std::to_string(checked) + " position marginals, worst " +
                    fmt("TV=%.4f (limit 0.02)", worst)};
}

// ---------------------------------------------------------------- 4

Outcome gradients_match_differences() {
  const auto t0 = Clock::now();
  Rng rng(44);
  double worst = 0.0;
  int configs = 0;
  for (auto mode : {LossMode::kSequential, LossMode::kPairwise}) {
    for (int trial = 0; trial < 100; ++trial) {
      auto net = oracle::random_network(rng, 12, 3);
      auto hin = net.load();
      auto m = MetaPath::from_relations(oracle::random_relations(hin.schema(), rng, 4),
                                        hin.shared_schema());
      ModelParameters params(hin.num_vertices(), 1 + rng.below(8), rng.below(4) == 0);
      auto scorer = PathScorer::build(params, m, mode);
      params.randomize(rng, -0.5, 0.5);
      std::vector<VertexId> walk(m.length() + 1);
      for (auto& x : walk) x = static_cast<VertexId>(rng.below(hin.num_vertices()));
      const bool positive = rng.below(2) == 0;
      GradientSet grads;
      loss_and_gradients(params, scorer, walk, positive ? Label::kPositive : Label::kNegative,
                         grads);
      worst = std::max(worst, oracle::max_gradient_error(params, m, mode, walk, positive, grads));
      ++configs;
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-4 && secs < 30.0,
          std::to_string(configs) + " configurations, worst relative error " +
              fmt("%.2e (limit 1e-4), ", worst) + fmt("%.2f s (limit 30 s)", secs)};
}

// ---------------------------------------------------------------- 5

Outcome rewrite_identity() {
  Rng rng(55);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t d = 1 + rng.below(64);
    ModelParameters params(2, d);
    KeyId k = params.register_key("A-P");
    params.randomize(rng);
    const double f = score(params, 0, 1, k);
    double pq = 0.0;
    double rest = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      pq += params.p(k)[i] * params.q(k)[i];
      rest += (params.embedding(0)[i] + params.q(k)[i]) * (params.embedding(1)[i] + params.p(k)[i]);
    }
    const double g = (params.mu(k) - pq) + rest;
    // Relative to the magnitude of the summands; f itself can cancel to ~0.
    const double scale = std::max({std::abs(f), std::abs(params.mu(k)) + std::abs(pq) + std::abs(rest)});
    worst = std::max(worst, std::abs(f - g) / scale);
  }
  return {worst <= 1e-10, "10000 draws, worst relative gap " + fmt("%.2e (limit 1e-10)", worst)};
}

// ---------------------------------------------------------------- 6, 7, 10

struct PlantedRun {
  double auc = 0.0;
  double seconds = 0.0;
  double train_seconds = 0.0;
};

PlantedRun planted_run(double noise, LossMode mode, std::uint64_t seed, std::uint64_t samples,
                       std::size_t threads) {
  const auto t0 = Clock::now();
  SyntheticSpec spec;
  spec.communities = 2;
  spec.authors_per_community = 50;
  spec.venues_per_community = 5;
  spec.papers_per_author = 4;
  spec.noise = noise;
  spec.seed = 2026;
  auto data = generate_planted_hin(spec);
  TrainConfig cfg;
  cfg.meta_paths.push_back({parse_meta_path("A-P-V-P-A", data.hin), 1.0});
  cfg.mode = mode;
  cfg.dim = 16;
  cfg.negatives = 5;
  cfg.gamma = 0.75;
  // 0.25 overflows on this graph within 60k samples of a 1M budget.
  cfg.lr_init = 0.025;
  cfg.total_samples = samples;
  cfg.threads = threads;
  cfg.seed = seed;
  auto result = train(data.hin, cfg);
  PlantedRun run;
  run.train_seconds = result.report.wall_seconds;
  run.auc = auc(SimilarityIndex(embeddings_of(data.hin, result.params)), data.grouping);
  run.seconds = seconds_since(t0);
  return run;
}

Outcome planted_structure() {
  auto signal = planted_run(0.05, LossMode::kPairwise, 1, 200000, 1);
  auto null = planted_run(1.0, LossMode::kPairwise, 1, 200000, 1);
  const bool pass = signal.auc >= 0.90 && null.auc >= 0.40 && null.auc <= 0.60 &&
                    signal.seconds < 120.0 && null.seconds < 120.0;
  return {pass, fmt("noise 0.05: AUC=%.4f (>= 0.90, ", signal.auc) +
                    fmt("%.1f s); ", signal.seconds) +
                    fmt("noise 1.0: AUC=%.4f (in [0.40, 0.60], ", null.auc) +
                    fmt("%.1f s)", null.seconds)};
}

Outcome mode_ordering() {
  bool pass = true;
  std::string detail;
  for (std::uint64_t seed : {1, 2, 3}) {
    const double pair = planted_run(0.05, LossMode::kPairwise, seed, 200000, 1).auc;
    const double seq = planted_run(0.05, LossMode::kSequential, seed, 200000, 1).auc;
    pass = pass && pair >= seq - 0.02;
    detail += "seed " + std::to_string(seed) + fmt(": pair=%.4f", pair) + fmt(" seq=%.4f; ", seq);
  }
  return {pass, detail + "need pair >= seq - 0.02"};
}

double median_train_seconds(std::uint64_t samples, std::size_t threads, int reps) {
  std::vector<double> t;
  for (int r = 0; r < reps; ++r)
    t.push_back(planted_run(0.05, LossMode::kPairwise, 1, samples, threads).train_seconds);
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

Outcome linear_time() {
  const double one = median_train_seconds(250000, 1, 3);
  const double two = median_train_seconds(500000, 1, 3);
  const double ratio = two / one;
  return {ratio >= 1.5 && ratio <= 2.5,
          fmt("250k: %.3f s, ", one) + fmt("500k: %.3f s, ", two) +
              fmt("ratio %.3f (need 2 +- 25%%)", ratio)};
}

Outcome worker_speedup() {
  const double one = median_train_seconds(1000000, 1, 1);
  const double four = median_train_seconds(1000000, 4, 1);
  const double speedup = one / four;
  return {speedup >= 2.0,
          fmt("1 worker: %.2f s, ", one) + fmt("4 workers: %.2f s, ", four) +
              fmt("speedup %.2fx (need >= 2.0x; ", speedup) +
              "4 workers <= 0.6x time means >= 1.67x); " +
              std::to_string(omp_get_num_procs()) + " processor(s) available"};
}

// ---------------------------------------------------------------- 8

Outcome topk_exactness() {
  Rng rng(88);
  std::size_t queries = 0;
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(199);
    auto table = oracle::random_table(rng, n, 1 + rng.below(32));
    SimilarityIndex index(table);
    for (std::size_t q = 0; q < n; q += 1 + n / 10) {
      const auto& query = table.names[q];
      auto expected = oracle::brute_force_rank(table, query, {}, nullptr);
      for (std::size_t k : {std::size_t{1}, std::size_t{5}, n}) {
        auto got = top_k(index, query, k);
        ++queries;
        bool same = got.size() == std::min(k, expected.size());
        for (std::size_t i = 0; same && i < got.size(); ++i)
          same = got[i].vertex == expected[i].vertex && got[i].similarity == expected[i].similarity;
        if (!same) ++mismatches;
      }
    }
  }
  return {mismatches == 0,
          std::to_string(queries) + " queries over 50 indices, " + std::to_string(mismatches) +
              " mismatches"};
}

// ---------------------------------------------------------------- 9

Outcome auc_oracle() {
  Rng rng(99);
  double worst = 0.0;
  int sets = 0;
  while (sets < 20) {
    const std::size_t n = 3 + rng.below(18);
    auto l = oracle::random_labeled(rng, n, 2 + rng.below(2), sets % 2 == 0);
    const double expected = oracle::auc_triple_loop(l.nested, l.groups);
    if (std::isnan(expected)) continue;
    ++sets;
    worst = std::max(worst, std::abs(auc_from_matrix_parallel(l.flat, l.groups) - expected));
  }
  std::vector<std::uint32_t> g{0, 0, 0, 1, 1, 1, 1};
  std::vector<double> separated(49), constant(49, 0.25);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j) separated[i * 7 + j] = g[i] == g[j] ? 0.8 : 0.1;
  const double perfect = auc_from_matrix_parallel(separated, g);
  const double flat = auc_from_matrix_parallel(constant, g);
  return {worst <= 1e-12 && perfect == 1.0 && flat == 0.0,
          "20 sets, worst gap " + fmt("%.1e (limit 1e-12); ", worst) +
              fmt("separated=%.4f, ", perfect) + fmt("constant=%.4f", flat)};
}

struct Criterion {
  std::string id;
  std::string name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace mpembed

int main(int argc, char** argv) {
  using namespace mpembed;
  const std::vector<Criterion> all{
      {"1", "path-count oracle", counts_match_enumeration},
      {"2", "positive sampler distribution", positive_distribution},
      {"3", "negative sampler marginals", negative_marginals},
      {"4", "gradient vs finite differences", gradients_match_differences},
      {"5", "score rewrite identity", rewrite_identity},
      {"6", "planted structure end to end", planted_structure},
      {"7", "pair vs seq mode ordering", mode_ordering},
      {"8", "top-k exactness", topk_exactness},
      {"9", "AUC oracle", auc_oracle},
      {"10a", "training time linear in samples", linear_time},
      {"10b", "4-worker speedup", worker_speedup},
  };
  std::set<std::string> wanted;
  for (int i = 1; i < argc; ++i) {
    std::string id = argv[i];
    if (id == "10") {
      wanted.insert("10a");
      wanted.insert("10b");
    } else {
      wanted.insert(id);
    }
  }
  for (const auto& id : wanted) {
    if (std::none_of(all.begin(), all.end(), [&](const Criterion& c) { return c.id == id; })) {
      std::fprintf(stderr, "unknown criterion '%s'\n", id.c_str());
      return 2;
    }
  }

  int failed = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s criterion %-3s %-32s %s\n", o.pass ? "PASS" : "FAIL", c.id.c_str(),
                c.name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
