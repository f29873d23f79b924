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
#include "mpembed/sampler.hpp"

#include <cmath>

#include "mpembed/error.hpp"

namespace mpembed {

namespace {

AliasTable powered_table(std::span<const double> counts, double gamma) {
  std::vector<std::uint32_t> ids;
  std::vector<double> weights;
  for (std::size_t u = 0; u < counts.size(); ++u) {
    if (counts[u] > 0.0) {
      ids.push_back(static_cast<std::uint32_t>(u));
      weights.push_back(std::pow(counts[u], gamma));
    }
  }
  return AliasTable(ids, weights);
}

}  // namespace

PathSampler::PathSampler(const Hin& hin, CountTable counts, double gamma)
    : counts_(std::move(counts)), gamma_(gamma) {
  if (!std::isfinite(gamma)) throw Error("gamma must be finite");
  const MetaPath& m = counts_.meta_path();
  const std::size_t L = m.length();
  if (!(counts_.total_instances() > 0.0))
    throw Error("meta-path " + m.render() + " has no instance in the network");

  start_ = powered_table(counts_.column(1), gamma_);
  for (std::size_t i = 2; i <= L + 1; ++i) negative_.push_back(powered_table(counts_.column(i), gamma_));

  const std::size_t n = hin.num_vertices();
  step_offsets_.assign(L, std::vector<std::size_t>(n + 1, 0));
  std::vector<std::uint32_t> ids;
  std::vector<double> weights;
  for (std::size_t i = 1; i <= L; ++i) {
    auto cur = counts_.column(i);
    auto next = counts_.column(i + 1);
    auto& offsets = step_offsets_[i - 1];
    const RelationId r = m.relation(i);
    for (VertexId u = 0; u < n; ++u) {
      offsets[u] = step_entries_.size();
      if (!(cur[u] > 0.0)) continue;
      ids.clear();
      weights.clear();
      for (const auto& nb : hin.neighbors(u, r)) {
        ids.push_back(nb.vertex);
        weights.push_back(nb.weight * next[nb.vertex]);
      }
      append_alias_table(ids, weights, step_entries_);
    }
    offsets[n] = step_entries_.size();
  }
}

const AliasTable& PathSampler::negative_table(std::size_t position) const {
  if (position < 2 || position > negative_.size() + 1)
    throw LookupError("negative position " + std::to_string(position) + " outside 2.." +
                      std::to_string(negative_.size() + 1));
  return negative_[position - 2];
}

AliasView PathSampler::step_table(VertexId u, std::size_t position) const {
  if (position < 1 || position > step_offsets_.size())
    throw LookupError("step position out of range");
  const auto& offsets = step_offsets_[position - 1];
  if (u + 1 >= offsets.size()) throw LookupError("vertex index out of range");
  return AliasView(std::span<const AliasEntry>(step_entries_)
                       .subspan(offsets[u], offsets[u + 1] - offsets[u]));
}

void PathSampler::sample_positive(Rng& rng, std::span<VertexId> out) const {
  const std::size_t L = step_offsets_.size();
  VertexId u = start_.view().sample(rng);
  out[0] = u;
  for (std::size_t i = 1; i <= L; ++i) {
    const auto& offsets = step_offsets_[i - 1];
    AliasView step(std::span<const AliasEntry>(step_entries_)
                       .subspan(offsets[u], offsets[u + 1] - offsets[u]));
    u = step.sample(rng);
    out[i] = u;
  }
}

PathInstance PathSampler::sample_positive(Rng& rng) const {
  PathInstance inst;
  inst.vertices.resize(step_offsets_.size() + 1);
  sample_positive(rng, inst.vertices);
  return inst;
}

void PathSampler::sample_negative(VertexId start, Rng& rng, std::span<VertexId> out) const {
  out[0] = start;
  for (std::size_t i = 0; i < negative_.size(); ++i) out[i + 1] = negative_[i].view().sample(rng);
}

PathInstance PathSampler::sample_negative(VertexId start, Rng& rng) const {
  if (start >= counts_.num_vertices() || !(counts_.column(1)[start] > 0.0))
    throw LookupError("negative sample start vertex has no instance of " +
                      counts_.meta_path().render());
  PathInstance inst;
  inst.vertices.resize(negative_.size() + 1);
  sample_negative(start, rng, inst.vertices);
  return inst;
}

}  // namespace mpembed
