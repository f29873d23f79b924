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
#include "mpembed/alias.hpp"

#include <cmath>
#include <numeric>

#include "mpembed/error.hpp"

namespace mpembed {

double AliasView::probability(std::uint32_t outcome) const {
  if (entries_.empty()) return 0.0;
  double mass = 0.0;
  for (const auto& col : entries_) {
    if (col.outcome == outcome) mass += col.prob;
    if (entries_[col.alias].outcome == outcome) mass += 1.0 - col.prob;
  }
  return mass / static_cast<double>(entries_.size());
}

std::size_t append_alias_table(std::span<const std::uint32_t> outcomes,
                               std::span<const double> weights, std::vector<AliasEntry>& out) {
  if (outcomes.size() != weights.size()) throw Error("alias table: outcome/weight size mismatch");
  double total = 0.0;
  std::size_t n = 0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw Error("alias table: weights must be finite and >= 0");
    if (w > 0.0) {
      total += w;
      ++n;
    }
  }
  if (n == 0 || !(total > 0.0)) throw Error("alias table: weights must have a positive sum");

  const std::size_t base = out.size();
  out.resize(base + n);
  std::span<AliasEntry> table(out.data() + base, n);

  // Vose: scaled weights, then pair each underfull column with an overfull one.
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small;
  std::vector<std::uint32_t> large;
  small.reserve(n);
  large.reserve(n);
  for (std::size_t j = 0, k = 0; j < weights.size(); ++j) {
    if (weights[j] <= 0.0) continue;
    table[k].outcome = outcomes[j];
    table[k].alias = static_cast<std::uint32_t>(k);
    scaled[k] = weights[j] * static_cast<double>(n) / total;
    (scaled[k] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(k));
    ++k;
  }
  while (!small.empty() && !large.empty()) {
    auto s = small.back();
    small.pop_back();
    auto l = large.back();
    table[s].prob = scaled[s];
    table[s].alias = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (auto l : large) table[l].prob = 1.0;
  for (auto s : small) table[s].prob = 1.0;
  return n;
}

AliasTable::AliasTable(std::span<const double> weights) {
  std::vector<std::uint32_t> ids(weights.size());
  std::iota(ids.begin(), ids.end(), 0U);
  append_alias_table(ids, weights, entries_);
}

AliasTable::AliasTable(std::span<const std::uint32_t> outcomes, std::span<const double> weights) {
  append_alias_table(outcomes, weights, entries_);
}

std::uint32_t AliasTable::sample(Rng& rng) const {
  if (entries_.empty()) throw Error("cannot sample from an empty alias table");
  return view().sample(rng);
}

std::vector<std::uint32_t> AliasTable::support() const {
  std::vector<std::uint32_t> out;
  out.reserve(entries_.size());
  for (const auto& col : entries_) out.push_back(col.outcome);
  return out;
}

}  // namespace mpembed
