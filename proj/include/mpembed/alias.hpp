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
#ifndef MPEMBED_ALIAS_HPP
#define MPEMBED_ALIAS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mpembed/rng.hpp"

namespace mpembed {

/// One column of a Walker alias table.
struct AliasEntry {
  double prob = 1.0;         // chance of keeping this column's own outcome
  std::uint32_t alias = 0;   // column index to fall back to
  std::uint32_t outcome = 0; // id returned for this column
};

/// Non-owning view of an alias table; sampling is O(1).
class AliasView {
 public:
  AliasView() = default;
  explicit AliasView(std::span<const AliasEntry> entries) : entries_(entries) {}

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::span<const AliasEntry> entries() const { return entries_; }

  /// Precondition: !empty().
  std::uint32_t sample(Rng& rng) const {
    const auto& col = entries_[rng.below(entries_.size())];
    return rng.uniform() < col.prob ? col.outcome : entries_[col.alias].outcome;
  }

  /// Probability of drawing `outcome`, recovered from the table itself.
  double probability(std::uint32_t outcome) const;

 private:
  std::span<const AliasEntry> entries_;
};

/// Appends the table for (outcomes[j], weights[j]) to `out`. Zero weights
/// are dropped from the support. Returns the number of entries appended.
/// Throws Error on negative or non-finite weights, or when nothing is left.
std::size_t append_alias_table(std::span<const std::uint32_t> outcomes,
                               std::span<const double> weights, std::vector<AliasEntry>& out);

/// Owning alias table.
class AliasTable {
 public:
  AliasTable() = default;
  /// Outcomes are 0..weights.size()-1.
  explicit AliasTable(std::span<const double> weights);
  AliasTable(std::span<const std::uint32_t> outcomes, std::span<const double> weights);

  AliasView view() const { return AliasView(entries_); }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  /// Throws Error when empty.
  std::uint32_t sample(Rng& rng) const;
  /// Outcome ids with positive weight, in construction order.
  std::vector<std::uint32_t> support() const;
  double probability(std::uint32_t outcome) const { return view().probability(outcome); }

 private:
  std::vector<AliasEntry> entries_;
};

}  // namespace mpembed

#endif  // MPEMBED_ALIAS_HPP
