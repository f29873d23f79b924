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
#ifndef MPEMBED_EVAL_HPP
#define MPEMBED_EVAL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mpembed/hin.hpp"
#include "mpembed/search.hpp"

namespace mpembed {

/// Group label per vertex id, in file order.
struct Grouping {
  std::vector<std::pair<std::string, std::string>> labels;

  /// TSV `vertex_id<TAB>group`.
  static Grouping parse(std::string_view text);
  std::string to_text() const;
};

/// Grouping AUC over a dense similarity matrix.
///
/// For each vertex u with at least one same-group peer v != u and one
/// other-group vertex v', the score is the fraction of (v, v') pairs with
/// sim(u,v) > sim(u,v') (ties count 0). The result averages over those u.
/// `sim` is n x n row-major, `groups` has n entries. Throws Error when no
/// vertex qualifies (e.g. a single group).
double auc_from_matrix(std::span<const double> sim, std::span<const std::uint32_t> groups);

/// Same value as auc_from_matrix; rows are handled by OpenMP threads and
/// reduced in row order, so the result does not depend on the thread count.
double auc_from_matrix_parallel(std::span<const double> sim,
                                std::span<const std::uint32_t> groups);

/// AUC of cosine similarity over the labeled vertices of `index`. Throws
/// LookupError for a labeled vertex missing from the index.
double auc(const SimilarityIndex& index, const Grouping& labels);
double auc_serial(const SimilarityIndex& index, const Grouping& labels);

/// Planted-community bibliographic network (authors A, papers P, venues V).
struct SyntheticSpec {
  std::size_t communities = 2;
  std::size_t authors_per_community = 50;
  std::size_t venues_per_community = 5;
  std::size_t papers_per_author = 4;
  /// Probability that a paper's venue ignores the author's community.
  double noise = 0.05;
  std::uint64_t seed = 1;
};

/// Files describing a generated network, plus the loaded network itself.
struct PlantedDataset {
  std::string schema_text;
  std::string vertex_text;
  std::string edge_text;
  Grouping grouping;
  Hin hin;
};

/// Each author writes `papers_per_author` single-author papers. A paper
/// goes to a uniform venue of the author's community with probability
/// 1 - noise; otherwise to a uniform venue of a uniformly chosen community
/// (any community, so noise = 1 removes the signal). Authors are labeled by
/// community. Same spec, same bytes.
PlantedDataset generate_planted_hin(const SyntheticSpec& spec);

}  // namespace mpembed

#endif  // MPEMBED_EVAL_HPP
