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
#ifndef MPEMBED_SEARCH_HPP
#define MPEMBED_SEARCH_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mpembed/embedding_io.hpp"

namespace mpembed {

/// x.y / (|x| |y|). Throws Error on a zero-norm input or size mismatch.
double cosine(std::span<const double> x, std::span<const double> y);

/// Unit-normalized embeddings for exact cosine search. Zero vectors are left
/// out and listed in excluded().
class SimilarityIndex {
 public:
  /// `types` maps vertex id to a type label; vertices missing from it carry
  /// no type and never pass a type filter.
  explicit SimilarityIndex(const EmbeddingTable& table,
                           const std::unordered_map<std::string, std::string>& types = {});

  std::size_t size() const { return names_.size(); }
  std::size_t dim() const { return dim_; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const std::string& type(std::size_t i) const { return types_[i]; }
  std::span<const double> vector(std::size_t i) const { return {unit_.data() + i * dim_, dim_}; }
  std::optional<std::size_t> find(std::string_view name) const;
  const std::vector<std::string>& excluded() const { return excluded_; }

  /// Dot product of two stored unit vectors.
  double similarity(std::size_t a, std::size_t b) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> names_;
  std::vector<std::string> types_;
  std::vector<double> unit_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> excluded_;
};

struct SearchHit {
  std::string vertex;
  double similarity = 0.0;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

/// The min(k, candidates) most similar vertices to `query`, query excluded,
/// optionally restricted to one type. Descending similarity, ties by
/// ascending vertex id. Throws LookupError for an unknown query, Error for k = 0.
/// Candidates are scanned in parallel blocks; each block keeps a bounded heap.
std::vector<SearchHit> top_k(const SimilarityIndex& index, std::string_view query, std::size_t k,
                             const std::optional<std::string>& type_filter = std::nullopt);

/// Single-threaded reference of top_k with one bounded heap.
std::vector<SearchHit> top_k_serial(const SimilarityIndex& index, std::string_view query,
                                    std::size_t k,
                                    const std::optional<std::string>& type_filter = std::nullopt);

}  // namespace mpembed

#endif  // MPEMBED_SEARCH_HPP
