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
#include "mpembed/search.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "mpembed/error.hpp"

namespace mpembed {

double cosine(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("cosine: dimension mismatch");
  double xy = 0.0;
  double xx = 0.0;
  double yy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    xy += x[k] * y[k];
    xx += x[k] * x[k];
    yy += y[k] * y[k];
  }
  if (!(xx > 0.0) || !(yy > 0.0)) throw Error("cosine: zero-norm vector");
  return std::clamp(xy / (std::sqrt(xx) * std::sqrt(yy)), -1.0, 1.0);
}

SimilarityIndex::SimilarityIndex(const EmbeddingTable& table,
                                 const std::unordered_map<std::string, std::string>& types)
    : dim_(table.dim) {
  for (std::size_t i = 0; i < table.size(); ++i) {
    auto row = table.row(i);
    double norm = 0.0;
    for (double x : row) norm += x * x;
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      excluded_.push_back(table.names[i]);
      continue;
    }
    index_.emplace(table.names[i], names_.size());
    names_.push_back(table.names[i]);
    auto t = types.find(table.names[i]);
    types_.push_back(t == types.end() ? std::string{} : t->second);
    for (double x : row) unit_.push_back(x / norm);
  }
}

std::optional<std::size_t> SimilarityIndex::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double SimilarityIndex::similarity(std::size_t a, std::size_t b) const {
  const double* x = unit_.data() + a * dim_;
  const double* y = unit_.data() + b * dim_;
  double s = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) s += x[k] * y[k];
  return s;
}

namespace {

struct Candidate {
  double sim;
  std::size_t idx;
};

// Strict "a ranks before b"; as a heap comparator it keeps the worst on top.
struct BetterThan {
  const SimilarityIndex* index;
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.sim != b.sim) return a.sim > b.sim;
    return index->name(a.idx) < index->name(b.idx);
  }
};

std::size_t resolve_query(const SimilarityIndex& index, std::string_view query, std::size_t k) {
  if (k == 0) throw Error("k must be >= 1");
  auto q = index.find(query);
  if (!q) {
    const auto& ex = index.excluded();
    if (std::find(ex.begin(), ex.end(), query) != ex.end())
      throw LookupError("query vertex '" + std::string(query) + "' has a zero embedding");
    throw LookupError("unknown query vertex '" + std::string(query) + "'");
  }
  return *q;
}

void offer(std::vector<Candidate>& heap, std::size_t k, Candidate c, const BetterThan& better) {
  if (heap.size() < k) {
    heap.push_back(c);
    std::push_heap(heap.begin(), heap.end(), better);
  } else if (better(c, heap.front())) {
    std::pop_heap(heap.begin(), heap.end(), better);
    heap.back() = c;
    std::push_heap(heap.begin(), heap.end(), better);
  }
}

std::vector<SearchHit> finish(const SimilarityIndex& index, std::vector<Candidate> heap,
                              const BetterThan& better) {
  std::sort(heap.begin(), heap.end(), better);
  std::vector<SearchHit> out;
  out.reserve(heap.size());
  for (const auto& c : heap) out.push_back(SearchHit{index.name(c.idx), c.sim});
  return out;
}

}  // namespace

std::vector<SearchHit> top_k_serial(const SimilarityIndex& index, std::string_view query,
                                    std::size_t k, const std::optional<std::string>& type_filter) {
  const std::size_t q = resolve_query(index, query, k);
  const BetterThan better{&index};
  std::vector<Candidate> heap;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (i == q || (type_filter && index.type(i) != *type_filter)) continue;
    offer(heap, k, Candidate{index.similarity(q, i), i}, better);
  }
  return finish(index, std::move(heap), better);
}

std::vector<SearchHit> top_k(const SimilarityIndex& index, std::string_view query, std::size_t k,
                             const std::optional<std::string>& type_filter) {
  const std::size_t q = resolve_query(index, query, k);
  const BetterThan better{&index};
  const auto n = static_cast<std::int64_t>(index.size());
  std::vector<std::vector<Candidate>> partial(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel
  {
    auto& heap = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
    for (std::int64_t s = 0; s < n; ++s) {
      const auto i = static_cast<std::size_t>(s);
      if (i == q || (type_filter && index.type(i) != *type_filter)) continue;
      offer(heap, k, Candidate{index.similarity(q, i), i}, better);
    }
  }
  std::vector<Candidate> merged;
  for (auto& part : partial)
    for (const auto& c : part) offer(merged, k, c, better);
  return finish(index, std::move(merged), better);
}

}  // namespace mpembed
