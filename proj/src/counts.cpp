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
#include <cstdint>
#include <numeric>
#include <ostream>

#include "mpembed/error.hpp"
#include "mpembed/sampler.hpp"

namespace mpembed {

CountTable::CountTable(MetaPath meta_path, std::size_t num_vertices)
    : meta_path_(std::move(meta_path)),
      num_vertices_(num_vertices),
      values_((meta_path_.length() + 1) * num_vertices, 0.0) {}

double CountTable::at(VertexId u, std::size_t position) const {
  if (u >= num_vertices_) throw LookupError("vertex index out of range");
  return column(position)[u];
}

std::span<const double> CountTable::column(std::size_t position) const {
  if (position < 1 || position > num_positions())
    throw LookupError("position " + std::to_string(position) + " outside 1.." +
                      std::to_string(num_positions()));
  return std::span<const double>(values_).subspan((position - 1) * num_vertices_, num_vertices_);
}

std::span<double> CountTable::column(std::size_t position) {
  if (position < 1 || position > num_positions())
    throw LookupError("position " + std::to_string(position) + " outside 1.." +
                      std::to_string(num_positions()));
  return std::span<double>(values_).subspan((position - 1) * num_vertices_, num_vertices_);
}

double CountTable::total_instances() const {
  auto c = column(1);
  return std::accumulate(c.begin(), c.end(), 0.0);
}

void CountTable::write_tsv(const Hin& hin, std::ostream& os) const {
  const auto old_precision = os.precision(17);
  for (std::size_t i = 1; i <= num_positions(); ++i) {
    auto col = column(i);
    for (VertexId u : hin.vertices_of_type(meta_path_.vertex_type_at(i)))
      os << hin.vertex_name(u) << '\t' << i << '\t' << col[u] << '\n';
  }
  os.precision(old_precision);
}

namespace {

// Boundary: a vertex may close an instance iff some r_L edge ends at it.
void fill_boundary(const Hin& hin, const MetaPath& m, std::span<double> last) {
  const RelationId r = m.relation(m.length());
  for (VertexId u : hin.vertices_of_type(m.vertex_type_at(m.length() + 1)))
    last[u] = hin.has_incoming(u, r) ? 1.0 : 0.0;
}

}  // namespace

CountTable precompute_counts_serial(const Hin& hin, const MetaPath& m, CountStats* stats) {
  CountTable table(m, hin.num_vertices());
  const std::size_t L = m.length();
  fill_boundary(hin, m, table.column(L + 1));
  std::uint64_t edges = 0;
  std::uint64_t vertices = 0;
  for (std::size_t i = L; i >= 1; --i) {
    auto next = std::span<const double>(table.column(i + 1));
    auto cur = table.column(i);
    const RelationId r = m.relation(i);
    for (VertexId u : hin.vertices_of_type(m.vertex_type_at(i))) {
      double sum = 0.0;
      for (const auto& nb : hin.neighbors(u, r)) sum += nb.weight * next[nb.vertex];
      cur[u] = sum;
      edges += hin.neighbors(u, r).size();
      ++vertices;
    }
  }
  if (stats) *stats = CountStats{edges, vertices};
  return table;
}

CountTable precompute_counts(const Hin& hin, const MetaPath& m, CountStats* stats) {
  CountTable table(m, hin.num_vertices());
  const std::size_t L = m.length();
  fill_boundary(hin, m, table.column(L + 1));
  std::uint64_t edges = 0;
  std::uint64_t vertices = 0;
  for (std::size_t i = L; i >= 1; --i) {
    const double* next = table.column(i + 1).data();
    double* cur = table.column(i).data();
    const RelationId r = m.relation(i);
    const auto sources = hin.vertices_of_type(m.vertex_type_at(i));
    const auto n = static_cast<std::int64_t>(sources.size());
#pragma omp parallel for schedule(dynamic, 256) reduction(+ : edges, vertices)
    for (std::int64_t k = 0; k < n; ++k) {
      const VertexId u = sources[static_cast<std::size_t>(k)];
      const auto adj = hin.neighbors(u, r);
      double sum = 0.0;
      for (const auto& nb : adj) sum += nb.weight * next[nb.vertex];
      cur[u] = sum;
      edges += adj.size();
      ++vertices;
    }
  }
  if (stats) *stats = CountStats{edges, vertices};
  return table;
}

}  // namespace mpembed
