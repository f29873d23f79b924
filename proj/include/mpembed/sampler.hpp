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
#ifndef MPEMBED_SAMPLER_HPP
#define MPEMBED_SAMPLER_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "mpembed/alias.hpp"
#include "mpembed/hin.hpp"
#include "mpembed/meta_path.hpp"
#include "mpembed/rng.hpp"

namespace mpembed {

/// C(u, i | M) for positions i = 1..L+1: the number (weighted sum, with
/// edge weights) of walks following <r_i, ..., r_L> that start at u. Column 1
/// counts whole instances of M by first vertex; column L+1 is 1 for every
/// vertex that ends some r_L edge.
class CountTable {
 public:
  CountTable(MetaPath meta_path, std::size_t num_vertices);

  const MetaPath& meta_path() const { return meta_path_; }
  std::size_t num_vertices() const { return num_vertices_; }
  std::size_t num_positions() const { return meta_path_.length() + 1; }

  /// 1-based position. Throws LookupError when out of range.
  double at(VertexId u, std::size_t position) const;
  std::span<const double> column(std::size_t position) const;
  std::span<double> column(std::size_t position);

  /// Sum of column 1, i.e. the total number of instances.
  double total_instances() const;

  /// TSV `vertex<TAB>position<TAB>count` for every vertex whose type fits
  /// the position, positions ascending, vertices in id order.
  void write_tsv(const Hin& hin, std::ostream& os) const;

 private:
  MetaPath meta_path_;
  std::size_t num_vertices_;
  std::vector<double> values_;  // position-major
};

struct CountStats {
  std::uint64_t edge_visits = 0;
  std::uint64_t vertex_visits = 0;
};

/// Backward dynamic program over positions L+1 .. 1. Each position is one
/// pass over the vertices of the step's source type and their edges, split
/// across OpenMP threads.
CountTable precompute_counts(const Hin& hin, const MetaPath& m, CountStats* stats = nullptr);

/// Single-threaded reference of precompute_counts; same output bit for bit.
CountTable precompute_counts_serial(const Hin& hin, const MetaPath& m,
                                    CountStats* stats = nullptr);

/// Alias tables for positive and negative path sampling under one meta-path.
///
/// The first vertex is drawn with weight C(u,1)^gamma. A step from u at
/// position i picks neighbor v with weight w(u,v) * C(v,i+1), so given the
/// first vertex every instance is equally likely. Negative vertices at
/// positions 2..L+1 are independent draws with weight C(u,i)^gamma.
///
/// Immutable after construction; share freely across threads.
class PathSampler {
 public:
  /// Throws Error when M has no instance.
  PathSampler(const Hin& hin, CountTable counts, double gamma);

  const MetaPath& meta_path() const { return counts_.meta_path(); }
  const CountTable& counts() const { return counts_; }
  double gamma() const { return gamma_; }

  const AliasTable& start_table() const { return start_; }
  /// Position in 2..L+1.
  const AliasTable& negative_table(std::size_t position) const;
  /// Table for leaving `u` at position i in 1..L; empty when C(u,i) = 0.
  AliasView step_table(VertexId u, std::size_t position) const;

  PathInstance sample_positive(Rng& rng) const;
  /// Writes L+1 vertices into `out`.
  void sample_positive(Rng& rng, std::span<VertexId> out) const;

  /// Throws LookupError when C(start,1) = 0.
  PathInstance sample_negative(VertexId start, Rng& rng) const;
  /// Unchecked variant used in the training loop; out[0] = start.
  void sample_negative(VertexId start, Rng& rng, std::span<VertexId> out) const;

  /// Total alias entries held in step tables.
  std::size_t step_entries() const { return step_entries_.size(); }

 private:
  CountTable counts_;
  double gamma_;
  AliasTable start_;
  std::vector<AliasTable> negative_;  // index = position - 2
  // Per position 1..L: offsets_[i-1][u]..[u+1] slice step_entries_.
  std::vector<std::vector<std::size_t>> step_offsets_;
  std::vector<AliasEntry> step_entries_;
};

inline PathSampler build_sampler(const Hin& hin, const CountTable& counts, double gamma) {
  return PathSampler(hin, counts, gamma);
}

}  // namespace mpembed

#endif  // MPEMBED_SAMPLER_HPP
