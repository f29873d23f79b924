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
#ifndef MPEMBED_EMBEDDING_IO_HPP
#define MPEMBED_EMBEDDING_IO_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mpembed/hin.hpp"
#include "mpembed/model.hpp"

namespace mpembed {

/// Named dense vectors, row-major.
struct EmbeddingTable {
  std::vector<std::string> names;
  std::size_t dim = 0;
  std::vector<double> values;

  std::size_t size() const { return names.size(); }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }
  std::span<double> row(std::size_t i) { return {values.data() + i * dim, dim}; }
};

EmbeddingTable embeddings_of(const Hin& hin, const ModelParameters& params);

/// Text format: first line `N d`, then N lines `vertex_id f_1 ... f_d`
/// separated by single spaces. Values are written with 17 significant
/// digits so a reload is exact.
void write_embeddings(const EmbeddingTable& table, std::ostream& os);
EmbeddingTable read_embeddings(std::string_view text);

/// Sidecar with the sub-meta-path parameters, one line per key:
/// `key<TAB>mu<TAB>p_1 ... p_d<TAB>q_1 ... q_d`.
void write_bias(const ModelParameters& params, std::ostream& os);

}  // namespace mpembed

#endif  // MPEMBED_EMBEDDING_IO_HPP
