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
#include "mpembed/embedding_io.hpp"

#include <cmath>
#include <ostream>
#include <unordered_set>

#include "mpembed/error.hpp"
#include "text.hpp"

namespace mpembed {

EmbeddingTable embeddings_of(const Hin& hin, const ModelParameters& params) {
  EmbeddingTable table;
  table.dim = params.dim();
  table.names.reserve(hin.num_vertices());
  for (VertexId v = 0; v < hin.num_vertices(); ++v) table.names.push_back(hin.vertex_name(v));
  auto raw = params.raw_embeddings();
  table.values.assign(raw.begin(), raw.end());
  return table;
}

void write_embeddings(const EmbeddingTable& table, std::ostream& os) {
  const auto old = os.precision(17);
  os << table.size() << ' ' << table.dim << '\n';
  for (std::size_t i = 0; i < table.size(); ++i) {
    os << table.names[i];
    for (double x : table.row(i)) os << ' ' << x;
    os << '\n';
  }
  os.precision(old);
}

EmbeddingTable read_embeddings(std::string_view text) {
  EmbeddingTable table;
  bool header = true;
  std::size_t expected = 0;
  std::unordered_set<std::string> seen;
  text::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    auto fields = text::split_ws(line);
    if (header) {
      if (fields.size() != 2) throw ParseError("embeddings", line_no, "expected header `N d`");
      auto n = text::parse_int<std::size_t>(fields[0]);
      auto d = text::parse_int<std::size_t>(fields[1]);
      if (!n || !d || *d == 0) throw ParseError("embeddings", line_no, "bad header `N d`");
      expected = *n;
      table.dim = *d;
      table.names.reserve(expected);
      table.values.reserve(expected * table.dim);
      header = false;
      return;
    }
    if (fields.size() != table.dim + 1)
      throw ParseError("embeddings", line_no,
                       "expected a vertex id and " + std::to_string(table.dim) + " values");
    std::string name(fields[0]);
    if (!seen.insert(name).second)
      throw ParseError("embeddings", line_no, "duplicate vertex '" + name + "'");
    for (std::size_t k = 1; k < fields.size(); ++k) {
      auto v = text::parse_double(fields[k]);
      if (!v || !std::isfinite(*v))
        throw ParseError("embeddings", line_no, "bad value '" + std::string(fields[k]) + "'");
      table.values.push_back(*v);
    }
    table.names.push_back(std::move(name));
  });
  if (header) throw ParseError("embeddings", 0, "empty embedding file");
  if (table.names.size() != expected)
    throw ParseError("embeddings", 0,
                     "header announces " + std::to_string(expected) + " vectors, found " +
                         std::to_string(table.names.size()));
  return table;
}

void write_bias(const ModelParameters& params, std::ostream& os) {
  const auto old = os.precision(17);
  for (KeyId k = 0; k < params.num_keys(); ++k) {
    os << params.key_name(k) << '\t' << params.mu(k) << '\t';
    const char* sep = "";
    for (double x : params.p(k)) {
      os << sep << x;
      sep = " ";
    }
    os << '\t';
    sep = "";
    for (double x : params.q(k)) {
      os << sep << x;
      sep = " ";
    }
    os << '\n';
  }
  os.precision(old);
}

}  // namespace mpembed
