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
#ifndef MPEMBED_META_PATH_HPP
#define MPEMBED_META_PATH_HPP

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mpembed/hin.hpp"

namespace mpembed {

/// A sequence of compatible relations <r_1, ..., r_L>, L >= 1.
///
/// Textual form is a walk over vertex-type labels, `A-P-V-P-A`. A step
/// between two types joined by more than one relation must name its edge
/// type in brackets: `P-[cites]-P`. `render()` produces the canonical form,
/// which brackets exactly the ambiguous steps; it doubles as the key of the
/// path's parameters.
class MetaPath {
 public:
  static MetaPath parse(std::string_view spec, std::shared_ptr<const Schema> schema);
  /// Throws SchemaError unless consecutive relations chain.
  static MetaPath from_relations(std::vector<RelationId> relations,
                                 std::shared_ptr<const Schema> schema);

  std::size_t length() const { return relations_.size(); }
  /// 1-based, as in <r_1, ..., r_L>.
  RelationId relation(std::size_t i) const { return relations_.at(i - 1); }
  std::span<const RelationId> relations() const { return relations_; }
  /// Vertex type expected at 1-based position i in 1..L+1.
  VertexTypeId vertex_type_at(std::size_t i) const;

  /// Contiguous slice <r_s, ..., r_t>, 1 <= s <= t <= L.
  MetaPath sub(std::size_t s, std::size_t t) const;

  const std::string& render() const { return canonical_; }
  const Schema& schema() const { return *schema_; }

  friend bool operator==(const MetaPath& a, const MetaPath& b) {
    return a.relations_ == b.relations_;
  }

 private:
  MetaPath() = default;

  std::vector<RelationId> relations_;
  std::shared_ptr<const Schema> schema_;
  std::string canonical_;
};

inline MetaPath parse_meta_path(std::string_view spec, const Hin& hin) {
  return MetaPath::parse(spec, hin.shared_schema());
}

inline MetaPath sub_meta_path(const MetaPath& m, std::size_t s, std::size_t t) {
  return m.sub(s, t);
}

/// A concrete walk following a meta-path, stored as its L+1 vertices
/// u_1, ..., u_L, v_L; edge i is <u_i, u_{i+1}, r_i>. Negative samples share
/// the shape without the edges having to exist.
struct PathInstance {
  std::vector<VertexId> vertices;

  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
  friend bool operator==(const PathInstance&, const PathInstance&) = default;
};

/// True when every edge of the walk exists in `hin` with the right relation.
bool follows(const Hin& hin, const MetaPath& m, std::span<const VertexId> vertices);

}  // namespace mpembed

#endif  // MPEMBED_META_PATH_HPP
