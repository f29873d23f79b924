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
#ifndef MPEMBED_HIN_HPP
#define MPEMBED_HIN_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mpembed {

using VertexId = std::uint32_t;
using VertexTypeId = std::uint32_t;
using EdgeTypeId = std::uint32_t;

struct EdgeType {
  std::string name;
  VertexTypeId src_type = 0;
  VertexTypeId dst_type = 0;
  bool directed = false;
};

/// A traversal direction of an edge type. Every edge type has a forward
/// relation (src -> dst). An undirected type between two different vertex
/// types also has a reverse relation (dst -> src). An undirected type whose
/// endpoints share a vertex type is its own reverse.
struct RelationId {
  std::uint32_t value = 0;

  static RelationId forward(EdgeTypeId t) { return {2 * t}; }
  static RelationId backward(EdgeTypeId t) { return {2 * t + 1}; }

  EdgeTypeId edge_type() const { return value / 2; }
  bool reversed() const { return (value & 1U) != 0; }

  friend bool operator==(RelationId, RelationId) = default;
  friend auto operator<=>(RelationId, RelationId) = default;
};

/// Vertex and edge types of a network.
///
/// Text form, one declaration per line, fields separated by whitespace:
///
///     vertex A
///     vertex P
///     edge writes A P undirected
///     edge cites P P directed
///
/// Blank lines and lines starting with `#` are ignored.
class Schema {
 public:
  static Schema parse(std::string_view text, std::string_view source = "schema");

  VertexTypeId add_vertex_type(std::string name);
  EdgeTypeId add_edge_type(std::string name, VertexTypeId src, VertexTypeId dst, bool directed);

  std::size_t num_vertex_types() const { return vertex_types_.size(); }
  std::size_t num_edge_types() const { return edge_types_.size(); }

  const std::string& vertex_type_name(VertexTypeId t) const { return vertex_types_.at(t); }
  const EdgeType& edge_type(EdgeTypeId t) const { return edge_types_.at(t); }

  std::optional<VertexTypeId> find_vertex_type(std::string_view name) const;
  std::optional<EdgeTypeId> find_edge_type(std::string_view name) const;

  /// All valid relations, forward before backward, in declaration order.
  std::vector<RelationId> relations() const;
  bool is_valid(RelationId r) const;
  VertexTypeId source_type(RelationId r) const;
  VertexTypeId target_type(RelationId r) const;
  /// Relation walking `r` the other way; empty for directed types.
  std::optional<RelationId> reverse(RelationId r) const;
  /// Relations leading from vertex type `from` to vertex type `to`.
  std::vector<RelationId> relations_between(VertexTypeId from, VertexTypeId to) const;

  std::string to_text() const;

 private:
  std::vector<std::string> vertex_types_;
  std::vector<EdgeType> edge_types_;
  std::unordered_map<std::string, VertexTypeId> vertex_type_index_;
  std::unordered_map<std::string, EdgeTypeId> edge_type_index_;
};

struct Neighbor {
  VertexId vertex = 0;
  double weight = 1.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Heterogeneous information network: typed vertices with one CSR adjacency
/// per relation. Immutable once built and safe for concurrent readers.
class Hin {
 public:
  /// Parses the three text inputs. Vertex-type lines are `vertex_id<TAB>type`,
  /// edge lines are `src<TAB>dst<TAB>edge_type[<TAB>weight]`.
  static Hin load(std::string_view schema_text, std::string_view vertex_text,
                  std::string_view edge_text);

  const Schema& schema() const { return *schema_; }
  std::shared_ptr<const Schema> shared_schema() const { return schema_; }

  std::size_t num_vertices() const { return names_.size(); }
  /// Number of stored (directed) adjacency entries over all relations.
  std::size_t num_adjacency_entries() const;

  const std::string& vertex_name(VertexId v) const { return names_.at(v); }
  VertexTypeId vertex_type(VertexId v) const { return types_.at(v); }
  std::optional<VertexId> find_vertex(std::string_view name) const;
  /// Throws LookupError for unknown names.
  VertexId vertex(std::string_view name) const;
  std::span<const VertexId> vertices_of_type(VertexTypeId t) const;

  /// Adjacency of `u` under `r`, in input order. Throws LookupError for an
  /// unknown vertex or invalid relation.
  std::span<const Neighbor> neighbors(VertexId u, RelationId r) const;
  /// Same as above, resolving a vertex id and an edge-type name. For an
  /// undirected type the direction is picked from `u`'s vertex type.
  std::span<const Neighbor> neighbors(std::string_view u, std::string_view edge_type) const;

  /// True when some edge of relation `r` ends at `v`.
  bool has_incoming(VertexId v, RelationId r) const;

 private:
  friend class HinBuilder;

  struct Adjacency {
    std::vector<std::size_t> offsets;  // num_vertices + 1, empty when unused
    std::vector<Neighbor> entries;
    std::vector<std::uint8_t> incoming;
  };

  std::shared_ptr<const Schema> schema_;
  std::vector<std::string> names_;
  std::vector<VertexTypeId> types_;
  std::unordered_map<std::string, VertexId> index_;
  std::vector<std::vector<VertexId>> by_type_;
  std::vector<Adjacency> adjacency_;  // indexed by RelationId::value
};

/// Incremental construction of an Hin. Adjacency order follows insertion order.
class HinBuilder {
 public:
  explicit HinBuilder(Schema schema);

  const Schema& schema() const { return *schema_; }

  /// Adds a vertex; re-adding with the same type is a no-op, with a
  /// different type a SchemaError.
  VertexId add_vertex(std::string_view name, VertexTypeId type);
  std::optional<VertexId> find_vertex(std::string_view name) const;

  /// Adds one edge. For undirected types the endpoints may be given in either
  /// order and both directions are stored. Throws SchemaError on type mismatch.
  void add_edge(VertexId src, VertexId dst, EdgeTypeId type, double weight = 1.0);

  Hin build() &&;

 private:
  struct PendingEdge {
    VertexId src;
    VertexId dst;
    RelationId relation;
    double weight;
  };

  std::shared_ptr<Schema> schema_;
  std::vector<std::string> names_;
  std::vector<VertexTypeId> types_;
  std::unordered_map<std::string, VertexId> index_;
  std::vector<PendingEdge> edges_;
};

}  // namespace mpembed

#endif  // MPEMBED_HIN_HPP
