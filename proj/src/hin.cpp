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
#include "mpembed/hin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mpembed/error.hpp"
#include "text.hpp"

namespace mpembed {

// ---------------------------------------------------------------- Schema

Schema Schema::parse(std::string_view text, std::string_view source) {
  Schema schema;
  const std::string src(source);
  text::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    auto fields = text::split_ws(line);
    if (fields[0] == "vertex") {
      if (fields.size() != 2) throw ParseError(src, line_no, "expected `vertex <name>`");
      if (schema.find_vertex_type(fields[1]))
        throw ParseError(src, line_no, "duplicate vertex type '" + std::string(fields[1]) + "'");
      schema.add_vertex_type(std::string(fields[1]));
    } else if (fields[0] == "edge") {
      if (fields.size() != 5)
        throw ParseError(src, line_no,
                         "expected `edge <name> <src_type> <dst_type> directed|undirected`");
      auto s = schema.find_vertex_type(fields[2]);
      auto d = schema.find_vertex_type(fields[3]);
      if (!s) throw ParseError(src, line_no, "unknown vertex type '" + std::string(fields[2]) + "'");
      if (!d) throw ParseError(src, line_no, "unknown vertex type '" + std::string(fields[3]) + "'");
      bool directed = false;
      if (fields[4] == "directed") {
        directed = true;
      } else if (fields[4] != "undirected") {
        throw ParseError(src, line_no, "edge direction must be `directed` or `undirected`");
      }
      if (schema.find_edge_type(fields[1]))
        throw ParseError(src, line_no, "duplicate edge type '" + std::string(fields[1]) + "'");
      schema.add_edge_type(std::string(fields[1]), *s, *d, directed);
    } else {
      throw ParseError(src, line_no, "unknown declaration '" + std::string(fields[0]) + "'");
    }
  });
  return schema;
}

VertexTypeId Schema::add_vertex_type(std::string name) {
  if (find_vertex_type(name)) throw SchemaError("duplicate vertex type '" + name + "'");
  auto id = static_cast<VertexTypeId>(vertex_types_.size());
  vertex_type_index_.emplace(name, id);
  vertex_types_.push_back(std::move(name));
  return id;
}

EdgeTypeId Schema::add_edge_type(std::string name, VertexTypeId src, VertexTypeId dst,
                                 bool directed) {
  if (find_edge_type(name)) throw SchemaError("duplicate edge type '" + name + "'");
  if (src >= vertex_types_.size() || dst >= vertex_types_.size())
    throw SchemaError("edge type '" + name + "' references an unknown vertex type");
  auto id = static_cast<EdgeTypeId>(edge_types_.size());
  edge_type_index_.emplace(name, id);
  edge_types_.push_back(EdgeType{std::move(name), src, dst, directed});
  return id;
}

std::optional<VertexTypeId> Schema::find_vertex_type(std::string_view name) const {
  auto it = vertex_type_index_.find(std::string(name));
  if (it == vertex_type_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeTypeId> Schema::find_edge_type(std::string_view name) const {
  auto it = edge_type_index_.find(std::string(name));
  if (it == edge_type_index_.end()) return std::nullopt;
  return it->second;
}

bool Schema::is_valid(RelationId r) const {
  if (r.edge_type() >= edge_types_.size()) return false;
  if (!r.reversed()) return true;
  const auto& et = edge_types_[r.edge_type()];
  return !et.directed && et.src_type != et.dst_type;
}

std::vector<RelationId> Schema::relations() const {
  std::vector<RelationId> out;
  for (EdgeTypeId t = 0; t < edge_types_.size(); ++t) {
    out.push_back(RelationId::forward(t));
    if (is_valid(RelationId::backward(t))) out.push_back(RelationId::backward(t));
  }
  return out;
}

VertexTypeId Schema::source_type(RelationId r) const {
  const auto& et = edge_types_.at(r.edge_type());
  return r.reversed() ? et.dst_type : et.src_type;
}

VertexTypeId Schema::target_type(RelationId r) const {
  const auto& et = edge_types_.at(r.edge_type());
  return r.reversed() ? et.src_type : et.dst_type;
}

std::optional<RelationId> Schema::reverse(RelationId r) const {
  const auto& et = edge_types_.at(r.edge_type());
  if (et.directed) return std::nullopt;
  if (et.src_type == et.dst_type) return r;
  return r.reversed() ? RelationId::forward(r.edge_type()) : RelationId::backward(r.edge_type());
}

std::vector<RelationId> Schema::relations_between(VertexTypeId from, VertexTypeId to) const {
  std::vector<RelationId> out;
  for (auto r : relations())
    if (source_type(r) == from && target_type(r) == to) out.push_back(r);
  return out;
}

std::string Schema::to_text() const {
  std::ostringstream os;
  for (const auto& name : vertex_types_) os << "vertex " << name << '\n';
  for (const auto& et : edge_types_) {
    os << "edge " << et.name << ' ' << vertex_types_[et.src_type] << ' '
       << vertex_types_[et.dst_type] << ' ' << (et.directed ? "directed" : "undirected") << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------- Hin

Hin Hin::load(std::string_view schema_text, std::string_view vertex_text,
              std::string_view edge_text) {
  HinBuilder builder(Schema::parse(schema_text));
  const Schema& schema = builder.schema();

  text::for_each_line(vertex_text, [&](std::size_t line_no, std::string_view line) {
    auto fields = text::split(line, '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
      throw ParseError("vertex-types", line_no, "expected `vertex_id<TAB>type`");
    auto type = schema.find_vertex_type(fields[1]);
    if (!type)
      throw SchemaError("vertex-types:" + std::to_string(line_no) + ": unknown vertex type '" +
                        std::string(fields[1]) + "'");
    try {
      builder.add_vertex(fields[0], *type);
    } catch (const SchemaError& e) {
      throw SchemaError("vertex-types:" + std::to_string(line_no) + ": " + e.what());
    }
  });

  text::for_each_line(edge_text, [&](std::size_t line_no, std::string_view line) {
    auto fields = text::split(line, '\t');
    if (fields.size() != 3 && fields.size() != 4)
      throw ParseError("edges", line_no, "expected `src<TAB>dst<TAB>edge_type[<TAB>weight]`");
    const std::string where = "edges:" + std::to_string(line_no) + ": ";
    auto et = schema.find_edge_type(fields[2]);
    if (!et) throw SchemaError(where + "unknown edge type '" + std::string(fields[2]) + "'");
    auto src = builder.find_vertex(fields[0]);
    auto dst = builder.find_vertex(fields[1]);
    if (!src) throw SchemaError(where + "undeclared vertex '" + std::string(fields[0]) + "'");
    if (!dst) throw SchemaError(where + "undeclared vertex '" + std::string(fields[1]) + "'");
    double weight = 1.0;
    if (fields.size() == 4) {
      auto w = text::parse_double(fields[3]);
      if (!w || !std::isfinite(*w) || *w < 0.0)
        throw ParseError("edges", line_no, "weight must be a non-negative number");
      weight = *w;
    }
    try {
      builder.add_edge(*src, *dst, *et, weight);
    } catch (const SchemaError& e) {
      throw SchemaError(where + e.what());
    }
  });

  return std::move(builder).build();
}

std::size_t Hin::num_adjacency_entries() const {
  std::size_t n = 0;
  for (const auto& adj : adjacency_) n += adj.entries.size();
  return n;
}

std::optional<VertexId> Hin::find_vertex(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VertexId Hin::vertex(std::string_view name) const {
  auto v = find_vertex(name);
  if (!v) throw LookupError("unknown vertex '" + std::string(name) + "'");
  return *v;
}

std::span<const VertexId> Hin::vertices_of_type(VertexTypeId t) const {
  if (t >= by_type_.size()) return {};
  return by_type_[t];
}

std::span<const Neighbor> Hin::neighbors(VertexId u, RelationId r) const {
  if (u >= names_.size()) throw LookupError("unknown vertex index " + std::to_string(u));
  if (!schema_->is_valid(r)) throw LookupError("invalid relation " + std::to_string(r.value));
  const auto& adj = adjacency_[r.value];
  if (adj.offsets.empty()) return {};
  return std::span<const Neighbor>(adj.entries).subspan(adj.offsets[u],
                                                        adj.offsets[u + 1] - adj.offsets[u]);
}

std::span<const Neighbor> Hin::neighbors(std::string_view u, std::string_view edge_type) const {
  VertexId v = vertex(u);
  auto et = schema_->find_edge_type(edge_type);
  if (!et) throw LookupError("unknown edge type '" + std::string(edge_type) + "'");
  auto r = RelationId::forward(*et);
  if (schema_->source_type(r) != types_[v]) {
    auto back = RelationId::backward(*et);
    if (!schema_->is_valid(back) || schema_->source_type(back) != types_[v]) return {};
    r = back;
  }
  return neighbors(v, r);
}

bool Hin::has_incoming(VertexId v, RelationId r) const {
  if (!schema_->is_valid(r)) return false;
  const auto& adj = adjacency_[r.value];
  return !adj.incoming.empty() && adj.incoming.at(v) != 0;
}

// ---------------------------------------------------------------- HinBuilder

HinBuilder::HinBuilder(Schema schema) : schema_(std::make_shared<Schema>(std::move(schema))) {}

VertexId HinBuilder::add_vertex(std::string_view name, VertexTypeId type) {
  if (type >= schema_->num_vertex_types())
    throw SchemaError("unknown vertex type id " + std::to_string(type));
  std::string key(name);
  if (auto it = index_.find(key); it != index_.end()) {
    if (types_[it->second] != type)
      throw SchemaError("vertex '" + key + "' declared with two types");
    return it->second;
  }
  auto id = static_cast<VertexId>(names_.size());
  index_.emplace(key, id);
  names_.push_back(std::move(key));
  types_.push_back(type);
  return id;
}

std::optional<VertexId> HinBuilder::find_vertex(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void HinBuilder::add_edge(VertexId src, VertexId dst, EdgeTypeId type, double weight) {
  const EdgeType& et = schema_->edge_type(type);
  VertexTypeId ts = types_.at(src);
  VertexTypeId td = types_.at(dst);
  if (!(weight >= 0.0) || !std::isfinite(weight))
    throw SchemaError("edge weight must be finite and non-negative");
  bool forward_ok = ts == et.src_type && td == et.dst_type;
  bool swapped_ok = !et.directed && ts == et.dst_type && td == et.src_type;
  if (!forward_ok && !swapped_ok) {
    throw SchemaError("edge type '" + et.name + "' connects " +
                      schema_->vertex_type_name(et.src_type) + " to " +
                      schema_->vertex_type_name(et.dst_type) + ", got " + names_[src] + " (" +
                      schema_->vertex_type_name(ts) + ") and " + names_[dst] + " (" +
                      schema_->vertex_type_name(td) + ")");
  }
  if (!forward_ok) std::swap(src, dst);

  auto fwd = RelationId::forward(type);
  edges_.push_back({src, dst, fwd, weight});
  if (!et.directed) {
    // Same-type undirected relations are their own reverse.
    auto back = et.src_type == et.dst_type ? fwd : RelationId::backward(type);
    edges_.push_back({dst, src, back, weight});
  }
}

Hin HinBuilder::build() && {
  Hin hin;
  const std::size_t n = names_.size();
  hin.schema_ = schema_;
  hin.names_ = std::move(names_);
  hin.types_ = std::move(types_);
  hin.index_ = std::move(index_);
  hin.by_type_.assign(schema_->num_vertex_types(), {});
  for (VertexId v = 0; v < n; ++v) hin.by_type_[hin.types_[v]].push_back(v);

  hin.adjacency_.assign(2 * schema_->num_edge_types(), {});
  for (const auto& e : edges_) {
    auto& adj = hin.adjacency_[e.relation.value];
    if (adj.offsets.empty()) {
      adj.offsets.assign(n + 1, 0);
      adj.incoming.assign(n, 0);
    }
    ++adj.offsets[e.src + 1];
    adj.incoming[e.dst] = 1;
  }
  for (auto& adj : hin.adjacency_) {
    if (adj.offsets.empty()) continue;
    for (std::size_t i = 0; i < n; ++i) adj.offsets[i + 1] += adj.offsets[i];
    adj.entries.resize(adj.offsets[n]);
  }
  // Counting sort keeps the insertion order within each source.
  std::vector<std::vector<std::size_t>> cursor(hin.adjacency_.size());
  for (std::size_t r = 0; r < hin.adjacency_.size(); ++r)
    if (!hin.adjacency_[r].offsets.empty())
      cursor[r].assign(hin.adjacency_[r].offsets.begin(), hin.adjacency_[r].offsets.end() - 1);
  for (const auto& e : edges_) {
    auto& adj = hin.adjacency_[e.relation.value];
    adj.entries[cursor[e.relation.value][e.src]++] = Neighbor{e.dst, e.weight};
  }
  edges_.clear();
  return hin;
}

}  // namespace mpembed
