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
#include "mpembed/meta_path.hpp"

#include <algorithm>

#include "mpembed/error.hpp"
#include "text.hpp"

namespace mpembed {

namespace {

std::string render_walk(const Schema& schema, std::span<const RelationId> relations) {
  std::string out = schema.vertex_type_name(schema.source_type(relations.front()));
  for (auto r : relations) {
    auto from = schema.source_type(r);
    auto to = schema.target_type(r);
    out += '-';
    if (schema.relations_between(from, to).size() > 1) {
      out += '[';
      out += schema.edge_type(r.edge_type()).name;
      out += "]-";
    }
    out += schema.vertex_type_name(to);
  }
  return out;
}

}  // namespace

MetaPath MetaPath::parse(std::string_view spec, std::shared_ptr<const Schema> schema) {
  spec = text::trim(spec);
  if (spec.empty()) throw SchemaError("empty meta-path");
  const std::string whole(spec);

  // Tokens alternate: type ( '-' [ '[' edge ']' '-' ] type )*
  std::vector<std::string_view> types;
  std::vector<std::string_view> edges;  // empty view = infer
  std::size_t i = 0;
  auto read_type = [&]() {
    std::size_t j = i;
    while (j < spec.size() && spec[j] != '-' && spec[j] != '[') ++j;
    if (j == i) throw SchemaError("meta-path '" + whole + "': expected a vertex type at offset " +
                                  std::to_string(i));
    types.push_back(text::trim(spec.substr(i, j - i)));
    i = j;
  };
  read_type();
  while (i < spec.size()) {
    if (spec[i] != '-')
      throw SchemaError("meta-path '" + whole + "': expected '-' at offset " + std::to_string(i));
    ++i;
    std::string_view edge;
    if (i < spec.size() && spec[i] == '[') {
      auto close = spec.find(']', i);
      if (close == std::string_view::npos || close + 1 >= spec.size() || spec[close + 1] != '-')
        throw SchemaError("meta-path '" + whole + "': malformed `-[edge]-` step");
      edge = text::trim(spec.substr(i + 1, close - i - 1));
      if (edge.empty()) throw SchemaError("meta-path '" + whole + "': empty edge type");
      i = close + 2;
    }
    edges.push_back(edge);
    read_type();
  }
  if (edges.empty())
    throw SchemaError("meta-path '" + whole + "' has no steps; need at least two vertex types");

  std::vector<VertexTypeId> type_ids;
  for (auto t : types) {
    auto id = schema->find_vertex_type(t);
    if (!id)
      throw SchemaError("meta-path '" + whole + "': unknown vertex type '" + std::string(t) + "'");
    type_ids.push_back(*id);
  }

  std::vector<RelationId> relations;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    auto candidates = schema->relations_between(type_ids[k], type_ids[k + 1]);
    const std::string step = std::string(types[k]) + "-" + std::string(types[k + 1]);
    if (!edges[k].empty()) {
      auto et = schema->find_edge_type(edges[k]);
      if (!et)
        throw SchemaError("meta-path '" + whole + "': unknown edge type '" +
                          std::string(edges[k]) + "'");
      std::erase_if(candidates, [&](RelationId r) { return r.edge_type() != *et; });
      if (candidates.empty())
        throw SchemaError("meta-path '" + whole + "': edge type '" + std::string(edges[k]) +
                          "' does not connect step " + step);
    } else if (candidates.empty()) {
      throw SchemaError("meta-path '" + whole + "': incompatible step " + step +
                        ", no edge type connects them");
    } else if (candidates.size() > 1) {
      throw SchemaError("meta-path '" + whole + "': ambiguous step " + step +
                        ", name the edge type as " + std::string(types[k]) + "-[edge]-" +
                        std::string(types[k + 1]));
    }
    relations.push_back(candidates.front());
  }
  return from_relations(std::move(relations), std::move(schema));
}

MetaPath MetaPath::from_relations(std::vector<RelationId> relations,
                                  std::shared_ptr<const Schema> schema) {
  if (relations.empty()) throw SchemaError("meta-path must have at least one relation");
  for (std::size_t k = 0; k < relations.size(); ++k) {
    if (!schema->is_valid(relations[k]))
      throw SchemaError("invalid relation at step " + std::to_string(k + 1));
    if (k > 0 && schema->target_type(relations[k - 1]) != schema->source_type(relations[k]))
      throw SchemaError("relations at steps " + std::to_string(k) + " and " +
                        std::to_string(k + 1) + " do not chain");
  }
  MetaPath m;
  m.canonical_ = render_walk(*schema, relations);
  m.relations_ = std::move(relations);
  m.schema_ = std::move(schema);
  return m;
}

VertexTypeId MetaPath::vertex_type_at(std::size_t i) const {
  if (i < 1 || i > length() + 1)
    throw LookupError("position " + std::to_string(i) + " outside 1.." +
                      std::to_string(length() + 1));
  return i <= length() ? schema_->source_type(relations_[i - 1])
                       : schema_->target_type(relations_.back());
}

MetaPath MetaPath::sub(std::size_t s, std::size_t t) const {
  if (s < 1 || s > t || t > length())
    throw LookupError("sub-meta-path [" + std::to_string(s) + ", " + std::to_string(t) +
                      "] outside 1.." + std::to_string(length()));
  std::vector<RelationId> rel(relations_.begin() + static_cast<std::ptrdiff_t>(s - 1),
                              relations_.begin() + static_cast<std::ptrdiff_t>(t));
  return from_relations(std::move(rel), schema_);
}

bool follows(const Hin& hin, const MetaPath& m, std::span<const VertexId> vertices) {
  if (vertices.size() != m.length() + 1) return false;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] >= hin.num_vertices()) return false;
    if (hin.vertex_type(vertices[i]) != m.vertex_type_at(i + 1)) return false;
  }
  for (std::size_t i = 1; i <= m.length(); ++i) {
    auto adj = hin.neighbors(vertices[i - 1], m.relation(i));
    VertexId next = vertices[i];
    if (std::none_of(adj.begin(), adj.end(), [&](const Neighbor& n) { return n.vertex == next; }))
      return false;
  }
  return true;
}

}  // namespace mpembed
