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
#include "mpembed/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_set>

#include "mpembed/error.hpp"
#include "mpembed/rng.hpp"
#include "text.hpp"

namespace mpembed {

Grouping Grouping::parse(std::string_view text) {
  Grouping g;
  std::unordered_set<std::string> seen;
  text::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    auto fields = text::split(line, '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
      throw ParseError("labels", line_no, "expected `vertex_id<TAB>group`");
    if (!seen.emplace(fields[0]).second)
      throw ParseError("labels", line_no, "vertex '" + std::string(fields[0]) + "' labeled twice");
    g.labels.emplace_back(std::string(fields[0]), std::string(fields[1]));
  });
  return g;
}

std::string Grouping::to_text() const {
  std::string out;
  for (const auto& [v, group] : labels) out += v + '\t' + group + '\n';
  return out;
}

namespace {

// Returns {hits, pairs} for row u; pairs = 0 when u has no usable peers.
std::pair<double, double> auc_row(std::span<const double> row,
                                  std::span<const std::uint32_t> groups, std::size_t u,
                                  std::vector<double>& same, std::vector<double>& other) {
  same.clear();
  other.clear();
  for (std::size_t v = 0; v < groups.size(); ++v) {
    if (v == u) continue;
    (groups[v] == groups[u] ? same : other).push_back(row[v]);
  }
  if (same.empty() || other.empty()) return {0.0, 0.0};
  std::sort(other.begin(), other.end());
  double hits = 0.0;
  for (double s : same)
    hits += static_cast<double>(std::lower_bound(other.begin(), other.end(), s) - other.begin());
  return {hits, static_cast<double>(same.size()) * static_cast<double>(other.size())};
}

void check_shape(std::span<const double> sim, std::span<const std::uint32_t> groups) {
  if (sim.size() != groups.size() * groups.size())
    throw Error("similarity matrix does not match the number of labels");
  std::unordered_set<std::uint32_t> distinct(groups.begin(), groups.end());
  if (distinct.size() < 2) throw Error("grouping needs at least two distinct groups");
}

double finish(std::span<const double> per_row) {
  double sum = 0.0;
  std::size_t used = 0;
  for (double r : per_row) {
    if (std::isnan(r)) continue;
    sum += r;
    ++used;
  }
  if (used == 0) throw Error("no labeled vertex has both a same-group and another-group peer");
  return sum / static_cast<double>(used);
}

}  // namespace

double auc_from_matrix(std::span<const double> sim, std::span<const std::uint32_t> groups) {
  check_shape(sim, groups);
  const std::size_t n = groups.size();
  std::vector<double> per_row(n);
  std::vector<double> same;
  std::vector<double> other;
  for (std::size_t u = 0; u < n; ++u) {
    auto [hits, pairs] = auc_row(sim.subspan(u * n, n), groups, u, same, other);
    per_row[u] = pairs > 0.0 ? hits / pairs : std::nan("");
  }
  return finish(per_row);
}

double auc_from_matrix_parallel(std::span<const double> sim,
                                std::span<const std::uint32_t> groups) {
  check_shape(sim, groups);
  const std::size_t n = groups.size();
  std::vector<double> per_row(n);
#pragma omp parallel
  {
    std::vector<double> same;
    std::vector<double> other;
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(n); ++s) {
      const auto u = static_cast<std::size_t>(s);
      auto [hits, pairs] = auc_row(sim.subspan(u * n, n), groups, u, same, other);
      per_row[u] = pairs > 0.0 ? hits / pairs : std::nan("");
    }
  }
  return finish(per_row);
}

namespace {

struct LabeledMatrix {
  std::vector<double> sim;
  std::vector<std::uint32_t> groups;
};

LabeledMatrix labeled_matrix(const SimilarityIndex& index, const Grouping& labels, bool parallel) {
  LabeledMatrix m;
  std::vector<std::size_t> rows;
  std::map<std::string, std::uint32_t> group_ids;
  for (const auto& [vertex, group] : labels.labels) {
    auto i = index.find(vertex);
    if (!i) throw LookupError("labeled vertex '" + vertex + "' is not in the embedding index");
    rows.push_back(*i);
    auto [it, inserted] = group_ids.emplace(group, static_cast<std::uint32_t>(group_ids.size()));
    m.groups.push_back(it->second);
  }
  const std::size_t n = rows.size();
  m.sim.assign(n * n, 0.0);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
  for (std::int64_t s = 0; s < static_cast<std::int64_t>(n); ++s) {
    const auto a = static_cast<std::size_t>(s);
    for (std::size_t b = 0; b < n; ++b) m.sim[a * n + b] = index.similarity(rows[a], rows[b]);
  }
  return m;
}

}  // namespace

double auc(const SimilarityIndex& index, const Grouping& labels) {
  auto m = labeled_matrix(index, labels, true);
  return auc_from_matrix_parallel(m.sim, m.groups);
}

double auc_serial(const SimilarityIndex& index, const Grouping& labels) {
  auto m = labeled_matrix(index, labels, false);
  return auc_from_matrix(m.sim, m.groups);
}

// ---------------------------------------------------------------- generator

PlantedDataset generate_planted_hin(const SyntheticSpec& spec) {
  if (spec.communities < 1 || spec.authors_per_community < 1 || spec.venues_per_community < 1 ||
      spec.papers_per_author < 1)
    throw Error("synthetic spec counts must all be >= 1");
  if (!(spec.noise >= 0.0 && spec.noise <= 1.0)) throw Error("noise must lie in [0, 1]");

  Rng rng(spec.seed);
  std::ostringstream vertices;
  std::ostringstream edges;
  const std::string schema =
      "vertex A\nvertex P\nvertex V\n"
      "edge writes A P undirected\n"
      "edge published_in P V undirected\n";

  auto venue_name = [](std::size_t c, std::size_t v) {
    return "v" + std::to_string(c) + "_" + std::to_string(v);
  };
  for (std::size_t c = 0; c < spec.communities; ++c)
    for (std::size_t v = 0; v < spec.venues_per_community; ++v)
      vertices << venue_name(c, v) << "\tV\n";

  Grouping grouping;
  for (std::size_t c = 0; c < spec.communities; ++c) {
    for (std::size_t a = 0; a < spec.authors_per_community; ++a) {
      const std::string author = "a" + std::to_string(c) + "_" + std::to_string(a);
      vertices << author << "\tA\n";
      grouping.labels.emplace_back(author, "c" + std::to_string(c));
      for (std::size_t k = 0; k < spec.papers_per_author; ++k) {
        const std::string paper = "p" + std::to_string(c) + "_" + std::to_string(a) + "_" +
                                  std::to_string(k);
        vertices << paper << "\tP\n";
        std::size_t community = c;
        if (rng.uniform() < spec.noise) community = rng.below(spec.communities);
        const std::size_t venue = rng.below(spec.venues_per_community);
        edges << author << '\t' << paper << "\twrites\n";
        edges << paper << '\t' << venue_name(community, venue) << "\tpublished_in\n";
      }
    }
  }

  PlantedDataset out;
  out.schema_text = schema;
  out.vertex_text = vertices.str();
  out.edge_text = edges.str();
  out.grouping = std::move(grouping);
  out.hin = Hin::load(out.schema_text, out.vertex_text, out.edge_text);
  return out;
}

}  // namespace mpembed
