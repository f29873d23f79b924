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
// Test-only reference computations. Nothing here calls into the code paths
// it is used to check: path counts come from walk enumeration over a raw
// edge list, losses from the textbook formulas, rankings from full sorts.
#ifndef MPEMBED_TESTS_ORACLES_HPP
#define MPEMBED_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mpembed/embedding_io.hpp"
#include "mpembed/hin.hpp"
#include "mpembed/meta_path.hpp"
#include "mpembed/model.hpp"
#include "mpembed/rng.hpp"

namespace mpembed::oracle {

// ------------------------------------------------------------ toy network

inline constexpr const char* kToySchema =
    "vertex A\nvertex P\nvertex V\n"
    "edge writes A P undirected\n"
    "edge published_in P V undirected\n";
inline constexpr const char* kToyVertices =
    "a1\tA\na2\tA\np1\tP\np2\tP\nv1\tV\n";
inline constexpr const char* kToyEdges =
    "a1\tp1\twrites\n"
    "a2\tp1\twrites\n"
    "a2\tp2\twrites\n"
    "p1\tv1\tpublished_in\n"
    "p2\tv1\tpublished_in\n";

inline Hin toy_hin() { return Hin::load(kToySchema, kToyVertices, kToyEdges); }

// ------------------------------------------------------------ random networks

struct RawEdge {
  std::string src;
  std::string dst;
  std::string type;
};

/// A random typed network described as plain text plus the raw edge list.
struct RandomNetwork {
  struct TypeDecl {
    std::string name;
    std::string src;
    std::string dst;
    bool directed;
  };
  std::vector<std::string> vertex_types;
  std::vector<TypeDecl> edge_types;
  std::vector<std::pair<std::string, std::string>> vertices;  // id, type
  std::vector<RawEdge> edges;

  std::string schema_text() const {
    std::string s;
    for (const auto& t : vertex_types) s += "vertex " + t + "\n";
    for (const auto& e : edge_types)
      s += "edge " + e.name + " " + e.src + " " + e.dst + (e.directed ? " directed\n" : " undirected\n");
    return s;
  }
  std::string vertex_text() const {
    std::string s;
    for (const auto& [id, t] : vertices) s += id + "\t" + t + "\n";
    return s;
  }
  std::string edge_text() const {
    std::string s;
    for (const auto& e : edges) s += e.src + "\t" + e.dst + "\t" + e.type + "\n";
    return s;
  }
  Hin load() const { return Hin::load(schema_text(), vertex_text(), edge_text()); }
};

inline RandomNetwork random_network(Rng& rng, std::size_t max_vertices = 30,
                                    std::size_t max_types = 4) {
  RandomNetwork net;
  const std::size_t ntypes = 1 + rng.below(max_types);
  for (std::size_t t = 0; t < ntypes; ++t) net.vertex_types.push_back("T" + std::to_string(t));
  const std::size_t nedge_types = 1 + rng.below(4);
  for (std::size_t e = 0; e < nedge_types; ++e) {
    net.edge_types.push_back({"r" + std::to_string(e), net.vertex_types[rng.below(ntypes)],
                              net.vertex_types[rng.below(ntypes)], rng.below(2) == 0});
  }
  const std::size_t nv = ntypes + rng.below(max_vertices - ntypes + 1);
  std::map<std::string, std::vector<std::string>> by_type;
  for (std::size_t v = 0; v < nv; ++v) {
    // First ntypes vertices cover every type once.
    const auto& t = v < ntypes ? net.vertex_types[v] : net.vertex_types[rng.below(ntypes)];
    std::string id = "v" + std::to_string(v);
    net.vertices.emplace_back(id, t);
    by_type[t].push_back(id);
  }
  const std::size_t ne = rng.below(3 * nv + 1);
  for (std::size_t k = 0; k < ne; ++k) {
    const auto& et = net.edge_types[rng.below(net.edge_types.size())];
    const auto& srcs = by_type[et.src];
    const auto& dsts = by_type[et.dst];
    net.edges.push_back({srcs[rng.below(srcs.size())], dsts[rng.below(dsts.size())], et.name});
  }
  return net;
}

/// A uniformly random relation walk of length 1..max_len over the schema;
/// empty when the walk gets stuck.
inline std::vector<RelationId> random_relations(const Schema& schema, Rng& rng,
                                                std::size_t max_len = 4) {
  auto all = schema.relations();
  std::vector<RelationId> out{all[rng.below(all.size())]};
  const std::size_t len = 1 + rng.below(max_len);
  while (out.size() < len) {
    std::vector<RelationId> next;
    for (auto r : all)
      if (schema.source_type(r) == schema.target_type(out.back())) next.push_back(r);
    if (next.empty()) break;
    out.push_back(next[rng.below(next.size())]);
  }
  return out;
}

// ------------------------------------------------------------ path enumeration

/// Directed steps (from, to) for one relation, read off the raw edge list.
/// An undirected type walks both ways; when its endpoints share a vertex
/// type both ways belong to the same relation.
inline std::vector<std::pair<std::string, std::string>> raw_steps(const RandomNetwork& net,
                                                                  const Schema& schema,
                                                                  RelationId r) {
  const auto& et = schema.edge_type(r.edge_type());
  std::vector<std::pair<std::string, std::string>> steps;
  for (const auto& e : net.edges) {
    if (e.type != et.name) continue;
    const bool same_types = et.src_type == et.dst_type;
    if (!r.reversed()) steps.emplace_back(e.src, e.dst);
    if (!et.directed && (r.reversed() || same_types)) steps.emplace_back(e.dst, e.src);
  }
  return steps;
}

/// Every walk (as vertex-name lists) following `relations`, by DFS.
inline std::vector<std::vector<std::string>> enumerate_walks(
    const std::vector<std::vector<std::pair<std::string, std::string>>>& steps_per_relation,
    const std::vector<std::string>& starts) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> walk;
  auto dfs = [&](auto&& self, std::size_t i) -> void {
    if (i == steps_per_relation.size()) {
      out.push_back(walk);
      return;
    }
    for (const auto& [from, to] : steps_per_relation[i]) {
      if (from != walk.back()) continue;
      walk.push_back(to);
      self(self, i + 1);
      walk.pop_back();
    }
  };
  for (const auto& s : starts) {
    walk = {s};
    dfs(dfs, 0);
  }
  return out;
}

/// Reference C(u, i): number of walks following <r_i..r_L> that start at u
/// (i <= L); for i = L+1, 1 when u ends some r_L edge. Keyed by vertex name.
inline std::vector<std::map<std::string, double>> enumerate_counts(const RandomNetwork& net,
                                                                   const Schema& schema,
                                                                   std::span<const RelationId> rel) {
  const std::size_t L = rel.size();
  std::vector<std::vector<std::pair<std::string, std::string>>> steps;
  for (auto r : rel) steps.push_back(raw_steps(net, schema, r));
  std::vector<std::string> all;
  for (const auto& [id, t] : net.vertices) all.push_back(id);

  std::vector<std::map<std::string, double>> counts(L + 1);
  for (std::size_t i = 0; i < L; ++i) {
    std::vector<std::vector<std::pair<std::string, std::string>>> suffix(steps.begin() + i,
                                                                         steps.end());
    for (const auto& w : enumerate_walks(suffix, all)) counts[i][w.front()] += 1.0;
  }
  for (const auto& [from, to] : steps.back()) counts[L][to] = 1.0;
  return counts;
}

// ------------------------------------------------------------ model formulas

/// f(u,v) = mu + p.x_u + q.x_v + x_u.x_v, straight from the definition.
inline double score_formula(double mu, const std::vector<double>& p, const std::vector<double>& q,
                            const std::vector<double>& xu, const std::vector<double>& xv) {
  double s = mu;
  for (std::size_t k = 0; k < p.size(); ++k) s += p[k] * xu[k] + q[k] * xv[k] + xu[k] * xv[k];
  return s;
}

/// Copy of the parameters as plain vectors, so the reference loss reads
/// nothing through the implementation.
struct PlainParams {
  std::vector<std::vector<double>> x;
  std::vector<double> mu;
  std::vector<std::vector<double>> p, q;

  static PlainParams from(const ModelParameters& params) {
    PlainParams out;
    for (VertexId v = 0; v < params.num_vertices(); ++v) {
      auto e = params.embedding(v);
      out.x.emplace_back(e.begin(), e.end());
    }
    for (KeyId k = 0; k < params.num_keys(); ++k) {
      out.mu.push_back(params.mu(k));
      out.p.emplace_back(params.p(k).begin(), params.p(k).end());
      out.q.emplace_back(params.q(k).begin(), params.q(k).end());
    }
    return out;
  }
};

/// Reference loss: terms given as (left walk index, right walk index, key).
inline double loss_formula(const PlainParams& pp,
                           const std::vector<std::tuple<std::size_t, std::size_t, KeyId>>& terms,
                           const std::vector<VertexId>& walk, bool positive) {
  double s = 0.0;
  for (const auto& [l, r, k] : terms)
    s += score_formula(pp.mu[k], pp.p[k], pp.q[k], pp.x[walk[l]], pp.x[walk[r]]);
  const double sig = 1.0 / (1.0 + std::exp(-s));
  return positive ? -std::log(sig) : -std::log(1.0 - sig);
}

/// Reference term list: seq uses (i-1, i, M_{i,i}); pair uses
/// (i-1, j, M_{i,j}) for i <= j.
inline std::vector<std::tuple<std::size_t, std::size_t, KeyId>> formula_terms(
    const ModelParameters& params, const MetaPath& m, LossMode mode) {
  std::vector<std::tuple<std::size_t, std::size_t, KeyId>> terms;
  for (std::size_t i = 1; i <= m.length(); ++i) {
    for (std::size_t j = i; j <= m.length(); ++j) {
      if (mode == LossMode::kSequential && j != i) continue;
      terms.emplace_back(i - 1, j, *params.find_key(m.sub(i, j).render()));
    }
  }
  return terms;
}

/// Largest relative gap between the analytic gradient in `grads` and a
/// central difference of loss_formula over every parameter the walk touches.
/// Parameters missing from `grads` count as analytic zero. Relative error is
/// |a - fd| / max(|a|, |fd|, 1e-6).
inline double max_gradient_error(ModelParameters& params, const MetaPath& m, LossMode mode,
                                 const std::vector<VertexId>& walk, bool positive,
                                 const GradientSet& grads, double h = 1e-5) {
  const auto terms = formula_terms(params, m, mode);
  double worst = 0.0;
  auto check = [&](double& theta, double analytic) {
    const double saved = theta;
    theta = saved + h;
    const double up = loss_formula(PlainParams::from(params), terms, walk, positive);
    theta = saved - h;
    const double down = loss_formula(PlainParams::from(params), terms, walk, positive);
    theta = saved;
    const double fd = (up - down) / (2.0 * h);
    const double denom = std::max({std::abs(analytic), std::abs(fd), 1e-6});
    worst = std::max(worst, std::abs(analytic - fd) / denom);
  };

  std::set<VertexId> vertices(walk.begin(), walk.end());
  for (VertexId u : vertices) {
    auto g = grads.find_vertex(u);
    for (std::size_t k = 0; k < params.dim(); ++k)
      check(params.embedding(u)[k], g ? (*g)[k] : 0.0);
  }
  std::set<KeyId> keys;
  for (const auto& t : terms) keys.insert(std::get<2>(t));
  for (KeyId key : keys) {
    auto slot = grads.find_key_slot(key);
    check(params.mu(key), slot ? grads.mu_slot(*slot) : 0.0);
    for (std::size_t k = 0; k < params.dim(); ++k) {
      check(params.p(key)[k], slot ? grads.p_slot(*slot)[k] : 0.0);
      // With shared storage q is p, already covered.
      if (!params.symmetric()) check(params.q(key)[k], slot ? grads.q_slot(*slot)[k] : 0.0);
    }
  }
  return worst;
}

// ------------------------------------------------------------ ranking / AUC

struct RankedHit {
  std::string vertex;
  double similarity;
};

/// Full sort of every candidate by (similarity desc, id asc).
inline std::vector<RankedHit> brute_force_rank(const EmbeddingTable& table, const std::string& query,
                                               const std::map<std::string, std::string>& types,
                                               const std::string* type_filter) {
  auto norm = [](std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  std::size_t qi = 0;
  while (table.names[qi] != query) ++qi;
  const auto qv = table.row(qi);
  std::vector<RankedHit> all;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (i == qi) continue;
    if (type_filter) {
      auto it = types.find(table.names[i]);
      if (it == types.end() || it->second != *type_filter) continue;
    }
    // Same arithmetic as a unit-vector dot product: normalize, then dot.
    const double nq = norm(qv);
    const double ni = norm(table.row(i));
    double s = 0.0;
    for (std::size_t k = 0; k < table.dim; ++k) s += (qv[k] / nq) * (table.row(i)[k] / ni);
    all.push_back({table.names[i], s});
  }
  std::sort(all.begin(), all.end(), [](const RankedHit& a, const RankedHit& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.vertex < b.vertex;
  });
  return all;
}

/// Grouping AUC by the direct triple loop over (u, v, v').
inline double auc_triple_loop(const std::vector<std::vector<double>>& sim,
                              const std::vector<std::uint32_t>& groups) {
  double total = 0.0;
  std::size_t used = 0;
  const std::size_t n = groups.size();
  for (std::size_t u = 0; u < n; ++u) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (v == u || groups[v] != groups[u]) continue;
      for (std::size_t w = 0; w < n; ++w) {
        if (groups[w] == groups[u]) continue;
        den += 1.0;
        if (sim[u][v] > sim[u][w]) num += 1.0;
      }
    }
    if (den > 0.0) {
      total += num / den;
      ++used;
    }
  }
  return total / static_cast<double>(used);
}

/// Random named embeddings; about one row in five copies an earlier row so
/// similarity ties actually occur.
inline EmbeddingTable random_table(Rng& rng, std::size_t n, std::size_t d) {
  EmbeddingTable t;
  t.dim = d;
  for (std::size_t i = 0; i < n; ++i) {
    t.names.push_back("n" + std::to_string(rng.below(100000)) + "_" + std::to_string(i));
    if (i > 0 && rng.below(5) == 0) {
      auto src = t.row(rng.below(i));
      std::vector<double> copy(src.begin(), src.end());
      t.values.insert(t.values.end(), copy.begin(), copy.end());
    } else {
      for (std::size_t k = 0; k < d; ++k) t.values.push_back(rng.uniform(-1.0, 1.0));
    }
  }
  return t;
}

/// Random similarity matrix over n labeled vertices, in both flat and
/// nested form. Groups 0 and 1 always occur.
struct LabeledMatrix {
  std::vector<double> flat;
  std::vector<std::vector<double>> nested;
  std::vector<std::uint32_t> groups;
};

inline LabeledMatrix random_labeled(Rng& rng, std::size_t n, std::size_t num_groups,
                                    bool with_ties) {
  LabeledMatrix l;
  l.nested.assign(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    l.groups.push_back(static_cast<std::uint32_t>(rng.below(num_groups)));
    for (std::size_t j = 0; j < n; ++j)
      l.nested[i][j] = with_ties ? static_cast<double>(rng.below(4)) : rng.uniform(-1.0, 1.0);
  }
  l.groups[0] = 0;
  l.groups[n - 1] = 1;
  for (const auto& row : l.nested) l.flat.insert(l.flat.end(), row.begin(), row.end());
  return l;
}

// ------------------------------------------------------------ statistics

/// Total-variation distance between two distributions over the same keys.
template <typename Key>
double total_variation(const std::map<Key, double>& a, const std::map<Key, double>& b) {
  std::set<Key> keys;
  for (const auto& [k, v] : a) keys.insert(k);
  for (const auto& [k, v] : b) keys.insert(k);
  double tv = 0.0;
  for (const auto& k : keys) {
    auto ia = a.find(k);
    auto ib = b.find(k);
    tv += std::abs((ia == a.end() ? 0.0 : ia->second) - (ib == b.end() ? 0.0 : ib->second));
  }
  return 0.5 * tv;
}

template <typename Key>
std::map<Key, double> normalized(std::map<Key, double> m) {
  double sum = 0.0;
  for (const auto& [k, v] : m) sum += v;
  for (auto& [k, v] : m) v /= sum;
  return m;
}

}  // namespace mpembed::oracle

#endif  // MPEMBED_TESTS_ORACLES_HPP
