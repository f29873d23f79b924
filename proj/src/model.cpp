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
#include "mpembed/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpembed/error.hpp"

namespace mpembed {

// ---------------------------------------------------------------- parameters

ModelParameters::ModelParameters(std::size_t num_vertices, std::size_t dim, bool symmetric)
    : num_vertices_(num_vertices),
      dim_(dim),
      symmetric_(symmetric),
      stride_(1 + (symmetric ? 1 : 2) * dim),
      embeddings_(num_vertices * dim, 0.0) {
  if (dim == 0) throw Error("embedding dimension must be positive");
}

KeyId ModelParameters::register_key(std::string_view key) {
  if (auto k = find_key(key)) return *k;
  auto id = static_cast<KeyId>(key_names_.size());
  key_names_.emplace_back(key);
  key_index_.emplace(key_names_.back(), id);
  records_.resize(records_.size() + stride_, 0.0);
  return id;
}

std::optional<KeyId> ModelParameters::find_key(std::string_view key) const {
  auto it = key_index_.find(std::string(key));
  if (it == key_index_.end()) return std::nullopt;
  return it->second;
}

void ModelParameters::randomize(Rng& rng, double lo, double hi) {
  for (auto& x : embeddings_) x = rng.uniform(lo, hi);
  for (auto& x : records_) x = rng.uniform(lo, hi);
}

namespace {

inline double dot(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t k = 0; k < d; ++k) s += a[k] * b[k];
  return s;
}

inline double score_unchecked(const ModelParameters& params, VertexId u, VertexId v, KeyId key) {
  const std::size_t d = params.dim();
  const double* xu = params.embedding(u).data();
  const double* xv = params.embedding(v).data();
  const double* p = params.p(key).data();
  const double* q = params.q(key).data();
  double s = 0.0;
  for (std::size_t k = 0; k < d; ++k) s += p[k] * xu[k] + q[k] * xv[k] + xu[k] * xv[k];
  return params.mu(key) + s;
}

}  // namespace

double score(const ModelParameters& params, VertexId u, VertexId v, KeyId key) {
  if (u >= params.num_vertices() || v >= params.num_vertices())
    throw LookupError("score: vertex index out of range");
  if (key >= params.num_keys()) throw LookupError("score: unknown sub-meta-path key");
  return score_unchecked(params, u, v, key);
}

// ---------------------------------------------------------------- path scores

namespace {

template <typename KeyFn>
PathScorer::Term make_term(std::size_t i, std::size_t j, KeyFn&& key_of) {
  return PathScorer::Term{static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(j),
                          key_of(i, j)};
}

}  // namespace

PathScorer PathScorer::build(ModelParameters& params, const MetaPath& m, LossMode mode) {
  PathScorer s;
  s.length_ = m.length();
  s.mode_ = mode;
  auto key_of = [&](std::size_t i, std::size_t j) {
    return params.register_key(m.sub(i, j).render());
  };
  for (std::size_t i = 1; i <= m.length(); ++i) {
    if (mode == LossMode::kSequential) {
      s.terms_.push_back(make_term(i, i, key_of));
    } else {
      for (std::size_t j = i; j <= m.length(); ++j) s.terms_.push_back(make_term(i, j, key_of));
    }
  }
  return s;
}

PathScorer PathScorer::resolve(const ModelParameters& params, const MetaPath& m, LossMode mode) {
  PathScorer s;
  s.length_ = m.length();
  s.mode_ = mode;
  auto key_of = [&](std::size_t i, std::size_t j) {
    auto name = m.sub(i, j).render();
    auto k = params.find_key(name);
    if (!k) throw LookupError("no parameters registered for sub-meta-path " + name);
    return *k;
  };
  for (std::size_t i = 1; i <= m.length(); ++i) {
    if (mode == LossMode::kSequential) {
      s.terms_.push_back(make_term(i, i, key_of));
    } else {
      for (std::size_t j = i; j <= m.length(); ++j) s.terms_.push_back(make_term(i, j, key_of));
    }
  }
  return s;
}

double PathScorer::score(const ModelParameters& params, std::span<const VertexId> walk) const {
  if (walk.size() != length_ + 1)
    throw Error("walk has " + std::to_string(walk.size()) + " vertices, meta-path needs " +
                std::to_string(length_ + 1));
  double s = 0.0;
  for (const auto& t : terms_) s += mpembed::score(params, walk[t.left], walk[t.right], t.key);
  return s;
}

double path_score_seq(const ModelParameters& params, const PathInstance& inst, const MetaPath& m) {
  return PathScorer::resolve(params, m, LossMode::kSequential).score(params, inst.vertices);
}

double path_score_pair(const ModelParameters& params, const PathInstance& inst,
                       const MetaPath& m) {
  return PathScorer::resolve(params, m, LossMode::kPairwise).score(params, inst.vertices);
}

// ---------------------------------------------------------------- gradients

void GradientSet::reset(std::size_t dim) {
  dim_ = dim;
  clear();
}

void GradientSet::clear() {
  vertex_ids_.clear();
  vertex_values_.clear();
  key_ids_.clear();
  key_values_.clear();
}

std::span<double> GradientSet::vertex(VertexId u) {
  for (std::size_t s = 0; s < vertex_ids_.size(); ++s)
    if (vertex_ids_[s] == u) return {vertex_values_.data() + s * dim_, dim_};
  vertex_ids_.push_back(u);
  vertex_values_.resize(vertex_values_.size() + dim_, 0.0);
  return {vertex_values_.data() + (vertex_ids_.size() - 1) * dim_, dim_};
}

std::size_t GradientSet::key_slot(KeyId key) {
  for (std::size_t s = 0; s < key_ids_.size(); ++s)
    if (key_ids_[s] == key) return s;
  key_ids_.push_back(key);
  key_values_.resize(key_values_.size() + key_stride(), 0.0);
  return key_ids_.size() - 1;
}

double& GradientSet::mu(KeyId key) {
  const std::size_t s = key_slot(key);
  return key_values_[s * key_stride()];
}

std::span<double> GradientSet::p(KeyId key) {
  const std::size_t s = key_slot(key);
  return {key_values_.data() + s * key_stride() + 1, dim_};
}

std::span<double> GradientSet::q(KeyId key) {
  const std::size_t s = key_slot(key);
  return {key_values_.data() + s * key_stride() + 1 + dim_, dim_};
}

std::optional<std::span<const double>> GradientSet::find_vertex(VertexId u) const {
  for (std::size_t s = 0; s < vertex_ids_.size(); ++s)
    if (vertex_ids_[s] == u) return vertex_slot(s);
  return std::nullopt;
}

std::optional<std::size_t> GradientSet::find_key_slot(KeyId key) const {
  for (std::size_t s = 0; s < key_ids_.size(); ++s)
    if (key_ids_[s] == key) return s;
  return std::nullopt;
}

bool GradientSet::all_finite() const {
  auto finite = [](double x) { return std::isfinite(x); };
  return std::all_of(vertex_values_.begin(), vertex_values_.end(), finite) &&
         std::all_of(key_values_.begin(), key_values_.end(), finite);
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

namespace {

// Loss and dLoss/dS for score S.
inline std::pair<double, double> loss_of(double s, Label label) {
  if (label == Label::kPositive) return {softplus(-s), sigmoid(s) - 1.0};
  return {softplus(s), sigmoid(s)};
}

double accumulate_gradients(const ModelParameters& params, const PathScorer& scorer,
                            std::span<const VertexId> walk, Label label, GradientSet& grads) {
  const std::size_t d = params.dim();
  if (grads.dim() != d) grads.reset(d);
  grads.clear();

  double s = 0.0;
  for (const auto& t : scorer.terms()) s += score_unchecked(params, walk[t.left], walk[t.right], t.key);
  const auto [loss, g] = loss_of(s, label);
  if (!std::isfinite(s)) return std::numeric_limits<double>::quiet_NaN();

  const bool symmetric = params.symmetric();
  for (const auto& t : scorer.terms()) {
    const VertexId a = walk[t.left];
    const VertexId b = walk[t.right];
    const double* xa = params.embedding(a).data();
    const double* xb = params.embedding(b).data();
    const double* p = params.p(t.key).data();
    const double* q = params.q(t.key).data();

    // Slot pointers are fetched right before use; an insertion may reallocate.
    double* ga = grads.vertex(a).data();
    for (std::size_t k = 0; k < d; ++k) ga[k] += g * (p[k] + xb[k]);
    double* gb = grads.vertex(b).data();
    for (std::size_t k = 0; k < d; ++k) gb[k] += g * (q[k] + xa[k]);
    grads.mu(t.key) += g;
    double* gp = grads.p(t.key).data();
    double* gq = symmetric ? gp : grads.q(t.key).data();
    for (std::size_t k = 0; k < d; ++k) {
      gp[k] += g * xa[k];
      gq[k] += g * xb[k];
    }
  }
  return loss;
}

void apply_unchecked(ModelParameters& params, const GradientSet& grads, double lr) {
  const std::size_t d = params.dim();
  for (std::size_t s = 0; s < grads.num_vertices(); ++s) {
    double* x = params.embedding(grads.vertex_id(s)).data();
    const double* g = grads.vertex_slot(s).data();
    for (std::size_t k = 0; k < d; ++k) x[k] -= lr * g[k];
  }
  for (std::size_t s = 0; s < grads.num_keys(); ++s) {
    const KeyId key = grads.key_id(s);
    params.mu(key) -= lr * grads.mu_slot(s);
    double* p = params.p(key).data();
    const double* gp = grads.p_slot(s).data();
    for (std::size_t k = 0; k < d; ++k) p[k] -= lr * gp[k];
    if (!params.symmetric()) {
      double* q = params.q(key).data();
      const double* gq = grads.q_slot(s).data();
      for (std::size_t k = 0; k < d; ++k) q[k] -= lr * gq[k];
    }
  }
}

}  // namespace

double loss_and_gradients(const ModelParameters& params, const PathScorer& scorer,
                          std::span<const VertexId> walk, Label label, GradientSet& grads) {
  if (walk.size() != scorer.length() + 1)
    throw Error("walk has " + std::to_string(walk.size()) + " vertices, meta-path needs " +
                std::to_string(scorer.length() + 1));
  for (VertexId v : walk)
    if (v >= params.num_vertices()) throw LookupError("walk vertex index out of range");
  for (const auto& t : scorer.terms())
    if (t.key >= params.num_keys()) throw LookupError("scorer key not registered in parameters");
  double loss = accumulate_gradients(params, scorer, walk, label, grads);
  if (!std::isfinite(loss)) throw NumericError("non-finite path score");
  return loss;
}

void sgd_apply(ModelParameters& params, const GradientSet& grads, double lr) {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw NumericError("learning rate must be positive");
  if (!grads.all_finite()) throw NumericError("non-finite gradient");
  if (grads.num_vertices() > 0 && grads.dim() != params.dim())
    throw Error("gradient dimension does not match parameters");
  for (std::size_t s = 0; s < grads.num_vertices(); ++s)
    if (grads.vertex_id(s) >= params.num_vertices())
      throw LookupError("gradient vertex index out of range");
  for (std::size_t s = 0; s < grads.num_keys(); ++s)
    if (grads.key_id(s) >= params.num_keys()) throw LookupError("gradient key out of range");
  apply_unchecked(params, grads, lr);
}

double sgd_step(ModelParameters& params, const PathScorer& scorer,
                std::span<const VertexId> walk, Label label, double lr, GradientSet& scratch) {
  double loss = accumulate_gradients(params, scorer, walk, label, scratch);
  if (!std::isfinite(loss) || !scratch.all_finite()) return std::numeric_limits<double>::quiet_NaN();
  apply_unchecked(params, scratch, lr);
  return loss;
}

}  // namespace mpembed
