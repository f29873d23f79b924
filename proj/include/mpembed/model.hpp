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
#ifndef MPEMBED_MODEL_HPP
#define MPEMBED_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mpembed/hin.hpp"
#include "mpembed/meta_path.hpp"
#include "mpembed/rng.hpp"

namespace mpembed {

enum class LossMode { kSequential, kPairwise };
enum class Label { kNegative, kPositive };

using KeyId = std::uint32_t;

/// Vertex embeddings x_u plus one (mu, p, q) record per sub-meta-path key.
///
/// The relevance score of u and v under key k is
///   f(u, v, k) = mu_k + p_k . x_u + q_k . x_v + x_u . x_v.
/// With `symmetric` set, p and q share storage, which makes f symmetric.
///
/// One flat arena, written concurrently without locks during training.
class ModelParameters {
 public:
  ModelParameters(std::size_t num_vertices, std::size_t dim, bool symmetric = false);

  std::size_t dim() const { return dim_; }
  std::size_t num_vertices() const { return num_vertices_; }
  std::size_t num_keys() const { return key_names_.size(); }
  bool symmetric() const { return symmetric_; }

  /// Returns the existing record for `key` or allocates a zeroed one.
  KeyId register_key(std::string_view key);
  std::optional<KeyId> find_key(std::string_view key) const;
  const std::string& key_name(KeyId k) const { return key_names_.at(k); }

  std::span<double> embedding(VertexId u) { return {embeddings_.data() + u * dim_, dim_}; }
  std::span<const double> embedding(VertexId u) const {
    return {embeddings_.data() + u * dim_, dim_};
  }
  double& mu(KeyId k) { return records_[k * stride_]; }
  double mu(KeyId k) const { return records_[k * stride_]; }
  std::span<double> p(KeyId k) { return {records_.data() + k * stride_ + 1, dim_}; }
  std::span<const double> p(KeyId k) const { return {records_.data() + k * stride_ + 1, dim_}; }
  std::span<double> q(KeyId k) {
    return {records_.data() + k * stride_ + 1 + (symmetric_ ? 0 : dim_), dim_};
  }
  std::span<const double> q(KeyId k) const {
    return {records_.data() + k * stride_ + 1 + (symmetric_ ? 0 : dim_), dim_};
  }

  std::span<double> raw_embeddings() { return embeddings_; }
  std::span<const double> raw_embeddings() const { return embeddings_; }

  /// Every parameter uniform in [lo, hi].
  void randomize(Rng& rng, double lo = -1.0, double hi = 1.0);

 private:
  std::size_t num_vertices_;
  std::size_t dim_;
  bool symmetric_;
  std::size_t stride_;
  std::vector<double> embeddings_;
  std::vector<double> records_;
  std::vector<std::string> key_names_;
  std::unordered_map<std::string, KeyId> key_index_;
};

/// f(u, v, key). Throws LookupError on an unknown vertex or key.
double score(const ModelParameters& params, VertexId u, VertexId v, KeyId key);

/// Which (i, j, key) pairs make up a path score: for seq the L consecutive
/// edges under M_{i,i}; for pair all i <= j under M_{i,j}. Vertex indices
/// are 0-based positions in the L+1 vertex walk, so term (i, j) scores
/// walk[i-1] against walk[j].
class PathScorer {
 public:
  struct Term {
    std::uint32_t left;   // walk index of u_i
    std::uint32_t right;  // walk index of v_j
    KeyId key;
  };

  /// Registers every key the plan needs.
  static PathScorer build(ModelParameters& params, const MetaPath& m, LossMode mode);
  /// Resolves keys without registering; throws LookupError if one is missing.
  static PathScorer resolve(const ModelParameters& params, const MetaPath& m, LossMode mode);

  std::size_t length() const { return length_; }
  LossMode mode() const { return mode_; }
  std::span<const Term> terms() const { return terms_; }

  /// Sum of f over the plan. `walk` must have length()+1 vertices.
  double score(const ModelParameters& params, std::span<const VertexId> walk) const;

 private:
  std::size_t length_ = 0;
  LossMode mode_ = LossMode::kSequential;
  std::vector<Term> terms_;
};

/// Sum_i f(u_i, v_i, M_{i,i}); keys must be registered.
double path_score_seq(const ModelParameters& params, const PathInstance& inst, const MetaPath& m);
/// Sum_{i<=j} f(u_i, v_j, M_{i,j}); keys must be registered.
double path_score_pair(const ModelParameters& params, const PathInstance& inst,
                       const MetaPath& m);

/// Sparse gradient over the parameters touched by one path.
/// Buffers are reused across clear() calls.
class GradientSet {
 public:
  explicit GradientSet(std::size_t dim = 0) : dim_(dim) {}

  void reset(std::size_t dim);
  void clear();
  std::size_t dim() const { return dim_; }

  /// Gradient slot for x_u, zero-initialized on first use.
  std::span<double> vertex(VertexId u);
  /// Gradient slots for mu, p and q of `key`.
  double& mu(KeyId key);
  std::span<double> p(KeyId key);
  std::span<double> q(KeyId key);

  std::size_t num_vertices() const { return vertex_ids_.size(); }
  std::size_t num_keys() const { return key_ids_.size(); }
  VertexId vertex_id(std::size_t slot) const { return vertex_ids_[slot]; }
  KeyId key_id(std::size_t slot) const { return key_ids_[slot]; }
  std::span<const double> vertex_slot(std::size_t slot) const {
    return {vertex_values_.data() + slot * dim_, dim_};
  }
  double mu_slot(std::size_t slot) const { return key_values_[slot * key_stride()]; }
  std::span<const double> p_slot(std::size_t slot) const {
    return {key_values_.data() + slot * key_stride() + 1, dim_};
  }
  std::span<const double> q_slot(std::size_t slot) const {
    return {key_values_.data() + slot * key_stride() + 1 + dim_, dim_};
  }

  /// Looks up an entry without creating it.
  std::optional<std::span<const double>> find_vertex(VertexId u) const;
  std::optional<std::size_t> find_key_slot(KeyId key) const;

  bool all_finite() const;

 private:
  std::size_t key_stride() const { return 1 + 2 * dim_; }
  std::size_t key_slot(KeyId key);

  std::size_t dim_;
  std::vector<VertexId> vertex_ids_;
  std::vector<double> vertex_values_;
  std::vector<KeyId> key_ids_;
  std::vector<double> key_values_;
};

/// Numerically stable logistic function.
double sigmoid(double x);
/// log(1 + exp(x)) without overflow or cancellation.
double softplus(double x);

/// Negative-sampling loss of one walk: -log sigmoid(S) for a positive,
/// -log(1 - sigmoid(S)) for a negative, S the plan's path score. Fills
/// `grads` (cleared first) with exact partials of the loss. In symmetric
/// mode the q contribution is folded into p and q slots stay zero.
double loss_and_gradients(const ModelParameters& params, const PathScorer& scorer,
                          std::span<const VertexId> walk, Label label, GradientSet& grads);

/// theta <- theta - lr * grad for each touched entry. Throws NumericError,
/// leaving params untouched, if a gradient is not finite or lr <= 0.
void sgd_apply(ModelParameters& params, const GradientSet& grads, double lr);

/// Training-loop step: loss_and_gradients followed by sgd_apply, without
/// the bounds checks. Returns the loss, or NaN without updating anything if
/// the score or a gradient is not finite.
double sgd_step(ModelParameters& params, const PathScorer& scorer,
                std::span<const VertexId> walk, Label label, double lr, GradientSet& scratch);

}  // namespace mpembed

#endif  // MPEMBED_MODEL_HPP
