#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seedscope/embedding.hpp"
#include "seedscope/seeds.hpp"

namespace seedscope {

enum class SubspaceMethod { weat_diff, pca_pairs };

SubspaceMethod parse_subspace_method(std::string_view text);
std::string_view to_string(SubspaceMethod method);

/// Bias direction(s) derived from a pair of seed sets.
struct BiasSubspace {
  SubspaceMethod method = SubspaceMethod::weat_diff;
  /// Orthonormal directions, strongest first.
  std::vector<Vector> components;
  /// Fraction of the total variance per returned component (PCA only).
  std::vector<double> explained_variance_ratios;
  /// Seeds that were omitted because they are not in the model.
  std::vector<std::string> dropped_seeds;
  /// PCA: aligned pairs with both members in the model.
  std::size_t pairs_used = 0;
};

/// Unit-normalized difference of the two sets' mean vectors.
BiasSubspace weat_subspace(const SeedSetPair& pair, const EmbeddingModel& model);

/// Principal components of the stacked per-pair half vectors
/// (a_i - m_i, b_i - m_i with m_i the pair midpoint), computed by SVD of that
/// matrix without further centering. Each component's sign is chosen so the
/// summed A-minus-B differences project positively. Returns at most
/// `n_components` components (fewer when the matrix rank is lower).
BiasSubspace pca_subspace(const SeedSetPair& pair, const EmbeddingModel& model,
                          std::size_t n_components = 10);

/// Explained-variance ratios of the first `n` components, zero-padded to n.
std::vector<double> explained_variance_spectrum(const SeedSetPair& pair, const EmbeddingModel& model,
                                                std::size_t n = 10);

/// 1-based rank of each word when the whole vocabulary is ordered by
/// descending cosine to `direction` (ties lexicographic). Throws
/// MissingWordError for words absent from the model.
std::vector<std::size_t> vocabulary_ranks(const EmbeddingModel& model, const Vector& direction,
                                          std::span<const std::string> words);

/// |mean rank(A) - mean rank(B)| / |V| using component `pc_index`.
/// Every seed of both sets must be in the model.
double coherence(const SeedSetPair& pair, const BiasSubspace& subspace,
                 const EmbeddingModel& model, std::size_t pc_index = 0);

/// Cosine between the two sets' mean vectors (absent seeds dropped).
double set_similarity(const SeedSetPair& pair, const EmbeddingModel& model);

/// Cosine between the set's mean vector and the target word's vector.
double bias_measurement(const SeedSet& set, std::string_view target_word,
                        const EmbeddingModel& model);

/// Serializable result of one metric evaluation.
struct MetricRecord {
  std::string pair_id;
  std::string model_fingerprint;
  std::string method;
  std::string metric;
  std::optional<double> value;
  std::vector<std::string> dropped_seeds;
  std::size_t n_components = 0;
};

/// One JSON object: {pair_id, model_fingerprint, method, metric, value,
/// dropped_seeds, n_components}.
std::string to_json(const MetricRecord& record);
MetricRecord metric_record_from_json(std::string_view json);

}  // namespace seedscope
