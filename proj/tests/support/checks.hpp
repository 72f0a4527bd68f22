#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include "seedscope/corpus.hpp"

namespace checks {

struct Result {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  std::string detail;

  /// Records a failure; keeps the first message.
  void fail(const std::string& message) {
    if (passed) detail = message;
    passed = false;
  }
};

// Oracle equivalence.
Result pca_matches_eigen_oracle(std::size_t instances, std::uint64_t seed);
Result coherence_matches_sort_oracle(std::size_t instances, std::uint64_t seed);

// Properties.
Result cosine_symmetry_and_scale(std::size_t cases, std::uint64_t seed);
Result ranking_is_permutation(std::size_t cases, std::uint64_t seed);
Result spectrum_properties(std::size_t cases, std::uint64_t seed);
Result coherence_properties(std::size_t cases, std::uint64_t seed);
Result weat_duplication_invariance(std::size_t cases, std::uint64_t seed);
Result aggregation_properties(std::size_t cases, std::uint64_t seed);
Result normalize_set_idempotent(std::size_t cases, std::uint64_t seed);
Result shuffle_pairing_bijection(std::size_t cases, std::uint64_t seed);
Result generated_sets_in_band(std::size_t cases, std::uint64_t seed);
Result bootstrap_preserves_size(std::size_t cases, std::uint64_t seed);
Result stats_monotone_in_min_count(std::size_t cases, std::uint64_t seed);
Result preprocess_idempotent(std::size_t cases, std::uint64_t seed);
Result noise_distribution_matches(std::size_t draws, std::uint64_t seed);
Result bootstrap_models_have_no_placeholders(std::uint64_t seed);

// Trainer.
Result sgns_gradient_matches_finite_differences(std::size_t cases, std::uint64_t seed);
/// Interchangeable word pairs (cat/dog, car/truck, apple/pear) in shared
/// contexts.
seedscope::Corpus toy_corpus(std::size_t sentences, std::uint64_t seed);
Result toy_loss_strictly_decreases(std::uint64_t seed);
Result toy_similar_words_beat_baseline(std::uint64_t seed, double required_margin);

// Fixtures and formats.
Result fixture_stats_match_hand_counts(const std::filesystem::path& fixture_dir);
Result binary_round_trip_exact(std::size_t cases, std::uint64_t seed,
                               const std::filesystem::path& scratch);
Result text_round_trip_close(std::size_t cases, std::uint64_t seed,
                             const std::filesystem::path& scratch);

}  // namespace checks
