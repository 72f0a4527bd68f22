#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seedscope/corpus.hpp"
#include "seedscope/embedding.hpp"
#include "seedscope/rng.hpp"

namespace seedscope {

enum class TrainingMode {
  /// Single-threaded per model; bit-reproducible for a given seed.
  deterministic,
  /// Lock-free shared-weight updates across threads (hogwild). Results
  /// depend on thread scheduling.
  throughput,
};

TrainingMode parse_training_mode(std::string_view text);
std::string_view to_string(TrainingMode mode);

struct TrainConfig {
  std::size_t dimension = 100;
  std::size_t epochs = 5;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t min_count = 0;
  double learning_rate = 0.025;
  double min_learning_rate = 0.0001;
  std::size_t ensemble_size = 20;
  std::uint64_t rng_seed = 42;
  /// word2vec frequent-word subsampling threshold; disabled when empty.
  std::optional<double> subsampling_threshold;
  TrainingMode mode = TrainingMode::deterministic;
  /// Throughput mode: worker threads per model. Ensembles: models trained
  /// concurrently.
  unsigned threads = 1;

  /// Throws PreconditionError when a field is out of range.
  void validate() const;
  /// Stable "key=value;..." serialization of every field.
  std::string canonical() const;
};

/// Training vocabulary with the unigram^0.75 noise distribution.
class Vocabulary {
 public:
  static constexpr double kNoisePower = 0.75;

  /// Words with frequency >= max(min_count, 1); indices by descending
  /// frequency, ties lexicographic. Throws PreconditionError when empty.
  static Vocabulary build(std::span<const Document* const> documents, std::size_t min_count);

  std::size_t size() const noexcept { return words_.size(); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::string& word(std::size_t index) const { return words_.at(index); }
  std::uint64_t frequency(std::size_t index) const { return frequencies_.at(index); }
  const std::vector<std::uint64_t>& frequencies() const noexcept { return frequencies_; }
  std::optional<std::size_t> index_of(std::string_view word) const;
  /// Tokens in the corpus that belong to the vocabulary.
  std::uint64_t total_tokens() const noexcept { return total_tokens_; }

  double noise_probability(std::size_t index) const { return noise_probabilities_.at(index); }
  /// O(1) draw from the noise distribution (alias method).
  std::size_t sample_noise(Rng& rng) const;

 private:
  void build_noise_table();

  std::vector<std::string> words_;
  std::vector<std::uint64_t> frequencies_;
  WordIndex index_;
  std::uint64_t total_tokens_ = 0;
  std::vector<double> noise_probabilities_;
  std::vector<double> alias_threshold_;
  std::vector<std::size_t> alias_index_;
};

Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_count);

/// Loss and gradients of one skip-gram negative-sampling term:
///   L = -log s(c.o) - sum_k log s(-c.n_k)
/// where c is the center (input) vector, o the context (output) vector and
/// n_k the noise (output) vectors.
struct SgnsGradient {
  double loss = 0.0;
  std::vector<double> center;
  std::vector<double> context;
  std::vector<std::vector<double>> noise;
};

SgnsGradient sgns_gradient(std::span<const double> center, std::span<const double> context,
                           std::span<const std::vector<double>> noise);

/// Per-epoch mean SGNS loss per positive pair.
struct TrainingLog {
  std::vector<double> epoch_loss;
  std::vector<std::uint64_t> epoch_pairs;
};

/// Identifier of (config, corpus name, replicate) used to tag models.
std::string model_fingerprint(const TrainConfig& config, std::string_view corpus_name,
                              std::size_t replicate_index);

/// Trains skip-gram with negative sampling and returns the input-layer vectors.
EmbeddingModel train(const Corpus& corpus, const TrainConfig& config,
                     std::size_t replicate_index = 0, TrainingLog* log = nullptr);

/// Same as train() over an arbitrary sequence of documents (e.g. a bootstrap
/// sample expressed as pointers into a shared corpus).
EmbeddingModel train_documents(std::span<const Document* const> documents,
                               std::string_view corpus_name, const TrainConfig& config,
                               std::size_t replicate_index = 0, TrainingLog* log = nullptr);

using ReplicateSink = std::function<void(std::size_t replicate_index, const EmbeddingModel&)>;

/// Trains replicate i on bootstrap_sample(corpus, config.rng_seed, i) for every
/// i < ensemble_size and hands each model to `sink` as soon as it is done
/// (calls are serialized; order may vary when config.threads > 1). Models are
/// not retained.
void for_each_replicate(const Corpus& corpus, const TrainConfig& config, const ReplicateSink& sink);

/// Trains the full ensemble and returns it in replicate order.
std::vector<EmbeddingModel> train_ensemble(const Corpus& corpus, const TrainConfig& config,
                                           const ReplicateSink& sink = {});

}  // namespace seedscope
