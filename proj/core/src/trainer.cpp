#include "seedscope/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace seedscope {

namespace {

double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow.
double softplus(double x) noexcept {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// label - sigmoid(score): the step direction of the logistic objective for
// one (input, output, label) term.
double logistic_step(double score, double label) noexcept { return label - sigmoid(score); }

// Plain accesses for single-threaded training.
struct PlainAccess {
  static float load(const float& x) noexcept { return x; }
  static void add(float& x, float delta) noexcept { x += delta; }
};

// Hogwild accesses: relaxed atomics so concurrent updates are well-defined
// but unsynchronized (lost updates are accepted).
struct RelaxedAccess {
  static float load(const float& x) noexcept {
    return std::atomic_ref<const float>(x).load(std::memory_order_relaxed);
  }
  static void add(float& x, float delta) noexcept {
    std::atomic_ref<float> ref(x);
    ref.store(ref.load(std::memory_order_relaxed) + delta, std::memory_order_relaxed);
  }
};

// Vocabulary-encoded training data: flat token ids plus sentence offsets.
struct EncodedCorpus {
  std::vector<std::uint32_t> tokens;
  std::vector<std::size_t> sentence_begin;  // size = sentences + 1

  std::size_t sentences() const noexcept { return sentence_begin.size() - 1; }
};

EncodedCorpus encode(std::span<const Document* const> documents, const Vocabulary& vocabulary) {
  EncodedCorpus encoded;
  encoded.sentence_begin.push_back(0);
  for (const Document* doc : documents) {
    for (const auto& sentence : doc->sentences) {
      const std::size_t before = encoded.tokens.size();
      for (const auto& token : sentence) {
        if (const auto index = vocabulary.index_of(token)) {
          encoded.tokens.push_back(static_cast<std::uint32_t>(*index));
        }
      }
      if (encoded.tokens.size() > before) encoded.sentence_begin.push_back(encoded.tokens.size());
    }
  }
  return encoded;
}

std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

class SgnsTrainer {
 public:
  SgnsTrainer(const Vocabulary& vocabulary, const EncodedCorpus& data, const TrainConfig& config,
              std::size_t replicate_index)
      : vocabulary_(vocabulary),
        data_(data),
        config_(config),
        replicate_(replicate_index),
        dim_(config.dimension),
        input_(vocabulary.size() * config.dimension),
        output_(vocabulary.size() * config.dimension, 0.0F) {
    Rng init = Rng::stream(config.rng_seed, replicate_index, StreamPurpose::training);
    const double scale = 1.0 / static_cast<double>(dim_);
    for (auto& v : input_) v = static_cast<float>((init.uniform() - 0.5) * scale);
    if (config.subsampling_threshold) {
      const double threshold =
          *config.subsampling_threshold * static_cast<double>(vocabulary.total_tokens());
      keep_probability_.resize(vocabulary.size());
      for (std::size_t i = 0; i < vocabulary.size(); ++i) {
        const double f = static_cast<double>(vocabulary.frequency(i));
        keep_probability_[i] = threshold > 0.0 ? (std::sqrt(f / threshold) + 1.0) * threshold / f : 1.0;
      }
    }
    total_work_ = static_cast<double>(data.tokens.size()) * static_cast<double>(config.epochs);
  }

  void run(TrainingLog* log) {
    const bool parallel = config_.mode == TrainingMode::throughput && config_.threads > 1 &&
                          data_.sentences() > 1;
    const unsigned workers = parallel ? std::min<unsigned>(config_.threads,
                                                           static_cast<unsigned>(data_.sentences()))
                                      : 1U;
    for (std::size_t epoch = 0; epoch < config_.epochs; ++epoch) {
      std::vector<EpochTally> tallies(workers);
      if (workers == 1) {
        Rng rng = Rng::stream(mix64(config_.rng_seed) ^ epoch, replicate_, StreamPurpose::training);
        run_shard<PlainAccess>(0, data_.sentences(), rng, tallies[0], log != nullptr);
      } else {
        std::vector<std::jthread> pool;
        const std::size_t n = data_.sentences();
        const std::size_t chunk = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
          const std::size_t begin = std::min(n, w * chunk);
          const std::size_t end = std::min(n, begin + chunk);
          pool.emplace_back([this, begin, end, w, epoch, &tallies, log] {
            Rng rng = Rng::stream(mix64(config_.rng_seed) ^ epoch ^ (std::uint64_t{w} << 32),
                                  replicate_, StreamPurpose::training);
            run_shard<RelaxedAccess>(begin, end, rng, tallies[w], log != nullptr);
          });
        }
      }
      if (log != nullptr) {
        double loss = 0.0;
        std::uint64_t pairs = 0;
        for (const auto& t : tallies) {
          loss += t.loss;
          pairs += t.pairs;
        }
        log->epoch_loss.push_back(pairs > 0 ? loss / static_cast<double>(pairs) : 0.0);
        log->epoch_pairs.push_back(pairs);
      }
    }
  }

  const std::vector<float>& input_vectors() const noexcept { return input_; }

 private:
  struct EpochTally {
    double loss = 0.0;
    std::uint64_t pairs = 0;
  };

  float current_learning_rate() const noexcept {
    const double progress =
        total_work_ > 0.0 ? static_cast<double>(processed_.load(std::memory_order_relaxed)) / total_work_
                          : 0.0;
    const double lr = config_.learning_rate -
                      (config_.learning_rate - config_.min_learning_rate) * std::min(progress, 1.0);
    return static_cast<float>(std::max(lr, config_.min_learning_rate));
  }

  template <typename Access>
  void run_shard(std::size_t first_sentence, std::size_t last_sentence, Rng& rng,
                 EpochTally& tally, bool track_loss) {
    std::vector<std::uint32_t> sentence;
    std::vector<float> gradient(dim_);
    for (std::size_t s = first_sentence; s < last_sentence; ++s) {
      const std::size_t begin = data_.sentence_begin[s];
      const std::size_t end = data_.sentence_begin[s + 1];
      sentence.clear();
      for (std::size_t t = begin; t < end; ++t) {
        const std::uint32_t id = data_.tokens[t];
        if (!keep_probability_.empty() && keep_probability_[id] < rng.uniform()) continue;
        sentence.push_back(id);
      }
      const float lr = current_learning_rate();
      const auto length = static_cast<std::ptrdiff_t>(sentence.size());
      for (std::ptrdiff_t i = 0; i < length; ++i) {
        const auto reduced = static_cast<std::ptrdiff_t>(rng.below(config_.window));
        const std::ptrdiff_t span = static_cast<std::ptrdiff_t>(config_.window) - reduced;
        for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, i - span);
             j <= std::min(length - 1, i + span); ++j) {
          if (j == i) continue;
          train_pair<Access>(sentence[static_cast<std::size_t>(i)],
                             sentence[static_cast<std::size_t>(j)], lr, rng, gradient, tally,
                             track_loss);
        }
      }
      processed_.fetch_add(end - begin, std::memory_order_relaxed);
    }
  }

  // One positive update for (center, context) and `negatives` noise updates.
  template <typename Access>
  void train_pair(std::uint32_t center, std::uint32_t context, float lr, Rng& rng,
                  std::vector<float>& gradient, EpochTally& tally, bool track_loss) {
    float* in = input_.data() + static_cast<std::size_t>(center) * dim_;
    std::fill(gradient.begin(), gradient.end(), 0.0F);
    for (std::size_t k = 0; k <= config_.negatives; ++k) {
      std::size_t target = context;
      double label = 1.0;
      if (k > 0) {
        target = vocabulary_.sample_noise(rng);
        if (target == context) continue;
        label = 0.0;
      }
      float* out = output_.data() + target * dim_;
      double score = 0.0;
      for (std::size_t d = 0; d < dim_; ++d) {
        score += static_cast<double>(Access::load(in[d])) * Access::load(out[d]);
      }
      if (track_loss) tally.loss += label > 0.0 ? softplus(-score) : softplus(score);
      const auto g = static_cast<float>(logistic_step(score, label) * lr);
      for (std::size_t d = 0; d < dim_; ++d) {
        gradient[d] += g * Access::load(out[d]);
        Access::add(out[d], g * Access::load(in[d]));
      }
    }
    for (std::size_t d = 0; d < dim_; ++d) Access::add(in[d], gradient[d]);
    ++tally.pairs;
  }

  const Vocabulary& vocabulary_;
  const EncodedCorpus& data_;
  const TrainConfig& config_;
  std::size_t replicate_;
  std::size_t dim_;
  std::vector<float> input_;
  std::vector<float> output_;
  std::vector<double> keep_probability_;
  double total_work_ = 0.0;
  std::atomic<std::uint64_t> processed_{0};
};

}  // namespace

TrainingMode parse_training_mode(std::string_view text) {
  if (text == "deterministic") return TrainingMode::deterministic;
  if (text == "throughput") return TrainingMode::throughput;
  throw PreconditionError("unknown training mode '" + std::string(text) +
                          "' (expected deterministic or throughput)");
}

std::string_view to_string(TrainingMode mode) {
  return mode == TrainingMode::deterministic ? "deterministic" : "throughput";
}

void TrainConfig::validate() const {
  if (dimension < 1) throw PreconditionError("train: dimension must be >= 1");
  if (epochs < 1) throw PreconditionError("train: epochs must be >= 1");
  if (window < 1) throw PreconditionError("train: window must be >= 1");
  if (ensemble_size < 1) throw PreconditionError("train: ensemble_size must be >= 1");
  if (!(learning_rate > 0.0) || !(min_learning_rate >= 0.0) || min_learning_rate > learning_rate) {
    throw PreconditionError("train: need 0 <= min_learning_rate <= learning_rate, learning_rate > 0");
  }
  if (subsampling_threshold && !(*subsampling_threshold > 0.0)) {
    throw PreconditionError("train: subsampling threshold must be positive");
  }
  if (threads < 1) throw PreconditionError("train: threads must be >= 1");
}

std::string TrainConfig::canonical() const {
  std::ostringstream out;
  out.precision(17);
  out << "dimension=" << dimension << ";epochs=" << epochs << ";window=" << window
      << ";negatives=" << negatives << ";min_count=" << min_count
      << ";learning_rate=" << learning_rate << ";min_learning_rate=" << min_learning_rate
      << ";ensemble_size=" << ensemble_size << ";rng_seed=" << rng_seed << ";subsampling=";
  if (subsampling_threshold) {
    out << *subsampling_threshold;
  } else {
    out << "off";
  }
  out << ";mode=" << to_string(mode);
  return out.str();
}

Vocabulary Vocabulary::build(std::span<const Document* const> documents, std::size_t min_count) {
  std::unordered_map<std::string_view, std::uint64_t> counts;
  for (const Document* doc : documents) {
    for (const auto& sentence : doc->sentences) {
      for (const auto& token : sentence) ++counts[token];
    }
  }
  const std::uint64_t threshold = std::max<std::size_t>(min_count, 1);
  std::vector<std::pair<std::string_view, std::uint64_t>> kept;
  for (const auto& [word, count] : counts) {
    if (count >= threshold) kept.emplace_back(word, count);
  }
  if (kept.empty()) {
    throw PreconditionError("vocabulary is empty (no token occurs at least " +
                            std::to_string(threshold) + " times)");
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocabulary vocabulary;
  vocabulary.words_.reserve(kept.size());
  vocabulary.frequencies_.reserve(kept.size());
  for (const auto& [word, count] : kept) {
    vocabulary.index_.emplace(std::string(word), vocabulary.words_.size());
    vocabulary.words_.emplace_back(word);
    vocabulary.frequencies_.push_back(count);
    vocabulary.total_tokens_ += count;
  }
  vocabulary.build_noise_table();
  return vocabulary;
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view word) const {
  const auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::build_noise_table() {
  const std::size_t n = words_.size();
  noise_probabilities_.resize(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    noise_probabilities_[i] = std::pow(static_cast<double>(frequencies_[i]), kNoisePower);
    total += noise_probabilities_[i];
  }
  for (auto& p : noise_probabilities_) p /= total;

  // Vose's alias method.
  alias_threshold_.assign(n, 1.0);
  alias_index_.resize(n);
  std::vector<double> scaled(n);
  std::vector<std::size_t> small;
  std::vector<std::size_t> large;
  for (std::size_t i = 0; i < n; ++i) {
    alias_index_[i] = i;
    scaled[i] = noise_probabilities_[i] * static_cast<double>(n);
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    alias_threshold_[s] = scaled[s];
    alias_index_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
}

std::size_t Vocabulary::sample_noise(Rng& rng) const {
  const auto column = static_cast<std::size_t>(rng.below(words_.size()));
  return rng.uniform() < alias_threshold_[column] ? column : alias_index_[column];
}

Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_count) {
  std::vector<const Document*> docs;
  docs.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) docs.push_back(&doc);
  return Vocabulary::build(docs, min_count);
}

SgnsGradient sgns_gradient(std::span<const double> center, std::span<const double> context,
                           std::span<const std::vector<double>> noise) {
  const std::size_t dim = center.size();
  if (context.size() != dim) throw PreconditionError("sgns_gradient: dimension mismatch");
  SgnsGradient out;
  out.center.assign(dim, 0.0);
  out.context.assign(dim, 0.0);

  const double positive = dot(center, context);
  out.loss += softplus(-positive);
  // dL/dscore = -(label - sigmoid(score)).
  const double g_pos = -logistic_step(positive, 1.0);
  for (std::size_t d = 0; d < dim; ++d) {
    out.center[d] += g_pos * context[d];
    out.context[d] = g_pos * center[d];
  }
  for (const auto& n : noise) {
    if (n.size() != dim) throw PreconditionError("sgns_gradient: dimension mismatch");
    const double score = dot(center, n);
    out.loss += softplus(score);
    const double g = -logistic_step(score, 0.0);
    std::vector<double> grad(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      out.center[d] += g * n[d];
      grad[d] = g * center[d];
    }
    out.noise.push_back(std::move(grad));
  }
  return out;
}

std::string model_fingerprint(const TrainConfig& config, std::string_view corpus_name,
                              std::size_t replicate_index) {
  const std::string key =
      config.canonical() + "|" + std::string(corpus_name) + "|" + std::to_string(replicate_index);
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(fnv1a(key)));
  return hex;
}

EmbeddingModel train_documents(std::span<const Document* const> documents,
                               std::string_view corpus_name, const TrainConfig& config,
                               std::size_t replicate_index, TrainingLog* log) {
  config.validate();
  if (documents.empty()) throw PreconditionError("train: corpus is empty");
  const Vocabulary vocabulary = Vocabulary::build(documents, config.min_count);
  const EncodedCorpus data = encode(documents, vocabulary);
  SgnsTrainer trainer(vocabulary, data, config, replicate_index);
  trainer.run(log);
  return EmbeddingModel(vocabulary.words(), trainer.input_vectors(), config.dimension,
                        vocabulary.frequencies(),
                        model_fingerprint(config, corpus_name, replicate_index));
}

EmbeddingModel train(const Corpus& corpus, const TrainConfig& config, std::size_t replicate_index,
                     TrainingLog* log) {
  std::vector<const Document*> docs;
  docs.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) docs.push_back(&doc);
  return train_documents(docs, corpus.name, config, replicate_index, log);
}

void for_each_replicate(const Corpus& corpus, const TrainConfig& config, const ReplicateSink& sink) {
  config.validate();
  if (corpus.documents.empty()) throw PreconditionError("train_ensemble: corpus is empty");

  auto train_one = [&](std::size_t replicate) {
    const auto indices =
        bootstrap_indices(corpus.documents.size(), config.rng_seed, replicate);
    std::vector<const Document*> sample;
    sample.reserve(indices.size());
    for (const std::size_t i : indices) sample.push_back(&corpus.documents[i]);
    return train_documents(sample, corpus.name, config, replicate);
  };

  const unsigned workers =
      config.mode == TrainingMode::deterministic
          ? static_cast<unsigned>(std::min<std::size_t>(config.threads, config.ensemble_size))
          : 1U;
  if (workers <= 1) {
    for (std::size_t r = 0; r < config.ensemble_size; ++r) {
      const EmbeddingModel model = train_one(r);
      if (sink) sink(r, model);
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex sink_mutex;
  std::exception_ptr failure;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < config.ensemble_size; r = next++) {
          try {
            const EmbeddingModel model = train_one(r);
            const std::lock_guard lock(sink_mutex);
            if (failure) return;
            if (sink) sink(r, model);
          } catch (...) {
            const std::lock_guard lock(sink_mutex);
            if (!failure) failure = std::current_exception();
            return;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<EmbeddingModel> train_ensemble(const Corpus& corpus, const TrainConfig& config,
                                           const ReplicateSink& sink) {
  std::vector<EmbeddingModel> models(config.ensemble_size);
  for_each_replicate(corpus, config, [&](std::size_t replicate, const EmbeddingModel& model) {
    models[replicate] = model;
    if (sink) sink(replicate, model);
  });
  return models;
}

}  // namespace seedscope
