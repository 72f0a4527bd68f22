#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seedscope/error.hpp"

namespace seedscope {

/// Dense real vector used by every metric computation.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t dimension, double fill = 0.0) : values_(dimension, fill) {}
  explicit Vector(std::vector<double> values) : values_(std::move(values)) {}
  Vector(std::initializer_list<double> values) : values_(values) {}

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  double norm() const noexcept;
  bool is_zero() const noexcept;
  /// Copy scaled to unit length; throws DegenerateError for the zero vector.
  Vector normalized() const;

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double scale);
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator*(Vector a, double s) { return a *= s; }
  friend Vector operator-(Vector a) { return a *= -1.0; }
  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> values_;
};

double dot(std::span<const double> a, std::span<const double> b);

/// dot(a,b)/(|a||b|). Throws on dimension mismatch or a zero vector.
double cosine(std::span<const double> a, std::span<const double> b);
inline double cosine(const Vector& a, const Vector& b) { return cosine(a.values(), b.values()); }

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

using WordIndex = std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>>;

/// Immutable vocabulary -> vector map.
///
/// Raw vectors are stored as loaded or trained. Metric lookups return
/// unit-normalized vectors unless normalization is switched off, in which case
/// the raw vectors are used as-is.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;

  /// `vectors` is row-major with `words.size()` rows of `dimension` floats.
  /// Throws on duplicate words, non-finite entries or a size mismatch.
  EmbeddingModel(std::vector<std::string> words, std::vector<float> vectors,
                 std::size_t dimension, std::vector<std::uint64_t> frequencies = {},
                 std::string fingerprint = {}, bool normalize = true);

  std::size_t size() const noexcept { return words_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }
  bool empty() const noexcept { return words_.empty(); }

  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::string& word(std::size_t index) const { return words_.at(index); }
  std::optional<std::size_t> index_of(std::string_view word) const;
  bool contains(std::string_view word) const { return index_.find(word) != index_.end(); }

  std::span<const float> raw_row(std::size_t index) const;
  std::span<const float> raw_data() const noexcept { return vectors_; }
  /// Euclidean norm of the raw row.
  double row_norm(std::size_t index) const { return norms_.at(index); }

  /// Vector used by metrics (unit length when normalization is on).
  Vector metric_vector(std::size_t index) const;
  std::optional<Vector> lookup(std::string_view word) const;

  bool has_frequencies() const noexcept { return !frequencies_.empty(); }
  std::uint64_t frequency(std::size_t index) const;
  const std::vector<std::uint64_t>& frequencies() const noexcept { return frequencies_; }

  const std::string& fingerprint() const noexcept { return fingerprint_; }
  bool normalized() const noexcept { return normalize_; }

  /// Same vectors with the metric normalization switched.
  EmbeddingModel with_normalization(bool normalize) const;
  EmbeddingModel with_fingerprint(std::string fingerprint) const;

 private:
  std::vector<std::string> words_;
  std::vector<float> vectors_;
  std::vector<double> norms_;
  std::vector<std::uint64_t> frequencies_;
  WordIndex index_;
  std::size_t dimension_ = 0;
  std::string fingerprint_;
  bool normalize_ = true;
};

enum class ModelFormat { word2vec_text, word2vec_binary };

ModelFormat parse_model_format(std::string_view text);
std::string_view to_string(ModelFormat format);

struct LoadOptions {
  bool normalize = true;
  /// Read "<path>.vocab" (lines "word count") when it exists.
  bool read_frequencies = true;
  std::string fingerprint;
};

EmbeddingModel load_model(const std::filesystem::path& path, ModelFormat format,
                          const LoadOptions& options = {});
/// Writes the model and, when it carries frequencies, a "<path>.vocab" sidecar.
void save_model(const EmbeddingModel& model, const std::filesystem::path& path,
                ModelFormat format);

std::filesystem::path vocab_sidecar_path(const std::filesystem::path& model_path);

struct MeanVector {
  Vector vector;
  /// Words that were absent from the model and therefore omitted.
  std::vector<std::string> dropped;
};

/// Mean of the metric vectors of the words present in `model`.
/// Throws MissingWordError when no word is present.
MeanVector mean_vector(std::span<const std::string> words, const EmbeddingModel& model);

struct RankedWord {
  std::string word;
  double score = 0.0;
  friend bool operator==(const RankedWord&, const RankedWord&) = default;
};

/// Vocabulary in descending cosine order; ties broken lexicographically.
using RankedVocabulary = std::vector<RankedWord>;

/// Cosine of every vocabulary row against `direction` (0 for zero rows).
std::vector<double> score_vocabulary(const EmbeddingModel& model, const Vector& direction);

/// Strict ranking order: higher score first, then lexicographically smaller word.
inline bool ranks_before(double score_a, std::string_view word_a, double score_b,
                         std::string_view word_b) {
  if (score_a != score_b) return score_a > score_b;
  return word_a < word_b;
}

RankedVocabulary rank_vocabulary(const EmbeddingModel& model, const Vector& direction);

struct TopBottom {
  RankedVocabulary top;
  /// Last k entries in ranked (descending) order.
  RankedVocabulary bottom;
};

TopBottom top_bottom(const RankedVocabulary& ranked, std::size_t k);

/// Same result as top_bottom(rank_vocabulary(...), k) using partial selection.
TopBottom extremes(const EmbeddingModel& model, const Vector& direction, std::size_t k);

struct Projection {
  std::string word;
  /// Empty when the word is absent from the model.
  std::optional<double> cosine;
};

std::vector<Projection> project_words(const EmbeddingModel& model,
                                      std::span<const std::string> words,
                                      const Vector& direction);

}  // namespace seedscope
