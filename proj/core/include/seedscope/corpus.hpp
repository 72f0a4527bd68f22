#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "seedscope/error.hpp"

namespace seedscope {

using Sentence = std::vector<std::string>;

/// A preprocessed document. Tokens are lowercase, non-empty and consist of
/// [a-z0-9] plus joiner characters that sit between two alphanumerics.
struct Document {
  std::string id;
  std::vector<Sentence> sentences;
  std::string source_tag;
  /// Set when the raw text was too short or produced no tokens.
  bool filtered = false;

  std::size_t token_count() const noexcept;
  friend bool operator==(const Document&, const Document&) = default;
};

struct Corpus {
  std::string name;
  std::vector<Document> documents;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

struct RawDocument {
  std::string id;
  std::string text;
};

/// Documents as grouped by a format adapter, before preprocessing.
struct RawCorpus {
  std::string name;
  std::vector<RawDocument> documents;
};

enum class CorpusFormat {
  plain_lines,        ///< blank-line separated blocks
  article_delimited,  ///< a marker line opens each article
  json_reviews,       ///< one JSON object per line
};

CorpusFormat parse_corpus_format(std::string_view text);
std::string_view to_string(CorpusFormat format);

struct IngestOptions {
  CorpusFormat format = CorpusFormat::plain_lines;
  /// Corpus name; defaults to the file stem.
  std::string name;
  /// article-delimited: a line starting with this prefix opens a new article.
  std::string article_marker = "URL:";
  /// json-reviews field names.
  std::string text_field = "review_text";
  std::string group_field = "book_id";
  std::string id_field = "review_id";
  /// json-reviews: reviews with fewer raw characters are dropped before
  /// group sampling.
  std::size_t min_chars = 0;
  /// json-reviews: when non-zero, keep exactly this many reviews per group
  /// (sampled without replacement) and drop groups that have fewer.
  std::size_t per_group = 0;
  std::uint64_t rng_seed = 42;
};

/// Streams raw documents in file order. Malformed records are skipped and
/// reported through `diagnostics` with their line number.
void for_each_raw_document(const std::filesystem::path& path, const IngestOptions& options,
                           const std::function<void(RawDocument&&)>& sink,
                           Diagnostics* diagnostics = nullptr);

RawCorpus ingest_corpus(const std::filesystem::path& path, const IngestOptions& options,
                        Diagnostics* diagnostics = nullptr);

struct PreprocessRules {
  /// Characters that end a sentence.
  std::string sentence_delimiters = ".!?";
  /// Characters kept only between two alphanumerics (e-mail, don't).
  std::string joiners = "-'";
  /// Raw documents shorter than this many code points are marked filtered.
  std::size_t min_chars = 0;
};

/// Lowercases, replaces every character outside [a-z0-9] (and in-word joiners)
/// with whitespace, splits sentences on the delimiter set and tokens on
/// whitespace. Curly quotes and Unicode hyphens are folded to ASCII first.
Document preprocess(std::string_view raw, const PreprocessRules& rules, std::string id = {},
                    std::string source_tag = {});

/// Preprocesses every document; output order equals input order for any
/// thread count.
Corpus preprocess_corpus(const RawCorpus& raw, const PreprocessRules& rules,
                         unsigned threads = 1);

/// Inverse of tokenization: sentences joined by ". ", tokens by spaces.
std::string join_document(const Document& document);

struct CorpusStats {
  std::size_t total_documents = 0;
  std::size_t total_words = 0;
  std::size_t vocabulary_size = 0;
  double mean_document_length = 0.0;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

/// Statistics over non-filtered documents. The vocabulary counts tokens
/// occurring at least max(min_count, 1) times.
CorpusStats corpus_stats(const Corpus& corpus, std::size_t min_count);

/// Incremental form of corpus_stats() for streamed documents.
class CorpusStatsAccumulator {
 public:
  void add(const Document& document);
  CorpusStats stats(std::size_t min_count) const;
  /// Token counts over the non-filtered documents added so far.
  const std::unordered_map<std::string, std::size_t>& counts() const noexcept { return counts_; }

 private:
  std::size_t documents_ = 0;
  std::size_t words_ = 0;
  std::unordered_map<std::string, std::size_t> counts_;
};

/// Document indices of bootstrap replicate `replicate`: n draws with
/// replacement from [0, n).
std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t rng_seed,
                                           std::size_t replicate);

Corpus bootstrap_sample(const Corpus& corpus, std::uint64_t rng_seed, std::size_t replicate);

/// Tokenized on-disk form written by `seedscope preprocess`.
void write_tokenized(const Corpus& corpus, std::ostream& out);
void write_tokenized_document(const Document& document, std::ostream& out);
void write_tokenized_header(std::string_view name, std::ostream& out);
Corpus read_tokenized(const std::filesystem::path& path);

}  // namespace seedscope
