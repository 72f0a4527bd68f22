#include "seedscope/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "seedscope/rng.hpp"

namespace seedscope {

namespace {

bool is_alnum(char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

char ascii_lower(char c) noexcept {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
  });
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::size_t utf8_length(std::string_view s) noexcept {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0U) != 0x80U;
  }));
}

std::size_t utf8_sequence_length(unsigned char lead) noexcept {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0U) == 0xC0U) return 2;
  if ((lead & 0xF0U) == 0xE0U) return 3;
  if ((lead & 0xF8U) == 0xF0U) return 4;
  return 1;
}

// Lowercases ASCII and maps each non-ASCII sequence to one ASCII byte:
// curly single quotes become an apostrophe, Unicode hyphens a hyphen,
// everything else a space.
std::string fold_to_ascii(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size();) {
    const auto lead = static_cast<unsigned char>(raw[i]);
    const std::size_t len = std::min(utf8_sequence_length(lead), raw.size() - i);
    if (len == 1) {
      out.push_back(lead < 0x80 ? ascii_lower(raw[i]) : ' ');
    } else {
      const std::string_view seq = raw.substr(i, len);
      if (seq == "\xE2\x80\x98" || seq == "\xE2\x80\x99") {
        out.push_back('\'');
      } else if (seq == "\xE2\x80\x90" || seq == "\xE2\x80\x91") {
        out.push_back('-');
      } else {
        out.push_back(' ');
      }
    }
    i += len;
  }
  return out;
}

std::string sanitize_id(std::string_view id) {
  std::string out(id);
  std::replace_if(out.begin(), out.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; },
                  ' ');
  return out;
}

std::string json_field_as_string(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  return value.dump();
}

void ingest_plain_lines(std::istream& in, const std::function<void(RawDocument&&)>& sink) {
  std::string line;
  RawDocument current;
  bool open = false;
  std::size_t ordinal = 0;
  auto flush = [&] {
    if (!open) return;
    current.id = "doc-" + std::to_string(ordinal++);
    sink(std::move(current));
    current = RawDocument{};
    open = false;
  };
  while (std::getline(in, line)) {
    if (is_blank(line)) {
      flush();
      continue;
    }
    if (open) current.text.push_back('\n');
    current.text += line;
    open = true;
  }
  flush();
}

void ingest_articles(std::istream& in, const IngestOptions& options,
                     const std::function<void(RawDocument&&)>& sink) {
  if (options.article_marker.empty()) {
    throw PreconditionError("article-delimited format requires a non-empty marker");
  }
  std::string line;
  RawDocument current;
  bool open = false;
  std::size_t ordinal = 0;
  auto flush = [&] {
    if (!open) return;
    if (current.id.empty()) current.id = "article-" + std::to_string(ordinal);
    ++ordinal;
    sink(std::move(current));
    current = RawDocument{};
    open = false;
  };
  while (std::getline(in, line)) {
    if (line.starts_with(options.article_marker)) {
      flush();
      current.id = std::string(trim(std::string_view(line).substr(options.article_marker.size())));
      open = true;
      continue;
    }
    if (!open) {
      // Text before the first marker forms its own document.
      if (is_blank(line)) continue;
      open = true;
    }
    if (!current.text.empty()) current.text.push_back('\n');
    current.text += line;
  }
  flush();
}

struct Review {
  std::string id;
  std::string text;
  std::string group;
};

// Parses one json-reviews line; returns false (with a warning) on malformed input.
bool parse_review(const std::string& line, std::size_t line_number, const IngestOptions& options,
                  Review& review, Diagnostics* diagnostics) {
  nlohmann::json record;
  try {
    record = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    warn(diagnostics, "line " + std::to_string(line_number) + ": malformed JSON (" + e.what() + ")");
    return false;
  }
  if (!record.is_object()) {
    warn(diagnostics, "line " + std::to_string(line_number) + ": record is not an object");
    return false;
  }
  const auto text = record.find(options.text_field);
  if (text == record.end() || !text->is_string()) {
    warn(diagnostics, "line " + std::to_string(line_number) + ": missing string field '" +
                          options.text_field + "'");
    return false;
  }
  review.text = text->get<std::string>();
  const auto id = record.find(options.id_field);
  review.id = id != record.end() ? json_field_as_string(*id)
                                 : "review-" + std::to_string(line_number);
  const auto group = record.find(options.group_field);
  if (group != record.end()) {
    review.group = json_field_as_string(*group);
  } else if (options.per_group > 0) {
    warn(diagnostics, "line " + std::to_string(line_number) + ": missing group field '" +
                          options.group_field + "'");
    return false;
  } else {
    review.group.clear();
  }
  return true;
}

template <typename Visitor>
void scan_reviews(const std::filesystem::path& path, const IngestOptions& options,
                  Diagnostics* diagnostics, Visitor&& visit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file: " + path.string());
  std::string line;
  std::size_t line_number = 0;
  Review review;
  while (std::getline(in, line)) {
    ++line_number;
    if (is_blank(line)) continue;
    if (!parse_review(line, line_number, options, review, diagnostics)) continue;
    if (utf8_length(review.text) < options.min_chars) continue;
    visit(review);
  }
}

void ingest_reviews(const std::filesystem::path& path, const IngestOptions& options,
                    const std::function<void(RawDocument&&)>& sink, Diagnostics* diagnostics) {
  if (options.per_group == 0) {
    scan_reviews(path, options, diagnostics,
                 [&](Review& r) { sink(RawDocument{std::move(r.id), std::move(r.text)}); });
    return;
  }

  // Two passes keep memory independent of corpus size: count reviews per
  // group, choose which ordinals survive, then stream again and emit them.
  std::vector<std::string> group_order;
  std::unordered_map<std::string, std::size_t> counts;
  scan_reviews(path, options, nullptr, [&](const Review& r) {
    auto [it, inserted] = counts.try_emplace(r.group, 0);
    if (inserted) group_order.push_back(r.group);
    ++it->second;
  });

  Rng rng = Rng::stream(options.rng_seed, 0, StreamPurpose::sampling);
  std::unordered_map<std::string, std::vector<bool>> keep;
  for (const auto& group : group_order) {
    const std::size_t n = counts[group];
    if (n < options.per_group) continue;
    std::vector<std::size_t> ordinals(n);
    for (std::size_t i = 0; i < n; ++i) ordinals[i] = i;
    for (std::size_t i = 0; i < options.per_group; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
      std::swap(ordinals[i], ordinals[j]);
    }
    std::vector<bool> mask(n, false);
    for (std::size_t i = 0; i < options.per_group; ++i) mask[ordinals[i]] = true;
    keep.emplace(group, std::move(mask));
  }

  std::unordered_map<std::string, std::size_t> seen;
  scan_reviews(path, options, diagnostics, [&](Review& r) {
    const auto it = keep.find(r.group);
    if (it == keep.end()) return;
    const std::size_t ordinal = seen[r.group]++;
    if (it->second[ordinal]) sink(RawDocument{std::move(r.id), std::move(r.text)});
  });
}

}  // namespace

std::size_t Document::token_count() const noexcept {
  std::size_t n = 0;
  for (const auto& sentence : sentences) n += sentence.size();
  return n;
}

CorpusFormat parse_corpus_format(std::string_view text) {
  if (text == "plain-lines") return CorpusFormat::plain_lines;
  if (text == "article-delimited") return CorpusFormat::article_delimited;
  if (text == "json-reviews") return CorpusFormat::json_reviews;
  throw PreconditionError("unknown corpus format '" + std::string(text) +
                          "' (expected plain-lines, article-delimited or json-reviews)");
}

std::string_view to_string(CorpusFormat format) {
  switch (format) {
    case CorpusFormat::plain_lines: return "plain-lines";
    case CorpusFormat::article_delimited: return "article-delimited";
    case CorpusFormat::json_reviews: return "json-reviews";
  }
  return "unknown";
}

void for_each_raw_document(const std::filesystem::path& path, const IngestOptions& options,
                           const std::function<void(RawDocument&&)>& sink,
                           Diagnostics* diagnostics) {
  if (options.format == CorpusFormat::json_reviews) {
    ingest_reviews(path, options, sink, diagnostics);
    return;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file: " + path.string());
  if (options.format == CorpusFormat::plain_lines) {
    ingest_plain_lines(in, sink);
  } else {
    ingest_articles(in, options, sink);
  }
  if (in.bad()) throw IoError("read error in corpus file: " + path.string());
}

RawCorpus ingest_corpus(const std::filesystem::path& path, const IngestOptions& options,
                        Diagnostics* diagnostics) {
  RawCorpus corpus;
  corpus.name = options.name.empty() ? path.stem().string() : options.name;
  for_each_raw_document(
      path, options, [&](RawDocument&& doc) { corpus.documents.push_back(std::move(doc)); },
      diagnostics);
  return corpus;
}

Document preprocess(std::string_view raw, const PreprocessRules& rules, std::string id,
                    std::string source_tag) {
  Document doc;
  doc.id = std::move(id);
  doc.source_tag = std::move(source_tag);
  if (utf8_length(raw) < rules.min_chars) {
    doc.filtered = true;
    return doc;
  }

  const std::string text = fold_to_ascii(raw);
  Sentence sentence;
  std::string token;
  auto end_token = [&] {
    if (token.empty()) return;
    sentence.push_back(std::move(token));
    token.clear();
  };
  auto end_sentence = [&] {
    end_token();
    if (sentence.empty()) return;
    doc.sentences.push_back(std::move(sentence));
    sentence.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (is_alnum(c)) {
      token.push_back(c);
    } else if (rules.joiners.find(c) != std::string::npos && !token.empty() &&
               is_alnum(token.back()) && i + 1 < text.size() && is_alnum(text[i + 1])) {
      token.push_back(c);
    } else if (rules.sentence_delimiters.find(c) != std::string::npos) {
      end_sentence();
    } else {
      end_token();
    }
  }
  end_sentence();
  doc.filtered = doc.sentences.empty();
  return doc;
}

Corpus preprocess_corpus(const RawCorpus& raw, const PreprocessRules& rules, unsigned threads) {
  Corpus corpus;
  corpus.name = raw.name;
  corpus.documents.resize(raw.documents.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      corpus.documents[i] = preprocess(raw.documents[i].text, rules, raw.documents[i].id, raw.name);
    }
  };
  const std::size_t n = raw.documents.size();
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  if (workers <= 1) {
    work(0, n);
    return corpus;
  }
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t begin = 0; begin < n; begin += chunk) {
      pool.emplace_back(work, begin, std::min(n, begin + chunk));
    }
  }
  return corpus;
}

std::string join_document(const Document& document) {
  std::string out;
  for (std::size_t s = 0; s < document.sentences.size(); ++s) {
    if (s > 0) out += ". ";
    const auto& sentence = document.sentences[s];
    for (std::size_t t = 0; t < sentence.size(); ++t) {
      if (t > 0) out.push_back(' ');
      out += sentence[t];
    }
  }
  return out;
}

void CorpusStatsAccumulator::add(const Document& document) {
  if (document.filtered) return;
  ++documents_;
  for (const auto& sentence : document.sentences) {
    words_ += sentence.size();
    for (const auto& token : sentence) ++counts_[token];
  }
}

CorpusStats CorpusStatsAccumulator::stats(std::size_t min_count) const {
  CorpusStats stats;
  stats.total_documents = documents_;
  stats.total_words = words_;
  const std::size_t threshold = std::max<std::size_t>(min_count, 1);
  stats.vocabulary_size = static_cast<std::size_t>(std::count_if(
      counts_.begin(), counts_.end(), [&](const auto& kv) { return kv.second >= threshold; }));
  if (documents_ > 0) {
    stats.mean_document_length = static_cast<double>(words_) / static_cast<double>(documents_);
  }
  return stats;
}

CorpusStats corpus_stats(const Corpus& corpus, std::size_t min_count) {
  CorpusStatsAccumulator accumulator;
  for (const auto& doc : corpus.documents) accumulator.add(doc);
  return accumulator.stats(min_count);
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t rng_seed,
                                           std::size_t replicate) {
  if (n == 0) throw PreconditionError("bootstrap_sample: corpus is empty");
  Rng rng = Rng::stream(rng_seed, replicate, StreamPurpose::bootstrap);
  std::vector<std::size_t> indices(n);
  for (auto& index : indices) index = static_cast<std::size_t>(rng.below(n));
  return indices;
}

Corpus bootstrap_sample(const Corpus& corpus, std::uint64_t rng_seed, std::size_t replicate) {
  const auto indices = bootstrap_indices(corpus.documents.size(), rng_seed, replicate);
  Corpus sample;
  sample.name = corpus.name;
  sample.documents.reserve(indices.size());
  for (const std::size_t i : indices) sample.documents.push_back(corpus.documents[i]);
  return sample;
}

void write_tokenized_header(std::string_view name, std::ostream& out) {
  out << "#seedscope-corpus\t1\t" << sanitize_id(name) << '\n';
}

void write_tokenized_document(const Document& document, std::ostream& out) {
  out << "#doc\t" << sanitize_id(document.id) << '\t' << (document.filtered ? 1 : 0) << '\n';
  for (const auto& sentence : document.sentences) {
    for (std::size_t t = 0; t < sentence.size(); ++t) {
      if (t > 0) out << ' ';
      out << sentence[t];
    }
    out << '\n';
  }
}

void write_tokenized(const Corpus& corpus, std::ostream& out) {
  write_tokenized_header(corpus.name, out);
  for (const auto& doc : corpus.documents) write_tokenized_document(doc, out);
}

Corpus read_tokenized(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open tokenized corpus: " + path.string());
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("#seedscope-corpus\t")) {
    throw FormatError(path.string() + ": missing tokenized corpus header");
  }
  Corpus corpus;
  const auto name_pos = line.find('\t', std::string_view("#seedscope-corpus\t").size());
  corpus.name = name_pos == std::string::npos ? std::string{} : line.substr(name_pos + 1);

  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.starts_with("#doc\t")) {
      const auto last_tab = line.rfind('\t');
      if (last_tab <= 4) throw FormatError(path.string() + ":" + std::to_string(line_number) +
                                           ": malformed document header");
      Document doc;
      doc.id = line.substr(5, last_tab - 5);
      doc.filtered = line.substr(last_tab + 1) == "1";
      doc.source_tag = corpus.name;
      corpus.documents.push_back(std::move(doc));
      continue;
    }
    if (corpus.documents.empty()) {
      throw FormatError(path.string() + ":" + std::to_string(line_number) +
                        ": tokens before the first document header");
    }
    Sentence sentence;
    std::istringstream tokens(line);
    for (std::string token; tokens >> token;) sentence.push_back(std::move(token));
    if (!sentence.empty()) corpus.documents.back().sentences.push_back(std::move(sentence));
  }
  return corpus;
}

}  // namespace seedscope
