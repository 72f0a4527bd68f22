#include "seedscope/embedding.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

namespace seedscope {

namespace {

void require_same_dimension(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw PreconditionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                            " vs " + std::to_string(b) + ")");
  }
}

float decode_le_float(const unsigned char* bytes) {
  std::uint32_t bits = 0;
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(&bits, bytes, sizeof(bits));
  } else {
    bits = static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
           (static_cast<std::uint32_t>(bytes[2]) << 16) |
           (static_cast<std::uint32_t>(bytes[3]) << 24);
  }
  return std::bit_cast<float>(bits);
}

void encode_le_float(float value, char* out) {
  const auto bits = std::bit_cast<std::uint32_t>(value);
  for (int i = 0; i < 4; ++i) out[i] = static_cast<char>((bits >> (8 * i)) & 0xFFU);
}

// Byte-offset-aware reader over a binary stream.
class ByteReader {
 public:
  explicit ByteReader(std::istream& in) : in_(in) {}

  std::uint64_t offset() const noexcept { return offset_; }

  int get() {
    const int c = in_.get();
    if (c != std::char_traits<char>::eof()) ++offset_;
    return c;
  }

  bool read(char* out, std::size_t n) {
    in_.read(out, static_cast<std::streamsize>(n));
    offset_ += static_cast<std::uint64_t>(in_.gcount());
    return static_cast<std::size_t>(in_.gcount()) == n;
  }

 private:
  std::istream& in_;
  std::uint64_t offset_ = 0;
};

struct Header {
  std::size_t count = 0;
  std::size_t dimension = 0;
};

Header parse_header(std::string_view line, const std::filesystem::path& path) {
  Header header;
  const char* first = line.data();
  const char* last = line.data() + line.size();
  while (first < last && *first == ' ') ++first;
  auto [p1, e1] = std::from_chars(first, last, header.count);
  if (e1 != std::errc{}) throw FormatError(path.string() + ": malformed header '" + std::string(line) + "'");
  while (p1 < last && *p1 == ' ') ++p1;
  auto [p2, e2] = std::from_chars(p1, last, header.dimension);
  if (e2 != std::errc{} || header.dimension == 0) {
    throw FormatError(path.string() + ": malformed header '" + std::string(line) + "'");
  }
  while (p2 < last && (*p2 == ' ' || *p2 == '\r')) ++p2;
  if (p2 != last) throw FormatError(path.string() + ": malformed header '" + std::string(line) + "'");
  return header;
}

void read_frequencies(const std::filesystem::path& sidecar, const std::vector<std::string>& words,
                      std::vector<std::uint64_t>& frequencies) {
  std::ifstream in(sidecar);
  if (!in) throw IoError("cannot open vocabulary sidecar: " + sidecar.string());
  WordIndex index;
  for (std::size_t i = 0; i < words.size(); ++i) index.emplace(words[i], i);
  frequencies.assign(words.size(), 0);
  std::vector<bool> seen(words.size(), false);
  std::string word;
  std::uint64_t count = 0;
  std::size_t rows = 0;
  while (in >> word >> count) {
    const auto it = index.find(word);
    if (it == index.end()) {
      throw FormatError(sidecar.string() + ": word '" + word + "' is not in the model");
    }
    if (seen[it->second]) throw FormatError(sidecar.string() + ": duplicate word '" + word + "'");
    seen[it->second] = true;
    frequencies[it->second] = count;
    ++rows;
  }
  if (!in.eof()) throw FormatError(sidecar.string() + ": malformed line after row " + std::to_string(rows));
  if (rows != words.size()) {
    throw FormatError(sidecar.string() + ": expected " + std::to_string(words.size()) +
                      " rows, found " + std::to_string(rows));
  }
}

void load_text(const std::filesystem::path& path, std::vector<std::string>& words, std::vector<float>& vectors,
                         Header& header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty model file");
  header = parse_header(line, path);
  words.reserve(header.count);
  vectors.reserve(header.count * header.dimension);
  std::size_t line_number = 1;
  std::uint64_t offset = line.size() + 1;
  while (words.size() < header.count && std::getline(in, line)) {
    ++line_number;
    const std::uint64_t line_offset = offset;
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto space = line.find(' ');
    if (space == std::string::npos || space == 0) {
      throw FormatError(path.string() + ":" + std::to_string(line_number) + " (byte " +
                        std::to_string(line_offset) + "): missing word or values");
    }
    words.push_back(line.substr(0, space));
    const char* p = line.data() + space;
    const char* last = line.data() + line.size();
    for (std::size_t d = 0; d < header.dimension; ++d) {
      while (p < last && *p == ' ') ++p;
      float value = 0.0F;
      auto [next, ec] = std::from_chars(p, last, value);
      if (ec != std::errc{}) {
        throw FormatError(path.string() + ":" + std::to_string(line_number) + " (byte " +
                          std::to_string(line_offset) + "): expected " +
                          std::to_string(header.dimension) + " values for '" + words.back() + "'");
      }
      vectors.push_back(value);
      p = next;
    }
    while (p < last && *p == ' ') ++p;
    if (p != last) {
      throw FormatError(path.string() + ":" + std::to_string(line_number) + " (byte " +
                        std::to_string(line_offset) + "): more than " +
                        std::to_string(header.dimension) + " values for '" + words.back() + "'");
    }
  }
  if (words.size() != header.count) {
    throw FormatError(path.string() + ": header declares " + std::to_string(header.count) +
                      " words but file ends after " + std::to_string(words.size()) + " (byte " +
                      std::to_string(offset) + ")");
  }
  for (std::string extra; std::getline(in, extra);) {
    if (!extra.empty() && extra != "\r") {
      throw FormatError(path.string() + ": data after the declared " +
                        std::to_string(header.count) + " words");
    }
  }
}

void load_binary(const std::filesystem::path& path, std::vector<std::string>& words,
                 std::vector<float>& vectors, Header& header) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open model file: " + path.string());
  ByteReader in(file);
  std::string line;
  for (int c = in.get(); c != '\n'; c = in.get()) {
    if (c == std::char_traits<char>::eof()) throw IoError(path.string() + ": truncated header");
    line.push_back(static_cast<char>(c));
  }
  header = parse_header(line, path);
  words.reserve(header.count);
  vectors.resize(header.count * header.dimension);
  std::vector<char> buffer(header.dimension * sizeof(float));
  for (std::size_t w = 0; w < header.count; ++w) {
    std::string word;
    int c = in.get();
    while (c == '\n' || c == '\r') c = in.get();  // optional separator after each row
    for (; c != ' '; c = in.get()) {
      if (c == std::char_traits<char>::eof()) {
        throw IoError(path.string() + ": truncated at byte " + std::to_string(in.offset()) +
                      " while reading word " + std::to_string(w));
      }
      word.push_back(static_cast<char>(c));
    }
    if (word.empty()) {
      throw FormatError(path.string() + ": empty word at byte " + std::to_string(in.offset()));
    }
    const std::uint64_t vector_offset = in.offset();
    if (!in.read(buffer.data(), buffer.size())) {
      throw IoError(path.string() + ": truncated at byte " + std::to_string(in.offset()) +
                    " in the vector of '" + word + "' (starts at byte " +
                    std::to_string(vector_offset) + ")");
    }
    const auto* bytes = reinterpret_cast<const unsigned char*>(buffer.data());
    for (std::size_t d = 0; d < header.dimension; ++d) {
      vectors[w * header.dimension + d] = decode_le_float(bytes + 4 * d);
    }
    words.push_back(std::move(word));
  }
  for (int c = in.get(); c != std::char_traits<char>::eof(); c = in.get()) {
    if (c != '\n' && c != '\r') {
      throw FormatError(path.string() + ": data after the declared " +
                        std::to_string(header.count) + " words (byte " +
                        std::to_string(in.offset() - 1) + ")");
    }
  }
}

}  // namespace

double Vector::norm() const noexcept { return std::sqrt(dot(values_, values_)); }

bool Vector::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

Vector Vector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw DegenerateError("cannot normalize a zero vector");
  Vector out = *this;
  out *= 1.0 / n;
  return out;
}

Vector& Vector::operator+=(const Vector& other) {
  require_same_dimension(size(), other.size(), "vector addition");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_dimension(size(), other.size(), "vector subtraction");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Vector& Vector::operator*=(double scale) {
  for (auto& v : values_) v *= scale;
  return *this;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_dimension(a.size(), b.size(), "dot");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  require_same_dimension(a.size(), b.size(), "cosine");
  const double na = std::sqrt(dot(a, a));
  const double nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) throw DegenerateError("cosine: zero vector");
  return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

EmbeddingModel::EmbeddingModel(std::vector<std::string> words, std::vector<float> vectors,
                               std::size_t dimension, std::vector<std::uint64_t> frequencies,
                               std::string fingerprint, bool normalize)
    : words_(std::move(words)),
      vectors_(std::move(vectors)),
      frequencies_(std::move(frequencies)),
      dimension_(dimension),
      fingerprint_(std::move(fingerprint)),
      normalize_(normalize) {
  if (dimension_ == 0 && !words_.empty()) throw PreconditionError("embedding dimension must be >= 1");
  if (vectors_.size() != words_.size() * dimension_) {
    throw FormatError("embedding model: " + std::to_string(words_.size()) + " words need " +
                      std::to_string(words_.size() * dimension_) + " values, got " +
                      std::to_string(vectors_.size()));
  }
  if (!frequencies_.empty() && frequencies_.size() != words_.size()) {
    throw FormatError("embedding model: frequency count does not match vocabulary size");
  }
  index_.reserve(words_.size());
  norms_.resize(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) {
      throw FormatError("embedding model: duplicate word '" + words_[i] + "'");
    }
    double sq = 0.0;
    for (std::size_t d = 0; d < dimension_; ++d) {
      const float v = vectors_[i * dimension_ + d];
      if (!std::isfinite(v)) {
        throw FormatError("embedding model: non-finite value in the vector of '" + words_[i] + "'");
      }
      sq += static_cast<double>(v) * static_cast<double>(v);
    }
    norms_[i] = std::sqrt(sq);
  }
}

std::optional<std::size_t> EmbeddingModel::index_of(std::string_view word) const {
  const auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const float> EmbeddingModel::raw_row(std::size_t index) const {
  if (index >= words_.size()) throw PreconditionError("embedding row index out of range");
  return std::span<const float>(vectors_).subspan(index * dimension_, dimension_);
}

Vector EmbeddingModel::metric_vector(std::size_t index) const {
  const auto row = raw_row(index);
  Vector out(dimension_);
  const double scale = (normalize_ && norms_[index] > 0.0) ? 1.0 / norms_[index] : 1.0;
  for (std::size_t d = 0; d < dimension_; ++d) out[d] = static_cast<double>(row[d]) * scale;
  return out;
}

std::optional<Vector> EmbeddingModel::lookup(std::string_view word) const {
  const auto index = index_of(word);
  if (!index) return std::nullopt;
  return metric_vector(*index);
}

std::uint64_t EmbeddingModel::frequency(std::size_t index) const {
  if (frequencies_.empty()) return 0;
  return frequencies_.at(index);
}

EmbeddingModel EmbeddingModel::with_normalization(bool normalize) const {
  EmbeddingModel copy = *this;
  copy.normalize_ = normalize;
  return copy;
}

EmbeddingModel EmbeddingModel::with_fingerprint(std::string fingerprint) const {
  EmbeddingModel copy = *this;
  copy.fingerprint_ = std::move(fingerprint);
  return copy;
}

ModelFormat parse_model_format(std::string_view text) {
  if (text == "word2vec-text") return ModelFormat::word2vec_text;
  if (text == "word2vec-binary") return ModelFormat::word2vec_binary;
  throw PreconditionError("unknown model format '" + std::string(text) +
                          "' (expected word2vec-text or word2vec-binary)");
}

std::string_view to_string(ModelFormat format) {
  return format == ModelFormat::word2vec_text ? "word2vec-text" : "word2vec-binary";
}

std::filesystem::path vocab_sidecar_path(const std::filesystem::path& model_path) {
  auto sidecar = model_path;
  sidecar += ".vocab";
  return sidecar;
}

EmbeddingModel load_model(const std::filesystem::path& path, ModelFormat format,
                          const LoadOptions& options) {
  std::vector<std::string> words;
  std::vector<float> vectors;
  Header header;
  if (format == ModelFormat::word2vec_text) {
    load_text(path, words, vectors, header);
  } else {
    load_binary(path, words, vectors, header);
  }
  std::vector<std::uint64_t> frequencies;
  const auto sidecar = vocab_sidecar_path(path);
  if (options.read_frequencies && std::filesystem::exists(sidecar)) {
    read_frequencies(sidecar, words, frequencies);
  }
  return EmbeddingModel(std::move(words), std::move(vectors), header.dimension,
                        std::move(frequencies), options.fingerprint, options.normalize);
}

void save_model(const EmbeddingModel& model, const std::filesystem::path& path,
                ModelFormat format) {
  for (const auto& word : model.words()) {
    if (word.find_first_of(" \t\n\r") != std::string::npos) {
      throw FormatError("cannot save word containing whitespace: '" + word + "'");
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write model file: " + path.string());
  out << model.size() << ' ' << model.dimension() << '\n';
  if (format == ModelFormat::word2vec_binary) {
    std::vector<char> buffer(model.dimension() * sizeof(float));
    for (std::size_t i = 0; i < model.size(); ++i) {
      const auto row = model.raw_row(i);
      for (std::size_t d = 0; d < row.size(); ++d) encode_le_float(row[d], buffer.data() + 4 * d);
      out << model.word(i) << ' ';
      out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
      out << '\n';
    }
  } else {
    char number[64];
    for (std::size_t i = 0; i < model.size(); ++i) {
      out << model.word(i);
      for (const float v : model.raw_row(i)) {
        const auto [end, ec] = std::to_chars(number, number + sizeof(number), v);
        (void)ec;
        out << ' ';
        out.write(number, end - number);
      }
      out << '\n';
    }
  }
  if (!out) throw IoError("write failed: " + path.string());

  if (model.has_frequencies()) {
    std::ofstream vocab(vocab_sidecar_path(path), std::ios::trunc);
    if (!vocab) throw IoError("cannot write vocabulary sidecar for " + path.string());
    for (std::size_t i = 0; i < model.size(); ++i) {
      vocab << model.word(i) << ' ' << model.frequency(i) << '\n';
    }
    if (!vocab) throw IoError("write failed: " + vocab_sidecar_path(path).string());
  }
}

MeanVector mean_vector(std::span<const std::string> words, const EmbeddingModel& model) {
  MeanVector result{Vector(model.dimension()), {}};
  std::size_t present = 0;
  for (const auto& word : words) {
    const auto index = model.index_of(word);
    if (!index) {
      result.dropped.push_back(word);
      continue;
    }
    result.vector += model.metric_vector(*index);
    ++present;
  }
  if (present == 0) {
    throw MissingWordError("mean_vector: none of the " + std::to_string(words.size()) +
                           " words is in the model");
  }
  result.vector *= 1.0 / static_cast<double>(present);
  return result;
}

std::vector<double> score_vocabulary(const EmbeddingModel& model, const Vector& direction) {
  require_same_dimension(model.dimension(), direction.size(), "score_vocabulary");
  const double direction_norm = direction.norm();
  if (direction_norm == 0.0) throw DegenerateError("ranking direction is the zero vector");
  std::vector<double> scores(model.size());
  const std::size_t dim = model.dimension();
  const auto data = model.raw_data();
  for (std::size_t i = 0; i < model.size(); ++i) {
    const float* row = data.data() + i * dim;
    double acc = 0.0;
    for (std::size_t d = 0; d < dim; ++d) acc += static_cast<double>(row[d]) * direction[d];
    const double n = model.row_norm(i);
    scores[i] = n > 0.0 ? std::clamp(acc / (n * direction_norm), -1.0, 1.0) : 0.0;
  }
  return scores;
}

RankedVocabulary rank_vocabulary(const EmbeddingModel& model, const Vector& direction) {
  const auto scores = score_vocabulary(model, direction);
  std::vector<std::size_t> order(model.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ranks_before(scores[a], model.word(a), scores[b], model.word(b));
  });
  RankedVocabulary ranked;
  ranked.reserve(order.size());
  for (const std::size_t i : order) ranked.push_back({model.word(i), scores[i]});
  return ranked;
}

TopBottom top_bottom(const RankedVocabulary& ranked, std::size_t k) {
  if (k > ranked.size()) {
    throw PreconditionError("top_bottom: k = " + std::to_string(k) + " exceeds vocabulary size " +
                            std::to_string(ranked.size()));
  }
  TopBottom out;
  out.top.assign(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k));
  out.bottom.assign(ranked.end() - static_cast<std::ptrdiff_t>(k), ranked.end());
  return out;
}

TopBottom extremes(const EmbeddingModel& model, const Vector& direction, std::size_t k) {
  if (k > model.size()) {
    throw PreconditionError("extremes: k = " + std::to_string(k) + " exceeds vocabulary size " +
                            std::to_string(model.size()));
  }
  if (2 * k >= model.size()) return top_bottom(rank_vocabulary(model, direction), k);

  const auto scores = score_vocabulary(model, direction);
  auto before = [&](std::size_t a, std::size_t b) {
    return ranks_before(scores[a], model.word(a), scores[b], model.word(b));
  };
  std::vector<std::size_t> order(model.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto kk = static_cast<std::ptrdiff_t>(k);
  std::partial_sort(order.begin(), order.begin() + kk, order.end(), before);
  TopBottom out;
  for (std::ptrdiff_t i = 0; i < kk; ++i) {
    const auto idx = order[static_cast<std::size_t>(i)];
    out.top.push_back({model.word(idx), scores[idx]});
  }
  // Bottom k: select the k last-ranked among the remainder, then restore ranked order.
  std::partial_sort(order.begin() + kk, order.begin() + 2 * kk, order.end(),
                    [&](std::size_t a, std::size_t b) { return before(b, a); });
  for (std::ptrdiff_t i = 2 * kk - 1; i >= kk; --i) {
    const auto idx = order[static_cast<std::size_t>(i)];
    out.bottom.push_back({model.word(idx), scores[idx]});
  }
  return out;
}

std::vector<Projection> project_words(const EmbeddingModel& model,
                                      std::span<const std::string> words,
                                      const Vector& direction) {
  require_same_dimension(model.dimension(), direction.size(), "project_words");
  if (direction.is_zero()) throw DegenerateError("projection direction is the zero vector");
  std::vector<Projection> out;
  out.reserve(words.size());
  for (const auto& word : words) {
    const auto index = model.index_of(word);
    Projection projection{word, std::nullopt};
    if (index) {
      const double n = model.row_norm(*index);
      projection.cosine = n > 0.0 ? cosine(model.metric_vector(*index), direction) : 0.0;
    }
    out.push_back(std::move(projection));
  }
  return out;
}

}  // namespace seedscope
