#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "checks.hpp"
#include "seedscope/corpus.hpp"

namespace fs = std::filesystem;
using namespace seedscope;

namespace {

const fs::path kFixtures = SEEDSCOPE_FIXTURE_DIR;
const fs::path kScratch = SEEDSCOPE_SCRATCH_DIR;

fs::path write_scratch(const std::string& name, const std::string& content) {
  fs::create_directories(kScratch);
  const auto path = kScratch / name;
  std::ofstream(path, std::ios::binary) << content;
  return path;
}

std::vector<std::string> tokens(const Document& doc) {
  std::vector<std::string> out;
  for (const auto& s : doc.sentences) out.insert(out.end(), s.begin(), s.end());
  return out;
}

}  // namespace

TEST_CASE("preprocess lowercases, strips punctuation and splits sentences") {
  const auto doc = preprocess("Hello, World! It's 2024... e-mail me -now- 'quoted'", {});
  REQUIRE(doc.sentences.size() == 3);
  CHECK(doc.sentences[0] == Sentence{"hello", "world"});
  CHECK(doc.sentences[1] == Sentence{"it's", "2024"});
  CHECK(doc.sentences[2] == Sentence{"e-mail", "me", "now", "quoted"});
  CHECK_FALSE(doc.filtered);
}

TEST_CASE("joiners survive only between alphanumerics") {
  const auto doc = preprocess("well-known -edge- rock'n'roll don't '' --", {});
  CHECK(tokens(doc) == std::vector<std::string>{"well-known", "edge", "rock'n'roll", "don't"});
}

TEST_CASE("curly quotes and unicode hyphens fold to ascii, other non-ascii splits words") {
  const auto doc = preprocess("It’s e‐mail café naïve", {});
  CHECK(tokens(doc) == std::vector<std::string>{"it's", "e-mail", "caf", "na", "ve"});
}

TEST_CASE("documents below min_chars or without tokens are filtered") {
  PreprocessRules rules;
  rules.min_chars = 10;
  CHECK(preprocess("short", rules).filtered);
  CHECK_FALSE(preprocess("long enough text", rules).filtered);
  CHECK(preprocess("... !!! ???", {}).filtered);
  CHECK(preprocess("", {}).filtered);
}

TEST_CASE("min_chars counts code points") {
  PreprocessRules rules;
  rules.min_chars = 4;
  CHECK(preprocess("ééa", rules).filtered);
  CHECK_FALSE(preprocess("éééa", rules).filtered);
}

TEST_CASE("plain-lines ingestion splits on blank lines") {
  IngestOptions options;
  const auto raw = ingest_corpus(kFixtures / "mini_corpus.txt", options);
  REQUIRE(raw.documents.size() == 4);
  CHECK(raw.documents[0].id == "doc-0");
  CHECK(raw.documents[3].id == "doc-3");
  CHECK(raw.name == "mini_corpus");
}

TEST_CASE("article-delimited ingestion uses the marker line as id") {
  IngestOptions options;
  options.format = CorpusFormat::article_delimited;
  const auto raw = ingest_corpus(kFixtures / "articles.txt", options);
  REQUIRE(raw.documents.size() == 2);
  CHECK(raw.documents[0].id == "http://example.com/a");
  CHECK(raw.documents[0].text == "First article text. Second sentence here.");
  CHECK(raw.documents[1].text == "Another article.");
}

TEST_CASE("json-reviews ingestion skips malformed lines with a warning") {
  IngestOptions options;
  options.format = CorpusFormat::json_reviews;
  Diagnostics diagnostics;
  const auto raw = ingest_corpus(kFixtures / "reviews.jsonl", options, &diagnostics);
  REQUIRE(raw.documents.size() == 3);
  CHECK(raw.documents[0].id == "r1");
  CHECK(raw.documents[2].id == "r3");
  REQUIRE(diagnostics.count() == 1);
  CHECK(diagnostics.warnings[0].find("line 3") != std::string::npos);
}

TEST_CASE("json-reviews min_chars and per-group sampling") {
  IngestOptions options;
  options.format = CorpusFormat::json_reviews;
  options.min_chars = 10;
  CHECK(ingest_corpus(kFixtures / "reviews.jsonl", options).documents.size() == 2);

  std::string lines;
  for (int g = 0; g < 3; ++g) {
    for (int i = 0; i < 4 + g; ++i) {
      lines += R"({"review_id": ")" + std::to_string(g) + "-" + std::to_string(i) +
               R"(", "book_id": )" + std::to_string(g) + R"(, "review_text": "text"})" + "\n";
    }
  }
  const auto path = write_scratch("groups.jsonl", lines);
  IngestOptions sampling;
  sampling.format = CorpusFormat::json_reviews;
  sampling.per_group = 5;
  const auto raw = ingest_corpus(path, sampling);
  // Group 0 has 4 reviews and is dropped; groups 1 and 2 keep exactly 5.
  REQUIRE(raw.documents.size() == 10);
  std::size_t from_group_1 = 0;
  for (const auto& d : raw.documents) {
    CHECK(d.id[0] != '0');
    if (d.id[0] == '1') ++from_group_1;
  }
  CHECK(from_group_1 == 5);
  CHECK(ingest_corpus(path, sampling).documents.size() == 10);
  const auto again = ingest_corpus(path, sampling);
  for (std::size_t i = 0; i < raw.documents.size(); ++i) CHECK(raw.documents[i].id == again.documents[i].id);
}

TEST_CASE("missing corpus file names the path") {
  IngestOptions options;
  try {
    ingest_corpus(kFixtures / "absent.txt", options);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("absent.txt") != std::string::npos);
  }
}

TEST_CASE("fixture statistics equal hand counts") {
  const auto result = checks::fixture_stats_match_hand_counts(kFixtures);
  INFO(result.detail);
  CHECK(result.passed);
}

TEST_CASE("streaming accumulator equals corpus_stats") {
  const auto corpus = preprocess_corpus(ingest_corpus(kFixtures / "mini_corpus.txt", {}), {});
  CorpusStatsAccumulator acc;
  for (const auto& d : corpus.documents) acc.add(d);
  for (std::size_t m = 0; m < 5; ++m) CHECK(acc.stats(m) == corpus_stats(corpus, m));
}

TEST_CASE("parallel preprocessing preserves document order") {
  RawCorpus raw{"par", {}};
  for (int i = 0; i < 257; ++i) raw.documents.push_back({"d" + std::to_string(i), "Doc number " + std::to_string(i) + "."});
  const auto serial = preprocess_corpus(raw, {}, 1);
  for (unsigned threads : {2U, 3U, 8U}) CHECK(preprocess_corpus(raw, {}, threads) == serial);
}

TEST_CASE("tokenized corpus round trip") {
  const auto corpus = preprocess_corpus(ingest_corpus(kFixtures / "mini_corpus.txt", {}), {});
  Corpus with_filtered = corpus;
  with_filtered.documents.push_back(preprocess("", {}, "empty\tid", "mini_corpus"));
  fs::create_directories(kScratch);
  const auto path = kScratch / "mini.tok";
  {
    std::ofstream out(path, std::ios::binary);
    write_tokenized(with_filtered, out);
  }
  auto back = read_tokenized(path);
  CHECK(back.name == with_filtered.name);
  REQUIRE(back.documents.size() == with_filtered.documents.size());
  CHECK(back.documents.back().filtered);
  CHECK(back.documents.back().id == "empty id");
  for (std::size_t i = 0; i + 1 < back.documents.size(); ++i) CHECK(back.documents[i] == with_filtered.documents[i]);
}

TEST_CASE("read_tokenized rejects a file without header") {
  const auto path = write_scratch("bad.tok", "hello world\n");
  CHECK_THROWS_AS(read_tokenized(path), FormatError);
}

TEST_CASE("bootstrap sampling is seeded and order independent") {
  const auto a = bootstrap_indices(100, 42, 3);
  const auto b = bootstrap_indices(100, 42, 3);
  CHECK(a == b);
  CHECK(bootstrap_indices(100, 42, 4) != a);
  CHECK(bootstrap_indices(100, 43, 3) != a);
  for (const auto i : a) CHECK(i < 100);
  CHECK_THROWS_AS(bootstrap_indices(0, 42, 0), PreconditionError);
}

TEST_CASE("corpus format names") {
  CHECK(parse_corpus_format("json-reviews") == CorpusFormat::json_reviews);
  CHECK(to_string(CorpusFormat::article_delimited) == "article-delimited");
  CHECK_THROWS_AS(parse_corpus_format("xml"), PreconditionError);
}
