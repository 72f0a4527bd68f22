#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "checks.hpp"
#include "seedscope/embedding.hpp"

namespace fs = std::filesystem;
using namespace seedscope;

namespace {

const fs::path kScratch = SEEDSCOPE_SCRATCH_DIR;

fs::path write_scratch(const std::string& name, const std::string& content) {
  fs::create_directories(kScratch);
  const auto path = kScratch / name;
  std::ofstream(path, std::ios::binary) << content;
  return path;
}

std::string float_bytes(std::initializer_list<float> values) {
  std::string out;
  for (const float v : values) {
    char b[4];
    std::memcpy(b, &v, 4);
    out.append(b, 4);
  }
  return out;
}

EmbeddingModel small_model() {
  return EmbeddingModel({"north", "south", "east", "zero"}, {1, 0, -1, 0, 0, 1, 0, 0}, 2, {5, 4, 3, 1});
}

}  // namespace

TEST_CASE("cosine basics") {
  CHECK(cosine(Vector{1, 0}, Vector{0, 1}) == doctest::Approx(0.0));
  CHECK(cosine(Vector{1, 1}, Vector{2, 2}) == doctest::Approx(1.0));
  CHECK(cosine(Vector{1, 0}, Vector{-3, 0}) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(cosine(Vector{0, 0}, Vector{1, 0}), DegenerateError);
  CHECK_THROWS(cosine(Vector{1, 0}, Vector{1, 0, 0}));
}

TEST_CASE("model construction validates input") {
  CHECK_THROWS(EmbeddingModel({"a", "a"}, {1, 2}, 1));
  CHECK_THROWS(EmbeddingModel({"a"}, {1, 2}, 1));
  CHECK_THROWS(EmbeddingModel({"a"}, {std::numeric_limits<float>::quiet_NaN()}, 1));
}

TEST_CASE("metric vectors are unit length unless normalization is off") {
  const EmbeddingModel m({"a"}, {3, 4}, 2);
  CHECK(m.lookup("a")->norm() == doctest::Approx(1.0));
  CHECK(m.row_norm(0) == doctest::Approx(5.0));
  const auto raw = m.with_normalization(false);
  CHECK((*raw.lookup("a"))[0] == doctest::Approx(3.0));
  CHECK_FALSE(m.lookup("b").has_value());
}

TEST_CASE("zero rows score zero and ties break lexicographically") {
  const auto m = small_model();
  const auto ranked = rank_vocabulary(m, Vector{1, 0});
  REQUIRE(ranked.size() == 4);
  CHECK(ranked[0].word == "north");
  CHECK(ranked[1].word == "east");
  CHECK(ranked[1].score == 0.0);
  CHECK(ranked[2].word == "zero");
  CHECK(ranked[3].word == "south");
}

TEST_CASE("top_bottom edges") {
  const auto ranked = rank_vocabulary(small_model(), Vector{1, 0});
  const auto none = top_bottom(ranked, 0);
  CHECK(none.top.empty());
  CHECK(none.bottom.empty());
  const auto two = top_bottom(ranked, 2);
  CHECK(two.bottom[0].word == "zero");
  CHECK(two.bottom[1].word == "south");
  CHECK_THROWS_AS(top_bottom(ranked, 5), PreconditionError);
  CHECK_THROWS_AS(extremes(small_model(), Vector{1, 0}, 5), PreconditionError);
}

TEST_CASE("mean_vector drops absent words") {
  const auto m = small_model();
  const std::vector<std::string> words{"north", "missing", "east"};
  const auto mean = mean_vector(words, m);
  CHECK(mean.dropped == std::vector<std::string>{"missing"});
  CHECK(mean.vector[0] == doctest::Approx(0.5));
  CHECK(mean.vector[1] == doctest::Approx(0.5));
  const std::vector<std::string> absent{"nope"};
  CHECK_THROWS_AS(mean_vector(absent, m), MissingWordError);
}

TEST_CASE("project_words reports absent words") {
  const std::vector<std::string> words{"north", "ghost"};
  const auto p = project_words(small_model(), words, Vector{1, 0});
  CHECK(*p[0].cosine == doctest::Approx(1.0));
  CHECK_FALSE(p[1].cosine.has_value());
}

TEST_CASE("binary parser accepts rows with and without newline separators") {
  const std::string with_newlines =
      "2 2\nalpha " + float_bytes({1.0F, 2.0F}) + "\nbeta " + float_bytes({-1.5F, 0.25F}) + "\n";
  const std::string packed = "2 2\nalpha " + float_bytes({1.0F, 2.0F}) + "beta " + float_bytes({-1.5F, 0.25F});
  for (const auto& content : {with_newlines, packed}) {
    const auto m = load_model(write_scratch("layout.bin", content), ModelFormat::word2vec_binary);
    REQUIRE(m.size() == 2);
    CHECK(m.word(1) == "beta");
    CHECK(m.raw_row(1)[0] == -1.5F);
    CHECK(m.raw_row(1)[1] == 0.25F);
  }
}

TEST_CASE("truncated binary file reports a byte offset") {
  const auto path = write_scratch("truncated.bin", "2 2\nalpha " + float_bytes({1.0F, 2.0F}) + "\nbeta " + float_bytes({1.0F}));
  try {
    load_model(path, ModelFormat::word2vec_binary);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("truncated at byte") != std::string::npos);
  }
}

TEST_CASE("text parser and malformed headers") {
  const auto m = load_model(write_scratch("ok.txt", "2 3\na 1 2 3\nb -1 0.5 1e-3\n"), ModelFormat::word2vec_text);
  CHECK(m.dimension() == 3);
  CHECK(m.raw_row(1)[2] == doctest::Approx(1e-3));
  CHECK_THROWS(load_model(write_scratch("bad.txt", "two 3\n"), ModelFormat::word2vec_text));
  CHECK_THROWS(load_model(write_scratch("short.txt", "2 3\na 1 2 3\nb 1 2\n"), ModelFormat::word2vec_text));
  CHECK_THROWS_AS(load_model(kScratch / "none.txt", ModelFormat::word2vec_text), IoError);
}

TEST_CASE("frequency sidecar is written and read") {
  const auto m = small_model();
  fs::create_directories(kScratch);
  const auto path = kScratch / "freq.bin";
  save_model(m, path, ModelFormat::word2vec_binary);
  CHECK(fs::exists(vocab_sidecar_path(path)));
  const auto back = load_model(path, ModelFormat::word2vec_binary);
  CHECK(back.frequencies() == m.frequencies());
  LoadOptions no_freq;
  no_freq.read_frequencies = false;
  CHECK_FALSE(load_model(path, ModelFormat::word2vec_binary, no_freq).has_frequencies());
}

TEST_CASE("round trips") {
  const auto binary = checks::binary_round_trip_exact(50, 7, kScratch);
  INFO(binary.detail);
  CHECK(binary.passed);
  const auto text = checks::text_round_trip_close(50, 8, kScratch);
  INFO(text.detail);
  CHECK(text.passed);
}

TEST_CASE("model format names") {
  CHECK(parse_model_format("word2vec-binary") == ModelFormat::word2vec_binary);
  CHECK(to_string(ModelFormat::word2vec_text) == "word2vec-text");
  CHECK_THROWS(parse_model_format("glove"));
}
