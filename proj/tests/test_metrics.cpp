#include <doctest.h>

#include <cmath>

#include "checks.hpp"
#include "oracles.hpp"
#include "seedscope/metrics.hpp"

using namespace seedscope;

namespace {

SeedSet set_of(std::string id, std::vector<std::string> seeds) { return SeedSet{std::move(id), "", std::move(seeds), "", ""}; }

// a0..a2 lean toward +x, b0..b2 toward -x, fillers on the y axis.
EmbeddingModel axis_model() {
  return EmbeddingModel({"a0", "a1", "a2", "b0", "b1", "b2", "f0", "f1"},
                        {2, 0.1F, 3, -0.2F, 1, 0.3F, -2, 0.1F, -1, -0.4F, -3, 0.2F, 0, 1, 0.1F, -1}, 2);
}

SeedSetPair axis_pair() {
  return make_pair("axis", set_of("a", {"a0", "a1", "a2"}), set_of("b", {"b0", "b1", "b2"}));
}

}  // namespace

TEST_CASE("weat direction points from B to A") {
  const auto model = axis_model();
  const auto s = weat_subspace(axis_pair(), model);
  REQUIRE(s.components.size() == 1);
  CHECK(s.components[0].norm() == doctest::Approx(1.0));
  CHECK(s.components[0][0] > 0.99);
  CHECK(s.dropped_seeds.empty());
}

TEST_CASE("weat drops absent seeds and fails when a set vanishes") {
  const auto model = axis_model();
  auto pair = make_pair("p", set_of("a", {"a0", "ghost"}), set_of("b", {"b0"}));
  const auto s = weat_subspace(pair, model);
  CHECK(s.dropped_seeds == std::vector<std::string>{"ghost"});
  pair.set_a.seeds = {"ghost"};
  CHECK_THROWS_AS(weat_subspace(pair, model), MissingWordError);
}

TEST_CASE("identical means are degenerate") {
  const auto model = axis_model();
  const auto pair = make_pair("p", set_of("a", {"a0", "b0"}), set_of("b", {"b0", "a0"}));
  CHECK_THROWS_AS(weat_subspace(pair, model), DegenerateError);
}

TEST_CASE("pca on the axis model") {
  const auto model = axis_model();
  const auto s = pca_subspace(axis_pair(), model, 10);
  REQUIRE(s.components.size() == 2);
  CHECK(s.pairs_used == 3);
  CHECK(s.components[0][0] > 0.9);
  CHECK(s.explained_variance_ratios[0] > s.explained_variance_ratios[1]);
  CHECK(s.explained_variance_ratios[0] + s.explained_variance_ratios[1] == doctest::Approx(1.0));
  const auto spectrum = explained_variance_spectrum(axis_pair(), model, 4);
  REQUIRE(spectrum.size() == 4);
  CHECK(spectrum[2] == 0.0);
  CHECK(spectrum[3] == 0.0);
}

TEST_CASE("pca uses the alignment and needs a pairing") {
  const auto model = axis_model();
  auto pair = axis_pair();
  pair.pairing = Alignment{{0, 0}, {1, 1}};
  CHECK(pca_subspace(pair, model).pairs_used == 2);
  pair.pairing.reset();
  CHECK_THROWS(pca_subspace(pair, model));
  auto missing = axis_pair();
  missing.set_a.seeds = {"x", "y", "z"};
  missing.pairing = positional_alignment(3, 3);
  CHECK_THROWS(pca_subspace(missing, model));
}

TEST_CASE("pca and coherence agree with independent oracles") {
  const auto pca = checks::pca_matches_eigen_oracle(100, 1);
  INFO(pca.detail);
  CHECK(pca.passed);
  const auto coh = checks::coherence_matches_sort_oracle(100, 2);
  INFO(coh.detail);
  CHECK(coh.passed);
}

TEST_CASE("vocabulary ranks and coherence on the axis model") {
  const auto model = axis_model();
  const Vector x{1, 0};
  const std::vector<std::string> words{"a0", "b2", "f0"};
  const auto ranks = vocabulary_ranks(model, x, words);
  CHECK(ranks[0] < ranks[2]);
  CHECK(ranks[2] < ranks[1]);
  const std::vector<std::string> ghost{"ghost"};
  CHECK_THROWS_AS(vocabulary_ranks(model, x, ghost), MissingWordError);

  const auto s = weat_subspace(axis_pair(), model);
  const double c = coherence(axis_pair(), s, model);
  // A occupies ranks 1..3 and B ranks 6..8 of 8 words.
  CHECK(c == doctest::Approx(5.0 / 8.0));
  CHECK_THROWS(coherence(axis_pair(), s, model, 1));
}

TEST_CASE("coherence requires every seed") {
  const auto model = axis_model();
  auto pair = axis_pair();
  const auto s = weat_subspace(pair, model);
  pair.set_a.seeds.push_back("ghost");
  CHECK_THROWS_AS(coherence(pair, s, model), MissingWordError);
}

TEST_CASE("set similarity and bias measurement") {
  const auto model = axis_model();
  CHECK(set_similarity(axis_pair(), model) < -0.9);
  const auto a = set_of("a", {"a0", "a1"});
  CHECK(bias_measurement(a, "a2", model) > 0.9);
  CHECK_THROWS_AS(bias_measurement(a, "ghost", model), MissingWordError);
}

TEST_CASE("normalization switch changes the metric vectors") {
  const EmbeddingModel model({"p", "q", "r"}, {10, 0, 0, 1, -1, 0}, 2);
  const auto pair = make_pair("x", set_of("a", {"p", "q"}), set_of("b", {"r"}));
  // Unit rows: mean(A) - B = (1.5, 0.5). Raw rows: (6, 0.5).
  const auto n = weat_subspace(pair, model).components[0];
  const auto r = weat_subspace(pair, model.with_normalization(false)).components[0];
  CHECK(n[1] / n[0] == doctest::Approx(0.5 / 1.5));
  CHECK(r[1] / r[0] == doctest::Approx(0.5 / 6.0));
}

TEST_CASE("metric record json round trip") {
  MetricRecord record{"p", "fp", "pca-pairs", "coherence", 0.25, {"x", "y"}, 3};
  const auto back = metric_record_from_json(to_json(record));
  CHECK(back.pair_id == "p");
  CHECK(back.value == 0.25);
  CHECK(back.dropped_seeds == record.dropped_seeds);
  CHECK(back.n_components == 3);
  record.value.reset();
  CHECK_FALSE(metric_record_from_json(to_json(record)).value.has_value());
}

TEST_CASE("subspace method names") {
  CHECK(parse_subspace_method("weat-diff") == SubspaceMethod::weat_diff);
  CHECK(to_string(SubspaceMethod::pca_pairs) == "pca-pairs");
  CHECK_THROWS(parse_subspace_method("svd"));
}
