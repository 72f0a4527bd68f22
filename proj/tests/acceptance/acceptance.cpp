// One line per acceptance criterion; exits nonzero when any criterion fails.
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "checks.hpp"

namespace {

constexpr std::size_t kOracleInstances = 200;
constexpr std::size_t kPropertyCases = 1000;
constexpr double kToyMargin = 0.2;

struct Criterion {
  int number;
  std::string title;
  std::vector<checks::Result> results;
};

bool report(const Criterion& criterion) {
  bool passed = true;
  std::size_t cases = 0;
  std::string failure;
  for (const auto& r : criterion.results) {
    cases += r.cases;
    if (!r.passed && passed) failure = r.name + ": " + r.detail;
    passed = passed && r.passed;
  }
  std::printf("%s %d %s (%zu checks, %zu cases)%s%s\n", passed ? "PASS" : "FAIL", criterion.number,
              criterion.title.c_str(), criterion.results.size(), cases, passed ? "" : " ", failure.c_str());
  if (!passed) {
    for (const auto& r : criterion.results) {
      if (!r.passed) std::printf("  failed: %s: %s\n", r.name.c_str(), r.detail.c_str());
    }
  }
  return passed;
}

}  // namespace

int main() {
  const std::filesystem::path fixtures = SEEDSCOPE_FIXTURE_DIR;
  const std::filesystem::path scratch = SEEDSCOPE_SCRATCH_DIR;
  std::filesystem::create_directories(scratch);

  std::vector<Criterion> criteria;
  criteria.push_back({1,
                      "oracle equivalence",
                      {checks::pca_matches_eigen_oracle(kOracleInstances, 1),
                       checks::coherence_matches_sort_oracle(kOracleInstances, 2)}});
  criteria.push_back({2,
                      "properties",
                      {checks::cosine_symmetry_and_scale(kPropertyCases, 11),
                       checks::ranking_is_permutation(kPropertyCases, 12),
                       checks::spectrum_properties(kPropertyCases, 13),
                       checks::coherence_properties(kPropertyCases, 14),
                       checks::weat_duplication_invariance(kPropertyCases, 15),
                       checks::aggregation_properties(kPropertyCases, 16),
                       checks::normalize_set_idempotent(kPropertyCases, 17),
                       checks::shuffle_pairing_bijection(kPropertyCases, 18),
                       checks::generated_sets_in_band(kPropertyCases, 19),
                       checks::bootstrap_preserves_size(kPropertyCases, 20),
                       checks::stats_monotone_in_min_count(kPropertyCases, 21),
                       checks::preprocess_idempotent(kPropertyCases, 22)}});
  criteria.push_back({3,
                      "trainer correctness",
                      {checks::sgns_gradient_matches_finite_differences(kPropertyCases, 31),
                       checks::noise_distribution_matches(200000, 32),
                       checks::toy_loss_strictly_decreases(33),
                       checks::toy_similar_words_beat_baseline(33, kToyMargin),
                       checks::bootstrap_models_have_no_placeholders(34)}});
  criteria.push_back({4,
                      "fixture statistics and model round trips",
                      {checks::fixture_stats_match_hand_counts(fixtures),
                       checks::binary_round_trip_exact(200, 41, scratch),
                       checks::text_round_trip_close(200, 42, scratch)}});

  bool all = true;
  for (const auto& c : criteria) all = report(c) && all;
  return all ? 0 : 1;
}
