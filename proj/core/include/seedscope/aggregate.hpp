#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seedscope/embedding.hpp"
#include "seedscope/seeds.hpp"

namespace seedscope {

enum class Eligibility {
  /// Each seed set has at least one seed in the model.
  any_seeds_present,
  /// Every seed of both sets is in the model (required for coherence).
  all_seeds_present,
};

std::string_view to_string(Eligibility eligibility);

/// Componentwise mean of the word's metric vectors over exactly the models
/// that contain it. Throws MissingWordError when no model does.
Vector aggregate_embedding(std::string_view word, std::span<const EmbeddingModel> models);

/// Model over the union vocabulary whose vectors are aggregate_embedding()
/// results and whose frequencies are summed over the ensemble. Words are
/// ordered by descending summed frequency, then lexicographically.
EmbeddingModel aggregate_model(std::span<const EmbeddingModel> models,
                               std::string fingerprint = "aggregate");

/// Number of ensemble models containing `word`.
std::size_t models_containing(std::string_view word, std::span<const EmbeddingModel> models);

bool is_eligible(const SeedSetPair& pair, const EmbeddingModel& model, Eligibility eligibility);

struct ModelValue {
  std::string model_fingerprint;
  std::optional<double> value;
  /// Why the model was ineligible (empty when a value is present).
  std::string reason;
};

struct EnsembleReport {
  std::string metric;
  std::string identifier;
  std::vector<ModelValue> per_model;
  /// Mean of the eligible values; empty when none is eligible.
  std::optional<double> aggregate;
  std::size_t n_eligible = 0;
};

using ModelMetric = std::function<double(const EmbeddingModel&)>;

/// Evaluates `metric` on every model that satisfies `eligibility` for `pair`
/// and averages the results. A metric that throws seedscope::Error on an
/// eligible model marks that model ineligible with the error message.
EnsembleReport aggregate_metric(std::string metric_name, const SeedSetPair& pair,
                                std::span<const EmbeddingModel> models, Eligibility eligibility,
                                const ModelMetric& metric);

/// Order-independent mean (values are summed in sorted order).
std::optional<double> eligible_mean(std::span<const ModelValue> values);

/// One CSV row per (identifier, model) with a header row.
void write_report_csv(std::span<const EnsembleReport> reports, std::ostream& out);
/// JSON array with one summary object per identifier.
std::string report_summary_json(std::span<const EnsembleReport> reports);

}  // namespace seedscope
