#include "seedscope/aggregate.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include <json.hpp>

#include "seedscope/csv.hpp"

namespace seedscope {

std::string_view to_string(Eligibility eligibility) {
  return eligibility == Eligibility::any_seeds_present ? "any-seeds-present" : "all-seeds-present";
}

Vector aggregate_embedding(std::string_view word, std::span<const EmbeddingModel> models) {
  std::optional<Vector> sum;
  std::size_t count = 0;
  for (const auto& model : models) {
    const auto v = model.lookup(word);
    if (!v) continue;
    if (!sum) {
      sum = *v;
    } else {
      *sum += *v;
    }
    ++count;
  }
  if (count == 0) {
    throw MissingWordError("word '" + std::string(word) + "' is in none of the " +
                           std::to_string(models.size()) + " models");
  }
  *sum *= 1.0 / static_cast<double>(count);
  return *sum;
}

std::size_t models_containing(std::string_view word, std::span<const EmbeddingModel> models) {
  return static_cast<std::size_t>(std::count_if(
      models.begin(), models.end(), [&](const EmbeddingModel& m) { return m.contains(word); }));
}

EmbeddingModel aggregate_model(std::span<const EmbeddingModel> models, std::string fingerprint) {
  if (models.empty()) throw PreconditionError("aggregate_model: no models");
  const std::size_t dim = models.front().dimension();
  const bool normalize = models.front().normalized();
  for (const auto& m : models) {
    if (m.dimension() != dim) throw PreconditionError("aggregate_model: models differ in dimension");
  }

  struct Accumulator {
    std::vector<double> sum;
    std::uint64_t frequency = 0;
    std::size_t count = 0;
  };
  std::map<std::string, Accumulator, std::less<>> union_vocabulary;
  for (const auto& model : models) {
    for (std::size_t i = 0; i < model.size(); ++i) {
      auto& acc = union_vocabulary[model.word(i)];
      if (acc.sum.empty()) acc.sum.assign(dim, 0.0);
      const Vector v = model.metric_vector(i);
      for (std::size_t d = 0; d < dim; ++d) acc.sum[d] += v[d];
      acc.frequency += model.frequency(i);
      ++acc.count;
    }
  }

  std::vector<const std::pair<const std::string, Accumulator>*> order;
  order.reserve(union_vocabulary.size());
  for (const auto& entry : union_vocabulary) order.push_back(&entry);
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    return a->second.frequency > b->second.frequency;
  });

  std::vector<std::string> words;
  std::vector<float> vectors;
  std::vector<std::uint64_t> frequencies;
  words.reserve(order.size());
  vectors.reserve(order.size() * dim);
  frequencies.reserve(order.size());
  for (const auto* entry : order) {
    words.push_back(entry->first);
    frequencies.push_back(entry->second.frequency);
    for (std::size_t d = 0; d < dim; ++d) {
      vectors.push_back(static_cast<float>(entry->second.sum[d] /
                                           static_cast<double>(entry->second.count)));
    }
  }
  return EmbeddingModel(std::move(words), std::move(vectors), dim, std::move(frequencies),
                        std::move(fingerprint), normalize);
}

bool is_eligible(const SeedSetPair& pair, const EmbeddingModel& model, Eligibility eligibility) {
  auto check = [&](const SeedSet& set) {
    if (eligibility == Eligibility::all_seeds_present) {
      return !set.seeds.empty() && std::all_of(set.seeds.begin(), set.seeds.end(),
                                               [&](const std::string& s) { return model.contains(s); });
    }
    return std::any_of(set.seeds.begin(), set.seeds.end(),
                       [&](const std::string& s) { return model.contains(s); });
  };
  return check(pair.set_a) && check(pair.set_b);
}

std::optional<double> eligible_mean(std::span<const ModelValue> values) {
  std::vector<double> present;
  for (const auto& v : values) {
    if (v.value) present.push_back(*v.value);
  }
  if (present.empty()) return std::nullopt;
  std::sort(present.begin(), present.end());
  double sum = 0.0;
  for (const double v : present) sum += v;
  return sum / static_cast<double>(present.size());
}

EnsembleReport aggregate_metric(std::string metric_name, const SeedSetPair& pair,
                                std::span<const EmbeddingModel> models, Eligibility eligibility,
                                const ModelMetric& metric) {
  if (models.empty()) throw PreconditionError("aggregate_metric: no models");
  EnsembleReport report;
  report.metric = std::move(metric_name);
  report.identifier = pair.pair_id;
  for (const auto& model : models) {
    ModelValue value{model.fingerprint(), std::nullopt, {}};
    if (!is_eligible(pair, model, eligibility)) {
      value.reason = std::string("not ") + std::string(to_string(eligibility));
    } else {
      try {
        value.value = metric(model);
      } catch (const Error& e) {
        value.reason = e.what();
      }
    }
    if (value.value) ++report.n_eligible;
    report.per_model.push_back(std::move(value));
  }
  report.aggregate = eligible_mean(report.per_model);
  return report;
}

void write_report_csv(std::span<const EnsembleReport> reports, std::ostream& out) {
  write_csv_row(out, {"metric", "identifier", "model_fingerprint", "value", "eligible", "reason"});
  for (const auto& report : reports) {
    for (const auto& v : report.per_model) {
      write_csv_row(out, {report.metric, report.identifier, v.model_fingerprint,
                          v.value ? format_real(*v.value) : "", v.value ? "1" : "0", v.reason});
    }
  }
}

std::string report_summary_json(std::span<const EnsembleReport> reports) {
  nlohmann::ordered_json root = nlohmann::ordered_json::array();
  for (const auto& report : reports) {
    nlohmann::ordered_json j;
    j["metric"] = report.metric;
    j["identifier"] = report.identifier;
    if (report.aggregate) {
      j["aggregate"] = *report.aggregate;
    } else {
      j["aggregate"] = nullptr;
    }
    j["n_eligible"] = report.n_eligible;
    j["n_models"] = report.per_model.size();
    root.push_back(std::move(j));
  }
  return root.dump(2);
}

}  // namespace seedscope
