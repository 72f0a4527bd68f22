#include "seedscope/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>
#include <json.hpp>

namespace seedscope {

namespace {

// Singular values below this fraction of the largest are treated as zero.
constexpr double kRankTolerance = 1e-10;

void append_unique(std::vector<std::string>& into, const std::vector<std::string>& words) {
  for (const auto& w : words) {
    if (std::find(into.begin(), into.end(), w) == into.end()) into.push_back(w);
  }
}

MeanVector set_mean(const SeedSet& set, const EmbeddingModel& model) {
  try {
    return mean_vector(set.seeds, model);
  } catch (const MissingWordError&) {
    throw MissingWordError("seed set '" + set.id + "' has no seed in the model");
  }
}

}  // namespace

SubspaceMethod parse_subspace_method(std::string_view text) {
  if (text == "weat" || text == "weat-diff") return SubspaceMethod::weat_diff;
  if (text == "pca" || text == "pca-pairs") return SubspaceMethod::pca_pairs;
  throw PreconditionError("unknown subspace method '" + std::string(text) +
                          "' (expected weat-diff or pca-pairs)");
}

std::string_view to_string(SubspaceMethod method) {
  return method == SubspaceMethod::weat_diff ? "weat-diff" : "pca-pairs";
}

BiasSubspace weat_subspace(const SeedSetPair& pair, const EmbeddingModel& model) {
  const MeanVector a = set_mean(pair.set_a, model);
  const MeanVector b = set_mean(pair.set_b, model);
  Vector difference = a.vector - b.vector;
  if (difference.norm() < 1e-12) {
    throw DegenerateError("weat_subspace: seed sets of pair '" + pair.pair_id +
                          "' have identical mean vectors");
  }
  BiasSubspace subspace;
  subspace.method = SubspaceMethod::weat_diff;
  subspace.components.push_back(difference.normalized());
  append_unique(subspace.dropped_seeds, a.dropped);
  append_unique(subspace.dropped_seeds, b.dropped);
  return subspace;
}

BiasSubspace pca_subspace(const SeedSetPair& pair, const EmbeddingModel& model,
                          std::size_t n_components) {
  if (!pair.pairing) {
    throw PreconditionError("pca_subspace: pair '" + pair.pair_id + "' has no element pairing");
  }
  validate_alignment(*pair.pairing, pair.set_a.seeds.size(), pair.set_b.seeds.size());

  BiasSubspace subspace;
  subspace.method = SubspaceMethod::pca_pairs;
  const std::size_t dim = model.dimension();
  std::vector<Vector> halves;
  Vector summed_difference(dim);
  for (const auto& [ia, ib] : *pair.pairing) {
    const auto& word_a = pair.set_a.seeds[ia];
    const auto& word_b = pair.set_b.seeds[ib];
    const auto va = model.lookup(word_a);
    const auto vb = model.lookup(word_b);
    if (!va || !vb) {
      if (!va) append_unique(subspace.dropped_seeds, {word_a});
      if (!vb) append_unique(subspace.dropped_seeds, {word_b});
      continue;
    }
    // a - midpoint = (a - b) / 2 and b - midpoint = -(a - b) / 2.
    const Vector difference = *va - *vb;
    summed_difference += difference;
    halves.push_back(difference * 0.5);
  }
  if (halves.empty()) {
    throw MissingWordError("pca_subspace: pair '" + pair.pair_id +
                           "' has no aligned pair with both seeds in the model");
  }
  subspace.pairs_used = halves.size();

  Eigen::MatrixXd stacked(static_cast<Eigen::Index>(2 * halves.size()),
                          static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < halves.size(); ++i) {
    for (std::size_t d = 0; d < dim; ++d) {
      stacked(static_cast<Eigen::Index>(2 * i), static_cast<Eigen::Index>(d)) = halves[i][d];
      stacked(static_cast<Eigen::Index>(2 * i + 1), static_cast<Eigen::Index>(d)) = -halves[i][d];
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeThinV);
  const Eigen::VectorXd& singular = svd.singularValues();
  const double total = singular.squaredNorm();
  if (singular.size() == 0 || !(total > 0.0)) {
    throw DegenerateError("pca_subspace: all half vectors of pair '" + pair.pair_id +
                          "' are zero");
  }
  std::size_t rank = 0;
  while (rank < static_cast<std::size_t>(singular.size()) &&
         singular(static_cast<Eigen::Index>(rank)) > kRankTolerance * singular(0)) {
    ++rank;
  }
  const std::size_t keep = std::min(n_components, rank);
  for (std::size_t c = 0; c < keep; ++c) {
    const auto column = static_cast<Eigen::Index>(c);
    Vector component(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      component[d] = svd.matrixV()(static_cast<Eigen::Index>(d), column);
    }
    double orientation = dot(component.values(), summed_difference.values());
    if (std::abs(orientation) < 1e-12) {
      const auto largest = std::max_element(component.begin(), component.end(), [](double x, double y) {
        return std::abs(x) < std::abs(y);
      });
      orientation = *largest;
    }
    if (orientation < 0.0) component *= -1.0;
    subspace.components.push_back(component.normalized());
    const double s = singular(column);
    subspace.explained_variance_ratios.push_back(s * s / total);
  }
  return subspace;
}

std::vector<double> explained_variance_spectrum(const SeedSetPair& pair, const EmbeddingModel& model,
                                                std::size_t n) {
  auto ratios = pca_subspace(pair, model, n).explained_variance_ratios;
  ratios.resize(n, 0.0);
  return ratios;
}

std::vector<std::size_t> vocabulary_ranks(const EmbeddingModel& model, const Vector& direction,
                                          std::span<const std::string> words) {
  const auto scores = score_vocabulary(model, direction);
  std::vector<std::size_t> ranks;
  ranks.reserve(words.size());
  for (const auto& word : words) {
    const auto index = model.index_of(word);
    if (!index) throw MissingWordError("word '" + word + "' is not in the model");
    const double score = scores[*index];
    std::size_t ahead = 0;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (ranks_before(scores[j], model.word(j), score, word)) ++ahead;
    }
    ranks.push_back(ahead + 1);
  }
  return ranks;
}

double coherence(const SeedSetPair& pair, const BiasSubspace& subspace,
                 const EmbeddingModel& model, std::size_t pc_index) {
  if (model.empty()) throw PreconditionError("coherence: model vocabulary is empty");
  if (pc_index >= subspace.components.size()) {
    throw PreconditionError("coherence: component " + std::to_string(pc_index) +
                            " requested but the subspace has " +
                            std::to_string(subspace.components.size()));
  }
  std::vector<std::string> missing;
  for (const auto* set : {&pair.set_a, &pair.set_b}) {
    for (const auto& seed : set->seeds) {
      if (!model.contains(seed)) missing.push_back(seed);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw MissingWordError("coherence: pair '" + pair.pair_id + "' has seeds missing from the model: " + list);
  }
  if (pair.set_a.seeds.empty() || pair.set_b.seeds.empty()) {
    throw PreconditionError("coherence: both seed sets must be non-empty");
  }
  const Vector& direction = subspace.components[pc_index];
  auto mean_rank = [&](const SeedSet& set) {
    const auto ranks = vocabulary_ranks(model, direction, set.seeds);
    double sum = 0.0;
    for (const auto r : ranks) sum += static_cast<double>(r);
    return sum / static_cast<double>(ranks.size());
  };
  return std::abs(mean_rank(pair.set_a) - mean_rank(pair.set_b)) /
         static_cast<double>(model.size());
}

double set_similarity(const SeedSetPair& pair, const EmbeddingModel& model) {
  const MeanVector a = set_mean(pair.set_a, model);
  const MeanVector b = set_mean(pair.set_b, model);
  return cosine(a.vector, b.vector);
}

double bias_measurement(const SeedSet& set, std::string_view target_word,
                        const EmbeddingModel& model) {
  const auto target = model.lookup(target_word);
  if (!target) {
    throw MissingWordError("target word '" + std::string(target_word) + "' is not in the model");
  }
  return cosine(set_mean(set, model).vector, *target);
}

std::string to_json(const MetricRecord& record) {
  nlohmann::ordered_json j;
  j["pair_id"] = record.pair_id;
  j["model_fingerprint"] = record.model_fingerprint;
  j["method"] = record.method;
  j["metric"] = record.metric;
  if (record.value) {
    j["value"] = *record.value;
  } else {
    j["value"] = nullptr;
  }
  j["dropped_seeds"] = record.dropped_seeds;
  j["n_components"] = record.n_components;
  return j.dump();
}

MetricRecord metric_record_from_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    MetricRecord record;
    record.pair_id = j.at("pair_id").get<std::string>();
    record.model_fingerprint = j.at("model_fingerprint").get<std::string>();
    record.method = j.at("method").get<std::string>();
    record.metric = j.at("metric").get<std::string>();
    if (!j.at("value").is_null()) record.value = j.at("value").get<double>();
    record.dropped_seeds = j.at("dropped_seeds").get<std::vector<std::string>>();
    record.n_components = j.at("n_components").get<std::size_t>();
    return record;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("metric record: ") + e.what());
  }
}

}  // namespace seedscope
