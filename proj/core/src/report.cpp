#include "seedscope/report.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "seedscope/aggregate.hpp"
#include "seedscope/csv.hpp"
#include "seedscope/metrics.hpp"
#include "seedscope/version.hpp"

namespace seedscope {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::size_t kPreprocessBatch = 4096;
constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

std::string lowercase(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

/// Keeps [A-Za-z0-9._-]; everything else becomes '_'.
std::string safe_name(std::string_view text) {
  std::string out;
  for (const char c : text) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '.' || c == '_' ||
                      c == '-';
    out.push_back(keep ? c : '_');
  }
  return out.empty() ? "_" : out;
}

std::uint64_t band_value(const KeyValueConfig& values, std::string_view key, std::uint64_t fallback) {
  const auto text = values.get(key);
  if (!text || *text == "inf" || *text == "max") return text ? kUnbounded : fallback;
  return values.get_u64(key, fallback);
}

std::string join(std::span<const std::string> words, std::string_view separator) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += separator;
    out += w;
  }
  return out;
}

/// Writes to "<target>.tmp" and renames on commit.
class AtomicFile {
 public:
  explicit AtomicFile(fs::path target) : target_(std::move(target)) {
    temp_ = target_;
    temp_ += ".tmp";
    if (target_.has_parent_path()) fs::create_directories(target_.parent_path());
    out_.open(temp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot write " + temp_.string());
  }
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;
  ~AtomicFile() {
    if (!committed_) {
      out_.close();
      std::error_code ignored;
      fs::remove(temp_, ignored);
    }
  }

  std::ostream& stream() { return out_; }

  const fs::path& commit() {
    out_.close();
    if (!out_) throw IoError("failed writing " + temp_.string());
    fs::rename(temp_, target_);
    committed_ = true;
    return target_;
  }

 private:
  fs::path target_;
  fs::path temp_;
  std::ofstream out_;
  bool committed_ = false;
};

void write_csv_preamble(std::ostream& out, const RunConfig& config, std::string_view command) {
  out << "# seedscope " << kVersion << '\n';
  out << "# command: " << command << '\n';
  for (const auto& [key, value] : config.values.entries()) {
    out << "# config: " << key << " = " << value << '\n';
  }
}

constexpr std::string_view kCoherenceNormalizer =
    "# coherence: |mean rank A - mean rank B| / vocabulary size\n";

ordered_json artifact_json(const RunConfig& config, std::string_view command) {
  ordered_json root;
  root["seedscope_version"] = kVersion;
  root["command"] = command;
  ordered_json values = ordered_json::object();
  for (const auto& [key, value] : config.values.entries()) values[key] = value;
  root["config"] = std::move(values);
  return root;
}

void log_warnings(std::ostream& log, const Diagnostics& diagnostics) {
  for (const auto& w : diagnostics.warnings) log << "warning: " << w << '\n';
}

fs::path corpus_directory(const RunConfig& config, std::string_view corpus) {
  return config.output_dir / safe_name(corpus);
}

fs::path tokenized_path(const RunConfig& config, std::string_view corpus) {
  return corpus_directory(config, corpus) / "corpus.tok";
}

fs::path vocabulary_path(const RunConfig& config, std::string_view corpus) {
  return corpus_directory(config, corpus) / "vocabulary.tsv";
}

Corpus read_preprocessed(const RunConfig& config, std::string_view corpus) {
  const fs::path path = tokenized_path(config, corpus);
  if (!fs::exists(path)) {
    throw IoError("preprocessed corpus not found: " + path.string() + " (run preprocess first)");
  }
  return read_tokenized(path);
}

std::vector<std::size_t> stats_min_counts(const RunConfig& config) {
  std::vector<std::size_t> out;
  for (const auto& item : config.values.get_list("stats.min_counts")) {
    KeyValueConfig one;
    one.set("stats.min_counts", item);
    out.push_back(one.get_count("stats.min_counts", 0));
  }
  if (out.empty()) out.push_back(0);
  return out;
}

void write_stats_rows(std::ostream& out, std::string_view corpus, const CorpusStatsAccumulator& acc,
                      std::span<const std::size_t> min_counts) {
  for (const std::size_t mu : min_counts) {
    const CorpusStats s = acc.stats(mu);
    write_csv_row(out, {std::string(corpus), std::to_string(mu), std::to_string(s.total_documents),
                        std::to_string(s.total_words), std::to_string(s.vocabulary_size),
                        format_real(s.mean_document_length)});
  }
}

const CsvRow kStatsHeader{"corpus", "min_count", "documents", "words", "vocabulary",
                          "mean_document_length"};

struct CatalogBundle {
  std::size_t raw_count = 0;
  std::vector<SeedSet> sets;
  std::vector<SeedSetPair> pairs;
};

CatalogBundle load_catalog_bundle(const RunConfig& config, std::ostream& log, bool need_pairs) {
  if (config.catalog_path.empty()) throw PreconditionError("config key 'catalog.path' is not set");
  Diagnostics diagnostics;
  CatalogBundle bundle;
  const auto raw = load_catalog(config.catalog_path, config.fields, &diagnostics);
  bundle.raw_count = raw.size();
  bundle.sets = normalize_catalog(raw, &diagnostics);
  std::vector<std::string> dropped;
  for (const auto& set : raw) {
    if (std::none_of(bundle.sets.begin(), bundle.sets.end(),
                     [&](const SeedSet& s) { return s.id == set.id; })) {
      dropped.push_back(set.id);
    }
  }
  if (!config.pairings_path.empty()) {
    bundle.pairs = load_pairings(config.pairings_path, bundle.sets, dropped, &diagnostics);
  } else if (need_pairs) {
    throw PreconditionError("config key 'pairings.path' is not set");
  }
  log_warnings(log, diagnostics);
  return bundle;
}

const SeedSetPair& find_pair(std::span<const SeedSetPair> pairs, std::string_view id) {
  const auto it = std::find_if(pairs.begin(), pairs.end(),
                               [&](const SeedSetPair& p) { return p.pair_id == id; });
  if (it == pairs.end()) throw PreconditionError("unknown pair id '" + std::string(id) + "'");
  return *it;
}

std::map<std::string, std::uint64_t, std::less<>> read_vocabulary_counts(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("vocabulary counts not found: " + path.string() + " (run preprocess first)");
  std::map<std::string, std::uint64_t, std::less<>> counts;
  std::string word;
  std::uint64_t count = 0;
  while (in >> word >> count) counts.emplace(word, count);
  return counts;
}

/// Trained ensemble of one corpus plus derived models.
struct Ensemble {
  std::string corpus;
  std::vector<EmbeddingModel> models;
  EmbeddingModel aggregate;
};

Ensemble open_ensemble(const RunConfig& config, std::string_view corpus) {
  Ensemble e;
  e.corpus = std::string(corpus);
  e.models = load_ensemble(config, corpus);
  e.aggregate = aggregate_model(e.models, "aggregate");
  return e;
}

/// Words present in every model, carrying corpus frequencies; the pool for
/// generated seed sets.
EmbeddingModel generation_pool(const RunConfig& config, const Ensemble& ensemble) {
  const auto counts = read_vocabulary_counts(vocabulary_path(config, ensemble.corpus));
  std::vector<std::string> words;
  std::vector<float> vectors;
  std::vector<std::uint64_t> frequencies;
  const std::size_t dim = ensemble.aggregate.dimension();
  for (std::size_t i = 0; i < ensemble.aggregate.size(); ++i) {
    const auto& word = ensemble.aggregate.word(i);
    if (!std::all_of(ensemble.models.begin(), ensemble.models.end(),
                     [&](const EmbeddingModel& m) { return m.contains(word); })) {
      continue;
    }
    const auto it = counts.find(word);
    words.push_back(word);
    frequencies.push_back(it == counts.end() ? 0 : it->second);
    const auto row = ensemble.aggregate.raw_row(i);
    vectors.insert(vectors.end(), row.begin(), row.end());
  }
  return EmbeddingModel(std::move(words), std::move(vectors), dim, std::move(frequencies),
                        "generation-pool", ensemble.aggregate.normalized());
}

class TagSource {
 public:
  explicit TagSource(const RunConfig& config) {
    if (!config.tags_path.empty()) {
      lexicon_ = load_tag_lexicon(config.tags_path);
      required_ = config.values.get_or("tags.required", "NOUN");
      active_ = true;
    }
  }
  void apply(GenerationOptions& options) const {
    if (!active_) return;
    options.tags = &lexicon_;
    options.required_tag = required_;
  }

 private:
  TagLexicon lexicon_;
  std::string required_;
  bool active_ = false;
};

SeedSetPair variant_pair(const SeedSetPair& pair, std::string_view variant, const RunConfig& config,
                         const EmbeddingModel& pool, const TagSource& tags) {
  if (variant == "ordered") return pair;
  if (variant == "shuffled") return shuffle_pairing(pair, config.values.get_u64("shuffle.seed", 42));
  if (variant == "random") {
    GenerationOptions options;
    options.set_size = pair.pairing ? pair.pairing->size()
                                    : std::min(pair.set_a.seeds.size(), pair.set_b.seeds.size());
    options.n_sets = 2;
    options.min_frequency = band_value(config.values, "random.band_min", 0);
    options.max_frequency = band_value(config.values, "random.band_max", kUnbounded);
    options.rng_seed = config.values.get_u64("random.seed", 42);
    options.id_prefix = "random-" + pair.pair_id;
    tags.apply(options);
    auto sets = generate_random_sets(pool, options);
    return make_pair("random:" + pair.pair_id, std::move(sets[0]), std::move(sets[1]), "random");
  }
  throw PreconditionError("unknown pair variant '" + std::string(variant) +
                          "' (expected ordered, shuffled or random)");
}

BiasSubspace build_subspace(const SeedSetPair& pair, const EmbeddingModel& model,
                            SubspaceMethod method, std::size_t pc_index) {
  return method == SubspaceMethod::weat_diff ? weat_subspace(pair, model)
                                             : pca_subspace(pair, model, pc_index + 1);
}

const Vector& subspace_component(const BiasSubspace& subspace, std::size_t pc_index,
                                 std::string_view pair_id) {
  if (pc_index >= subspace.components.size()) {
    throw PreconditionError("pair '" + std::string(pair_id) + "': component " +
                            std::to_string(pc_index) + " requested but the subspace has " +
                            std::to_string(subspace.components.size()));
  }
  return subspace.components[pc_index];
}

ModelMetric coherence_metric(const SeedSetPair& pair, SubspaceMethod method, std::size_t pc_index) {
  return [&pair, method, pc_index](const EmbeddingModel& model) {
    return coherence(pair, build_subspace(pair, model, method, pc_index), model, pc_index);
  };
}

std::string experiment_corpus(const RunConfig& config) {
  const auto name = config.values.get_or("experiment.corpus", "");
  if (name.empty()) throw PreconditionError("no corpus configured (set 'corpora')");
  config.corpus(name);
  return name;
}

fs::path experiment_directory(const RunConfig& config, std::string_view corpus) {
  return model_directory(config, corpus);
}

void write_manifest(const RunConfig& config, const CorpusSpec& corpus_spec,
                    std::span<const std::string> files, std::span<const std::string> fingerprints,
                    std::span<const std::size_t> vocabulary_sizes, const fs::path& target) {
  ordered_json root = artifact_json(config, "train");
  root["corpus"] = corpus_spec.name;
  root["min_count"] = config.train.min_count;
  root["train_config"] = config.train.canonical();
  ordered_json models = ordered_json::array();
  for (std::size_t i = 0; i < files.size(); ++i) {
    ordered_json m;
    m["replicate"] = i;
    m["file"] = files[i];
    m["fingerprint"] = fingerprints[i];
    m["vocabulary_size"] = vocabulary_sizes[i];
    models.push_back(std::move(m));
  }
  root["models"] = std::move(models);
  AtomicFile file(target);
  file.stream() << root.dump(2) << '\n';
  file.commit();
}

std::string model_file_name(std::size_t replicate, ModelFormat format) {
  std::string index = std::to_string(replicate);
  if (index.size() < 3) index.insert(0, 3 - index.size(), '0');
  return "replicate-" + index + (format == ModelFormat::word2vec_binary ? ".bin" : ".txt");
}

std::vector<std::string> corpus_selection(const RunConfig& config, std::string_view key) {
  auto names = config.values.get_list(key);
  if (names.empty()) {
    for (const auto& c : config.corpora) names.push_back(c.name);
  }
  for (const auto& n : names) config.corpus(n);
  return names;
}

}  // namespace

fs::path RunConfig::resolve(const fs::path& path) const {
  if (path.empty() || path.is_absolute()) return path;
  return workspace / path;
}

const CorpusSpec& RunConfig::corpus(std::string_view name) const {
  const auto it = std::find_if(corpora.begin(), corpora.end(),
                               [&](const CorpusSpec& c) { return c.name == name; });
  if (it == corpora.end()) throw PreconditionError("unknown corpus '" + std::string(name) + "'");
  return *it;
}

RunConfig resolve_run_config(KeyValueConfig values, const fs::path& workspace) {
  RunConfig config;
  config.workspace = workspace;
  values.set("workspace", workspace.string());

  const TrainConfig train_defaults;
  const PreprocessRules preprocess_defaults;
  const IngestOptions ingest_defaults;
  const FieldMap field_defaults;
  auto fill = [&](const std::string& key, std::string value) { values.set_default(key, std::move(value)); };

  fill("output.dir", "out");
  fill("model.format", "word2vec-binary");
  fill("metrics.normalize", "true");
  fill("preprocess.sentence_delimiters", preprocess_defaults.sentence_delimiters);
  fill("preprocess.joiners", preprocess_defaults.joiners);
  fill("preprocess.threads", "1");
  fill("stats.min_counts", "0");
  fill("train.dimension", std::to_string(train_defaults.dimension));
  fill("train.epochs", std::to_string(train_defaults.epochs));
  fill("train.window", std::to_string(train_defaults.window));
  fill("train.negatives", std::to_string(train_defaults.negatives));
  fill("train.min_count", std::to_string(train_defaults.min_count));
  fill("train.learning_rate", format_real(train_defaults.learning_rate));
  fill("train.min_learning_rate", format_real(train_defaults.min_learning_rate));
  fill("train.ensemble_size", std::to_string(train_defaults.ensemble_size));
  fill("train.seed", std::to_string(train_defaults.rng_seed));
  fill("train.subsampling", "off");
  fill("train.mode", std::string(to_string(train_defaults.mode)));
  fill("train.threads", std::to_string(train_defaults.threads));
  fill("catalog.path", "");
  fill("catalog.field.id", field_defaults.id);
  fill("catalog.field.category", field_defaults.category);
  fill("catalog.field.seeds", field_defaults.seeds);
  fill("catalog.field.source", field_defaults.source);
  fill("catalog.field.link", field_defaults.link);
  fill("pairings.path", "");
  fill("tags.path", "");
  fill("tags.required", "NOUN");
  fill("shuffle.seed", "42");
  fill("random.seed", "42");
  fill("random.band_min", "0");
  fill("random.band_max", "inf");
  fill("rank.pair", "");
  fill("rank.method", "pca-pairs");
  fill("rank.variant", "ordered");
  fill("rank.compare_variant", "none");
  fill("rank.pc_index", "0");
  fill("rank.k", "10");
  fill("rank.model", "aggregate");
  fill("spectrum.pairs", "");
  fill("spectrum.variants", "ordered,shuffled");
  fill("spectrum.n", "10");
  fill("bias.category", "female");
  fill("bias.target", "unpleasantness");
  fill("scatter.corpora", "");
  fill("scatter.method", "weat-diff");
  fill("scatter.pc_index", "0");
  fill("scatter.highlight", "");
  fill("coherence.n_generated", "10");
  fill("coherence.set_size", "5");
  fill("coherence.method", "weat-diff");
  fill("coherence.pc_index", "0");
  fill("coherence.band_min", "0");
  fill("coherence.band_max", "inf");
  fill("coherence.seed", "42");

  for (const auto& name : values.get_list("corpora")) {
    if (safe_name(name) != name) {
      throw PreconditionError("corpus name '" + name + "' may only contain [A-Za-z0-9._-]");
    }
    const std::string prefix = "corpus." + name + ".";
    fill(prefix + "format", std::string(to_string(ingest_defaults.format)));
    fill(prefix + "marker", ingest_defaults.article_marker);
    fill(prefix + "text_field", ingest_defaults.text_field);
    fill(prefix + "group_field", ingest_defaults.group_field);
    fill(prefix + "id_field", ingest_defaults.id_field);
    fill(prefix + "min_chars", "0");
    fill(prefix + "per_group", "0");
    fill(prefix + "seed", std::to_string(ingest_defaults.rng_seed));

    CorpusSpec corpus_spec;
    corpus_spec.name = name;
    corpus_spec.path = values.require(prefix + "path");
    corpus_spec.ingest.format = parse_corpus_format(values.require(prefix + "format"));
    corpus_spec.ingest.name = name;
    corpus_spec.ingest.article_marker = values.require(prefix + "marker");
    corpus_spec.ingest.text_field = values.require(prefix + "text_field");
    corpus_spec.ingest.group_field = values.require(prefix + "group_field");
    corpus_spec.ingest.id_field = values.require(prefix + "id_field");
    corpus_spec.ingest.min_chars = values.get_count(prefix + "min_chars", 0);
    corpus_spec.ingest.per_group = values.get_count(prefix + "per_group", 0);
    corpus_spec.ingest.rng_seed = values.get_u64(prefix + "seed", ingest_defaults.rng_seed);
    config.corpora.push_back(std::move(corpus_spec));
  }
  fill("experiment.corpus", config.corpora.empty() ? "" : config.corpora.front().name);

  config.preprocess.sentence_delimiters = values.get_or("preprocess.sentence_delimiters", ".!?");
  config.preprocess.joiners = values.get_or("preprocess.joiners", "-'");
  config.preprocess_threads =
      static_cast<unsigned>(std::max<std::size_t>(1, values.get_count("preprocess.threads", 1)));

  auto& t = config.train;
  t.dimension = values.get_count("train.dimension", t.dimension);
  t.epochs = values.get_count("train.epochs", t.epochs);
  t.window = values.get_count("train.window", t.window);
  t.negatives = values.get_count("train.negatives", t.negatives);
  t.min_count = values.get_count("train.min_count", t.min_count);
  t.learning_rate = values.get_real("train.learning_rate", t.learning_rate);
  t.min_learning_rate = values.get_real("train.min_learning_rate", t.min_learning_rate);
  t.ensemble_size = values.get_count("train.ensemble_size", t.ensemble_size);
  t.rng_seed = values.get_u64("train.seed", t.rng_seed);
  const auto subsampling = values.get_or("train.subsampling", "off");
  if (subsampling != "off") t.subsampling_threshold = values.get_real("train.subsampling", 0.0);
  t.mode = parse_training_mode(values.get_or("train.mode", "deterministic"));
  t.threads = static_cast<unsigned>(values.get_count("train.threads", 1));
  t.validate();

  config.model_format = parse_model_format(values.get_or("model.format", "word2vec-binary"));
  config.normalize = values.get_bool("metrics.normalize", true);
  config.fields.id = values.get_or("catalog.field.id", field_defaults.id);
  config.fields.category = values.get_or("catalog.field.category", field_defaults.category);
  config.fields.seeds = values.get_or("catalog.field.seeds", field_defaults.seeds);
  config.fields.source = values.get_or("catalog.field.source", field_defaults.source);
  config.fields.link = values.get_or("catalog.field.link", field_defaults.link);

  parse_subspace_method(values.get_or("rank.method", "pca-pairs"));
  parse_subspace_method(values.get_or("scatter.method", "weat-diff"));
  parse_subspace_method(values.get_or("coherence.method", "weat-diff"));

  config.values = std::move(values);
  for (auto& corpus_spec : config.corpora) corpus_spec.path = config.resolve(corpus_spec.path);
  config.catalog_path = config.resolve(config.values.get_or("catalog.path", ""));
  config.pairings_path = config.resolve(config.values.get_or("pairings.path", ""));
  config.tags_path = config.resolve(config.values.get_or("tags.path", ""));
  config.output_dir = config.resolve(config.values.get_or("output.dir", "out"));
  return config;
}

RunConfig load_run_config(const fs::path& config_file, std::span<const std::string> overrides,
                          std::optional<std::string> workspace_override) {
  KeyValueConfig values = KeyValueConfig::load(config_file);
  if (workspace_override && !workspace_override->empty()) values.set("workspace", *workspace_override);
  for (const auto& o : overrides) values.apply_override(o);

  const fs::path base = fs::absolute(config_file).parent_path();
  fs::path workspace = values.get_or("workspace", "");
  if (workspace.empty()) {
    workspace = base;
  } else if (workspace.is_relative()) {
    workspace = base / workspace;
  }
  return resolve_run_config(std::move(values), workspace.lexically_normal());
}

ArtifactLock::ArtifactLock(const fs::path& directory) {
  fs::create_directories(directory);
  path_ = directory / ".seedscope.lock";
  const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    if (errno == EEXIST) {
      throw IoError("output directory is locked by another seedscope process: " + path_.string() +
                    " (remove the file if no other process is running)");
    }
    throw IoError("cannot create lock file " + path_.string() + ": " + std::strerror(errno));
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  const auto written = ::write(fd, pid.data(), pid.size());
  (void)written;
  ::close(fd);
}

ArtifactLock::~ArtifactLock() {
  std::error_code ignored;
  fs::remove(path_, ignored);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw PreconditionError("spearman_correlation: size mismatch");
  if (x.size() < 2) return std::nullopt;
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

fs::path model_directory(const RunConfig& config, std::string_view corpus) {
  return corpus_directory(config, corpus) / ("mu" + std::to_string(config.train.min_count));
}

EnsembleManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("ensemble manifest not found: " + path.string() + " (run train first)");
  try {
    const auto root = nlohmann::json::parse(in);
    EnsembleManifest manifest;
    manifest.corpus = root.at("corpus").get<std::string>();
    manifest.min_count = root.at("min_count").get<std::size_t>();
    for (const auto& m : root.at("models")) {
      manifest.model_paths.push_back(path.parent_path() / m.at("file").get<std::string>());
      manifest.fingerprints.push_back(m.at("fingerprint").get<std::string>());
    }
    return manifest;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<EmbeddingModel> load_ensemble(const RunConfig& config, std::string_view corpus) {
  const auto manifest = read_manifest(model_directory(config, corpus) / "manifest.json");
  if (manifest.model_paths.empty()) throw FormatError("manifest lists no models for " + std::string(corpus));
  std::vector<EmbeddingModel> models;
  for (std::size_t i = 0; i < manifest.model_paths.size(); ++i) {
    LoadOptions options;
    options.normalize = config.normalize;
    options.fingerprint = manifest.fingerprints[i];
    models.push_back(load_model(manifest.model_paths[i], config.model_format, options));
  }
  return models;
}

CommandOutputs cmd_preprocess(const RunConfig& config, std::ostream& log) {
  if (config.corpora.empty()) throw PreconditionError("no corpus configured (set 'corpora')");
  CommandOutputs outputs;
  const auto min_counts = stats_min_counts(config);
  for (const auto& corpus_spec : config.corpora) {
    if (!fs::exists(corpus_spec.path)) throw IoError("corpus input not found: " + corpus_spec.path.string());
    PreprocessRules rules = config.preprocess;
    rules.min_chars = corpus_spec.ingest.min_chars;

    AtomicFile tokens(tokenized_path(config, corpus_spec.name));
    write_tokenized_header(corpus_spec.name, tokens.stream());
    CorpusStatsAccumulator accumulator;
    std::size_t filtered = 0;
    RawCorpus batch{corpus_spec.name, {}};
    auto flush = [&] {
      const Corpus done = preprocess_corpus(batch, rules, config.preprocess_threads);
      for (const auto& doc : done.documents) {
        write_tokenized_document(doc, tokens.stream());
        accumulator.add(doc);
        if (doc.filtered) ++filtered;
      }
      batch.documents.clear();
    };
    Diagnostics diagnostics;
    for_each_raw_document(
        corpus_spec.path, corpus_spec.ingest,
        [&](RawDocument&& raw) {
          batch.documents.push_back(std::move(raw));
          if (batch.documents.size() >= kPreprocessBatch) flush();
        },
        &diagnostics);
    flush();
    log_warnings(log, diagnostics);
    outputs.push_back(tokens.commit());

    std::vector<std::pair<std::string, std::size_t>> vocabulary(accumulator.counts().begin(),
                                                                accumulator.counts().end());
    std::sort(vocabulary.begin(), vocabulary.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    AtomicFile vocab(vocabulary_path(config, corpus_spec.name));
    for (const auto& [word, count] : vocabulary) vocab.stream() << word << '\t' << count << '\n';
    outputs.push_back(vocab.commit());

    AtomicFile stats(corpus_directory(config, corpus_spec.name) / "stats.csv");
    write_csv_preamble(stats.stream(), config, "preprocess");
    write_csv_row(stats.stream(), kStatsHeader);
    write_stats_rows(stats.stream(), corpus_spec.name, accumulator, min_counts);
    outputs.push_back(stats.commit());

    const CorpusStats s = accumulator.stats(0);
    log << "preprocess " << corpus_spec.name << ": " << s.total_documents << " documents (" << filtered
        << " filtered), " << s.total_words << " words, vocabulary " << s.vocabulary_size << '\n';
  }
  return outputs;
}

CommandOutputs cmd_stats(const RunConfig& config, std::ostream& log) {
  if (config.corpora.empty()) throw PreconditionError("no corpus configured (set 'corpora')");
  const auto min_counts = stats_min_counts(config);
  AtomicFile file(config.output_dir / "corpus_stats.csv");
  write_csv_preamble(file.stream(), config, "stats");
  write_csv_row(file.stream(), kStatsHeader);
  for (const auto& corpus_spec : config.corpora) {
    const Corpus corpus = read_preprocessed(config, corpus_spec.name);
    CorpusStatsAccumulator accumulator;
    for (const auto& doc : corpus.documents) accumulator.add(doc);
    write_stats_rows(file.stream(), corpus_spec.name, accumulator, min_counts);
    log << "stats " << corpus_spec.name << ": " << accumulator.stats(0).total_documents << " documents\n";
  }
  return {file.commit()};
}

CommandOutputs cmd_train(const RunConfig& config, std::ostream& log) {
  CommandOutputs outputs;
  for (const auto& name : corpus_selection(config, "train.corpora")) {
    const CorpusSpec& corpus_spec = config.corpus(name);
    Corpus corpus = read_preprocessed(config, name);
    std::erase_if(corpus.documents, [](const Document& d) { return d.filtered; });
    const fs::path directory = model_directory(config, name);
    fs::create_directories(directory);

    const std::size_t n = config.train.ensemble_size;
    std::vector<std::string> files(n);
    std::vector<std::string> fingerprints(n);
    std::vector<std::size_t> sizes(n);
    for_each_replicate(corpus, config.train, [&](std::size_t r, const EmbeddingModel& model) {
      files[r] = model_file_name(r, config.model_format);
      fingerprints[r] = model.fingerprint();
      sizes[r] = model.size();
      save_model(model, directory / files[r], config.model_format);
      outputs.push_back(directory / files[r]);
      log << "train " << name << ": replicate " << r + 1 << "/" << n << " (" << model.size()
          << " words, fingerprint " << model.fingerprint() << ")\n";
    });
    const fs::path manifest = directory / "manifest.json";
    write_manifest(config, corpus_spec, files, fingerprints, sizes, manifest);
    outputs.push_back(manifest);
  }
  return outputs;
}

CommandOutputs cmd_rank(const RunConfig& config, std::ostream& log) {
  const auto& v = config.values;
  const std::string pair_id = v.require("rank.pair");
  const auto method = parse_subspace_method(v.get_or("rank.method", "pca-pairs"));
  const std::string variant = v.get_or("rank.variant", "ordered");
  const std::string compare = v.get_or("rank.compare_variant", "none");
  const std::size_t pc_index = v.get_count("rank.pc_index", 0);
  const std::size_t k = v.get_count("rank.k", 10);
  const std::string model_selector = v.get_or("rank.model", "aggregate");

  const auto catalog = load_catalog_bundle(config, log, true);
  const std::string corpus = experiment_corpus(config);
  const Ensemble ensemble = open_ensemble(config, corpus);
  const EmbeddingModel* model = &ensemble.aggregate;
  if (model_selector != "aggregate") {
    const std::size_t index = v.get_count("rank.model", 0);
    if (index >= ensemble.models.size()) {
      throw PreconditionError("rank.model " + model_selector + " is out of range (ensemble has " +
                              std::to_string(ensemble.models.size()) + " models)");
    }
    model = &ensemble.models[index];
  }
  const TagSource tags(config);
  const EmbeddingModel pool = variant == "random" || compare == "random"
                                  ? generation_pool(config, ensemble)
                                  : EmbeddingModel{};

  const SeedSetPair& base = find_pair(catalog.pairs, pair_id);
  const SeedSetPair pair = variant_pair(base, variant, config, pool, tags);
  const BiasSubspace subspace = build_subspace(pair, *model, method, pc_index);
  const Vector& direction = subspace_component(subspace, pc_index, pair.pair_id);
  const TopBottom extremes_k = extremes(*model, direction, k);

  std::optional<Vector> compare_direction;
  std::optional<SeedSetPair> compare_pair;
  if (compare != "none") {
    compare_pair = variant_pair(base, compare, config, pool, tags);
    const BiasSubspace other = build_subspace(*compare_pair, *model, method, pc_index);
    compare_direction = subspace_component(other, pc_index, compare_pair->pair_id);
  }

  const fs::path target =
      experiment_directory(config, corpus) /
      ("rank_" + safe_name(pair_id) + "_" + std::string(to_string(method)) + "_" + variant + "_pc" +
       std::to_string(pc_index) + "_" + safe_name(model_selector) + ".csv");
  AtomicFile file(target);
  auto& out = file.stream();
  write_csv_preamble(out, config, "rank");
  out << "# set_a " << pair.set_a.id << ": " << join(pair.set_a.seeds, " ") << '\n';
  out << "# set_b " << pair.set_b.id << ": " << join(pair.set_b.seeds, " ") << '\n';
  if (!subspace.dropped_seeds.empty()) out << "# dropped: " << join(subspace.dropped_seeds, " ") << '\n';
  if (compare_pair) {
    out << "# compare " << compare << " set_a: " << join(compare_pair->set_a.seeds, " ") << '\n';
    out << "# compare " << compare << " set_b: " << join(compare_pair->set_b.seeds, " ") << '\n';
  }
  write_csv_row(out, {"end", "position", "word", "score", "compare_score"});
  auto emit = [&](std::string_view end, const RankedVocabulary& words, std::size_t first_position) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      std::string other;
      if (compare_direction) {
        const std::string word = words[i].word;
        const auto projected = project_words(*model, std::span<const std::string>(&word, 1), *compare_direction);
        if (projected.front().cosine) other = format_real(*projected.front().cosine);
      }
      write_csv_row(out, {std::string(end), std::to_string(first_position + i), words[i].word,
                          format_real(words[i].score), other});
    }
  };
  emit("top", extremes_k.top, 1);
  emit("bottom", extremes_k.bottom, model->size() - extremes_k.bottom.size() + 1);
  log << "rank " << pair_id << " (" << variant << ", " << to_string(method) << ", pc " << pc_index
      << ") on " << corpus << ": " << extremes_k.top.size() << " top and " << extremes_k.bottom.size()
      << " bottom words\n";
  return {file.commit()};
}

CommandOutputs cmd_spectrum(const RunConfig& config, std::ostream& log) {
  const auto& v = config.values;
  const std::size_t n = v.get_count("spectrum.n", 10);
  const auto variants = v.get_list("spectrum.variants");
  const auto catalog = load_catalog_bundle(config, log, true);
  const std::string corpus = experiment_corpus(config);
  const Ensemble ensemble = open_ensemble(config, corpus);
  const TagSource tags(config);
  const bool needs_pool = std::find(variants.begin(), variants.end(), "random") != variants.end();
  const EmbeddingModel pool = needs_pool ? generation_pool(config, ensemble) : EmbeddingModel{};

  std::vector<const SeedSetPair*> selected;
  const auto ids = v.get_list("spectrum.pairs");
  if (ids.empty()) {
    for (const auto& p : catalog.pairs) selected.push_back(&p);
  } else {
    for (const auto& id : ids) selected.push_back(&find_pair(catalog.pairs, id));
  }

  AtomicFile file(experiment_directory(config, corpus) / "spectrum.csv");
  auto& out = file.stream();
  write_csv_preamble(out, config, "spectrum");
  CsvRow header{"corpus", "pair_id", "variant", "replicate", "model_fingerprint", "pairs_used"};
  for (std::size_t c = 0; c < n; ++c) header.push_back("pc" + std::to_string(c + 1));
  write_csv_row(out, header);
  for (const auto* base : selected) {
    for (const auto& variant : variants) {
      const SeedSetPair pair = variant_pair(*base, variant, config, pool, tags);
      for (std::size_t r = 0; r < ensemble.models.size(); ++r) {
        const auto& model = ensemble.models[r];
        BiasSubspace subspace;
        try {
          subspace = pca_subspace(pair, model, n);
        } catch (const Error& e) {
          log << "spectrum: " << base->pair_id << " (" << variant << ") skipped for replicate " << r
              << ": " << e.what() << '\n';
          continue;
        }
        auto ratios = subspace.explained_variance_ratios;
        ratios.resize(n, 0.0);
        CsvRow row{corpus, base->pair_id, variant, std::to_string(r), model.fingerprint(),
                   std::to_string(subspace.pairs_used)};
        for (const double ratio : ratios) row.push_back(format_real(ratio));
        write_csv_row(out, row);
      }
    }
  }
  log << "spectrum on " << corpus << ": " << selected.size() << " pairs x " << variants.size()
      << " variants x " << ensemble.models.size() << " models\n";
  return {file.commit()};
}

CommandOutputs cmd_bias(const RunConfig& config, std::ostream& log) {
  const auto& v = config.values;
  const std::string category = lowercase(v.require("bias.category"));
  const std::string target = v.require("bias.target");
  const auto catalog = load_catalog_bundle(config, log, false);
  const std::string corpus = experiment_corpus(config);
  const Ensemble ensemble = open_ensemble(config, corpus);
  const std::size_t with_target = models_containing(target, ensemble.models);
  if (with_target == 0) log << "bias: target '" << target << "' is in none of the models\n";

  AtomicFile file(experiment_directory(config, corpus) /
                  ("bias_" + safe_name(category) + "_" + safe_name(target) + ".csv"));
  auto& out = file.stream();
  write_csv_preamble(out, config, "bias");
  write_csv_row(out, {"set_id", "category", "source", "target", "value", "eligible",
                      "models_with_target", "n_models", "present_seeds", "dropped_seeds", "reason"});
  std::size_t matched = 0;
  for (const auto& set : catalog.sets) {
    if (lowercase(set.category) != category) continue;
    ++matched;
    std::optional<double> value;
    std::string reason;
    std::vector<std::string> present;
    std::vector<std::string> dropped;
    for (const auto& seed : set.seeds) {
      (ensemble.aggregate.contains(seed) ? present : dropped).push_back(seed);
    }
    try {
      value = bias_measurement(set, target, ensemble.aggregate);
    } catch (const Error& e) {
      reason = e.what();
    }
    write_csv_row(out, {set.id, set.category, set.source, target, value ? format_real(*value) : "",
                        value ? "1" : "0", std::to_string(with_target),
                        std::to_string(ensemble.models.size()), join(present, " "),
                        join(dropped, " "), reason});
  }
  if (matched == 0) log << "bias: no seed set has category '" << category << "'\n";
  log << "bias " << category << " vs '" << target << "' on " << corpus << ": " << matched << " sets\n";
  return {file.commit()};
}

CommandOutputs cmd_scatter(const RunConfig& config, std::ostream& log) {
  const auto& v = config.values;
  const auto method = parse_subspace_method(v.get_or("scatter.method", "weat-diff"));
  const std::size_t pc_index = v.get_count("scatter.pc_index", 0);
  const auto highlight_list = v.get_list("scatter.highlight");
  const auto catalog = load_catalog_bundle(config, log, true);

  struct Row {
    std::string pair_id;
    std::string label;
    double similarity = 0.0;
    double explained = 0.0;
    double coherence_value = 0.0;
    std::size_t n_similarity = 0;
    std::size_t n_explained = 0;
    std::size_t n_coherence = 0;
  };

  const std::string suffix = "_mu" + std::to_string(config.train.min_count) + ".csv";
  AtomicFile file(config.output_dir / ("scatter" + suffix));
  AtomicFile per_model(config.output_dir / ("scatter_per_model" + suffix));
  write_csv_preamble(file.stream(), config, "scatter");
  write_csv_preamble(per_model.stream(), config, "scatter");
  file.stream() << kCoherenceNormalizer;
  per_model.stream() << kCoherenceNormalizer;
  write_csv_row(file.stream(),
                {"corpus", "pair_id", "dimension_label", "set_similarity", "explained_variance_pc1",
                 "coherence", "n_eligible_similarity", "n_eligible_explained_variance",
                 "n_eligible_coherence", "highlight", "spearman_similarity_coherence",
                 "spearman_similarity_explained_variance"});
  std::vector<EnsembleReport> all_reports;

  for (const auto& corpus : corpus_selection(config, "scatter.corpora")) {
    const auto models = load_ensemble(config, corpus);
    std::vector<Row> rows;
    for (const auto& pair : catalog.pairs) {
      const std::string id = corpus + ":" + pair.pair_id;
      auto similarity = aggregate_metric("set_similarity", pair, models, Eligibility::any_seeds_present,
                                         [&pair](const EmbeddingModel& m) { return set_similarity(pair, m); });
      auto explained = aggregate_metric(
          "explained_variance_pc1", pair, models, Eligibility::any_seeds_present,
          [&pair](const EmbeddingModel& m) { return pca_subspace(pair, m, 1).explained_variance_ratios.at(0); });
      auto coh = aggregate_metric("coherence", pair, models, Eligibility::all_seeds_present,
                                  coherence_metric(pair, method, pc_index));
      for (auto* r : {&similarity, &explained, &coh}) r->identifier = id;
      const bool complete = similarity.aggregate && explained.aggregate && coh.aggregate;
      all_reports.push_back(similarity);
      all_reports.push_back(explained);
      all_reports.push_back(coh);
      if (!complete) {
        log << "scatter: pair " << pair.pair_id << " is ineligible in corpus " << corpus << " (";
        log << "similarity " << similarity.n_eligible << ", explained variance " << explained.n_eligible
            << ", coherence " << coh.n_eligible << " of " << models.size() << " models)\n";
        continue;
      }
      rows.push_back({pair.pair_id, pair.dimension_label, *similarity.aggregate, *explained.aggregate,
                      *coh.aggregate, similarity.n_eligible, explained.n_eligible, coh.n_eligible});
    }
    std::vector<double> sims;
    std::vector<double> explained_values;
    std::vector<double> coherences;
    for (const auto& r : rows) {
      sims.push_back(r.similarity);
      explained_values.push_back(r.explained);
      coherences.push_back(r.coherence_value);
    }
    const auto rho_coherence = spearman_correlation(sims, coherences);
    const auto rho_explained = spearman_correlation(sims, explained_values);
    for (const auto& r : rows) {
      const bool highlighted =
          std::find(highlight_list.begin(), highlight_list.end(), r.pair_id) != highlight_list.end();
      write_csv_row(file.stream(),
                    {corpus, r.pair_id, r.label, format_real(r.similarity), format_real(r.explained),
                     format_real(r.coherence_value), std::to_string(r.n_similarity),
                     std::to_string(r.n_explained), std::to_string(r.n_coherence),
                     highlighted ? "1" : "0", rho_coherence ? format_real(*rho_coherence) : "",
                     rho_explained ? format_real(*rho_explained) : ""});
    }
    log << "scatter " << corpus << ": " << rows.size() << " of " << catalog.pairs.size()
        << " pairs, spearman(similarity, coherence) = "
        << (rho_coherence ? format_real(*rho_coherence) : "n/a") << '\n';
  }
  write_report_csv(all_reports, per_model.stream());
  return {file.commit(), per_model.commit()};
}

CommandOutputs cmd_coherence_table(const RunConfig& config, std::ostream& log) {
  const auto& v = config.values;
  const auto method = parse_subspace_method(v.get_or("coherence.method", "weat-diff"));
  const std::size_t pc_index = v.get_count("coherence.pc_index", 0);
  const std::size_t n_generated = v.get_count("coherence.n_generated", 10);
  const auto catalog = load_catalog_bundle(config, log, false);
  const std::string corpus = experiment_corpus(config);
  const Ensemble ensemble = open_ensemble(config, corpus);

  struct Candidate {
    std::string kind;
    SeedSetPair pair;
  };
  std::vector<Candidate> candidates;
  if (n_generated > 0) {
    const TagSource tags(config);
    GenerationOptions options;
    options.set_size = v.get_count("coherence.set_size", 5);
    options.n_sets = 2 * n_generated;
    options.min_frequency = band_value(v, "coherence.band_min", 0);
    options.max_frequency = band_value(v, "coherence.band_max", kUnbounded);
    options.rng_seed = v.get_u64("coherence.seed", 42);
    tags.apply(options);
    const auto sets = generate_random_sets(generation_pool(config, ensemble), options);
    for (std::size_t g = 0; g < n_generated; ++g) {
      candidates.push_back({"generated", make_pair("generated-" + std::to_string(g), sets[2 * g],
                                                   sets[2 * g + 1], "generated")});
    }
  }
  for (const auto& pair : catalog.pairs) candidates.push_back({"gathered", pair});

  struct Row {
    const Candidate* candidate;
    double value;
    std::size_t n_eligible;
  };
  std::vector<Row> rows;
  for (const auto& c : candidates) {
    const auto report = aggregate_metric("coherence", c.pair, ensemble.models,
                                         Eligibility::all_seeds_present,
                                         coherence_metric(c.pair, method, pc_index));
    if (!report.aggregate) {
      log << "coherence-table: " << c.kind << " pair " << c.pair.pair_id
          << " is ineligible in every model\n";
      continue;
    }
    rows.push_back({&c, *report.aggregate, report.n_eligible});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.candidate->pair.pair_id < b.candidate->pair.pair_id;
  });

  AtomicFile file(experiment_directory(config, corpus) / "coherence_table.csv");
  auto& out = file.stream();
  write_csv_preamble(out, config, "coherence-table");
  out << kCoherenceNormalizer;
  write_csv_row(out, {"rank", "kind", "pair_id", "coherence", "n_eligible", "n_models", "set_a_id",
                      "set_a_seeds", "set_b_id", "set_b_seeds"});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& pair = rows[i].candidate->pair;
    write_csv_row(out, {std::to_string(i + 1), rows[i].candidate->kind, pair.pair_id,
                        format_real(rows[i].value), std::to_string(rows[i].n_eligible),
                        std::to_string(ensemble.models.size()), pair.set_a.id,
                        join(pair.set_a.seeds, " "), pair.set_b.id, join(pair.set_b.seeds, " ")});
  }
  log << "coherence-table on " << corpus << ": " << rows.size() << " of " << candidates.size()
      << " pairs ranked\n";
  return {file.commit()};
}

CommandOutputs cmd_catalog_stats(const RunConfig& config, std::ostream& log) {
  const auto catalog = load_catalog_bundle(config, log, false);
  const CatalogStats stats = catalog_stats(catalog.sets, catalog.pairs);

  ordered_json root = artifact_json(config, "catalog-stats");
  root["raw_set_count"] = catalog.raw_count;
  root["set_count"] = stats.set_count;
  root["dropped_set_count"] = catalog.raw_count - stats.set_count;
  root["seed_count"] = stats.seed_count;
  ordered_json histogram = ordered_json::object();
  for (const auto& [size, count] : stats.size_histogram) histogram[std::to_string(size)] = count;
  root["size_histogram"] = std::move(histogram);
  root["per_source"] = stats.per_source;
  root["per_category"] = stats.per_category;
  ordered_json duplicates = ordered_json::array();
  for (const auto& d : stats.duplicates) {
    duplicates.push_back({{"pair_id", d.pair_id}, {"shared_seeds", d.shared_seeds}});
  }
  root["pair_duplicates"] = std::move(duplicates);
  root["duplicate_occurrences"] = stats.duplicate_occurrences;

  AtomicFile json_file(config.output_dir / "catalog_stats.json");
  json_file.stream() << root.dump(2) << '\n';

  AtomicFile csv_file(config.output_dir / "catalog_sets.csv");
  write_csv_preamble(csv_file.stream(), config, "catalog-stats");
  write_csv_row(csv_file.stream(), {"set_id", "category", "source", "size", "seeds"});
  for (const auto& set : catalog.sets) {
    write_csv_row(csv_file.stream(), {set.id, set.category, set.source,
                                      std::to_string(set.seeds.size()), join(set.seeds, " ")});
  }
  log << "catalog-stats: " << stats.set_count << " sets (" << catalog.raw_count << " before normalization), "
      << stats.seed_count << " seeds\n";
  return {json_file.commit(), csv_file.commit()};
}

CommandOutputs cmd_all(const RunConfig& config, std::ostream& log) {
  CommandOutputs outputs;
  auto run = [&](auto command) {
    auto produced = command(config, log);
    outputs.insert(outputs.end(), produced.begin(), produced.end());
  };
  run(cmd_preprocess);
  run(cmd_stats);
  run(cmd_train);
  if (config.catalog_path.empty()) {
    log << "all: catalog.path not set, skipping catalog commands\n";
    return outputs;
  }
  run(cmd_catalog_stats);
  run(cmd_bias);
  if (config.pairings_path.empty()) {
    log << "all: pairings.path not set, skipping pair commands\n";
    return outputs;
  }
  run(cmd_spectrum);
  if (config.values.get_or("rank.pair", "").empty()) {
    log << "all: rank.pair not set, skipping rank\n";
  } else {
    run(cmd_rank);
  }
  run(cmd_scatter);
  run(cmd_coherence_table);
  return outputs;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"preprocess", "stats",   "train",
                                              "rank",       "spectrum", "bias",
                                              "scatter",    "coherence-table", "catalog-stats",
                                              "all"};
  return names;
}

CommandOutputs run_command(std::string_view name, const RunConfig& config, std::ostream& log) {
  using Command = CommandOutputs (*)(const RunConfig&, std::ostream&);
  static const std::map<std::string, Command, std::less<>> table{
      {"preprocess", cmd_preprocess},
      {"stats", cmd_stats},
      {"train", cmd_train},
      {"rank", cmd_rank},
      {"spectrum", cmd_spectrum},
      {"bias", cmd_bias},
      {"scatter", cmd_scatter},
      {"coherence-table", cmd_coherence_table},
      {"catalog-stats", cmd_catalog_stats},
      {"all", cmd_all},
  };
  const auto it = table.find(name);
  if (it == table.end()) throw PreconditionError("unknown command '" + std::string(name) + "'");
  const ArtifactLock lock(config.output_dir);
  return it->second(config, log);
}

}  // namespace seedscope
