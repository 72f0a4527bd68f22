#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seedscope/config.hpp"
#include "seedscope/corpus.hpp"
#include "seedscope/embedding.hpp"
#include "seedscope/seeds.hpp"
#include "seedscope/trainer.hpp"

namespace seedscope {

struct CorpusSpec {
  std::string name;
  std::filesystem::path path;
  IngestOptions ingest;
};

/// Fully resolved run configuration. `values` holds every key with its
/// default filled in and is what artifacts embed.
struct RunConfig {
  KeyValueConfig values;
  std::filesystem::path workspace;
  std::vector<CorpusSpec> corpora;
  PreprocessRules preprocess;
  unsigned preprocess_threads = 1;
  TrainConfig train;
  ModelFormat model_format = ModelFormat::word2vec_binary;
  bool normalize = true;
  std::filesystem::path catalog_path;
  std::filesystem::path pairings_path;
  std::filesystem::path tags_path;
  FieldMap fields;
  std::filesystem::path output_dir;

  /// Workspace-relative path (absolute paths are kept).
  std::filesystem::path resolve(const std::filesystem::path& path) const;
  const CorpusSpec& corpus(std::string_view name) const;
};

/// Fills defaults, validates and resolves paths against `workspace`.
RunConfig resolve_run_config(KeyValueConfig values, const std::filesystem::path& workspace);

/// Reads `config_file`, applies `workspace_override` (typically the
/// SEEDSCOPE_WORKSPACE environment variable) and then the `key=value`
/// overrides. The workspace defaults to the config file's directory.
RunConfig load_run_config(const std::filesystem::path& config_file,
                          std::span<const std::string> overrides,
                          std::optional<std::string> workspace_override = std::nullopt);

/// Exclusive lock file in an output directory; released on destruction.
class ArtifactLock {
 public:
  explicit ArtifactLock(const std::filesystem::path& directory);
  ~ArtifactLock();
  ArtifactLock(const ArtifactLock&) = delete;
  ArtifactLock& operator=(const ArtifactLock&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

/// Fractional ranks (1-based, ties averaged).
std::vector<double> average_ranks(std::span<const double> values);
/// Spearman rank correlation; empty when fewer than two points or a
/// constant input.
std::optional<double> spearman_correlation(std::span<const double> x, std::span<const double> y);

struct EnsembleManifest {
  std::string corpus;
  std::size_t min_count = 0;
  std::vector<std::filesystem::path> model_paths;
  std::vector<std::string> fingerprints;
};

std::filesystem::path model_directory(const RunConfig& config, std::string_view corpus);
EnsembleManifest read_manifest(const std::filesystem::path& path);
/// Loads every replicate listed in the corpus manifest.
std::vector<EmbeddingModel> load_ensemble(const RunConfig& config, std::string_view corpus);

using CommandOutputs = std::vector<std::filesystem::path>;

CommandOutputs cmd_preprocess(const RunConfig& config, std::ostream& log);
CommandOutputs cmd_stats(const RunConfig& config, std::ostream& log);
CommandOutputs cmd_train(const RunConfig& config, std::ostream& log);
CommandOutputs cmd_rank(const RunConfig& config, std::ostream& log);
CommandOutputs cmd_spectrum(const RunConfig& config, std::ostream& log);
CommandOutputs cmd_bias(const RunConfig& config, std::ostream& log);
CommandOutputs cmd_scatter(const RunConfig& config, std::ostream& log);
CommandOutputs cmd_coherence_table(const RunConfig& config, std::ostream& log);
CommandOutputs cmd_catalog_stats(const RunConfig& config, std::ostream& log);
/// Runs every command in dependency order.
CommandOutputs cmd_all(const RunConfig& config, std::ostream& log);

const std::vector<std::string>& command_names();
/// Dispatches by name while holding the output directory lock.
CommandOutputs run_command(std::string_view name, const RunConfig& config, std::ostream& log);

}  // namespace seedscope
