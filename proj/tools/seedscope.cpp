#include <cstdlib>
#include <deque>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seedscope/error.hpp"
#include "seedscope/report.hpp"
#include "seedscope/version.hpp"

namespace {

struct Shorthand {
  const char* flag;
  const char* key;
  const char* help;
};

// Per-command flags that are shorthands for --set key=value.
const std::vector<std::pair<std::string, std::vector<Shorthand>>> kShorthands{
    {"train", {{"--ensemble-size", "train.ensemble_size", "number of bootstrap models"},
               {"--min-count", "train.min_count", "minimum word frequency"},
               {"--threads", "train.threads", "worker threads"}}},
    {"rank", {{"--pair", "rank.pair", "pair id"},
              {"--method", "rank.method", "weat-diff or pca-pairs"},
              {"--variant", "rank.variant", "ordered, shuffled or random"},
              {"--pc", "rank.pc_index", "0-based component index"},
              {"--k", "rank.k", "words per end"},
              {"--min-count", "train.min_count", "ensemble minimum word frequency"}}},
    {"spectrum", {{"--pairs", "spectrum.pairs", "comma-separated pair ids"},
                  {"--min-count", "train.min_count", "ensemble minimum word frequency"}}},
    {"bias", {{"--category", "bias.category", "seed set category"},
              {"--target", "bias.target", "target word"}}},
    {"scatter", {{"--highlight", "scatter.highlight", "comma-separated pair ids"}}},
    {"coherence-table", {{"--n-generated", "coherence.n_generated", "generated pairs"}}},
};

const std::map<std::string, std::string, std::less<>> kDescriptions{
    {"preprocess", "tokenize every configured corpus"},
    {"stats", "corpus statistics per minimum count"},
    {"train", "train the bootstrap ensemble"},
    {"rank", "top and bottom words along a pair's subspace"},
    {"spectrum", "explained-variance ratios per model"},
    {"bias", "seed-set mean vs target word cosine"},
    {"scatter", "set similarity, explained variance and coherence per pair"},
    {"coherence-table", "coherence of generated and gathered pairs"},
    {"catalog-stats", "seed catalog summary"},
    {"all", "run every command in order"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seed-lexicon bias diagnostics for word embeddings"};
  app.set_version_flag("--version", std::string("seedscope ") + seedscope::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::deque<std::pair<std::string, std::string>> shorthand_values;

  for (const auto& name : seedscope::command_names()) {
    const auto description = kDescriptions.find(name);
    auto* sub = app.add_subcommand(name, description == kDescriptions.end() ? "" : description->second);
    sub->add_option("-c,--config", config_path, "key = value configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("-s,--set", overrides, "override a configuration key (key=value)");
    for (const auto& [command, flags] : kShorthands) {
      if (command != name) continue;
      for (const auto& s : flags) {
        auto& slot = shorthand_values.emplace_back(s.key, std::string{});
        sub->add_option(s.flag, slot.second, s.help);
      }
    }
  }

  CLI11_PARSE(app, argc, argv);

  const auto* selected = app.get_subcommands().front();
  for (const auto& [key, value] : shorthand_values) {
    if (!value.empty()) overrides.push_back(key + "=" + value);
  }

  try {
    std::optional<std::string> workspace;
    if (const char* env = std::getenv("SEEDSCOPE_WORKSPACE")) workspace = env;
    const auto config = seedscope::load_run_config(config_path, overrides, workspace);
    const auto outputs = seedscope::run_command(selected->get_name(), config, std::cerr);
    for (const auto& path : outputs) std::cout << path.string() << '\n';
  } catch (const seedscope::Error& e) {
    std::cerr << "seedscope " << selected->get_name() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "seedscope " << selected->get_name() << ": " << e.what() << '\n';
    return 2;
  }
  return 0;
}
