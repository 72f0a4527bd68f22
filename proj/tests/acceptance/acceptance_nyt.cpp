// Criteria that need the full news corpus and the gathered seed catalog.
//
// SEEDSCOPE_NYT_CONFIG names a run configuration for the news corpus with the
// gathered catalog and pairings. It must also set the pair ids used below:
//   acceptance.gender_pair, acceptance.career_family_pair,
//   acceptance.asian_chinese_pair
// Without the configuration every criterion is reported as skipped and the
// exit code is 77. Models are trained when their manifest is missing.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "seedscope/csv.hpp"
#include "seedscope/report.hpp"

namespace fs = std::filesystem;
using seedscope::CsvRow;
using seedscope::RunConfig;

namespace {

constexpr int kSkip = 77;
constexpr std::size_t kExpectedDocuments = 8888;
constexpr double kExpectedWords = 7217851.0;
constexpr std::size_t kExtremeMinCount = 100;

const std::set<std::string> kFemaleTerms{
    "she",      "her",       "hers",   "herself", "woman",   "women",   "girl",     "girls",
    "mother",   "mothers",   "mom",    "mum",     "daughter", "daughters", "wife",  "wives",
    "sister",   "sisters",   "aunt",   "niece",   "grandmother", "queen", "lady",   "ladies",
    "mrs",      "ms",        "female", "females", "feminine", "actress", "bride",   "girlfriend",
    "maternal", "granddaughter"};
const std::set<std::string> kMaleTerms{
    "he",       "him",       "his",    "himself", "man",     "men",     "boy",      "boys",
    "father",   "fathers",   "dad",    "son",     "sons",    "husband", "husbands", "brother",
    "brothers", "uncle",     "nephew", "grandfather", "king", "gentleman", "mr",    "male",
    "males",    "masculine", "actor",  "groom",   "boyfriend", "paternal", "grandson"};

enum class Outcome { pass, fail, skip };

struct Line {
  std::string id;
  std::string title;
  Outcome outcome = Outcome::skip;
  std::string detail;
};

/// Header plus data rows of a seedscope CSV artifact (comment lines removed).
struct Table {
  CsvRow header;
  std::vector<CsvRow> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw std::runtime_error("column '" + name + "' not found");
  }
};

Table read_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string text;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    text += line;
    text += '\n';
  }
  auto rows = seedscope::parse_csv(text);
  if (rows.empty()) throw std::runtime_error(path.string() + " has no header");
  Table table;
  table.header = std::move(rows.front());
  table.rows.assign(rows.begin() + 1, rows.end());
  return table;
}

std::string fmt(double value) {
  std::ostringstream s;
  s.precision(4);
  s << value;
  return s.str();
}

class Run {
 public:
  explicit Run(fs::path config_file) : config_file_(std::move(config_file)) {}

  RunConfig config(std::vector<std::string> overrides) const {
    overrides.insert(overrides.begin(), "stats.min_counts=0");
    return seedscope::load_run_config(config_file_, overrides);
  }

  /// First artifact written by `command`.
  fs::path only_output(const std::string& command, const RunConfig& config) {
    const auto outputs = seedscope::run_command(command, config, log_);
    if (outputs.empty()) throw std::runtime_error(command + " wrote no artifact");
    return outputs.front();
  }

  void ensure_trained(const RunConfig& config, const std::string& corpus) {
    if (!fs::exists(seedscope::model_directory(config, corpus) / "manifest.json")) {
      seedscope::run_command("train", config, log_);
    }
  }

  void ensure_preprocessed(const RunConfig& config, const std::string& corpus) {
    if (!fs::exists(config.output_dir / corpus / "corpus.tok")) seedscope::run_command("preprocess", config, log_);
  }

 private:
  fs::path config_file_;
  std::ostringstream log_;
};

std::string experiment_corpus(const RunConfig& config) {
  return config.values.get_or("experiment.corpus", config.corpora.front().name);
}

std::optional<std::string> pair_key(const RunConfig& config, const std::string& key) {
  const auto value = config.values.get(key);
  if (!value || value->empty()) return std::nullopt;
  return value;
}

Line ingestion(Run& run, const RunConfig& config, const std::string& corpus) {
  Line line{"5a", "ingestion document and word counts", Outcome::fail, {}};
  run.ensure_preprocessed(config, corpus);
  const auto table = read_table(run.only_output("stats", config));
  for (const auto& row : table.rows) {
    if (row[table.column("corpus")] != corpus || row[table.column("min_count")] != "0") continue;
    const auto documents = std::stoull(row[table.column("documents")]);
    const auto words = std::stod(row[table.column("words")]);
    const double deviation = std::abs(words - kExpectedWords) / kExpectedWords;
    line.detail = std::to_string(documents) + " documents, " + fmt(words) + " words (" + fmt(100 * deviation) +
                  "% from reference)";
    if (documents == kExpectedDocuments && deviation <= 0.01) line.outcome = Outcome::pass;
    return line;
  }
  line.detail = "no min_count 0 row for " + corpus;
  return line;
}

Line spectrum_trend(Run& run, const std::string& corpus, const std::string& pair) {
  Line line{"5b", "ordered PC1 ratio above shuffled", Outcome::fail, {}};
  const auto config = run.config({"spectrum.pairs=" + pair, "spectrum.variants=ordered,shuffled"});
  const auto table = read_table(run.only_output("spectrum", config));
  std::map<std::string, std::map<std::string, double>> pc1;
  for (const auto& row : table.rows) {
    if (row[table.column("corpus")] != corpus || row[table.column("pair_id")] != pair) continue;
    pc1[row[table.column("replicate")]][row[table.column("variant")]] = std::stod(row[table.column("pc1")]);
  }
  std::size_t models = 0;
  std::size_t wins = 0;
  for (const auto& [replicate, by_variant] : pc1) {
    if (by_variant.count("ordered") == 0 || by_variant.count("shuffled") == 0) continue;
    ++models;
    if (by_variant.at("ordered") > by_variant.at("shuffled")) ++wins;
  }
  line.detail = std::to_string(wins) + " of " + std::to_string(models) + " models";
  if (models >= 20 && wins >= 15) line.outcome = Outcome::pass;
  return line;
}

struct EndCounts {
  std::size_t top_female = 0;
  std::size_t top_male = 0;
  std::size_t bottom_female = 0;
  std::size_t bottom_male = 0;
};

EndCounts gendered_extremes(const fs::path& rank_csv) {
  const auto table = read_table(rank_csv);
  EndCounts counts;
  for (const auto& row : table.rows) {
    const bool top = row[table.column("end")] == "top";
    const auto& word = row[table.column("word")];
    if (kFemaleTerms.count(word)) ++(top ? counts.top_female : counts.bottom_female);
    if (kMaleTerms.count(word)) ++(top ? counts.top_male : counts.bottom_male);
  }
  return counts;
}

Line extremes_trend(Run& run, const std::string& corpus, const std::string& pair) {
  Line line{"5c", "gendered extremes at min_count 100", Outcome::fail, {}};
  const std::string mu = "train.min_count=" + std::to_string(kExtremeMinCount);
  const auto ordered_config = run.config({mu, "rank.pair=" + pair, "rank.method=pca-pairs", "rank.variant=ordered",
                                          "rank.compare_variant=none", "rank.k=10", "rank.pc_index=0"});
  run.ensure_trained(ordered_config, corpus);
  const auto ordered = gendered_extremes(run.only_output("rank", ordered_config));
  const auto random_config = run.config({mu, "rank.pair=" + pair, "rank.method=pca-pairs", "rank.variant=random",
                                         "rank.compare_variant=none", "rank.k=10", "rank.pc_index=0"});
  const auto random = gendered_extremes(run.only_output("rank", random_config));

  const bool split = (ordered.top_female >= 5 && ordered.bottom_male >= 5) ||
                     (ordered.top_male >= 5 && ordered.bottom_female >= 5);
  const bool random_quiet = random.top_female + random.top_male <= 2 && random.bottom_female + random.bottom_male <= 2;
  line.detail = "ordered top f" + std::to_string(ordered.top_female) + "/m" + std::to_string(ordered.top_male) +
                ", bottom f" + std::to_string(ordered.bottom_female) + "/m" + std::to_string(ordered.bottom_male) +
                "; random top " + std::to_string(random.top_female + random.top_male) + ", bottom " +
                std::to_string(random.bottom_female + random.bottom_male);
  if (split && random_quiet) line.outcome = Outcome::pass;
  return line;
}

Line scatter_trend(Run& run, const std::string& corpus) {
  Line line{"5d", "similarity vs coherence Spearman below -0.3", Outcome::fail, {}};
  const auto config = run.config({"scatter.corpora=" + corpus});
  const auto table = read_table(run.only_output("scatter", config));
  for (const auto& row : table.rows) {
    if (row[table.column("corpus")] != corpus) continue;
    const auto& rho = row[table.column("spearman_similarity_coherence")];
    line.detail = "rho = " + (rho.empty() ? std::string("undefined") : rho);
    if (!rho.empty() && std::stod(rho) < -0.3) line.outcome = Outcome::pass;
    return line;
  }
  line.detail = "no eligible pair in " + corpus;
  return line;
}

Line coherence_trend(Run& run, const std::string& career_family, const std::string& asian_chinese) {
  Line line{"5e", "weat coherence of career/family and asian/chinese names", Outcome::fail, {}};
  const auto config = run.config({"coherence.method=weat-diff"});
  const auto table = read_table(run.only_output("coherence-table", config));
  std::optional<double> high;
  std::optional<double> low;
  for (const auto& row : table.rows) {
    const auto& id = row[table.column("pair_id")];
    if (id == career_family) high = std::stod(row[table.column("coherence")]);
    if (id == asian_chinese) low = std::stod(row[table.column("coherence")]);
  }
  line.detail = career_family + " = " + (high ? fmt(*high) : "absent") + ", " + asian_chinese + " = " +
                (low ? fmt(*low) : "absent");
  if (high && low && *high > 0.9 && *low < 0.2) line.outcome = Outcome::pass;
  return line;
}

Line bias_range(Run& run) {
  Line line{"6", "unpleasantness bias range over female sets", Outcome::fail, {}};
  const auto config = run.config({"bias.category=female", "bias.target=unpleasantness"});
  const auto table = read_table(run.only_output("bias", config));
  std::vector<double> values;
  for (const auto& row : table.rows) {
    if (row[table.column("eligible")] == "1") values.push_back(std::stod(row[table.column("value")]));
  }
  if (values.empty()) {
    line.detail = "no eligible female set";
    return line;
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  line.detail = std::to_string(values.size()) + " sets, range " + fmt(*hi - *lo);
  if (values.size() >= 4 && *hi - *lo > 0.1) line.outcome = Outcome::pass;
  return line;
}

void print(const Line& line) {
  const char* tag = line.outcome == Outcome::pass ? "PASS" : line.outcome == Outcome::fail ? "FAIL" : "SKIP";
  std::printf("%s %s %s (%s)\n", tag, line.id.c_str(), line.title.c_str(), line.detail.c_str());
}

void skip_all(const std::string& reason) {
  for (const char* id : {"5a", "5b", "5c", "5d", "5e", "6"}) print({id, "news corpus reproduction", Outcome::skip, reason});
}

/// Runs one criterion; errors become a FAIL line.
template <typename F>
Line guarded(const std::string& id, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {id, "news corpus reproduction", Outcome::fail, e.what()};
  }
}

}  // namespace

int main() {
  const char* config_path = std::getenv("SEEDSCOPE_NYT_CONFIG");
  if (config_path == nullptr || *config_path == '\0') {
    skip_all("SEEDSCOPE_NYT_CONFIG is not set");
    return kSkip;
  }
  if (!fs::exists(config_path)) {
    skip_all(std::string("configuration not found: ") + config_path);
    return kSkip;
  }

  Run run(config_path);
  RunConfig base;
  try {
    base = run.config({});
  } catch (const std::exception& e) {
    skip_all(std::string("configuration unusable: ") + e.what());
    return kSkip;
  }
  if (base.corpora.empty() || !fs::exists(base.corpora.front().path)) {
    skip_all("news corpus file not available");
    return kSkip;
  }
  if (base.catalog_path.empty() || !fs::exists(base.catalog_path) || base.pairings_path.empty() ||
      !fs::exists(base.pairings_path)) {
    skip_all("gathered seed catalog or pairings not available");
    return kSkip;
  }

  const std::string corpus = experiment_corpus(base);
  const auto gender = pair_key(base, "acceptance.gender_pair");
  const auto career_family = pair_key(base, "acceptance.career_family_pair");
  const auto asian_chinese = pair_key(base, "acceptance.asian_chinese_pair");

  std::vector<Line> lines;
  lines.push_back(guarded("5a", [&] { return ingestion(run, base, corpus); }));
  lines.push_back(guarded("train", [&] {
    run.ensure_trained(base, corpus);
    return Line{"train", "ensemble available", Outcome::pass, {}};
  }));
  if (lines.back().outcome == Outcome::fail) {
    print(lines.front());
    print(lines.back());
    return 1;
  }
  lines.pop_back();

  if (gender) {
    lines.push_back(guarded("5b", [&] { return spectrum_trend(run, corpus, *gender); }));
    lines.push_back(guarded("5c", [&] { return extremes_trend(run, corpus, *gender); }));
  } else {
    lines.push_back({"5b", "ordered PC1 ratio above shuffled", Outcome::skip, "acceptance.gender_pair not set"});
    lines.push_back({"5c", "gendered extremes at min_count 100", Outcome::skip, "acceptance.gender_pair not set"});
  }
  lines.push_back(guarded("5d", [&] { return scatter_trend(run, corpus); }));
  if (career_family && asian_chinese) {
    lines.push_back(guarded("5e", [&] { return coherence_trend(run, *career_family, *asian_chinese); }));
  } else {
    lines.push_back({"5e", "weat coherence of career/family and asian/chinese names", Outcome::skip,
                     "acceptance.career_family_pair or acceptance.asian_chinese_pair not set"});
  }
  lines.push_back(guarded("6", [&] { return bias_range(run); }));

  bool failed = false;
  bool skipped = false;
  for (const auto& line : lines) {
    print(line);
    failed = failed || line.outcome == Outcome::fail;
    skipped = skipped || line.outcome == Outcome::skip;
  }
  if (failed) return 1;
  return skipped ? kSkip : 0;
}
