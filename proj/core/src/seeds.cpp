#include "seedscope/seeds.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "seedscope/csv.hpp"
#include "seedscope/rng.hpp"

namespace seedscope {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string_view trim(std::string_view s, std::string_view chars = " \t\r\n") {
  const auto first = s.find_first_not_of(chars);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(chars);
  return s.substr(first, last - first + 1);
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// "['he', 'him']" or "he, him" -> {"he", "him"}
std::vector<std::string> split_seed_string(std::string_view text) {
  text = trim(text);
  if (text.size() >= 2 && text.front() == '[' && text.back() == ']') {
    text = text.substr(1, text.size() - 2);
  }
  std::vector<std::string> seeds;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                          : comma - start);
    const auto seed = trim(trim(piece), " \t\r\n'\"");
    if (!seed.empty()) seeds.emplace_back(seed);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return seeds;
}

std::optional<std::string> string_field(const nlohmann::json& record, const std::string& name) {
  const auto it = record.find(name);
  if (it == record.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number()) return it->dump();
  return std::nullopt;
}

Alignment parse_alignment(std::string_view text) {
  Alignment alignment;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    const auto item = trim(text.substr(start, end - start));
    if (!item.empty()) {
      const auto dash = item.find('-');
      if (dash == std::string_view::npos) {
        throw FormatError("pairings: malformed alignment entry '" + std::string(item) + "'");
      }
      try {
        alignment.emplace_back(std::stoul(std::string(item.substr(0, dash))),
                               std::stoul(std::string(item.substr(dash + 1))));
      } catch (const std::exception&) {
        throw FormatError("pairings: malformed alignment entry '" + std::string(item) + "'");
      }
    }
    start = end + 1;
  }
  return alignment;
}

}  // namespace

Alignment positional_alignment(std::size_t size_a, std::size_t size_b) {
  Alignment alignment;
  for (std::size_t i = 0; i < std::min(size_a, size_b); ++i) alignment.emplace_back(i, i);
  return alignment;
}

void validate_alignment(const Alignment& alignment, std::size_t size_a, std::size_t size_b) {
  std::vector<bool> used_a(size_a, false);
  std::vector<bool> used_b(size_b, false);
  for (const auto& [a, b] : alignment) {
    if (a >= size_a || b >= size_b) {
      throw PreconditionError("alignment entry " + std::to_string(a) + "-" + std::to_string(b) +
                              " is out of range");
    }
    if (used_a[a] || used_b[b]) {
      throw PreconditionError("alignment reuses seed " + std::to_string(a) + "-" +
                              std::to_string(b) + "; it must be a bijection");
    }
    used_a[a] = used_b[b] = true;
  }
}

std::vector<SeedSet> parse_catalog(std::string_view json, const FieldMap& fields,
                                   Diagnostics* diagnostics) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("catalog: malformed JSON: ") + e.what());
  }
  if (!root.is_array()) throw FormatError("catalog: top-level value must be a JSON array");

  std::vector<SeedSet> sets;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const auto& record = root[i];
    auto skip = [&](const std::string& why) {
      warn(diagnostics, "catalog record " + std::to_string(i) + ": " + why + "; skipped");
    };
    if (!record.is_object()) {
      skip("not an object");
      continue;
    }
    SeedSet set;
    const auto id = string_field(record, fields.id);
    const auto category = string_field(record, fields.category);
    if (!id) {
      skip("missing field '" + fields.id + "'");
      continue;
    }
    if (!category) {
      skip("missing field '" + fields.category + "'");
      continue;
    }
    set.id = *id;
    set.category = *category;
    set.source = string_field(record, fields.source).value_or("");
    set.link = string_field(record, fields.link).value_or("");

    const auto seeds = record.find(fields.seeds);
    if (seeds == record.end() || seeds->is_null()) {
      skip("missing field '" + fields.seeds + "'");
      continue;
    }
    if (seeds->is_string()) {
      set.seeds = split_seed_string(seeds->get<std::string>());
    } else if (seeds->is_array()) {
      bool ok = true;
      for (const auto& seed : *seeds) {
        if (!seed.is_string()) {
          ok = false;
          break;
        }
        set.seeds.push_back(seed.get<std::string>());
      }
      if (!ok) {
        skip("non-string seed in '" + fields.seeds + "'");
        continue;
      }
    } else {
      skip("field '" + fields.seeds + "' is neither a list nor a string");
      continue;
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

std::vector<SeedSet> load_catalog(const std::filesystem::path& path, const FieldMap& fields,
                                  Diagnostics* diagnostics) {
  return parse_catalog(read_file(path), fields, diagnostics);
}

void save_catalog(std::span<const SeedSet> sets, const std::filesystem::path& path,
                  const FieldMap& fields) {
  nlohmann::json root = nlohmann::json::array();
  for (const auto& set : sets) {
    nlohmann::json record;
    record[fields.id] = set.id;
    record[fields.category] = set.category;
    record[fields.seeds] = set.seeds;
    record[fields.source] = set.source;
    record[fields.link] = set.link;
    root.push_back(std::move(record));
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << root.dump(2) << '\n';
}

std::optional<SeedSet> normalize_set(const SeedSet& set) {
  SeedSet out = set;
  out.seeds.clear();
  std::unordered_set<std::string> seen;
  for (const auto& raw : set.seeds) {
    const auto trimmed = trim(raw);
    if (trimmed.empty()) continue;
    if (trimmed.find_first_of(" \t\r\n") != std::string_view::npos) continue;
    std::string seed = lowercase(trimmed);
    if (seen.insert(seed).second) out.seeds.push_back(std::move(seed));
  }
  if (out.seeds.size() < 2) return std::nullopt;
  return out;
}

std::vector<SeedSet> normalize_catalog(std::span<const SeedSet> sets, Diagnostics* diagnostics) {
  std::vector<SeedSet> out;
  for (const auto& set : sets) {
    if (auto normalized = normalize_set(set)) {
      out.push_back(std::move(*normalized));
    } else {
      warn(diagnostics, "seed set '" + set.id + "' has fewer than two unigram seeds; removed");
    }
  }
  return out;
}

SeedSetPair make_pair(std::string pair_id, SeedSet a, SeedSet b, std::string dimension_label) {
  SeedSetPair pair;
  pair.pair_id = std::move(pair_id);
  pair.pairing = positional_alignment(a.seeds.size(), b.seeds.size());
  pair.set_a = std::move(a);
  pair.set_b = std::move(b);
  pair.dimension_label = std::move(dimension_label);
  return pair;
}

std::vector<SeedSetPair> parse_pairings(std::string_view csv, std::span<const SeedSet> catalog,
                                       std::span<const std::string> dropped_ids,
                                       Diagnostics* diagnostics) {
  const auto rows = parse_csv(csv);
  if (rows.empty()) throw FormatError("pairings: missing header row");
  const auto& header = rows.front();
  auto column = [&](std::string_view name, bool required) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return i;
    }
    if (required) throw FormatError("pairings: missing column '" + std::string(name) + "'");
    return std::nullopt;
  };
  const std::size_t pair_col = *column("pair_id", true);
  const std::size_t a_col = *column("set_a_id", true);
  const std::size_t b_col = *column("set_b_id", true);
  const std::size_t label_col = *column("dimension_label", true);
  const auto alignment_col = column("alignment", false);

  auto find_set = [&](std::string_view id) -> const SeedSet& {
    const auto it = std::find_if(catalog.begin(), catalog.end(),
                                 [&](const SeedSet& s) { return s.id == id; });
    if (it == catalog.end()) {
      throw PreconditionError("pairings: unknown seed set id '" + std::string(id) + "'");
    }
    return *it;
  };

  std::vector<SeedSetPair> pairs;
  std::set<std::string, std::less<>> seen_ids;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t needed = std::max({pair_col, a_col, b_col, label_col}) + 1;
    if (row.size() < needed) {
      throw FormatError("pairings: row " + std::to_string(r + 1) + " has too few columns");
    }
    std::string pair_id(trim(row[pair_col]));
    if (!seen_ids.insert(pair_id).second) {
      throw PreconditionError("pairings: duplicate pair_id '" + pair_id + "'");
    }
    const bool dropped = std::any_of(dropped_ids.begin(), dropped_ids.end(), [&](const std::string& id) {
      return id == trim(row[a_col]) || id == trim(row[b_col]);
    });
    if (dropped) {
      warn(diagnostics, "pairings: pair '" + pair_id + "' skipped, a seed set was dropped by normalization");
      continue;
    }
    SeedSetPair pair = make_pair(pair_id, find_set(trim(row[a_col])), find_set(trim(row[b_col])),
                                 std::string(trim(row[label_col])));
    if (alignment_col && *alignment_col < row.size() && !trim(row[*alignment_col]).empty()) {
      pair.pairing = parse_alignment(row[*alignment_col]);
      validate_alignment(*pair.pairing, pair.set_a.seeds.size(), pair.set_b.seeds.size());
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<SeedSetPair> load_pairings(const std::filesystem::path& path,
                                       std::span<const SeedSet> catalog,
                                       std::span<const std::string> dropped_ids,
                                       Diagnostics* diagnostics) {
  return parse_pairings(read_file(path), catalog, dropped_ids, diagnostics);
}

SeedSetPair shuffle_pairing(const SeedSetPair& pair, std::uint64_t rng_seed) {
  if (!pair.pairing) {
    throw PreconditionError("shuffle_pairing: pair '" + pair.pair_id + "' has no element pairing");
  }
  SeedSetPair out = pair;
  auto& alignment = *out.pairing;
  Rng rng = Rng::stream(rng_seed, 0, StreamPurpose::shuffle);
  // Fisher-Yates over the B side.
  for (std::size_t i = alignment.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(alignment[i - 1].second, alignment[j].second);
  }
  return out;
}

TagLexicon load_tag_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open tag lexicon " + path.string());
  TagLexicon lexicon;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    std::istringstream fields{std::string(content)};
    std::string word;
    std::string tag;
    if (!(fields >> word >> tag)) {
      throw FormatError(path.string() + ":" + std::to_string(line_number) + ": expected 'word tag'");
    }
    lexicon[lowercase(word)] = tag;
  }
  return lexicon;
}

std::vector<SeedSet> generate_random_sets(const EmbeddingModel& model,
                                          const GenerationOptions& options) {
  if (options.min_frequency > options.max_frequency) {
    throw PreconditionError("generate_random_sets: empty frequency band");
  }
  if (!model.has_frequencies() && options.min_frequency > 0) {
    throw PreconditionError("generate_random_sets: model has no word frequencies");
  }
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto f = model.frequency(i);
    if (f < options.min_frequency || f > options.max_frequency) continue;
    if (options.tags != nullptr) {
      const auto it = options.tags->find(model.word(i));
      if (it == options.tags->end() || it->second != options.required_tag) continue;
    }
    eligible.push_back(i);
  }
  const std::size_t needed = options.set_size * options.n_sets;
  if (eligible.size() < needed) {
    throw PreconditionError("generate_random_sets: frequency band holds " +
                            std::to_string(eligible.size()) + " words, need " +
                            std::to_string(needed));
  }
  Rng rng = Rng::stream(options.rng_seed, 0, StreamPurpose::generation);
  for (std::size_t i = 0; i < needed; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(eligible.size() - i));
    std::swap(eligible[i], eligible[j]);
  }
  std::vector<SeedSet> sets;
  for (std::size_t s = 0; s < options.n_sets; ++s) {
    SeedSet set;
    set.id = options.id_prefix + "-" + std::to_string(s);
    set.category = "generated";
    set.source = "generated:seed=" + std::to_string(options.rng_seed);
    for (std::size_t k = 0; k < options.set_size; ++k) {
      set.seeds.push_back(model.word(eligible[s * options.set_size + k]));
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

CatalogStats catalog_stats(std::span<const SeedSet> catalog, std::span<const SeedSetPair> pairs) {
  CatalogStats stats;
  stats.set_count = catalog.size();
  for (const auto& set : catalog) {
    stats.seed_count += set.seeds.size();
    stats.set_sizes.emplace_back(set.id, set.seeds.size());
    ++stats.size_histogram[set.seeds.size()];
    ++stats.per_source[set.source];
    ++stats.per_category[set.category];
  }
  for (const auto& pair : pairs) {
    PairDuplicates dup{pair.pair_id, {}};
    const std::unordered_set<std::string> in_b(pair.set_b.seeds.begin(), pair.set_b.seeds.end());
    for (const auto& seed : pair.set_a.seeds) {
      if (in_b.contains(seed)) dup.shared_seeds.push_back(seed);
    }
    stats.duplicate_occurrences += dup.shared_seeds.size();
    stats.duplicates.push_back(std::move(dup));
  }
  return stats;
}

}  // namespace seedscope
