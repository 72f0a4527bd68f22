#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seedscope/embedding.hpp"
#include "seedscope/error.hpp"

namespace seedscope {

struct SeedSet {
  std::string id;
  std::string category;
  std::vector<std::string> seeds;
  std::string source;
  std::string link;

  friend bool operator==(const SeedSet&, const SeedSet&) = default;
};

/// (index into set_a.seeds, index into set_b.seeds)
using Alignment = std::vector<std::pair<std::size_t, std::size_t>>;

struct SeedSetPair {
  std::string pair_id;
  SeedSet set_a;
  SeedSet set_b;
  std::optional<Alignment> pairing;
  std::string dimension_label;
};

/// Positional alignment truncated to the shorter set.
Alignment positional_alignment(std::size_t size_a, std::size_t size_b);

/// Throws PreconditionError unless `alignment` is injective on both sides and
/// in range for set sizes (size_a, size_b).
void validate_alignment(const Alignment& alignment, std::size_t size_a, std::size_t size_b);

/// Names of the catalog JSON fields.
struct FieldMap {
  std::string id = "ID";
  std::string category = "Category";
  std::string seeds = "Seeds";
  std::string source = "Source";
  std::string link = "Link";
};

/// Parses a JSON array of seed-set records. The seeds field may be a JSON
/// array of strings or a string holding a bracketed, comma-separated list.
/// Records missing a mapped field are skipped with a warning; malformed JSON
/// throws FormatError. No normalization is applied.
std::vector<SeedSet> parse_catalog(std::string_view json, const FieldMap& fields = {},
                                   Diagnostics* diagnostics = nullptr);
std::vector<SeedSet> load_catalog(const std::filesystem::path& path, const FieldMap& fields = {},
                                  Diagnostics* diagnostics = nullptr);
/// Writes sets in the catalog schema described by `fields`.
void save_catalog(std::span<const SeedSet> sets, const std::filesystem::path& path,
                  const FieldMap& fields = {});

/// Lowercases seeds, removes multi-word seeds and duplicates (first occurrence
/// wins). Returns nothing when fewer than two seeds remain.
std::optional<SeedSet> normalize_set(const SeedSet& set);
std::vector<SeedSet> normalize_catalog(std::span<const SeedSet> sets,
                                       Diagnostics* diagnostics = nullptr);

/// Reads a pairings CSV with columns pair_id, set_a_id, set_b_id,
/// dimension_label and an optional `alignment` column ("0-0;1-2;...").
/// Pairs naming a set listed in `dropped_ids` are skipped with a warning;
/// any other unknown set id throws.
std::vector<SeedSetPair> load_pairings(const std::filesystem::path& path,
                                       std::span<const SeedSet> catalog,
                                       std::span<const std::string> dropped_ids = {},
                                       Diagnostics* diagnostics = nullptr);
std::vector<SeedSetPair> parse_pairings(std::string_view csv, std::span<const SeedSet> catalog,
                                        std::span<const std::string> dropped_ids = {},
                                        Diagnostics* diagnostics = nullptr);

SeedSetPair make_pair(std::string pair_id, SeedSet a, SeedSet b, std::string dimension_label = {});

/// Permutes which B seed each A seed is aligned with, uniformly and
/// deterministically under `rng_seed`. Throws for unpaired input.
SeedSetPair shuffle_pairing(const SeedSetPair& pair, std::uint64_t rng_seed);

/// Static word -> tag lexicon used to restrict generated sets (e.g. to nouns).
using TagLexicon = std::map<std::string, std::string, std::less<>>;
TagLexicon load_tag_lexicon(const std::filesystem::path& path);

struct GenerationOptions {
  std::size_t set_size = 5;
  std::size_t n_sets = 2;
  /// Inclusive corpus-frequency band.
  std::uint64_t min_frequency = 0;
  std::uint64_t max_frequency = UINT64_MAX;
  std::uint64_t rng_seed = 42;
  /// When set, only words whose tag equals `required_tag` are eligible.
  const TagLexicon* tags = nullptr;
  std::string required_tag;
  std::string id_prefix = "generated";
};

/// Disjoint sets of distinct words drawn uniformly from the in-band
/// vocabulary. Throws PreconditionError when the band holds too few words.
std::vector<SeedSet> generate_random_sets(const EmbeddingModel& model,
                                          const GenerationOptions& options);

struct PairDuplicates {
  std::string pair_id;
  std::vector<std::string> shared_seeds;
};

struct CatalogStats {
  std::size_t set_count = 0;
  std::size_t seed_count = 0;
  std::vector<std::pair<std::string, std::size_t>> set_sizes;   // in catalog order
  std::map<std::size_t, std::size_t> size_histogram;
  std::map<std::string, std::size_t> per_source;
  std::map<std::string, std::size_t> per_category;
  std::vector<PairDuplicates> duplicates;                      // per pair
  std::size_t duplicate_occurrences = 0;
};

CatalogStats catalog_stats(std::span<const SeedSet> catalog,
                           std::span<const SeedSetPair> pairs = {});

}  // namespace seedscope
