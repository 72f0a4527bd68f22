#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace seedscope {

/// Plain-text "key = value" configuration. Blank lines and lines starting
/// with '#' are ignored; later assignments replace earlier ones.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text, std::string_view origin = "<config>");
  static KeyValueConfig load(const std::filesystem::path& path);

  void set(std::string key, std::string value);
  /// Sets the key only when it has no value yet.
  void set_default(const std::string& key, std::string value);
  /// Applies a "key=value" override.
  void apply_override(std::string_view assignment);

  bool contains(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  std::string require(std::string_view key) const;
  std::string get_or(std::string_view key, std::string_view fallback) const;
  std::size_t get_count(std::string_view key, std::size_t fallback) const;
  std::uint64_t get_u64(std::string_view key, std::uint64_t fallback) const;
  double get_real(std::string_view key, double fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;
  /// Comma-separated list; empty entries are dropped.
  std::vector<std::string> get_list(std::string_view key) const;

  const std::map<std::string, std::string, std::less<>>& entries() const noexcept {
    return entries_;
  }
  /// Sorted "key = value" lines.
  std::string serialize() const;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

}  // namespace seedscope
