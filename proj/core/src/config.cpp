#include "seedscope/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "seedscope/error.hpp"

namespace seedscope {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_integer(std::string_view key, std::string_view text) {
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw PreconditionError("config key '" + std::string(key) + "': expected a non-negative integer, got '" +
                            std::string(text) + "'");
  }
  return value;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text, std::string_view origin) {
  KeyValueConfig config;
  std::size_t line_number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(start, end - start));
    ++line_number;
    start = end + 1;
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos || trim(line.substr(0, eq)).empty()) {
      throw FormatError(std::string(origin) + ":" + std::to_string(line_number) +
                        ": expected 'key = value'");
    }
    config.set(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
    if (end == text.size()) break;
  }
  return config;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

void KeyValueConfig::set(std::string key, std::string value) {
  entries_.insert_or_assign(std::move(key), std::move(value));
}

void KeyValueConfig::set_default(const std::string& key, std::string value) {
  entries_.try_emplace(key, std::move(value));
}

void KeyValueConfig::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || trim(assignment.substr(0, eq)).empty()) {
    throw PreconditionError("override '" + std::string(assignment) + "' is not key=value");
  }
  set(std::string(trim(assignment.substr(0, eq))), std::string(trim(assignment.substr(eq + 1))));
}

bool KeyValueConfig::contains(std::string_view key) const { return entries_.find(key) != entries_.end(); }

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::require(std::string_view key) const {
  auto value = get(key);
  if (!value || value->empty()) {
    throw PreconditionError("missing required config key '" + std::string(key) + "'");
  }
  return *value;
}

std::string KeyValueConfig::get_or(std::string_view key, std::string_view fallback) const {
  return get(key).value_or(std::string(fallback));
}

std::size_t KeyValueConfig::get_count(std::string_view key, std::size_t fallback) const {
  const auto value = get(key);
  return value ? parse_integer<std::size_t>(key, *value) : fallback;
}

std::uint64_t KeyValueConfig::get_u64(std::string_view key, std::uint64_t fallback) const {
  const auto value = get(key);
  return value ? parse_integer<std::uint64_t>(key, *value) : fallback;
}

double KeyValueConfig::get_real(std::string_view key, double fallback) const {
  const auto value = get(key);
  if (!value) return fallback;
  double parsed = 0.0;
  const auto [end, ec] = std::from_chars(value->data(), value->data() + value->size(), parsed);
  if (ec != std::errc{} || end != value->data() + value->size()) {
    throw PreconditionError("config key '" + std::string(key) + "': expected a number, got '" +
                            *value + "'");
  }
  return parsed;
}

bool KeyValueConfig::get_bool(std::string_view key, bool fallback) const {
  const auto value = get(key);
  if (!value) return fallback;
  if (*value == "true" || *value == "1" || *value == "yes" || *value == "on") return true;
  if (*value == "false" || *value == "0" || *value == "no" || *value == "off") return false;
  throw PreconditionError("config key '" + std::string(key) + "': expected a boolean, got '" +
                          *value + "'");
}

std::vector<std::string> KeyValueConfig::get_list(std::string_view key) const {
  std::vector<std::string> items;
  const auto value = get(key);
  if (!value) return items;
  std::string_view rest = *value;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = trim(rest.substr(0, comma));
    if (!item.empty()) items.emplace_back(item);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return items;
}

std::string KeyValueConfig::serialize() const {
  std::string out;
  for (const auto& [key, value] : entries_) out += key + " = " + value + "\n";
  return out;
}

}  // namespace seedscope
