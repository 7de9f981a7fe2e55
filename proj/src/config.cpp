#include "socon/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace socon::config {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Drop a trailing '#' comment that is not inside a string literal.
std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

bool is_bare_key(std::string_view k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

std::optional<double> parse_number(std::string_view text) {
  std::string s(text);
  s.erase(std::remove(s.begin(), s.end(), '_'), s.end());
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  try {
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

Document Document::parse(std::string_view text, std::string source) {
  Document doc;
  doc.source_ = std::move(source);
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;

  auto fail = [&](int line, const std::string& msg) -> ConfigError {
    return ConfigError(doc.source_ + ":" + std::to_string(line) + ": " + msg);
  };

  for (int lineno = 1; std::getline(in, raw); ++lineno) {
    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw fail(lineno, "unterminated section header");
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!is_bare_key(name)) throw fail(lineno, "invalid section name '" + std::string(name) + "'");
      section = std::string(name);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw fail(lineno, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!is_bare_key(key)) throw fail(lineno, "invalid key '" + std::string(key) + "'");
    if (value.empty()) throw fail(lineno, "missing value for '" + std::string(key) + "'");

    const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    if (doc.entries_.count(full)) throw fail(lineno, "duplicate key '" + full + "'");

    Value parsed;
    if (value.front() == '"') {
      if (value.size() < 2 || value.back() != '"') throw fail(lineno, "unterminated string for '" + full + "'");
      parsed = std::string(value.substr(1, value.size() - 2));
    } else if (value == "true" || value == "false") {
      parsed = value == "true";
    } else if (value.front() == '[') {
      if (value.back() != ']') throw fail(lineno, "unterminated array for '" + full + "'");
      std::vector<double> items;
      std::string_view body = trim(value.substr(1, value.size() - 2));
      while (!body.empty()) {
        const auto comma = body.find(',');
        const std::string_view item = trim(body.substr(0, comma));
        if (!item.empty()) {
          const auto v = parse_number(item);
          if (!v) throw fail(lineno, "array '" + full + "' holds a non-number '" + std::string(item) + "'");
          items.push_back(*v);
        }
        if (comma == std::string_view::npos) break;
        body.remove_prefix(comma + 1);
      }
      parsed = std::move(items);
    } else {
      const auto v = parse_number(value);
      if (!v) throw fail(lineno, "cannot parse value '" + std::string(value) + "' for '" + full + "'");
      parsed = *v;
    }
    doc.entries_.emplace(full, Entry{std::move(parsed), lineno});
  }
  return doc;
}

Document Document::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path.string());
}

std::vector<std::string> Document::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : entries_) out.push_back(k);
  return out;
}

void Document::type_error(const std::string& key, const char* expected) const {
  throw ConfigError(source_ + ":" + std::to_string(entries_.at(key).line) + ": " + key + ": expected " + expected);
}

std::optional<std::string> Document::get_string(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  if (auto* s = std::get_if<std::string>(&it->second.value)) return *s;
  type_error(key, "a string");
}

std::optional<double> Document::get_number(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  if (auto* d = std::get_if<double>(&it->second.value)) return *d;
  type_error(key, "a number");
}

std::optional<long long> Document::get_integer(const std::string& key) const {
  const auto v = get_number(key);
  if (!v) return std::nullopt;
  if (std::floor(*v) != *v || std::abs(*v) > 9.0e15) type_error(key, "an integer");
  return static_cast<long long>(*v);
}

std::optional<bool> Document::get_bool(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  if (auto* b = std::get_if<bool>(&it->second.value)) return *b;
  type_error(key, "true or false");
}

std::optional<std::vector<double>> Document::get_numbers(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  if (auto* a = std::get_if<std::vector<double>>(&it->second.value)) return *a;
  if (auto* d = std::get_if<double>(&it->second.value)) return std::vector<double>{*d};
  type_error(key, "an array of numbers");
}

void Document::reject_unknown(const std::set<std::string>& allowed) const {
  for (const auto& [key, entry] : entries_) {
    if (!allowed.count(key)) {
      throw ConfigError(source_ + ":" + std::to_string(entry.line) + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace socon::config
