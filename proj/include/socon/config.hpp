#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace socon::config {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parsed declarative config: a TOML subset with [sections], `key = value`
/// pairs, '#' comments, and values that are "strings", numbers, true/false or
/// flat numeric arrays [1, 2, 3]. Keys are addressed as "section.key"
/// (top-level keys have no prefix).
class Document {
 public:
  using Value = std::variant<bool, double, std::string, std::vector<double>>;

  static Document parse(std::string_view text, std::string source = "<config>");
  static Document load(const std::filesystem::path& path);

  const std::string& source() const { return source_; }
  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  std::vector<std::string> keys() const;

  std::optional<std::string> get_string(const std::string& key) const;
  std::optional<double> get_number(const std::string& key) const;
  std::optional<long long> get_integer(const std::string& key) const;
  std::optional<bool> get_bool(const std::string& key) const;
  std::optional<std::vector<double>> get_numbers(const std::string& key) const;

  /// Throws ConfigError naming the first key not in `allowed`.
  void reject_unknown(const std::set<std::string>& allowed) const;

 private:
  struct Entry {
    Value value;
    int line;
  };
  [[noreturn]] void type_error(const std::string& key, const char* expected) const;

  std::string source_;
  std::map<std::string, Entry> entries_;
};

}  // namespace socon::config
