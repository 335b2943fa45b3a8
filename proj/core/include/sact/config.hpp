#ifndef SACT_CONFIG_HPP_
#define SACT_CONFIG_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sact {

// Flat `key = value` configuration, keys namespaced by module
// (`nb.alpha`, `rf.trees`, `rumor.selected_classes`, ...). Lines starting
// with `#` are comments. Later assignments override earlier ones.
class Config {
 public:
  Config() = default;

  static Config parse(std::string_view text, std::filesystem::path base_dir = {});
  static Config load(const std::filesystem::path& path);

  // Every key known to the library with its built-in default.
  static Config defaults();

  void set(std::string key, std::string value);
  bool has(std::string_view key) const;

  // Overlays `other` onto this config; keys in `other` win.
  void merge(const Config& other);

  std::optional<std::string> get(std::string_view key) const;
  std::string get_string(std::string_view key, std::string_view fallback) const;
  double get_double(std::string_view key, double fallback) const;
  long long get_int(std::string_view key, long long fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;
  std::vector<std::string> get_list(std::string_view key) const;

  // Path values are resolved against the directory of the file that set
  // them, so configs can reference resources next to themselves.
  std::optional<std::filesystem::path> get_path(std::string_view key) const;

  // Keys whose values name files (`resources.*` and the rumor word lists).
  static bool is_path_key(std::string_view key);

  // `key = value` lines in key order, with file paths resolved.
  std::string dump() const;

  const std::map<std::string, std::string, std::less<>>& entries() const { return values_; }

 private:
  std::map<std::string, std::string, std::less<>> values_;
  std::map<std::string, std::filesystem::path, std::less<>> base_dirs_;
};

}  // namespace sact

#endif  // SACT_CONFIG_HPP_
