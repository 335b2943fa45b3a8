#include "sact/config.hpp"

#include <charconv>
#include <sstream>

#include "sact/error.hpp"
#include "sact/hash.hpp"

namespace sact {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

bool Config::is_path_key(std::string_view key) {
  return key.starts_with("resources.") || key == "rumor.negation" ||
         key == "rumor.uncertainty" || key == "rumor.certainty" || key == "rumor.pronouns";
}

Config Config::parse(std::string_view text, std::filesystem::path base_dir) {
  Config config;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = trim(text.substr(pos, eol - pos));
    ++line_no;
    pos = eol + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw DataError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(trim(line.substr(0, eq)));
    if (key.empty()) {
      throw DataError("config line " + std::to_string(line_no) + ": empty key");
    }
    config.values_[key] = std::string(trim(line.substr(eq + 1)));
    config.base_dirs_[key] = base_dir;
  }
  return config;
}

Config Config::load(const std::filesystem::path& path) {
  return parse(read_file(path), path.parent_path());
}

Config Config::defaults() {
  Config c;
  c.set("preprocess.normalize", "true");
  c.set("preprocess.split_sentences", "true");
  c.set("preprocess.remove_stopwords", "true");
  c.set("preprocess.stem", "true");
  c.set("preprocess.lemmatize", "true");
  c.set("features.enrich", "true");
  c.set("nb.alpha", "1.0");
  c.set("knn.k", "5");
  c.set("rf.trees", "100");
  c.set("rf.seed", "42");
  c.set("rf.max_depth", "0");
  c.set("rf.bootstrap", "true");
  c.set("svm.lambda", "0.001");
  c.set("svm.epochs", "50");
  c.set("eval.k", "10");
  c.set("eval.seed", "42");
  c.set("ttest.alpha", "0.05");
  c.set("ttest.variant", "welch");
  c.set("rumor.selected_classes", "Ques,Thrt,Declar,Narrv");
  c.set("rumor.algo", "rf");
  c.set("sa.algo", "rf");
  return c;
}

void Config::set(std::string key, std::string value) {
  base_dirs_.erase(key);
  values_[std::move(key)] = std::move(value);
}

bool Config::has(std::string_view key) const { return values_.find(key) != values_.end(); }

void Config::merge(const Config& other) {
  for (const auto& [k, v] : other.values_) {
    values_[k] = v;
    auto it = other.base_dirs_.find(k);
    if (it != other.base_dirs_.end()) {
      base_dirs_[k] = it->second;
    } else {
      base_dirs_.erase(k);
    }
  }
}

std::optional<std::string> Config::get(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string Config::get_string(std::string_view key, std::string_view fallback) const {
  auto v = get(key);
  return v ? *v : std::string(fallback);
}

double Config::get_double(std::string_view key, double fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    double d = std::stod(*v, &used);
    if (used != v->size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw UsageError("config key " + std::string(key) + ": not a number: " + *v);
  }
}

long long Config::get_int(std::string_view key, long long fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc() || ptr != v->data() + v->size()) {
    throw UsageError("config key " + std::string(key) + ": not an integer: " + *v);
  }
  return out;
}

bool Config::get_bool(std::string_view key, bool fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw UsageError("config key " + std::string(key) + ": not a boolean: " + *v);
}

std::vector<std::string> Config::get_list(std::string_view key) const {
  std::vector<std::string> out;
  auto v = get(key);
  if (!v) return out;
  std::string_view rest = *v;
  while (!rest.empty()) {
    auto comma = rest.find(',');
    auto item = trim(rest.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::optional<std::filesystem::path> Config::get_path(std::string_view key) const {
  auto v = get(key);
  if (!v || v->empty()) return std::nullopt;
  std::filesystem::path p(*v);
  if (p.is_relative()) {
    auto it = base_dirs_.find(key);
    if (it != base_dirs_.end() && !it->second.empty()) p = it->second / p;
  }
  return p;
}

std::string Config::dump() const {
  std::ostringstream out;
  for (const auto& [k, v] : values_) {
    out << k << " = ";
    if (is_path_key(k)) {
      out << get_path(k).value_or(std::filesystem::path()).string();
    } else {
      out << v;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace sact
