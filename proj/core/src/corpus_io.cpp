#include "sact/corpus_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <unordered_set>

#include "json.hpp"
#include "sact/error.hpp"
#include "sact/hash.hpp"
#include "sact/types.hpp"

namespace sact {

namespace {

using Json = nlohmann::ordered_json;

std::string line_error(std::string_view what, std::size_t line) {
  return std::string(what) + " at line " + std::to_string(line);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

// JSON has no infinities; NB log-priors of labels absent from a training
// fold are -inf.
Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_of(const Json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  throw DataError("bad number " + s + " in model archive");
}

Json numbers(const std::vector<double>& vs) {
  Json a = Json::array();
  for (double v : vs) a.push_back(number(v));
  return a;
}

std::vector<double> numbers_of(const Json& j) {
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(number_of(v));
  return out;
}

Json matrix(const std::vector<std::vector<double>>& m) {
  Json a = Json::array();
  for (const auto& row : m) a.push_back(numbers(row));
  return a;
}

std::vector<std::vector<double>> matrix_of(const Json& j) {
  std::vector<std::vector<double>> out;
  for (const auto& row : j) out.push_back(numbers_of(row));
  return out;
}

Json payload_of(const Model& m) {
  Json p = Json::object();
  switch (m.kind) {
    case ModelKind::kNb: {
      const auto& nb = std::get<NbParams>(m.params);
      p["alpha"] = nb.alpha;
      p["used"] = nb.used;
      p["log_prior"] = numbers(nb.log_prior);
      p["log_likelihood"] = matrix(nb.log_likelihood);
      break;
    }
    case ModelKind::kKnn: {
      const auto& knn = std::get<KnnParams>(m.params);
      p["k"] = knn.k;
      p["targets"] = knn.targets;
      p["points"] = matrix(knn.points);
      break;
    }
    case ModelKind::kRf: {
      const auto& rf = std::get<RfParams>(m.params);
      p["seed"] = rf.seed;
      p["max_depth"] = rf.max_depth;
      p["bootstrap"] = rf.bootstrap;
      Json trees = Json::array();
      for (const auto& tree : rf.trees) {
        Json nodes = Json::array();
        for (const auto& n : tree.nodes) {
          Json node = Json::object();
          if (n.feature >= 0) {
            node["f"] = n.feature;
            node["t"] = number(n.threshold);
            node["l"] = n.left;
            node["r"] = n.right;
          } else {
            node["d"] = numbers(n.distribution);
          }
          nodes.push_back(std::move(node));
        }
        Json t = Json::object();
        t["seed"] = tree.seed;
        t["nodes"] = std::move(nodes);
        trees.push_back(std::move(t));
      }
      p["trees"] = std::move(trees);
      break;
    }
    case ModelKind::kSvm: {
      const auto& svm = std::get<SvmParams>(m.params);
      p["lambda"] = svm.lambda;
      p["epochs"] = svm.epochs;
      p["scale"] = numbers(svm.scale);
      p["weights"] = matrix(svm.weights);
      break;
    }
  }
  return p;
}

void check_node_index(int i, std::size_t n) {
  if (i < 0 || static_cast<std::size_t>(i) >= n) throw DataError("tree node index out of range");
}

decltype(Model::params) params_of(ModelKind kind, const Json& p, std::size_t num_labels,
                                  std::size_t num_features) {
  const auto check_rows = [&](const std::vector<std::vector<double>>& m, std::size_t rows,
                              std::size_t cols, std::string_view what) {
    if (m.size() != rows) throw DataError(std::string(what) + " has the wrong number of rows");
    for (const auto& r : m) {
      if (r.size() != cols) throw DataError(std::string(what) + " has the wrong number of columns");
    }
  };
  switch (kind) {
    case ModelKind::kNb: {
      NbParams nb;
      nb.alpha = p.at("alpha").get<double>();
      nb.used = p.at("used").get<std::vector<bool>>();
      nb.log_prior = numbers_of(p.at("log_prior"));
      nb.log_likelihood = matrix_of(p.at("log_likelihood"));
      if (nb.used.size() != num_features || nb.log_prior.size() != num_labels) {
        throw DataError("naive Bayes payload does not match the schema");
      }
      check_rows(nb.log_likelihood, num_labels, num_features, "log_likelihood");
      return nb;
    }
    case ModelKind::kKnn: {
      KnnParams knn;
      knn.k = p.at("k").get<int>();
      knn.targets = p.at("targets").get<std::vector<int>>();
      knn.points = matrix_of(p.at("points"));
      check_rows(knn.points, knn.targets.size(), num_features, "points");
      for (int t : knn.targets) {
        if (t < 0 || static_cast<std::size_t>(t) >= num_labels) throw DataError("bad KNN target");
      }
      return knn;
    }
    case ModelKind::kRf: {
      RfParams rf;
      rf.seed = p.at("seed").get<std::uint64_t>();
      rf.max_depth = p.at("max_depth").get<int>();
      rf.bootstrap = p.at("bootstrap").get<bool>();
      for (const auto& t : p.at("trees")) {
        DecisionTree tree;
        tree.seed = t.at("seed").get<std::uint64_t>();
        for (const auto& n : t.at("nodes")) {
          TreeNode node;
          if (n.contains("f")) {
            node.feature = n.at("f").get<int>();
            node.threshold = number_of(n.at("t"));
            node.left = n.at("l").get<int>();
            node.right = n.at("r").get<int>();
            if (node.feature < 0 || static_cast<std::size_t>(node.feature) >= num_features) {
              throw DataError("tree split on an unknown feature");
            }
          } else {
            node.distribution = numbers_of(n.at("d"));
            if (node.distribution.size() != num_labels) throw DataError("bad leaf distribution");
          }
          tree.nodes.push_back(std::move(node));
        }
        if (tree.nodes.empty()) throw DataError("empty decision tree");
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
          const auto& n = tree.nodes[i];
          if (n.feature < 0) continue;
          check_node_index(n.left, tree.nodes.size());
          check_node_index(n.right, tree.nodes.size());
          // Children always follow their parent, which rules out cycles.
          if (static_cast<std::size_t>(n.left) <= i || static_cast<std::size_t>(n.right) <= i) {
            throw DataError("decision tree is not topologically ordered");
          }
        }
        rf.trees.push_back(std::move(tree));
      }
      if (rf.trees.empty()) throw DataError("random forest without trees");
      return rf;
    }
    case ModelKind::kSvm: {
      SvmParams svm;
      svm.lambda = p.at("lambda").get<double>();
      svm.epochs = p.at("epochs").get<int>();
      svm.scale = numbers_of(p.at("scale"));
      svm.weights = matrix_of(p.at("weights"));
      if (svm.scale.size() != num_features) throw DataError("SVM scale does not match the schema");
      check_rows(svm.weights, num_labels, num_features + 1, "weights");
      return svm;
    }
  }
  throw DataError("unknown model kind");
}

}  // namespace

std::vector<std::size_t> LabeledCorpus::histogram() const {
  std::vector<std::size_t> out(labels.size(), 0);
  for (const auto& r : records) {
    const int i = label_index(r.label);
    if (i >= 0) ++out[i];
  }
  return out;
}

int LabeledCorpus::label_index(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<int>(i);
  }
  return -1;
}

std::string escape_field(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (char c : value) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (value[i] != '\\') {
      out += value[i];
      continue;
    }
    if (i + 1 == value.size()) throw DataError("dangling backslash");
    switch (value[++i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: throw DataError(std::string("unknown escape \\") + value[i]);
    }
  }
  return out;
}

LabeledCorpus parse_corpus(std::string_view content,
                           const std::vector<std::string>& expected_labels) {
  LabeledCorpus corpus;
  std::vector<std::string_view> lines = split(content, '\n');
  // A final newline does not start another record.
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw DataError(line_error("missing #labels header", 1));

  std::string_view header = lines[0];
  if (!header.empty() && header.back() == '\r') header.remove_suffix(1);
  constexpr std::string_view kHeader = "#labels=";
  if (header.substr(0, kHeader.size()) != kHeader) {
    throw DataError(line_error("missing #labels header", 1));
  }
  std::set<std::string, std::less<>> declared;
  for (auto label : split(header.substr(kHeader.size()), ',')) {
    if (label.empty()) throw DataError(line_error("empty label in header", 1));
    if (!declared.insert(std::string(label)).second) {
      throw DataError(line_error("label " + std::string(label) + " declared twice", 1));
    }
    if (!expected_labels.empty() &&
        std::find(expected_labels.begin(), expected_labels.end(), label) == expected_labels.end()) {
      throw DataError(line_error("unknown label " + std::string(label), 1));
    }
    corpus.labels.emplace_back(label);
  }
  if (corpus.labels.empty()) throw DataError(line_error("no labels declared", 1));

  std::unordered_set<std::string> ids;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    std::string_view line = lines[n];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) throw DataError(line_error("empty record", line_no));
    CorpusRecord record;
    bool has_id = false;
    bool has_text = false;
    bool has_label = false;
    std::set<std::string, std::less<>> seen;
    for (auto field : split(line, '\t')) {
      const auto eq = field.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw DataError(line_error("malformed field '" + std::string(field) + "'", line_no));
      }
      const std::string key(field.substr(0, eq));
      if (!seen.insert(key).second) throw DataError(line_error("repeated field " + key, line_no));
      std::string value;
      try {
        value = unescape_field(field.substr(eq + 1));
      } catch (const DataError& e) {
        throw DataError(line_error(e.what(), line_no));
      }
      if (key == "id") {
        record.id = std::move(value);
        has_id = true;
      } else if (key == "text") {
        record.text = std::move(value);
        has_text = true;
      } else if (key == "label") {
        record.label = std::move(value);
        has_label = true;
      } else if (key == "domain") {
        record.domain = std::move(value);
      } else if (key == "veracity") {
        if (value != "FR" && value != "TR") {
          throw DataError(line_error("veracity must be FR or TR, got " + value, line_no));
        }
        record.veracity = std::move(value);
      } else if (key.starts_with("extra.") && key.size() > 6) {
        std::size_t used = 0;
        double v = 0.0;
        try {
          v = std::stod(value, &used);
        } catch (const std::exception&) {
          used = std::string::npos;
        }
        if (used != value.size() || !std::isfinite(v)) {
          throw DataError(line_error("bad number for " + key, line_no));
        }
        record.extra.emplace(key.substr(6), v);
      } else {
        throw DataError(line_error("unknown field " + key, line_no));
      }
    }
    if (!has_id || record.id.empty()) throw DataError(line_error("missing id", line_no));
    if (!has_label) throw DataError(line_error("missing label", line_no));
    if (!has_text) throw DataError(line_error("missing text", line_no));
    if (!declared.contains(record.label)) {
      throw DataError("unknown label " + record.label + " at line " + std::to_string(line_no));
    }
    if (is_blank(record.text)) throw DataError(line_error("empty text", line_no));
    if (!ids.insert(record.id).second) {
      throw DataError(line_error("duplicate id " + record.id, line_no));
    }
    corpus.records.push_back(std::move(record));
  }
  return corpus;
}

LabeledCorpus load_corpus(const std::filesystem::path& path,
                          const std::vector<std::string>& expected_labels) {
  const std::string content = read_file(path);
  try {
    return parse_corpus(content, expected_labels);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string format_corpus(const LabeledCorpus& corpus) {
  std::string out = "#labels=";
  for (std::size_t i = 0; i < corpus.labels.size(); ++i) {
    if (i) out += ',';
    out += corpus.labels[i];
  }
  out += '\n';
  for (const auto& r : corpus.records) {
    out += "id=" + escape_field(r.id);
    out += "\tlabel=" + escape_field(r.label);
    if (r.domain) out += "\tdomain=" + escape_field(*r.domain);
    if (r.veracity) out += "\tveracity=" + *r.veracity;
    for (const auto& [name, v] : r.extra) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += "\textra." + escape_field(name) + "=" + buf;
    }
    out += "\ttext=" + escape_field(r.text);
    out += '\n';
  }
  return out;
}

std::vector<std::string> sa_labels() {
  std::vector<std::string> out;
  for (SaClass c : kAllSaClasses) out.emplace_back(to_string(c));
  return out;
}

std::string serialize_model(const ModelArchive& archive) {
  const Model& m = archive.model;
  if (!m.schema) throw DataError("model has no feature schema");
  Json j = Json::object();
  j["schema_version"] = kModelSchemaVersion;
  j["model_kind"] = std::string(to_string(m.kind));
  j["labels"] = m.labels;
  Json schema = Json::array();
  for (const auto& spec : m.schema->specs()) {
    schema.push_back(Json::array({spec.name, std::string(to_string(spec.kind))}));
  }
  j["feature_schema"] = std::move(schema);
  j["resource_fingerprints"] = Json(archive.resource_fingerprints);
  j["settings"] = Json(archive.settings);
  const Hyperparams& h = m.hyperparams;
  j["hyperparams"] = Json{{"nb.alpha", h.nb_alpha},         {"knn.k", h.knn_k},
                          {"rf.trees", h.rf_trees},         {"rf.max_depth", h.rf_max_depth},
                          {"rf.bootstrap", h.rf_bootstrap}, {"svm.lambda", h.svm_lambda},
                          {"svm.epochs", h.svm_epochs},     {"seed", h.seed}};
  j["payload"] = payload_of(m);
  return j.dump(1) + "\n";
}

ModelArchive deserialize_model(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw DataError(std::string("corrupt model archive: ") + e.what());
  }
  if (!j.is_object() || j.empty() || j.begin().key() != "schema_version") {
    throw DataError("model archive must start with schema_version");
  }
  if (!j["schema_version"].is_number_integer()) throw DataError("schema_version must be an integer");
  const int version = j["schema_version"].get<int>();
  if (version != kModelSchemaVersion) {
    throw DataError("unsupported model schema_version " + std::to_string(version) + " (expected " +
                    std::to_string(kModelSchemaVersion) + ")");
  }
  try {
    ModelArchive a;
    Model& m = a.model;
    const std::string kind = j.at("model_kind").get<std::string>();
    const auto parsed = parse_model_kind(kind);
    if (!parsed) throw DataError("unknown model kind " + kind);
    m.kind = *parsed;
    m.labels = j.at("labels").get<std::vector<std::string>>();
    if (m.labels.size() < 2) throw DataError("model archive needs at least two labels");
    std::vector<FeatureSpec> specs;
    for (const auto& s : j.at("feature_schema")) {
      const auto fk = parse_feature_kind(s.at(1).get<std::string>());
      if (!fk) throw DataError("unknown feature kind in model archive");
      specs.push_back({s.at(0).get<std::string>(), *fk});
    }
    m.schema = std::make_shared<const FeatureSchema>(std::move(specs));
    a.resource_fingerprints =
        j.at("resource_fingerprints").get<std::map<std::string, std::string>>();
    a.settings = j.at("settings").get<std::map<std::string, std::string>>();
    const Json& h = j.at("hyperparams");
    m.hyperparams.nb_alpha = h.at("nb.alpha").get<double>();
    m.hyperparams.knn_k = h.at("knn.k").get<int>();
    m.hyperparams.rf_trees = h.at("rf.trees").get<int>();
    m.hyperparams.rf_max_depth = h.at("rf.max_depth").get<int>();
    m.hyperparams.rf_bootstrap = h.at("rf.bootstrap").get<bool>();
    m.hyperparams.svm_lambda = h.at("svm.lambda").get<double>();
    m.hyperparams.svm_epochs = h.at("svm.epochs").get<int>();
    m.hyperparams.seed = h.at("seed").get<std::uint64_t>();
    m.params = params_of(m.kind, j.at("payload"), m.labels.size(), m.schema->size());
    return a;
  } catch (const Json::exception& e) {
    throw DataError(std::string("corrupt model archive: ") + e.what());
  }
}

void save_model(const ModelArchive& archive, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_model(archive));
}

ModelArchive load_model(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return deserialize_model(text);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::vector<std::string> fingerprint_warnings(const ModelArchive& archive,
                                              const std::map<std::string, std::string>& current) {
  std::vector<std::string> out;
  for (const auto& [name, fp] : archive.resource_fingerprints) {
    const auto it = current.find(name);
    if (it == current.end()) {
      out.push_back("resource " + name + " used at training time is not loaded");
    } else if (it->second != fp) {
      out.push_back("resource " + name + " differs from the one used at training time (" + fp +
                    " vs " + it->second + ")");
    }
  }
  return out;
}

}  // namespace sact
