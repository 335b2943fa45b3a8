#ifndef SACT_CORPUS_IO_HPP_
#define SACT_CORPUS_IO_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sact/classifiers.hpp"

namespace sact {

struct CorpusRecord {
  std::string id;
  std::string text;
  std::string label;
  std::optional<std::string> domain;
  // "FR" or "TR" in rumor corpora.
  std::optional<std::string> veracity;
  std::map<std::string, double> extra;
};

// A labeled corpus file:
//
//   #labels=Ques,Req,...
//   id=1<TAB>label=Ques<TAB>text=...<TAB>domain=news<TAB>extra.depth=3
//
// Field values escape backslash, tab, newline and carriage return as
// `\\`, `\t`, `\n`, `\r`.
struct LabeledCorpus {
  std::vector<std::string> labels;
  std::vector<CorpusRecord> records;

  // Record count per declared label, in header order.
  std::vector<std::size_t> histogram() const;
  // Index of `label` in `labels`, or -1.
  int label_index(std::string_view label) const;
};

// Throws DataError naming the 1-based line for malformed lines, unknown
// labels, duplicate ids and empty texts. When `expected_labels` is non-empty,
// every header label must be one of them.
LabeledCorpus parse_corpus(std::string_view content,
                           const std::vector<std::string>& expected_labels = {});
LabeledCorpus load_corpus(const std::filesystem::path& path,
                          const std::vector<std::string>& expected_labels = {});

std::string escape_field(std::string_view value);
std::string unescape_field(std::string_view value);

std::string format_corpus(const LabeledCorpus& corpus);

// The seven speech-act labels, in canonical order.
std::vector<std::string> sa_labels();

inline constexpr int kModelSchemaVersion = 1;

// A model plus what is needed to reproduce its inputs.
struct ModelArchive {
  Model model;
  // resource name -> content fingerprint at training time.
  std::map<std::string, std::string> resource_fingerprints;
  // Free-form settings that affect vectorization (e.g. features.enrich).
  std::map<std::string, std::string> settings;
};

// JSON with `schema_version` as the first key. Doubles are written in
// shortest round-trip form, so serialize(deserialize(s)) == s.
std::string serialize_model(const ModelArchive& archive);
// Throws DataError for corrupt payloads and mismatched schema versions.
ModelArchive deserialize_model(std::string_view text);

void save_model(const ModelArchive& archive, const std::filesystem::path& path);
ModelArchive load_model(const std::filesystem::path& path);

// One warning per resource whose fingerprint differs from, or is missing
// in, `current`.
std::vector<std::string> fingerprint_warnings(const ModelArchive& archive,
                                              const std::map<std::string, std::string>& current);

}  // namespace sact

#endif  // SACT_CORPUS_IO_HPP_
