#ifndef SACT_FEATURES_HPP_
#define SACT_FEATURES_HPP_

#include <array>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sact/lexicon.hpp"
#include "sact/pos_tagger.hpp"
#include "sact/preprocess.hpp"
#include "sact/types.hpp"

namespace sact {

class Config;

enum class FeatureKind { kBinary, kCount, kReal };

std::string_view to_string(FeatureKind kind);
std::optional<FeatureKind> parse_feature_kind(std::string_view name);

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::kCount;

  bool operator==(const FeatureSpec&) const = default;
};

// Ordered, named feature layout shared by training and prediction.
class FeatureSchema {
 public:
  FeatureSchema() = default;
  explicit FeatureSchema(std::vector<FeatureSpec> specs);

  std::size_t size() const { return specs_.size(); }
  const std::vector<FeatureSpec>& specs() const { return specs_; }
  const FeatureSpec& operator[](std::size_t i) const { return specs_[i]; }
  // Index of `name`, or -1.
  int find(std::string_view name) const;

  // `name<TAB>kind` per line.
  std::string to_text() const;
  static FeatureSchema from_text(std::string_view text);

  bool operator==(const FeatureSchema& other) const { return specs_ == other.specs_; }

 private:
  std::vector<FeatureSpec> specs_;
  std::unordered_map<std::string, int> index_;
};

struct FeatureVector {
  std::shared_ptr<const FeatureSchema> schema;
  std::vector<double> values;
  std::string text_id;

  double at(std::string_view name) const;
};

// Re-lays `vector` onto `target` by name. Throws DataError listing missing
// and extra names when the two schemas do not contain the same features.
FeatureVector align(const FeatureVector& vector, std::shared_ptr<const FeatureSchema> target);

struct SentimentScore {
  double score = 0.0;
  int pos_count = 0;
  int neg_count = 0;
};

// (P - N) / (P + N), or 0 when P + N = 0.
SentimentScore sentiment_from_counts(int pos_count, int neg_count);

// Counts positive and negative lemmas among word tokens.
SentimentScore sentiment_score(std::span<const Token> tokens, const SentimentLexicon& lexicon);

// n = 1: lemmas of word tokens that are not stop words.
// n = 2: "a b" lemma pairs over consecutive word tokens, stop words included.
// Throws UsageError for other n.
std::map<std::string, int> extract_ngrams(std::span<const Token> tokens, int n);

struct PunctuationFlags {
  bool q_mark = false;
  bool excl = false;
  bool colon = false;

  bool operator==(const PunctuationFlags&) const = default;
};

PunctuationFlags punctuation_flags(const Sentence& sentence);

// Dictionary membership with optional synonym fallback through an ontology.
class DictionaryLookup {
 public:
  DictionaryLookup(const SaDictionary& dict, const Ontology* ontology)
      : dict_(dict), ontology_(ontology) {}

  // True if `lemma`, or (with an ontology) any of its synonyms, is in one of
  // the given lists of `cls`.
  bool hit(SaClass cls, std::string_view lemma, std::span<const ListKind> kinds) const;

  const SaDictionary& dictionary() const { return dict_; }

 private:
  bool direct(SaClass cls, std::string_view lemma, std::span<const ListKind> kinds) const;

  const SaDictionary& dict_;
  const Ontology* ontology_;
};

struct PositionHits {
  std::array<bool, kNumSaClasses> first{};
  std::array<bool, kNumSaClasses> last{};
};

// Looks up the first and last word tokens against each class's cue,
// particular and base lists.
PositionHits token_position_features(const Sentence& sentence, const DictionaryLookup& lookup);

// Ques: question word (Ques base word) first, or a question mark with no Req
// base word first or last. Req: Req base word first or last. Other classes:
// a base word of the class first or last.
std::array<bool, kNumSaClasses> base_features(const Sentence& sentence,
                                              const DictionaryLookup& lookup,
                                              const PunctuationFlags& punct);

bool vulgar_flag(std::span<const Token> tokens, const SaDictionary& dict);

// Everything vectorization reads. Shared pointers are to immutable values;
// `dictionary` is replaced, never mutated, when enrichment publishes.
struct Resources {
  std::shared_ptr<const Preprocessor> preprocessor;
  std::shared_ptr<const SaDictionary> dictionary;
  std::shared_ptr<const Ontology> ontology;
  std::shared_ptr<const SentimentLexicon> sentiment;
  std::shared_ptr<const HmmModel> tagger;
  std::shared_ptr<const TagGroupMap> tag_groups;
  // resource name -> content fingerprint
  std::map<std::string, std::string> fingerprints;

  bool has_pos() const { return tagger && tag_groups; }

  // Loads `resources.*` paths from a config. Dictionary and preprocessing
  // resources are required; the rest are optional.
  static Resources load(const Config& config);
};

struct FeatureConfig {
  // Enrich the dictionary with synset-mates of unknown words and allow
  // synonym fallback in boundary lookups.
  bool enrich = true;

  static FeatureConfig from_config(const Config& config);
};

// Schema of the speech-act feature vector for these resources.
std::shared_ptr<const FeatureSchema> sa_feature_schema(const Resources& resources);

struct VectorizeResult {
  FeatureVector vector;
  // Dictionary after enrichment; the input dictionary when nothing changed.
  std::shared_ptr<const SaDictionary> dictionary;
};

// Builds the text-level speech-act vector: sentence features summed for
// counts and OR-ed for binaries, sentiment from the summed counts. When
// `schema` is given the result is aligned to it.
VectorizeResult vectorize(const ProcessedText& text, const Resources& resources,
                          const FeatureConfig& config,
                          std::shared_ptr<const FeatureSchema> schema = nullptr);

}  // namespace sact

#endif  // SACT_FEATURES_HPP_
