#ifndef SACT_LEXICON_HPP_
#define SACT_LEXICON_HPP_

#include <array>
#include <compare>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sact/types.hpp"

namespace sact {

class Preprocessor;

enum class ListKind {
  kCue = 0,
  kParticular,
  kSaVerb,
  kBase,
  kVulgar,
};

inline constexpr std::array<ListKind, 4> kClassListKinds = {
    ListKind::kCue, ListKind::kParticular, ListKind::kSaVerb, ListKind::kBase};

// "cue", "particular", "sa_verb", "base", "vulgar".
std::string_view to_string(ListKind kind);
std::optional<ListKind> parse_list_kind(std::string_view name);

// Identifies one word list: a class list, or the shared vulgar list
// (`cls` empty).
struct ListRef {
  std::optional<SaClass> cls;
  ListKind kind = ListKind::kCue;

  auto operator<=>(const ListRef&) const = default;
};

std::string to_string(const ListRef& ref);

struct Provenance {
  bool enriched = false;
  // Synset through which an enriched word entered the dictionary.
  std::string synset_id;

  bool operator==(const Provenance&) const = default;
};

using WordSet = std::set<std::string, std::less<>>;

// Per-class word lists plus the shared vulgar list. Values are treated as
// immutable once published; enrichment produces a new dictionary.
class SaDictionary {
 public:
  int version() const { return version_; }
  void set_version(int version) { version_ = version; }

  const WordSet& words(const ListRef& ref) const;
  const WordSet& words(SaClass cls, ListKind kind) const { return words({cls, kind}); }
  const WordSet& vulgar() const { return vulgar_; }

  // Adds `word` (already canonical) to a list. Provenance is recorded on the
  // first insertion of a word and kept thereafter.
  bool insert(const ListRef& ref, const std::string& word, const Provenance& provenance = {});

  bool in_any_list(std::string_view word) const;

  const std::map<std::string, Provenance, std::less<>>& provenance() const { return provenance_; }

  std::size_t total_words() const;

  bool operator==(const SaDictionary&) const = default;

 private:
  WordSet& mutable_words(const ListRef& ref);

  int version_ = 1;
  std::array<std::array<WordSet, 4>, kNumSaClasses> lists_;
  WordSet vulgar_;
  std::map<std::string, Provenance, std::less<>> provenance_;
};

// Synset table with its exact inverse index.
class Ontology {
 public:
  void add(const std::string& synset_id, const std::string& lemma);

  const std::map<std::string, WordSet, std::less<>>& synsets() const { return synsets_; }
  const std::map<std::string, WordSet, std::less<>>& lemma_index() const { return lemma_index_; }

  // Synset ids containing `lemma`; empty when unknown.
  const WordSet& synsets_of(std::string_view lemma) const;

 private:
  std::map<std::string, WordSet, std::less<>> synsets_;
  std::map<std::string, WordSet, std::less<>> lemma_index_;
};

enum class Polarity { kPositive, kNegative, kNeutral };

class SentimentLexicon {
 public:
  // Throws DataError when `lemma` already has a different polarity.
  void add(const std::string& lemma, Polarity polarity);
  std::optional<Polarity> polarity(std::string_view lemma) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, Polarity, std::less<>> entries_;
};

// Union of every synset containing `word`, minus the word itself.
WordSet synonyms(std::string_view word, const Ontology& ontology);

struct ContainsResult {
  bool hit = false;
  std::optional<ListKind> list_kind;
};

// Membership of `word` in the class lists, checked cue -> particular ->
// sa_verb -> base. When a preprocessor is given and the word itself misses,
// its lemma is tried as well.
ContainsResult contains(const SaDictionary& dict, SaClass cls, std::string_view word,
                        const Preprocessor* preprocessor = nullptr);

struct EnrichResult {
  SaDictionary dictionary;
  std::set<ListRef> added_to;
};

// Adds `word` to every list (class lists and the vulgar list) that holds one
// of its synonyms. The result has version + 1 when anything was added and is
// the unchanged input otherwise.
EnrichResult enrich(const SaDictionary& dict, std::string_view word, const Ontology& ontology);

// Dictionary file: `[<class>.<list_kind>]` and `[vulgar]` sections with one
// word per line. Words are canonicalized through `preprocessor` unless the
// file carries a `#canonical=1` header (as written by write_dictionary). A
// `#version=N` header sets the version; `word<TAB>synset=<id>` marks an
// enriched entry.
SaDictionary parse_dictionary(std::string_view text, const Preprocessor& preprocessor);
SaDictionary load_dictionary(const std::filesystem::path& path, const Preprocessor& preprocessor);
void write_dictionary(const SaDictionary& dict, std::ostream& out);

// Synset file: `synset_id<TAB>lemma1,lemma2,...` per line.
Ontology parse_ontology(std::string_view text, const Preprocessor& preprocessor);
Ontology load_ontology(const std::filesystem::path& path, const Preprocessor& preprocessor);

// Sentiment lexicon: `lemma<TAB>{pos|neg|neutral}` per line.
SentimentLexicon parse_sentiment_lexicon(std::string_view text, const Preprocessor& preprocessor);
SentimentLexicon load_sentiment_lexicon(const std::filesystem::path& path,
                                        const Preprocessor& preprocessor);

// Plain word list, one word or phrase per line, `#` comments.
WordSet parse_word_list(std::string_view text, const Preprocessor& preprocessor);
WordSet load_word_list(const std::filesystem::path& path, const Preprocessor& preprocessor);

}  // namespace sact

#endif  // SACT_LEXICON_HPP_
