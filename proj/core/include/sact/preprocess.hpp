#ifndef SACT_PREPROCESS_HPP_
#define SACT_PREPROCESS_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace sact {

class Config;

struct Token {
  std::string surface;
  std::string stem;
  std::string lemma;
  bool is_stopword = false;
  // False for punctuation tokens.
  bool is_word = true;
  // Byte offset of `surface` in the text it was tokenized from.
  std::size_t offset = 0;
  // Whitespace between the previous token (or text start) and this one.
  std::string leading;
};

struct Sentence {
  std::vector<Token> tokens;
  // One of '?', '!', '.', ':' when the sentence ends with it.
  std::optional<char> terminal_punct;
  // Byte span in the normalized text.
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct SentenceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::optional<char> terminal_punct;
};

struct ProcessedText {
  std::string original;
  std::string normalized;
  std::vector<Sentence> sentences;
  // Whitespace after the last token.
  std::string trailing;
  std::string config_fingerprint;

  // Concatenates every token's leading separator and surface, then the
  // trailing text. Always equals `normalized`.
  std::string reconstruct() const;
};

// NFC, Arabic->Persian letter mapping (U+064A->U+06CC, U+0643->U+06A9),
// Arabic-Indic->Persian digits, zero-width removal except ZWNJ, whitespace
// collapsing and question-mark unification. Idempotent and total.
std::string normalize(std::string_view text);

// Splits on '.', '!', '?', U+061F and newline. Runs of terminators stay with
// the sentence they close; whitespace-only segments are dropped and
// punctuation-only segments are folded into the preceding sentence.
std::vector<SentenceSpan> split_sentences(std::string_view normalized);

// Whitespace- and punctuation-delimited tokens. Every punctuation code point
// becomes its own token with is_word = false; ZWNJ never splits a word.
// Only `surface`, `is_word`, `offset` and `leading` are filled in.
std::vector<Token> tokenize(std::string_view sentence);

using StopList = std::unordered_set<std::string>;

// Flags tokens whose surface is in the stop list. Tokens are never removed.
void remove_stopwords(std::span<Token> tokens, const StopList& stoplist);

// Strips at most one verbal prefix ("نمی‌", "می‌") and one suffix, longest
// first, from:
//   ترین تر شان تان مان ها ان م ت ش
// A strip is only applied when at least two letters remain.
std::string stem(std::string_view token);

class LemmaTable {
 public:
  void add(std::string surface, std::string lemma);
  const std::string* find(std::string_view surface) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::string> entries_;
};

// Table hit, or the stem when the surface is not listed.
std::string lemmatize(std::string_view token, const LemmaTable* table);

// Stop-word file: one normalized token per line, `#` comments.
StopList load_stoplist(const std::filesystem::path& path);
StopList parse_stoplist(std::string_view text);

// Lemma table: `surface<TAB>lemma` per line.
LemmaTable load_lemma_table(const std::filesystem::path& path);
LemmaTable parse_lemma_table(std::string_view text);

struct PreprocessConfig {
  bool normalize = true;
  bool split_sentences = true;
  bool remove_stopwords = true;
  bool stem = true;
  bool lemmatize = true;

  static PreprocessConfig from_config(const Config& config);
};

// Bundles the preprocessing configuration with its stop list and lemma table.
class Preprocessor {
 public:
  Preprocessor() = default;
  Preprocessor(PreprocessConfig config, StopList stoplist, LemmaTable lemmas);

  static Preprocessor from_config(const Config& config);

  ProcessedText process(std::string_view text) const;

  // Canonical dictionary form of a word or multi-word phrase: normalized,
  // tokenized and lemmatized, tokens joined with single spaces.
  std::string canonical(std::string_view phrase) const;

  // Lemma of a single, already normalized token.
  std::string lemma_of(std::string_view token) const;

  const PreprocessConfig& config() const { return config_; }
  const StopList& stoplist() const { return stoplist_; }
  const std::string& fingerprint() const { return fingerprint_; }

 private:
  void fill_token(Token& token) const;

  PreprocessConfig config_;
  StopList stoplist_;
  LemmaTable lemmas_;
  std::string fingerprint_;
};

}  // namespace sact

#endif  // SACT_PREPROCESS_HPP_
