#include "sact/preprocess.hpp"

#include <algorithm>
#include <array>
#include <memory>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "sact/config.hpp"
#include "sact/error.hpp"
#include "sact/hash.hpp"
#include "sact/utf8.hpp"

namespace sact {

namespace {

bool is_removed_zero_width(char32_t cp) {
  switch (cp) {
    case U'\u200B':  // zero width space
    case U'\u200D':  // zero width joiner
    case U'\u200E':  // left-to-right mark
    case U'\u200F':  // right-to-left mark
    case U'\u061C':  // arabic letter mark
    case U'\u2060':  // word joiner
    case U'\uFEFF':  // byte order mark
      return true;
    default:
      return false;
  }
}

bool is_newline(char32_t cp) {
  return cp == U'\n' || cp == U'\r' || cp == U'\u0085' || cp == U'\u2028' ||
         cp == U'\u2029';
}

bool is_space(char32_t cp) {
  return is_newline(cp) || u_isUWhiteSpace(static_cast<UChar32>(cp));
}

bool is_punct(char32_t cp) { return u_ispunct(static_cast<UChar32>(cp)); }

bool is_terminator(char32_t cp) {
  return cp == U'.' || cp == U'!' || cp == U'?' || cp == U'\u061F';
}

char canonical_terminator(char32_t cp) {
  return cp == U'\u061F' ? '?' : static_cast<char>(cp);
}

std::u32string nfc(const std::u32string& text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) return text;
  icu::UnicodeString input = icu::UnicodeString::fromUTF32(
      reinterpret_cast<const UChar32*>(text.data()), static_cast<int32_t>(text.size()));
  icu::UnicodeString output = normalizer->normalize(input, status);
  if (U_FAILURE(status)) return text;
  std::string bytes;
  output.toUTF8String(bytes);
  return utf8::decode(bytes);
}

std::size_t letter_count(std::u32string_view w) {
  return static_cast<std::size_t>(std::count_if(
      w.begin(), w.end(), [](char32_t c) { return c != utf8::kZwnj; }));
}

constexpr std::array<std::u32string_view, 2> kPrefixes = {
    U"نمی\u200C",
    U"می\u200C",
};

constexpr std::array<std::u32string_view, 10> kSuffixes = {
    U"ترین", U"شان", U"تان", U"مان", U"تر", U"ها", U"ان", U"م", U"ت", U"ش",
};

std::string_view trim_view(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    ++line_no;
    fn(text.substr(pos, eol - pos), line_no);
    pos = eol + 1;
  }
}

}  // namespace

std::string ProcessedText::reconstruct() const {
  std::string out;
  out.reserve(normalized.size());
  for (const auto& s : sentences) {
    for (const auto& t : s.tokens) {
      out += t.leading;
      out += t.surface;
    }
  }
  out += trailing;
  return out;
}

std::string normalize(std::string_view text) {
  std::u32string cps = utf8::decode(text);
  std::erase_if(cps, is_removed_zero_width);
  cps = nfc(cps);

  std::u32string out;
  out.reserve(cps.size());
  std::size_t i = 0;
  while (i < cps.size()) {
    char32_t cp = cps[i];
    if (is_space(cp)) {
      bool newline = false;
      while (i < cps.size() && is_space(cps[i])) {
        newline = newline || is_newline(cps[i]);
        ++i;
      }
      if (!out.empty() && i < cps.size()) out.push_back(newline ? U'\n' : U' ');
      continue;
    }
    switch (cp) {
      case U'\u064A':  // arabic yeh
        cp = U'\u06CC';
        break;
      case U'\u0643':  // arabic kaf
        cp = U'\u06A9';
        break;
      case U'\u061F':
        cp = U'?';
        break;
      default:
        if (cp >= U'\u0660' && cp <= U'\u0669') cp = cp - U'\u0660' + U'\u06F0';
        break;
    }
    out.push_back(cp);
    ++i;
  }
  return utf8::encode(out);
}

std::vector<SentenceSpan> split_sentences(std::string_view text) {
  std::vector<SentenceSpan> out;

  const auto flush = [&](std::size_t b, std::size_t e, std::optional<char> term) {
    while (b < e && (text[b] == ' ' || text[b] == '\n')) ++b;
    while (e > b && (text[e - 1] == ' ' || text[e - 1] == '\n')) --e;
    if (b == e) return;
    bool has_word = false;
    for (std::size_t p = b; p < e && !has_word;) {
      std::size_t len = 0;
      char32_t cp = utf8::decode_at(text, p, &len);
      has_word = !is_space(cp) && !is_punct(cp);
      p += len;
    }
    if (!term && text[e - 1] == ':') term = ':';
    if (!has_word && !out.empty()) {
      out.back().end = e;
      if (term) out.back().terminal_punct = term;
      return;
    }
    out.push_back({b, e, term});
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t len = 0;
    const char32_t cp = utf8::decode_at(text, i, &len);
    if (is_terminator(cp)) {
      char last = canonical_terminator(cp);
      std::size_t j = i + len;
      while (j < text.size()) {
        std::size_t next_len = 0;
        const char32_t next = utf8::decode_at(text, j, &next_len);
        if (!is_terminator(next)) break;
        last = canonical_terminator(next);
        j += next_len;
      }
      flush(start, j, last);
      start = i = j;
      continue;
    }
    if (cp == U'\n') {
      flush(start, i, std::nullopt);
      start = i + len;
    }
    i += len;
  }
  flush(start, text.size(), std::nullopt);
  return out;
}

std::vector<Token> tokenize(std::string_view sentence) {
  std::vector<Token> tokens;
  std::size_t prev_end = 0;
  std::size_t word_start = std::string_view::npos;

  const auto emit = [&](std::size_t b, std::size_t e, bool is_word) {
    Token t;
    t.surface = std::string(sentence.substr(b, e - b));
    t.is_word = is_word;
    t.offset = b;
    t.leading = std::string(sentence.substr(prev_end, b - prev_end));
    tokens.push_back(std::move(t));
    prev_end = e;
  };

  std::size_t i = 0;
  while (i < sentence.size()) {
    std::size_t len = 0;
    const char32_t cp = utf8::decode_at(sentence, i, &len);
    const bool space = is_space(cp);
    const bool punct = !space && is_punct(cp);
    if (space || punct) {
      if (word_start != std::string_view::npos) {
        emit(word_start, i, true);
        word_start = std::string_view::npos;
      }
      if (punct) emit(i, i + len, false);
    } else if (word_start == std::string_view::npos) {
      word_start = i;
    }
    i += len;
  }
  if (word_start != std::string_view::npos) emit(word_start, sentence.size(), true);
  return tokens;
}

void remove_stopwords(std::span<Token> tokens, const StopList& stoplist) {
  for (auto& t : tokens) t.is_stopword = t.is_word && stoplist.count(t.surface) > 0;
}

std::string stem(std::string_view token) {
  std::u32string w = utf8::decode(token);
  for (auto prefix : kPrefixes) {
    if (w.size() > prefix.size() && std::u32string_view(w).starts_with(prefix) &&
        letter_count(std::u32string_view(w).substr(prefix.size())) >= 2) {
      w.erase(0, prefix.size());
      break;
    }
  }
  for (auto suffix : kSuffixes) {
    if (w.size() <= suffix.size() || !std::u32string_view(w).ends_with(suffix)) continue;
    std::u32string rest = w.substr(0, w.size() - suffix.size());
    while (!rest.empty() && rest.back() == utf8::kZwnj) rest.pop_back();
    if (letter_count(rest) >= 2) {
      w = std::move(rest);
      break;
    }
  }
  return utf8::encode(w);
}

void LemmaTable::add(std::string surface, std::string lemma) {
  entries_[std::move(surface)] = std::move(lemma);
}

const std::string* LemmaTable::find(std::string_view surface) const {
  auto it = entries_.find(std::string(surface));
  return it == entries_.end() ? nullptr : &it->second;
}

std::string lemmatize(std::string_view token, const LemmaTable* table) {
  if (table) {
    if (const std::string* hit = table->find(token)) return *hit;
  }
  return stem(token);
}

StopList parse_stoplist(std::string_view text) {
  StopList out;
  for_each_line(text, [&](std::string_view line, std::size_t) {
    line = trim_view(line);
    if (line.empty() || line.front() == '#') return;
    out.insert(normalize(line));
  });
  return out;
}

StopList load_stoplist(const std::filesystem::path& path) {
  return parse_stoplist(read_file(path));
}

LemmaTable parse_lemma_table(std::string_view text) {
  LemmaTable table;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (trim_view(line).empty() || trim_view(line).front() == '#') return;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError("lemma table line " + std::to_string(line_no) +
                      ": expected surface<TAB>lemma");
    }
    auto surface = normalize(trim_view(line.substr(0, tab)));
    auto lemma = normalize(trim_view(line.substr(tab + 1)));
    if (surface.empty() || lemma.empty()) {
      throw DataError("lemma table line " + std::to_string(line_no) + ": empty field");
    }
    table.add(std::move(surface), std::move(lemma));
  });
  return table;
}

LemmaTable load_lemma_table(const std::filesystem::path& path) {
  return parse_lemma_table(read_file(path));
}

PreprocessConfig PreprocessConfig::from_config(const Config& config) {
  PreprocessConfig c;
  c.normalize = config.get_bool("preprocess.normalize", c.normalize);
  c.split_sentences = config.get_bool("preprocess.split_sentences", c.split_sentences);
  c.remove_stopwords = config.get_bool("preprocess.remove_stopwords", c.remove_stopwords);
  c.stem = config.get_bool("preprocess.stem", c.stem);
  c.lemmatize = config.get_bool("preprocess.lemmatize", c.lemmatize);
  return c;
}

Preprocessor::Preprocessor(PreprocessConfig config, StopList stoplist, LemmaTable lemmas)
    : config_(config), stoplist_(std::move(stoplist)), lemmas_(std::move(lemmas)) {
  Fnv1a h;
  h.update("preprocess/v1;");
  for (bool flag : {config_.normalize, config_.split_sentences, config_.remove_stopwords,
                    config_.stem, config_.lemmatize}) {
    h.update(flag ? "1" : "0");
  }
  std::vector<std::string> stops(stoplist_.begin(), stoplist_.end());
  std::sort(stops.begin(), stops.end());
  for (const auto& s : stops) {
    h.update(s);
    h.update("\n");
  }
  h.update_u64(lemmas_.size());
  fingerprint_ = h.hex();
}

Preprocessor Preprocessor::from_config(const Config& config) {
  StopList stops;
  LemmaTable lemmas;
  if (auto p = config.get_path("resources.stopwords")) stops = load_stoplist(*p);
  if (auto p = config.get_path("resources.lemmas")) lemmas = load_lemma_table(*p);
  return Preprocessor(PreprocessConfig::from_config(config), std::move(stops), std::move(lemmas));
}

std::string Preprocessor::lemma_of(std::string_view token) const {
  const std::string stemmed = config_.stem ? stem(token) : std::string(token);
  if (!config_.lemmatize) return stemmed;
  if (const std::string* hit = lemmas_.find(token)) return *hit;
  return stemmed;
}

void Preprocessor::fill_token(Token& token) const {
  if (!token.is_word) {
    token.stem = token.lemma = token.surface;
    token.is_stopword = false;
    return;
  }
  token.stem = config_.stem ? stem(token.surface) : token.surface;
  token.lemma = lemma_of(token.surface);
  token.is_stopword = config_.remove_stopwords && stoplist_.count(token.surface) > 0;
}

ProcessedText Preprocessor::process(std::string_view text) const {
  ProcessedText out;
  out.original = std::string(text);
  out.normalized = config_.normalize ? normalize(text) : std::string(text);
  out.config_fingerprint = fingerprint_;
  const std::string_view norm = out.normalized;

  std::vector<SentenceSpan> spans;
  if (config_.split_sentences) {
    spans = split_sentences(norm);
  } else {
    const auto first = norm.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos) {
      const auto last = norm.find_last_not_of(" \t\r\n");
      SentenceSpan span{first, last + 1, std::nullopt};
      const char end = norm[last];
      if (end == '?' || end == '!' || end == '.' || end == ':') span.terminal_punct = end;
      spans.push_back(span);
    }
  }

  std::size_t prev_end = 0;
  for (const auto& span : spans) {
    Sentence sentence;
    sentence.begin = span.begin;
    sentence.end = span.end;
    sentence.terminal_punct = span.terminal_punct;
    sentence.tokens = tokenize(norm.substr(span.begin, span.end - span.begin));
    for (auto& t : sentence.tokens) {
      t.offset += span.begin;
      t.leading = std::string(norm.substr(prev_end, t.offset - prev_end));
      prev_end = t.offset + t.surface.size();
      fill_token(t);
    }
    if (!sentence.tokens.empty()) out.sentences.push_back(std::move(sentence));
  }
  out.trailing = std::string(norm.substr(prev_end));
  return out;
}

std::string Preprocessor::canonical(std::string_view phrase) const {
  const ProcessedText processed = process(phrase);
  std::string out;
  for (const auto& s : processed.sentences) {
    for (const auto& t : s.tokens) {
      if (!t.is_word) continue;
      if (!out.empty()) out.push_back(' ');
      out += t.lemma;
    }
  }
  return out;
}

}  // namespace sact
