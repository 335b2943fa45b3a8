#include "sact/lexicon.hpp"

#include <charconv>
#include <ostream>

#include "sact/error.hpp"
#include "sact/hash.hpp"
#include "sact/preprocess.hpp"

namespace sact {

namespace {

constexpr std::array<std::string_view, 5> kListKindNames = {
    "cue", "particular", "sa_verb", "base", "vulgar"};

const WordSet kEmptySet;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
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

std::string located(std::string_view what, std::size_t line_no, std::string_view msg) {
  return std::string(what) + " line " + std::to_string(line_no) + ": " + std::string(msg);
}

}  // namespace

std::string_view to_string(ListKind kind) { return kListKindNames[static_cast<int>(kind)]; }

std::optional<ListKind> parse_list_kind(std::string_view name) {
  for (std::size_t i = 0; i < kListKindNames.size(); ++i) {
    if (kListKindNames[i] == name) return static_cast<ListKind>(i);
  }
  return std::nullopt;
}

std::string to_string(const ListRef& ref) {
  if (!ref.cls) return std::string(to_string(ref.kind));
  return std::string(to_string(*ref.cls)) + "." + std::string(to_string(ref.kind));
}

const WordSet& SaDictionary::words(const ListRef& ref) const {
  if (!ref.cls || ref.kind == ListKind::kVulgar) {
    return ref.kind == ListKind::kVulgar ? vulgar_ : kEmptySet;
  }
  return lists_[index_of(*ref.cls)][static_cast<int>(ref.kind)];
}

WordSet& SaDictionary::mutable_words(const ListRef& ref) {
  if (ref.kind == ListKind::kVulgar) return vulgar_;
  if (!ref.cls) throw DataError("list " + to_string(ref) + " needs a class");
  return lists_[index_of(*ref.cls)][static_cast<int>(ref.kind)];
}

bool SaDictionary::insert(const ListRef& ref, const std::string& word,
                          const Provenance& provenance) {
  const bool added = mutable_words(ref).insert(word).second;
  if (added) provenance_.try_emplace(word, provenance);
  return added;
}

bool SaDictionary::in_any_list(std::string_view word) const {
  if (vulgar_.count(word)) return true;
  for (const auto& per_class : lists_) {
    for (const auto& list : per_class) {
      if (list.count(word)) return true;
    }
  }
  return false;
}

std::size_t SaDictionary::total_words() const {
  std::size_t n = vulgar_.size();
  for (const auto& per_class : lists_) {
    for (const auto& list : per_class) n += list.size();
  }
  return n;
}

void Ontology::add(const std::string& synset_id, const std::string& lemma) {
  synsets_[synset_id].insert(lemma);
  lemma_index_[lemma].insert(synset_id);
}

const WordSet& Ontology::synsets_of(std::string_view lemma) const {
  auto it = lemma_index_.find(lemma);
  return it == lemma_index_.end() ? kEmptySet : it->second;
}

void SentimentLexicon::add(const std::string& lemma, Polarity polarity) {
  auto [it, inserted] = entries_.try_emplace(lemma, polarity);
  if (!inserted && it->second != polarity) {
    throw DataError("sentiment lexicon: conflicting polarity for " + lemma);
  }
}

std::optional<Polarity> SentimentLexicon::polarity(std::string_view lemma) const {
  auto it = entries_.find(lemma);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

WordSet synonyms(std::string_view word, const Ontology& ontology) {
  WordSet out;
  for (const auto& id : ontology.synsets_of(word)) {
    const auto& members = ontology.synsets().find(id)->second;
    out.insert(members.begin(), members.end());
  }
  if (auto it = out.find(word); it != out.end()) out.erase(it);
  return out;
}

ContainsResult contains(const SaDictionary& dict, SaClass cls, std::string_view word,
                        const Preprocessor* preprocessor) {
  for (ListKind kind : kClassListKinds) {
    if (dict.words(cls, kind).count(word)) return {true, kind};
  }
  if (preprocessor) {
    const std::string lemma = preprocessor->lemma_of(word);
    if (lemma != word) return contains(dict, cls, lemma, nullptr);
  }
  return {};
}

EnrichResult enrich(const SaDictionary& dict, std::string_view word, const Ontology& ontology) {
  EnrichResult result{dict, {}};
  const std::string w(word);
  for (const auto& id : ontology.synsets_of(word)) {
    const Provenance provenance{true, id};
    for (const auto& mate : ontology.synsets().find(id)->second) {
      if (mate == w) continue;
      if (dict.vulgar().count(mate)) {
        const ListRef ref{std::nullopt, ListKind::kVulgar};
        if (result.dictionary.insert(ref, w, provenance)) result.added_to.insert(ref);
      }
      for (SaClass cls : kAllSaClasses) {
        for (ListKind kind : kClassListKinds) {
          if (!dict.words(cls, kind).count(mate)) continue;
          const ListRef ref{cls, kind};
          if (result.dictionary.insert(ref, w, provenance)) result.added_to.insert(ref);
        }
      }
    }
  }
  if (!result.added_to.empty()) result.dictionary.set_version(dict.version() + 1);
  return result;
}

SaDictionary parse_dictionary(std::string_view text, const Preprocessor& preprocessor) {
  SaDictionary dict;
  bool canonical = false;
  std::optional<ListRef> section;
  for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
    std::string_view line = trim(raw);
    if (line.empty()) return;
    if (line.front() == '#') {
      if (line == "#canonical=1") {
        canonical = true;
      } else if (line.starts_with("#version=")) {
        auto digits = line.substr(9);
        int version = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), version);
        if (ec != std::errc() || ptr != digits.data() + digits.size() || version < 1) {
          throw DataError(located("dictionary", line_no, "bad version header"));
        }
        dict.set_version(version);
      }
      return;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw DataError(located("dictionary", line_no, "bad section"));
      std::string_view name = line.substr(1, line.size() - 2);
      if (name == "vulgar") {
        section = ListRef{std::nullopt, ListKind::kVulgar};
        return;
      }
      const auto dot = name.find('.');
      std::optional<SaClass> cls;
      std::optional<ListKind> kind;
      if (dot != std::string_view::npos) {
        cls = parse_sa_class(name.substr(0, dot));
        kind = parse_list_kind(name.substr(dot + 1));
      }
      if (!cls || !kind || *kind == ListKind::kVulgar) {
        throw DataError(located("dictionary", line_no,
                                "unknown section [" + std::string(name) + "]"));
      }
      section = ListRef{cls, *kind};
      return;
    }
    if (!section) throw DataError(located("dictionary", line_no, "word outside a section"));
    Provenance provenance;
    std::string_view word = line;
    if (const auto tab = line.find('\t'); tab != std::string_view::npos) {
      word = trim(line.substr(0, tab));
      std::string_view annotation = trim(line.substr(tab + 1));
      if (!annotation.starts_with("synset=") || annotation.size() == 7) {
        throw DataError(located("dictionary", line_no, "bad annotation"));
      }
      provenance = {true, std::string(annotation.substr(7))};
    }
    std::string canonical_word = canonical ? std::string(word) : preprocessor.canonical(word);
    if (canonical_word.empty()) return;
    dict.insert(*section, canonical_word, provenance);
  });
  return dict;
}

SaDictionary load_dictionary(const std::filesystem::path& path, const Preprocessor& preprocessor) {
  return parse_dictionary(read_file(path), preprocessor);
}

void write_dictionary(const SaDictionary& dict, std::ostream& out) {
  out << "#canonical=1\n#version=" << dict.version() << '\n';
  const auto write_list = [&](const ListRef& ref) {
    out << '[' << to_string(ref) << "]\n";
    for (const auto& w : dict.words(ref)) {
      out << w;
      auto it = dict.provenance().find(w);
      if (it != dict.provenance().end() && it->second.enriched) {
        out << "\tsynset=" << it->second.synset_id;
      }
      out << '\n';
    }
  };
  for (SaClass cls : kAllSaClasses) {
    for (ListKind kind : kClassListKinds) write_list({cls, kind});
  }
  write_list({std::nullopt, ListKind::kVulgar});
}

Ontology parse_ontology(std::string_view text, const Preprocessor& preprocessor) {
  Ontology ontology;
  for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') return;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError(located("synset file", line_no, "expected synset_id<TAB>lemmas"));
    }
    const std::string id(trim(line.substr(0, tab)));
    std::string_view rest = line.substr(tab + 1);
    if (id.empty()) throw DataError(located("synset file", line_no, "empty synset id"));
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string lemma = preprocessor.canonical(trim(rest.substr(0, comma)));
      if (!lemma.empty()) ontology.add(id, lemma);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  });
  return ontology;
}

Ontology load_ontology(const std::filesystem::path& path, const Preprocessor& preprocessor) {
  return parse_ontology(read_file(path), preprocessor);
}

SentimentLexicon parse_sentiment_lexicon(std::string_view text, const Preprocessor& preprocessor) {
  SentimentLexicon lexicon;
  for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') return;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError(located("sentiment lexicon", line_no, "expected lemma<TAB>polarity"));
    }
    const std::string_view tag = trim(line.substr(tab + 1));
    Polarity polarity;
    if (tag == "pos") {
      polarity = Polarity::kPositive;
    } else if (tag == "neg") {
      polarity = Polarity::kNegative;
    } else if (tag == "neutral") {
      polarity = Polarity::kNeutral;
    } else {
      throw DataError(located("sentiment lexicon", line_no,
                              "unknown polarity " + std::string(tag)));
    }
    const std::string lemma = preprocessor.canonical(trim(line.substr(0, tab)));
    if (!lemma.empty()) lexicon.add(lemma, polarity);
  });
  return lexicon;
}

SentimentLexicon load_sentiment_lexicon(const std::filesystem::path& path,
                                        const Preprocessor& preprocessor) {
  return parse_sentiment_lexicon(read_file(path), preprocessor);
}

WordSet parse_word_list(std::string_view text, const Preprocessor& preprocessor) {
  WordSet words;
  for_each_line(text, [&](std::string_view raw, std::size_t) {
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') return;
    std::string w = preprocessor.canonical(line);
    if (!w.empty()) words.insert(std::move(w));
  });
  return words;
}

WordSet load_word_list(const std::filesystem::path& path, const Preprocessor& preprocessor) {
  return parse_word_list(read_file(path), preprocessor);
}

}  // namespace sact
