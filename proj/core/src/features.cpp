#include "sact/features.hpp"

#include <sstream>

#include "sact/config.hpp"
#include "sact/error.hpp"
#include "sact/hash.hpp"

namespace sact {

namespace {

constexpr std::array<std::string_view, 3> kKindNames = {"binary", "count", "real"};

constexpr std::array<ListKind, 3> kCountedLists = {ListKind::kCue, ListKind::kParticular,
                                                   ListKind::kSaVerb};
constexpr std::array<ListKind, 3> kPositionLists = {ListKind::kCue, ListKind::kParticular,
                                                    ListKind::kBase};
constexpr std::array<ListKind, 1> kBaseList = {ListKind::kBase};

const Token* first_word(const Sentence& s) {
  for (const auto& t : s.tokens) {
    if (t.is_word) return &t;
  }
  return nullptr;
}

const Token* last_word(const Sentence& s) {
  for (auto it = s.tokens.rbegin(); it != s.tokens.rend(); ++it) {
    if (it->is_word) return &*it;
  }
  return nullptr;
}

std::string class_feature(std::string_view prefix, SaClass c) {
  return std::string(prefix) + "." + std::string(to_string(c));
}

}  // namespace

std::string_view to_string(FeatureKind kind) { return kKindNames[static_cast<int>(kind)]; }

std::optional<FeatureKind> parse_feature_kind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<FeatureKind>(i);
  }
  return std::nullopt;
}

FeatureSchema::FeatureSchema(std::vector<FeatureSpec> specs) : specs_(std::move(specs)) {
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (!index_.emplace(specs_[i].name, static_cast<int>(i)).second) {
      throw DataError("duplicate feature name " + specs_[i].name);
    }
  }
}

int FeatureSchema::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? -1 : it->second;
}

std::string FeatureSchema::to_text() const {
  std::string out;
  for (const auto& s : specs_) {
    out += s.name;
    out += '\t';
    out += to_string(s.kind);
    out += '\n';
  }
  return out;
}

FeatureSchema FeatureSchema::from_text(std::string_view text) {
  std::vector<FeatureSpec> specs;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    auto kind = tab == std::string_view::npos ? std::nullopt : parse_feature_kind(line.substr(tab + 1));
    if (!kind) throw DataError("bad feature schema line: " + std::string(line));
    specs.push_back({std::string(line.substr(0, tab)), *kind});
  }
  return FeatureSchema(std::move(specs));
}

double FeatureVector::at(std::string_view name) const {
  const int i = schema ? schema->find(name) : -1;
  if (i < 0) throw DataError("no feature named " + std::string(name));
  return values[i];
}

FeatureVector align(const FeatureVector& vector, std::shared_ptr<const FeatureSchema> target) {
  if (vector.schema == target || (vector.schema && *vector.schema == *target)) {
    return {std::move(target), vector.values, vector.text_id};
  }
  std::vector<std::string> missing;
  std::vector<std::string> extra;
  for (const auto& spec : target->specs()) {
    if (vector.schema->find(spec.name) < 0) missing.push_back(spec.name);
  }
  for (const auto& spec : vector.schema->specs()) {
    if (target->find(spec.name) < 0) extra.push_back(spec.name);
  }
  if (!missing.empty() || !extra.empty()) {
    std::ostringstream msg;
    msg << "feature schema mismatch: missing [";
    for (std::size_t i = 0; i < missing.size(); ++i) msg << (i ? "," : "") << missing[i];
    msg << "] extra [";
    for (std::size_t i = 0; i < extra.size(); ++i) msg << (i ? "," : "") << extra[i];
    msg << "]";
    throw DataError(msg.str());
  }
  FeatureVector out{target, std::vector<double>(target->size()), vector.text_id};
  for (std::size_t i = 0; i < target->size(); ++i) {
    out.values[i] = vector.values[vector.schema->find((*target)[i].name)];
  }
  return out;
}

SentimentScore sentiment_from_counts(int pos_count, int neg_count) {
  SentimentScore s;
  s.pos_count = pos_count;
  s.neg_count = neg_count;
  const int total = pos_count + neg_count;
  s.score = total > 0 ? static_cast<double>(pos_count - neg_count) / total : 0.0;
  return s;
}

SentimentScore sentiment_score(std::span<const Token> tokens, const SentimentLexicon& lexicon) {
  int pos = 0;
  int neg = 0;
  for (const auto& t : tokens) {
    if (!t.is_word) continue;
    const auto polarity = lexicon.polarity(t.lemma);
    if (polarity == Polarity::kPositive) ++pos;
    if (polarity == Polarity::kNegative) ++neg;
  }
  return sentiment_from_counts(pos, neg);
}

std::map<std::string, int> extract_ngrams(std::span<const Token> tokens, int n) {
  if (n != 1 && n != 2) throw UsageError("n-gram order must be 1 or 2");
  std::map<std::string, int> out;
  const Token* prev = nullptr;
  for (const auto& t : tokens) {
    if (!t.is_word) continue;
    if (n == 1) {
      if (!t.is_stopword) ++out[t.lemma];
    } else if (prev) {
      ++out[prev->lemma + " " + t.lemma];
    }
    prev = &t;
  }
  return out;
}

PunctuationFlags punctuation_flags(const Sentence& sentence) {
  PunctuationFlags f;
  for (const auto& t : sentence.tokens) {
    if (t.is_word) continue;
    f.q_mark = f.q_mark || t.surface == "?" || t.surface == "؟";
    f.excl = f.excl || t.surface == "!";
    f.colon = f.colon || t.surface == ":";
  }
  return f;
}

bool DictionaryLookup::direct(SaClass cls, std::string_view lemma,
                              std::span<const ListKind> kinds) const {
  for (ListKind kind : kinds) {
    if (dict_.words(cls, kind).count(lemma)) return true;
  }
  return false;
}

bool DictionaryLookup::hit(SaClass cls, std::string_view lemma,
                           std::span<const ListKind> kinds) const {
  if (direct(cls, lemma, kinds)) return true;
  if (!ontology_) return false;
  for (const auto& mate : synonyms(lemma, *ontology_)) {
    if (direct(cls, mate, kinds)) return true;
  }
  return false;
}

PositionHits token_position_features(const Sentence& sentence, const DictionaryLookup& lookup) {
  PositionHits hits;
  const Token* first = first_word(sentence);
  const Token* last = last_word(sentence);
  if (!first) return hits;
  for (SaClass c : kAllSaClasses) {
    hits.first[index_of(c)] = lookup.hit(c, first->lemma, kPositionLists);
    hits.last[index_of(c)] = lookup.hit(c, last->lemma, kPositionLists);
  }
  return hits;
}

std::array<bool, kNumSaClasses> base_features(const Sentence& sentence,
                                              const DictionaryLookup& lookup,
                                              const PunctuationFlags& punct) {
  std::array<bool, kNumSaClasses> flags{};
  const Token* first = first_word(sentence);
  const Token* last = last_word(sentence);
  if (!first) {
    flags[index_of(SaClass::kQues)] = punct.q_mark;
    return flags;
  }
  const auto at_boundary = [&](SaClass c) {
    return lookup.hit(c, first->lemma, kBaseList) || lookup.hit(c, last->lemma, kBaseList);
  };
  const bool question_word_first = lookup.hit(SaClass::kQues, first->lemma, kBaseList);
  const bool req_word = lookup.hit(SaClass::kReq, first->lemma, kBaseList) ||
                        lookup.hit(SaClass::kReq, last->lemma, kBaseList);
  flags[index_of(SaClass::kQues)] = question_word_first || (punct.q_mark && !req_word);
  flags[index_of(SaClass::kReq)] = req_word;
  for (SaClass c : kAllSaClasses) {
    if (c == SaClass::kQues || c == SaClass::kReq) continue;
    flags[index_of(c)] = at_boundary(c);
  }
  return flags;
}

bool vulgar_flag(std::span<const Token> tokens, const SaDictionary& dict) {
  for (const auto& t : tokens) {
    if (t.is_word && dict.vulgar().count(t.lemma)) return true;
  }
  return false;
}

Resources Resources::load(const Config& config) {
  Resources r;
  auto pre = std::make_shared<Preprocessor>(Preprocessor::from_config(config));
  for (const char* key : {"resources.stopwords", "resources.lemmas"}) {
    if (auto p = config.get_path(key)) r.fingerprints[key] = file_fingerprint(*p);
  }
  const auto dict_path = config.get_path("resources.dictionary");
  if (!dict_path) throw ResourceError("config does not name resources.dictionary");
  r.dictionary = std::make_shared<SaDictionary>(load_dictionary(*dict_path, *pre));
  r.fingerprints["resources.dictionary"] = file_fingerprint(*dict_path);
  if (auto p = config.get_path("resources.ontology")) {
    r.ontology = std::make_shared<Ontology>(load_ontology(*p, *pre));
    r.fingerprints["resources.ontology"] = file_fingerprint(*p);
  }
  if (auto p = config.get_path("resources.sentiment")) {
    r.sentiment = std::make_shared<SentimentLexicon>(load_sentiment_lexicon(*p, *pre));
    r.fingerprints["resources.sentiment"] = file_fingerprint(*p);
  }
  if (auto p = config.get_path("resources.tagger")) {
    r.tagger = std::make_shared<HmmModel>(HmmModel::load(*p));
    r.fingerprints["resources.tagger"] = file_fingerprint(*p);
  }
  if (auto p = config.get_path("resources.tag_groups")) {
    r.tag_groups = std::make_shared<TagGroupMap>(load_tag_groups(*p));
    r.fingerprints["resources.tag_groups"] = file_fingerprint(*p);
  }
  r.preprocessor = std::move(pre);
  return r;
}

FeatureConfig FeatureConfig::from_config(const Config& config) {
  FeatureConfig c;
  c.enrich = config.get_bool("features.enrich", c.enrich);
  return c;
}

std::shared_ptr<const FeatureSchema> sa_feature_schema(const Resources& resources) {
  std::vector<FeatureSpec> specs;
  for (std::string_view prefix : {"cue", "particular", "sa_verb"}) {
    for (SaClass c : kAllSaClasses) specs.push_back({class_feature(prefix, c), FeatureKind::kCount});
  }
  specs.push_back({"sentiment.score", FeatureKind::kReal});
  specs.push_back({"sentiment.pos", FeatureKind::kCount});
  specs.push_back({"sentiment.neg", FeatureKind::kCount});
  if (resources.has_pos()) {
    for (std::size_t g = 0; g < kNumPosGroups; ++g) {
      specs.push_back({"pos." + std::string(to_string(static_cast<PosGroup>(g))),
                       FeatureKind::kCount});
    }
    specs.push_back({"pos.interjection", FeatureKind::kBinary});
    specs.push_back({"pos.if", FeatureKind::kBinary});
  }
  specs.push_back({"punct.q_mark", FeatureKind::kBinary});
  specs.push_back({"punct.excl", FeatureKind::kBinary});
  specs.push_back({"punct.colon", FeatureKind::kBinary});
  for (std::string_view prefix : {"first", "last", "base"}) {
    for (SaClass c : kAllSaClasses) {
      specs.push_back({class_feature(prefix, c), FeatureKind::kBinary});
    }
  }
  specs.push_back({"vulgar", FeatureKind::kBinary});
  return std::make_shared<const FeatureSchema>(std::move(specs));
}

VectorizeResult vectorize(const ProcessedText& text, const Resources& resources,
                          const FeatureConfig& config,
                          std::shared_ptr<const FeatureSchema> schema) {
  std::shared_ptr<const SaDictionary> dict = resources.dictionary;
  if (!dict) throw ResourceError("vectorize needs a dictionary");
  const Ontology* ontology = config.enrich ? resources.ontology.get() : nullptr;

  if (ontology) {
    for (const auto& sentence : text.sentences) {
      for (const auto& t : sentence.tokens) {
        if (!t.is_word || t.is_stopword || dict->in_any_list(t.lemma)) continue;
        EnrichResult r = enrich(*dict, t.lemma, *ontology);
        if (!r.added_to.empty()) dict = std::make_shared<const SaDictionary>(std::move(r.dictionary));
      }
    }
  }

  const auto own_schema = sa_feature_schema(resources);
  FeatureVector vec{own_schema, std::vector<double>(own_schema->size(), 0.0), {}};
  const auto add = [&](std::string_view name, double v) {
    vec.values[own_schema->find(name)] += v;
  };
  const auto set_flag = [&](std::string_view name, bool on) {
    if (on) vec.values[own_schema->find(name)] = 1.0;
  };

  const DictionaryLookup lookup(*dict, ontology);
  int pos_total = 0;
  int neg_total = 0;
  for (const auto& sentence : text.sentences) {
    const auto unigrams = extract_ngrams(sentence.tokens, 1);
    const auto bigrams = extract_ngrams(sentence.tokens, 2);
    for (SaClass c : kAllSaClasses) {
      for (ListKind kind : kCountedLists) {
        const WordSet& words = dict->words(c, kind);
        int hits = 0;
        for (const auto* grams : {&unigrams, &bigrams}) {
          for (const auto& [gram, count] : *grams) {
            if (words.count(gram)) hits += count;
          }
        }
        add(class_feature(to_string(kind), c), hits);
      }
    }

    if (resources.sentiment) {
      const SentimentScore s = sentiment_score(sentence.tokens, *resources.sentiment);
      pos_total += s.pos_count;
      neg_total += s.neg_count;
    }

    if (resources.has_pos()) {
      std::vector<std::string> surfaces;
      surfaces.reserve(sentence.tokens.size());
      for (const auto& t : sentence.tokens) surfaces.push_back(t.surface);
      const auto tags = viterbi_tag(*resources.tagger, surfaces);
      const PosGroupCounts groups = pos_feature_groups(tags, *resources.tag_groups);
      for (std::size_t g = 0; g < kNumPosGroups; ++g) {
        add("pos." + std::string(to_string(static_cast<PosGroup>(g))), groups.counts[g]);
      }
      set_flag("pos.interjection", groups.interjection);
      set_flag("pos.if", groups.if_tag);
    }

    const PunctuationFlags punct = punctuation_flags(sentence);
    set_flag("punct.q_mark", punct.q_mark);
    set_flag("punct.excl", punct.excl);
    set_flag("punct.colon", punct.colon);

    const PositionHits position = token_position_features(sentence, lookup);
    const auto base = base_features(sentence, lookup, punct);
    for (SaClass c : kAllSaClasses) {
      set_flag(class_feature("first", c), position.first[index_of(c)]);
      set_flag(class_feature("last", c), position.last[index_of(c)]);
      set_flag(class_feature("base", c), base[index_of(c)]);
    }
    set_flag("vulgar", vulgar_flag(sentence.tokens, *dict));
  }

  const SentimentScore sentiment = sentiment_from_counts(pos_total, neg_total);
  add("sentiment.score", sentiment.score);
  add("sentiment.pos", sentiment.pos_count);
  add("sentiment.neg", sentiment.neg_count);

  VectorizeResult result{std::move(vec), std::move(dict)};
  if (schema) result.vector = align(result.vector, std::move(schema));
  return result;
}

}  // namespace sact
