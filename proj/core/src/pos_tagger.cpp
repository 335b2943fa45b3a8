#include "sact/pos_tagger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "sact/error.hpp"
#include "sact/hash.hpp"
#include "sact/utf8.hpp"

namespace sact {

namespace {

using Json = nlohmann::json;

constexpr std::array<std::string_view, kNumPosGroups> kGroupNames = {
    "noun", "adjective", "adverb", "verb", "other"};

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double ratio(long long num, long long den) {
  return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

// (count - 1) / (total - 1), with x/0 = 0.
double held_out(long long count, long long total) {
  return total > 1 ? static_cast<double>(count - 1) / static_cast<double>(total - 1) : 0.0;
}

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

std::vector<std::string> suffixes_of(std::string_view word) {
  const std::u32string cps = utf8::decode(word);
  std::vector<std::string> out;
  out.emplace_back();
  const std::size_t max_len = std::min(cps.size(), HmmModel::kMaxSuffixLength);
  for (std::size_t len = 1; len <= max_len; ++len) {
    out.push_back(utf8::encode(std::u32string_view(cps).substr(cps.size() - len)));
  }
  return out;
}

}  // namespace

TaggedCorpus parse_tagged_corpus(std::string_view text) {
  TaggedCorpus corpus;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    ++line_no;
    std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty()) continue;
    TaggedSentence sentence;
    while (!line.empty()) {
      const auto space = line.find(' ');
      std::string_view item = line.substr(0, space);
      line = space == std::string_view::npos ? std::string_view{} : trim(line.substr(space + 1));
      if (item.empty()) continue;
      const auto slash = item.rfind('/');
      if (slash == std::string_view::npos || slash == 0 || slash + 1 == item.size()) {
        throw DataError("tagged corpus line " + std::to_string(line_no) +
                        ": expected word/TAG, got " + std::string(item));
      }
      sentence.emplace_back(std::string(item.substr(0, slash)),
                            std::string(item.substr(slash + 1)));
    }
    corpus.sentences.push_back(std::move(sentence));
  }
  return corpus;
}

TaggedCorpus load_tagged_corpus(const std::filesystem::path& path) {
  return parse_tagged_corpus(read_file(path));
}

std::size_t HmmModel::bi_index(int t2, int t3) const {
  return static_cast<std::size_t>(t2) * tags_.size() + static_cast<std::size_t>(t3);
}

std::size_t HmmModel::tri_index(int t1, int t2, int t3) const {
  const std::size_t h = tags_.size() + 1;
  return (static_cast<std::size_t>(t1) * h + static_cast<std::size_t>(t2)) * tags_.size() +
         static_cast<std::size_t>(t3);
}

int HmmModel::tag_index(std::string_view tag) const {
  auto it = std::lower_bound(tags_.begin(), tags_.end(), tag);
  if (it == tags_.end() || *it != tag) return -1;
  return static_cast<int>(it - tags_.begin());
}

HmmModel HmmModel::train(const TaggedCorpus& corpus) {
  HmmModel m;
  std::set<std::string> tagset;
  std::map<std::string, long long, std::less<>> word_freq;
  for (const auto& s : corpus.sentences) {
    for (const auto& [w, t] : s) {
      tagset.insert(t);
      ++word_freq[w];
    }
  }
  if (tagset.empty()) throw DataError("cannot train tagger on an empty corpus");
  m.tags_.assign(tagset.begin(), tagset.end());
  const std::size_t s = m.tags_.size();
  m.uni_.assign(s, 0);
  m.bi_.assign((s + 1) * s, 0);
  m.tri_.assign((s + 1) * (s + 1) * s, 0);

  const int bos = m.bos();
  for (const auto& sentence : corpus.sentences) {
    if (sentence.empty()) continue;
    ++m.sentence_count_;
    int t1 = bos;
    int t2 = bos;
    for (const auto& [word, tag] : sentence) {
      const int t3 = m.tag_index(tag);
      ++m.uni_[t3];
      ++m.bi_[m.bi_index(t2, t3)];
      ++m.tri_[m.tri_index(t1, t2, t3)];
      ++m.lexicon_[word][t3];
      ++m.token_count_;
      if (word_freq[word] <= kRareWordThreshold) {
        for (const auto& suffix : suffixes_of(word)) {
          auto& row = m.suffixes_[suffix];
          if (row.empty()) row.assign(s, 0);
          ++row[t3];
        }
      }
      t1 = t2;
      t2 = t3;
    }
  }
  m.rebuild_derived();
  m.lambdas_ = deleted_interpolation(m);
  return m;
}

void HmmModel::rebuild_derived() {
  const std::size_t s = tags_.size();
  bi_history_.assign(s + 1, 0);
  tri_history_.assign((s + 1) * (s + 1), 0);
  for (std::size_t t1 = 0; t1 <= s; ++t1) {
    for (std::size_t t2 = 0; t2 <= s; ++t2) {
      for (std::size_t t3 = 0; t3 < s; ++t3) {
        tri_history_[t1 * (s + 1) + t2] +=
            tri_[tri_index(static_cast<int>(t1), static_cast<int>(t2), static_cast<int>(t3))];
      }
    }
  }
  for (std::size_t t2 = 0; t2 <= s; ++t2) {
    for (std::size_t t3 = 0; t3 < s; ++t3) {
      bi_history_[t2] += bi_[bi_index(static_cast<int>(t2), static_cast<int>(t3))];
    }
  }
  // Standard deviation of the unconditioned tag probabilities.
  theta_ = 0.0;
  if (s > 1) {
    double mean = 0.0;
    for (std::size_t t = 0; t < s; ++t) mean += unigram_prob(static_cast<int>(t));
    mean /= static_cast<double>(s);
    double var = 0.0;
    for (std::size_t t = 0; t < s; ++t) {
      const double d = unigram_prob(static_cast<int>(t)) - mean;
      var += d * d;
    }
    theta_ = std::sqrt(var / static_cast<double>(s - 1));
  }
}

std::array<double, 3> deleted_interpolation(const HmmModel& m) {
  std::array<double, 3> weight = {0.0, 0.0, 0.0};
  const int s = static_cast<int>(m.num_tags());
  const int bos = m.bos();
  for (int t1 = 0; t1 <= bos; ++t1) {
    for (int t2 = 0; t2 <= bos; ++t2) {
      for (int t3 = 0; t3 < s; ++t3) {
        const long long f = m.trigram_count(t1, t2, t3);
        if (f == 0) continue;
        const std::array<double, 3> estimate = {
            held_out(m.unigram_count(t3), m.token_count()),
            held_out(m.bigram_count(t2, t3), m.bigram_history(t2)),
            held_out(f, m.trigram_history(t1, t2)),
        };
        const double best = *std::max_element(estimate.begin(), estimate.end());
        const int ties = static_cast<int>(std::count(estimate.begin(), estimate.end(), best));
        for (int k = 0; k < 3; ++k) {
          if (estimate[k] == best) weight[k] += static_cast<double>(f) / ties;
        }
      }
    }
  }
  const double total = weight[0] + weight[1] + weight[2];
  if (total <= 0.0) return {1.0 / 3, 1.0 / 3, 1.0 / 3};
  return {weight[0] / total, weight[1] / total, weight[2] / total};
}

double HmmModel::unigram_prob(int t3) const { return ratio(uni_[t3], token_count_); }

double HmmModel::bigram_prob(int t2, int t3) const {
  return ratio(bi_[bi_index(t2, t3)], bi_history_[t2]);
}

double HmmModel::trigram_prob(int t1, int t2, int t3) const {
  return ratio(tri_[tri_index(t1, t2, t3)], trigram_history(t1, t2));
}

double HmmModel::transition_prob(int t1, int t2, int t3) const {
  return lambdas_[0] * unigram_prob(t3) + lambdas_[1] * bigram_prob(t2, t3) +
         lambdas_[2] * trigram_prob(t1, t2, t3);
}

bool HmmModel::is_known(std::string_view word) const { return lexicon_.count(word) > 0; }

std::vector<double> HmmModel::suffix_ml(std::string_view suffix) const {
  auto it = suffixes_.find(suffix);
  if (it == suffixes_.end()) return {};
  long long total = 0;
  for (long long c : it->second) total += c;
  std::vector<double> out(tags_.size());
  for (std::size_t t = 0; t < tags_.size(); ++t) out[t] = ratio(it->second[t], total);
  return out;
}

std::vector<double> HmmModel::suffix_tag_distribution(std::string_view word) const {
  std::vector<double> p = suffix_ml("");
  if (p.empty()) {
    p.resize(tags_.size());
    for (std::size_t t = 0; t < tags_.size(); ++t) p[t] = unigram_prob(static_cast<int>(t));
    return p;
  }
  const std::vector<std::string> suffixes = suffixes_of(word);
  for (std::size_t i = 1; i < suffixes.size(); ++i) {
    const std::vector<double> ml = suffix_ml(suffixes[i]);
    if (ml.empty()) break;
    for (std::size_t t = 0; t < tags_.size(); ++t) {
      p[t] = (ml[t] + theta_ * p[t]) / (1.0 + theta_);
    }
  }
  return p;
}

std::vector<double> HmmModel::emission_probs(std::string_view word) const {
  std::vector<double> out(tags_.size(), 0.0);
  if (auto it = lexicon_.find(word); it != lexicon_.end()) {
    for (const auto& [t, c] : it->second) out[t] = ratio(c, uni_[t]);
    return out;
  }
  const std::vector<double> p = suffix_tag_distribution(word);
  for (std::size_t t = 0; t < tags_.size(); ++t) {
    const double prior = unigram_prob(static_cast<int>(t));
    out[t] = prior > 0.0 ? p[t] / prior : 0.0;
  }
  return out;
}

double HmmModel::emission_prob(std::string_view word, int tag) const {
  return emission_probs(word)[tag];
}

std::string HmmModel::serialize() const {
  Json j;
  j["format"] = "sact-hmm";
  j["version"] = 1;
  j["tags"] = tags_;
  j["lambdas"] = lambdas_;
  j["sentences"] = sentence_count_;
  j["unigram"] = uni_;
  j["bigram"] = bi_;
  j["trigram"] = tri_;
  Json lex = Json::object();
  for (const auto& [word, counts] : lexicon_) {
    Json row = Json::object();
    for (const auto& [t, c] : counts) row[tags_[t]] = c;
    lex[word] = row;
  }
  j["lexicon"] = lex;
  Json suf = Json::object();
  for (const auto& [suffix, counts] : suffixes_) suf[suffix] = counts;
  j["suffixes"] = suf;
  return j.dump(1) + "\n";
}

HmmModel HmmModel::deserialize(std::string_view text) {
  HmmModel m;
  try {
    const Json j = Json::parse(text);
    if (j.at("format") != "sact-hmm" || j.at("version") != 1) {
      throw DataError("not a tagger model (format/version mismatch)");
    }
    m.tags_ = j.at("tags").get<std::vector<std::string>>();
    if (m.tags_.empty() || !std::is_sorted(m.tags_.begin(), m.tags_.end())) {
      throw DataError("tagger model: bad tagset");
    }
    const std::size_t s = m.tags_.size();
    m.lambdas_ = j.at("lambdas").get<std::array<double, 3>>();
    m.sentence_count_ = j.at("sentences").get<std::size_t>();
    m.uni_ = j.at("unigram").get<std::vector<long long>>();
    m.bi_ = j.at("bigram").get<std::vector<long long>>();
    m.tri_ = j.at("trigram").get<std::vector<long long>>();
    if (m.uni_.size() != s || m.bi_.size() != (s + 1) * s || m.tri_.size() != (s + 1) * (s + 1) * s) {
      throw DataError("tagger model: count table sizes do not match tagset");
    }
    for (long long c : m.uni_) m.token_count_ += c;
    for (const auto& [word, row] : j.at("lexicon").items()) {
      for (const auto& [tag, c] : row.items()) {
        const int t = m.tag_index(tag);
        if (t < 0) throw DataError("tagger model: unknown tag " + tag);
        m.lexicon_[word][t] = c.get<long long>();
      }
    }
    for (const auto& [suffix, counts] : j.at("suffixes").items()) {
      auto row = counts.get<std::vector<long long>>();
      if (row.size() != s) throw DataError("tagger model: bad suffix row");
      m.suffixes_[suffix] = std::move(row);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("tagger model: ") + e.what());
  }
  m.rebuild_derived();
  return m;
}

HmmModel HmmModel::load(const std::filesystem::path& path) {
  return deserialize(read_file(path));
}

ViterbiResult viterbi(const HmmModel& model, std::span<const std::string> tokens) {
  ViterbiResult result;
  const std::size_t n = tokens.size();
  if (n == 0) return result;
  const int s = static_cast<int>(model.num_tags());
  const int h = s + 1;  // history alphabet: tags plus bos
  const int bos = model.bos();

  std::vector<double> log_trans(static_cast<std::size_t>(h) * h * s);
  for (int t1 = 0; t1 < h; ++t1) {
    for (int t2 = 0; t2 < h; ++t2) {
      for (int t3 = 0; t3 < s; ++t3) {
        log_trans[(static_cast<std::size_t>(t1) * h + t2) * s + t3] =
            safe_log(model.transition_prob(t1, t2, t3));
      }
    }
  }
  const auto trans = [&](int t1, int t2, int t3) {
    return log_trans[(static_cast<std::size_t>(t1) * h + t2) * s + t3];
  };

  // delta[i][prev * s + cur]; back[i][prev * s + cur] = tag before prev.
  const std::size_t width = static_cast<std::size_t>(h) * s;
  std::vector<std::vector<double>> delta(n, std::vector<double>(width, kNegInf));
  std::vector<std::vector<int>> back(n, std::vector<int>(width, -1));
  std::vector<bool> reachable(width, false);

  // Tags of the best prefix ending in state (i, prev, cur), oldest first.
  const auto path_to = [&](std::size_t i, int prev, int cur) {
    std::vector<int> path;
    path.reserve(i + 1);
    path.push_back(cur);
    for (std::size_t k = i; k > 0; --k) {
      const int pp = back[k][static_cast<std::size_t>(prev) * s + cur];
      path.push_back(prev);
      cur = prev;
      prev = pp;
    }
    std::reverse(path.begin(), path.end());
    return path;
  };

  std::vector<double> emit = model.emission_probs(tokens[0]);
  for (int c = 0; c < s; ++c) {
    const std::size_t state = static_cast<std::size_t>(bos) * s + c;
    double score = 0.0;
    score += trans(bos, bos, c);
    score += safe_log(emit[c]);
    delta[0][state] = score;
    back[0][state] = bos;
  }

  for (std::size_t i = 1; i < n; ++i) {
    emit = model.emission_probs(tokens[i]);
    const int first_pp = 0;
    for (int p = 0; p < s; ++p) {
      for (int c = 0; c < s; ++c) {
        const std::size_t state = static_cast<std::size_t>(p) * s + c;
        double best = kNegInf;
        int best_pp = -1;
        for (int pp = first_pp; pp < h; ++pp) {
          if (i == 1 && pp != bos) continue;
          if (i > 1 && pp == bos) continue;
          const std::size_t from = static_cast<std::size_t>(pp) * s + p;
          double score = delta[i - 1][from];
          score += trans(pp, p, c);
          score += safe_log(emit[c]);
          if (best_pp < 0 || score > best) {
            best = score;
            best_pp = pp;
          } else if (score == best && i > 1) {
            // Equal scores: keep the lexicographically smaller prefix.
            if (path_to(i - 1, pp, p) < path_to(i - 1, best_pp, p)) best_pp = pp;
          }
        }
        delta[i][state] = best;
        back[i][state] = best_pp;
      }
    }
  }

  const int last_prev_lo = n == 1 ? bos : 0;
  const int last_prev_hi = n == 1 ? bos : s - 1;
  double best = kNegInf;
  int best_p = -1;
  int best_c = -1;
  for (int p = last_prev_lo; p <= last_prev_hi; ++p) {
    for (int c = 0; c < s; ++c) {
      const double score = delta[n - 1][static_cast<std::size_t>(p) * s + c];
      if (best_c < 0 || score > best) {
        best = score;
        best_p = p;
        best_c = c;
      } else if (score == best && n > 1 && path_to(n - 1, p, c) < path_to(n - 1, best_p, best_c)) {
        best_p = p;
        best_c = c;
      }
    }
  }
  result.tags = n == 1 ? std::vector<int>{best_c} : path_to(n - 1, best_p, best_c);
  result.log_score = best;
  return result;
}

std::vector<std::string> viterbi_tag(const HmmModel& model, std::span<const std::string> tokens) {
  const ViterbiResult r = viterbi(model, tokens);
  std::vector<std::string> out;
  out.reserve(r.tags.size());
  for (int t : r.tags) out.push_back(model.tagset()[t]);
  return out;
}

std::string_view to_string(PosGroup group) { return kGroupNames[static_cast<int>(group)]; }

void TagGroupMap::add(const std::string& tag, PosGroup group) { groups_[tag] = group; }

const PosGroup* TagGroupMap::find(std::string_view tag) const {
  auto it = groups_.find(tag);
  return it == groups_.end() ? nullptr : &it->second;
}

bool TagGroupMap::is_interjection(std::string_view tag) const {
  return interjections_.count(tag) > 0;
}

bool TagGroupMap::is_if(std::string_view tag) const {
  return tag == "IF" || if_tags_.count(tag) > 0;
}

TagGroupMap parse_tag_groups(std::string_view text) {
  TagGroupMap map;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    ++line_no;
    std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> fields;
    while (true) {
      const auto tab = line.find('\t');
      fields.push_back(trim(line.substr(0, tab)));
      if (tab == std::string_view::npos) break;
      line.remove_prefix(tab + 1);
    }
    const auto where = "tag group map line " + std::to_string(line_no) + ": ";
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty()) {
      throw DataError(where + "expected TAG<TAB>group[<TAB>flag]");
    }
    auto group = std::find(kGroupNames.begin(), kGroupNames.end(), fields[1]);
    if (group == kGroupNames.end()) {
      throw DataError(where + "unknown group " + std::string(fields[1]));
    }
    const std::string tag(fields[0]);
    map.add(tag, static_cast<PosGroup>(group - kGroupNames.begin()));
    if (fields.size() == 3) {
      if (fields[2] == "interjection") {
        map.mark_interjection(tag);
      } else if (fields[2] == "if") {
        map.mark_if(tag);
      } else {
        throw DataError(where + "unknown flag " + std::string(fields[2]));
      }
    }
  }
  return map;
}

TagGroupMap load_tag_groups(const std::filesystem::path& path) {
  return parse_tag_groups(read_file(path));
}

int PosGroupCounts::total() const {
  int n = 0;
  for (int c : counts) n += c;
  return n;
}

PosGroupCounts pos_feature_groups(std::span<const std::string> tags, const TagGroupMap& map) {
  PosGroupCounts out;
  for (const auto& tag : tags) {
    const PosGroup* group = map.find(tag);
    if (!group) throw DataError("tag " + tag + " missing from tag group map");
    ++out.counts[static_cast<int>(*group)];
    out.interjection = out.interjection || map.is_interjection(tag);
    out.if_tag = out.if_tag || map.is_if(tag);
  }
  return out;
}

}  // namespace sact
