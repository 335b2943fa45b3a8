#ifndef SACT_POS_TAGGER_HPP_
#define SACT_POS_TAGGER_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sact {

using TaggedSentence = std::vector<std::pair<std::string, std::string>>;

struct TaggedCorpus {
  std::vector<TaggedSentence> sentences;
};

// One sentence per line, tokens `word/TAG` separated by spaces. The tag is
// everything after the last '/'.
TaggedCorpus parse_tagged_corpus(std::string_view text);
TaggedCorpus load_tagged_corpus(const std::filesystem::path& path);

// Trigram HMM in the style of TnT: maximum-likelihood uni/bi/trigram tag
// transitions mixed by deleted interpolation, ML emissions for known words
// and a successive-abstraction suffix model for unknown words.
//
// Tag indices follow lexicographic tag order. Histories use the extra index
// `bos()` for sentence-start padding; there is no end-of-sentence symbol.
class HmmModel {
 public:
  static constexpr std::size_t kMaxSuffixLength = 4;
  static constexpr long long kRareWordThreshold = 10;

  static HmmModel train(const TaggedCorpus& corpus);

  const std::vector<std::string>& tagset() const { return tags_; }
  std::size_t num_tags() const { return tags_.size(); }
  int bos() const { return static_cast<int>(tags_.size()); }
  int tag_index(std::string_view tag) const;

  // {unigram, bigram, trigram} weights; non-negative, summing to 1.
  const std::array<double, 3>& lambdas() const { return lambdas_; }
  double theta() const { return theta_; }

  // Maximum-likelihood component distributions. Histories may be bos().
  double unigram_prob(int t3) const;
  double bigram_prob(int t2, int t3) const;
  double trigram_prob(int t1, int t2, int t3) const;
  // Interpolated P(t3 | t1, t2).
  double transition_prob(int t1, int t2, int t3) const;

  bool is_known(std::string_view word) const;
  // P(word | tag); for unknown words P(tag | suffix) / P(tag).
  double emission_prob(std::string_view word, int tag) const;
  std::vector<double> emission_probs(std::string_view word) const;
  // Smoothed P(tag | suffixes of word), used for unknown words.
  std::vector<double> suffix_tag_distribution(std::string_view word) const;

  // Raw ML tag distribution for a suffix ("" is the rare-word prior).
  // Empty when the suffix was never observed.
  std::vector<double> suffix_ml(std::string_view suffix) const;

  // Raw counts. A history count is the number of times the history was
  // followed by any tag.
  long long unigram_count(int t3) const { return uni_[t3]; }
  long long bigram_count(int t2, int t3) const { return bi_[bi_index(t2, t3)]; }
  long long trigram_count(int t1, int t2, int t3) const { return tri_[tri_index(t1, t2, t3)]; }
  long long bigram_history(int t2) const { return bi_history_[t2]; }
  long long trigram_history(int t1, int t2) const {
    return tri_history_[static_cast<std::size_t>(t1) * (tags_.size() + 1) + t2];
  }
  long long token_count() const { return token_count_; }
  std::size_t sentence_count() const { return sentence_count_; }

  std::string serialize() const;
  static HmmModel deserialize(std::string_view text);
  static HmmModel load(const std::filesystem::path& path);

 private:
  std::size_t tri_index(int t1, int t2, int t3) const;
  std::size_t bi_index(int t2, int t3) const;
  void rebuild_derived();

  std::vector<std::string> tags_;
  std::vector<long long> uni_;
  std::vector<long long> bi_;
  std::vector<long long> tri_;
  std::vector<long long> bi_history_;
  std::vector<long long> tri_history_;
  long long token_count_ = 0;
  std::size_t sentence_count_ = 0;
  std::map<std::string, std::map<int, long long>, std::less<>> lexicon_;
  std::map<std::string, std::vector<long long>, std::less<>> suffixes_;
  std::array<double, 3> lambdas_ = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  double theta_ = 0.0;
};

// Runs deleted interpolation over trigram, bigram and unigram counts.
// Exposed for testing; HmmModel::train uses it.
std::array<double, 3> deleted_interpolation(const HmmModel& model);

struct ViterbiResult {
  std::vector<int> tags;
  double log_score = 0.0;
};

// Highest-scoring tag sequence under the interpolated trigram HMM, where the
// score of t_0..t_{n-1} is the left-to-right sum of
// log P(t_i | t_{i-2}, t_{i-1}) + log P(w_i | t_i). Equal scores resolve to
// the lexicographically smallest tag sequence.
ViterbiResult viterbi(const HmmModel& model, std::span<const std::string> tokens);

std::vector<std::string> viterbi_tag(const HmmModel& model, std::span<const std::string> tokens);

enum class PosGroup { kNoun = 0, kAdjective, kAdverb, kVerb, kOther };
inline constexpr std::size_t kNumPosGroups = 5;

std::string_view to_string(PosGroup group);

// Assigns each tag to a group. A tag may also be marked as an interjection or
// conditional ("IF") tag; a tag literally named "IF" is always the latter.
class TagGroupMap {
 public:
  void add(const std::string& tag, PosGroup group);
  void mark_interjection(const std::string& tag) { interjections_.insert(tag); }
  void mark_if(const std::string& tag) { if_tags_.insert(tag); }

  const PosGroup* find(std::string_view tag) const;
  bool is_interjection(std::string_view tag) const;
  bool is_if(std::string_view tag) const;

 private:
  std::map<std::string, PosGroup, std::less<>> groups_;
  std::set<std::string, std::less<>> interjections_;
  std::set<std::string, std::less<>> if_tags_;
};

// `TAG<TAB>group[<TAB>interjection|if]` per line.
TagGroupMap parse_tag_groups(std::string_view text);
TagGroupMap load_tag_groups(const std::filesystem::path& path);

struct PosGroupCounts {
  std::array<int, kNumPosGroups> counts{};
  bool interjection = false;
  bool if_tag = false;

  int total() const;
};

// Throws DataError naming the first tag missing from the map.
PosGroupCounts pos_feature_groups(std::span<const std::string> tags, const TagGroupMap& map);

}  // namespace sact

#endif  // SACT_POS_TAGGER_HPP_
