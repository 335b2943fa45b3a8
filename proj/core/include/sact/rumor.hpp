#ifndef SACT_RUMOR_HPP_
#define SACT_RUMOR_HPP_

#include <array>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sact/classifiers.hpp"
#include "sact/corpus_io.hpp"
#include "sact/eval_stats.hpp"
#include "sact/features.hpp"

namespace sact {

class Config;

// Fraction of a text's sentences predicted as each class.
struct SaProfile {
  std::array<double, kNumSaClasses> fractions{};

  double operator[](SaClass c) const { return fractions[index_of(c)]; }
};

// Applies a trained speech-act model sentence by sentence.
class SaAnalyzer {
 public:
  // Throws DataError unless every model label is a speech-act class.
  SaAnalyzer(const Resources& resources, const Model& model, FeatureConfig features);

  std::vector<SaClass> sentence_acts(const ProcessedText& text) const;

  // Throws DataError for texts without sentences.
  SaProfile profile(const ProcessedText& text) const;

 private:
  const Resources& resources_;
  const Model& model_;
  FeatureConfig features_;
  std::vector<SaClass> label_classes_;
};

// Profile from already predicted sentence classes.
SaProfile profile_from_acts(const std::vector<SaClass>& acts);

struct RumorWordLists {
  WordSet negation;
  WordSet uncertainty;
  WordSet certainty;
  WordSet pronouns;

  // Reads rumor.negation, rumor.uncertainty, rumor.certainty and
  // rumor.pronouns. Throws ResourceError naming the first missing list.
  static RumorWordLists load(const Config& config, const Preprocessor& preprocessor);
};

struct ContextFeatures {
  int sentiment_pos_count = 0;
  int sentiment_neg_count = 0;
  int negation_count = 0;
  int uncertainty_count = 0;
  int certainty_count = 0;
  // Unique lemmas / total lemmas over word tokens; 1 for texts without words.
  double lexical_diversity = 1.0;
  int pronoun_count = 0;
  int word_count = 0;
  int sentence_count = 0;
  // Code points per word.
  double mean_word_length = 0.0;
  // Words per sentence.
  double mean_sentence_length = 0.0;
  int q_mark_count = 0;
  int excl_count = 0;
  int colon_count = 0;
  // Only filled when a tagger is loaded.
  int adjective_count = 0;
  int adverb_count = 0;
  int verb_count = 0;
};

ContextFeatures context_features(const ProcessedText& text, const Resources& resources,
                                 const RumorWordLists& lists);

// Everything rumor vectorization reads.
struct RumorSetup {
  const Resources* resources = nullptr;
  // Required when SA features are requested.
  const SaAnalyzer* analyzer = nullptr;
  RumorWordLists lists;
  std::vector<SaClass> selected_classes;
  // Adds `ctx.dependency_depth` from the record's `extra.dependency_depth`.
  bool include_dependency_depth = false;
};

// Classes named in rumor.selected_classes, in canonical order.
std::vector<SaClass> selected_classes_from_config(const Config& config);

// Context features, then `sa.<Class>` for each selected class when
// `include_sa` is set.
std::shared_ptr<const FeatureSchema> rumor_schema(const RumorSetup& setup, bool include_sa);

// `profile` may be passed to skip re-running the SA model.
FeatureVector rumor_features(const ProcessedText& text, const std::map<std::string, double>& extra,
                             const RumorSetup& setup, bool include_sa,
                             const SaProfile* profile = nullptr);

// True when every record carries extra.dependency_depth.
bool has_dependency_depth(const LabeledCorpus& corpus);

struct SignificanceRow {
  SaClass cls = SaClass::kQues;
  double mean_fr = 0.0;
  double mean_tr = 0.0;
  double t_statistic = 0.0;
  double p_value = 1.0;
  bool significant = false;
  std::string warning;
};

struct SignificanceTable {
  std::vector<SignificanceRow> rows;
  double alpha = 0.05;
  TTestVariant variant = TTestVariant::kWelch;
  std::size_t n_fr = 0;
  std::size_t n_tr = 0;
};

// Compares SA profile fractions of FR and TR records for all seven classes.
// Throws DataError when either group has fewer than two records.
SignificanceTable feature_significance(const std::vector<SaProfile>& fr,
                                       const std::vector<SaProfile>& tr, double alpha,
                                       TTestVariant variant);
SignificanceTable feature_significance(const LabeledCorpus& corpus, const SaAnalyzer& analyzer,
                                       const Preprocessor& preprocessor, double alpha,
                                       TTestVariant variant);

// One column per class (SA-Ques ... SA-Narrtv); rows for the two group
// means, the p-value and the significance flag.
std::string format_significance(const SignificanceTable& table);

struct AblationResult {
  EvalReport context_only;
  EvalReport context_plus_sa;
};

// Cross-validates rumor classification twice over one fold assignment,
// without and with the SA profile features. Throws DataError if the arms'
// fold hashes differ.
AblationResult ablation(const LabeledCorpus& corpus, const RumorSetup& setup, ModelKind kind,
                        const Hyperparams& hyperparams, int k, std::uint64_t seed);

// Two blocks of Precision/Recall/F-Measure per class plus Avg.
std::string format_ablation(const AblationResult& result,
                            const std::vector<SaClass>& selected_classes);

}  // namespace sact

#endif  // SACT_RUMOR_HPP_
