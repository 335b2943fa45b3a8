#include "sact/rumor.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <string>
#include <vector>

#include "sact/config.hpp"
#include "sact/error.hpp"
#include "sact/hash.hpp"
#include "sact/pipeline.hpp"
#include "sact/random.hpp"
#include "synthetic.hpp"

namespace sact {
namespace {

TEST(ProfileTest, FractionsOfSentenceActs) {
  const SaProfile p = profile_from_acts(
      {SaClass::kQues, SaClass::kQues, SaClass::kThrt, SaClass::kNarrv});
  EXPECT_DOUBLE_EQ(p[SaClass::kQues], 0.5);
  EXPECT_DOUBLE_EQ(p[SaClass::kThrt], 0.25);
  EXPECT_DOUBLE_EQ(p[SaClass::kNarrv], 0.25);
  EXPECT_DOUBLE_EQ(p[SaClass::kReq], 0.0);
  const SaProfile one = profile_from_acts({SaClass::kDir});
  for (SaClass c : kAllSaClasses) EXPECT_EQ(one[c], c == SaClass::kDir ? 1.0 : 0.0);
  EXPECT_THROW(profile_from_acts({}), DataError);
}

TEST(ProfileTest, SumsToOneOnRandomActs) {
  Rng rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<SaClass> acts(1 + rng.uniform(40));
    for (auto& a : acts) a = kAllSaClasses[rng.uniform(kNumSaClasses)];
    const SaProfile p = profile_from_acts(acts);
    EXPECT_NEAR(std::accumulate(p.fractions.begin(), p.fractions.end(), 0.0), 1.0, 1e-9);
  }
}

// Resources written to disk and a small trained speech-act model.
class RumorFixture : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    world_ = new testing::SyntheticWorld(11);
    dir_ = new std::filesystem::path(testing::make_temp_dir("rumor"));
    config_ = new Config(Config::defaults());
    config_->merge(Config::load(world_->write_resources(*dir_)));
    resources_ = new Resources(Resources::load(*config_));
    archive_ = new ModelArchive(train_sa_model(world_->sa_corpus(20, false, 3), *resources_,
                                               FeatureConfig{}, ModelKind::kNb, Hyperparams{}));
    analyzer_ = new SaAnalyzer(*resources_, archive_->model, FeatureConfig{});
  }

  static void TearDownTestSuite() {
    delete analyzer_;
    delete archive_;
    delete resources_;
    delete config_;
    std::filesystem::remove_all(*dir_);
    delete dir_;
    delete world_;
  }

  RumorSetup setup() const {
    RumorSetup s;
    s.resources = resources_;
    s.analyzer = analyzer_;
    s.lists = RumorWordLists::load(*config_, *resources_->preprocessor);
    s.selected_classes = selected_classes_from_config(*config_);
    return s;
  }

  ProcessedText process(std::string_view text) const {
    return resources_->preprocessor->process(text);
  }

  static testing::SyntheticWorld* world_;
  static std::filesystem::path* dir_;
  static Config* config_;
  static Resources* resources_;
  static ModelArchive* archive_;
  static SaAnalyzer* analyzer_;
};

testing::SyntheticWorld* RumorFixture::world_ = nullptr;
std::filesystem::path* RumorFixture::dir_ = nullptr;
Config* RumorFixture::config_ = nullptr;
Resources* RumorFixture::resources_ = nullptr;
ModelArchive* RumorFixture::archive_ = nullptr;
SaAnalyzer* RumorFixture::analyzer_ = nullptr;

TEST_F(RumorFixture, SingleSentenceProfileIsOneHot) {
  Rng rng(2);
  for (SaClass c : kAllSaClasses) {
    const SaProfile p = analyzer_->profile(process(world_->sentence(c, rng)));
    for (SaClass d : kAllSaClasses) EXPECT_EQ(p[d], c == d ? 1.0 : 0.0);
  }
  EXPECT_THROW(analyzer_->profile(process("")), DataError);
}

TEST_F(RumorFixture, MultiSentenceProfileMatchesSentenceActs) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::string text;
    std::vector<SaClass> truth;
    const std::size_t n = 1 + rng.uniform(6);
    for (std::size_t i = 0; i < n; ++i) {
      truth.push_back(kAllSaClasses[rng.uniform(kNumSaClasses)]);
      text += world_->sentence(truth.back(), rng) + " ";
    }
    const ProcessedText p = process(text);
    EXPECT_EQ(analyzer_->sentence_acts(p), truth);
    const SaProfile profile = analyzer_->profile(p);
    EXPECT_EQ(profile.fractions, profile_from_acts(truth).fractions);
  }
}

TEST_F(RumorFixture, ContextFeatureCounts) {
  const RumorSetup s = setup();
  const std::string neg = *s.lists.negation.begin();
  const std::string pron = *s.lists.pronouns.begin();
  const ContextFeatures f =
      context_features(process(neg + " " + pron + " بزرگ! " + pron + " کجا? گفت: بله"),
                       *resources_, s.lists);
  EXPECT_EQ(f.negation_count, 1);
  EXPECT_EQ(f.pronoun_count, 2);
  EXPECT_EQ(f.word_count, 7);
  EXPECT_EQ(f.sentence_count, 3);
  EXPECT_EQ(f.excl_count, 1);
  EXPECT_EQ(f.q_mark_count, 1);
  EXPECT_EQ(f.colon_count, 1);
  EXPECT_DOUBLE_EQ(f.lexical_diversity, 6.0 / 7);
  EXPECT_DOUBLE_EQ(f.mean_sentence_length, 7.0 / 3);
}

TEST_F(RumorFixture, LexicalDiversity) {
  const RumorSetup s = setup();
  const auto& fillers = world_->fillers();
  const ContextFeatures distinct =
      context_features(process(fillers[0] + " " + fillers[1] + " " + fillers[2]), *resources_, s.lists);
  EXPECT_DOUBLE_EQ(distinct.lexical_diversity, 1.0);
  const ContextFeatures repeated =
      context_features(process(fillers[0] + " " + fillers[0]), *resources_, s.lists);
  EXPECT_DOUBLE_EQ(repeated.lexical_diversity, 0.5);
  const ContextFeatures empty = context_features(process("!?"), *resources_, s.lists);
  EXPECT_DOUBLE_EQ(empty.lexical_diversity, 1.0);
  EXPECT_EQ(empty.word_count, 0);
}

TEST_F(RumorFixture, MeanWordLengthCountsCodePoints) {
  const RumorSetup s = setup();
  const ContextFeatures f = context_features(process("ابب ج"), *resources_, s.lists);
  EXPECT_DOUBLE_EQ(f.mean_word_length, 2.0);
}

TEST_F(RumorFixture, SchemaArms) {
  const RumorSetup s = setup();
  const auto without = rumor_schema(s, false);
  for (const auto& spec : without->specs()) {
    EXPECT_EQ(spec.name.find("sa."), std::string::npos) << spec.name;
  }
  const auto with = rumor_schema(s, true);
  ASSERT_EQ(with->size(), without->size() + 4);
  EXPECT_EQ((*with)[without->size()].name, "sa.Ques");
  EXPECT_EQ((*with)[without->size() + 3].name, "sa.Narrv");
  EXPECT_LT(with->find("ctx.dependency_depth"), 0);

  RumorSetup deep = s;
  deep.include_dependency_depth = true;
  EXPECT_GE(rumor_schema(deep, false)->find("ctx.dependency_depth"), 0);
  const FeatureVector v = rumor_features(process("الف ب."), {{"dependency_depth", 4}}, deep, false);
  EXPECT_EQ(v.at("ctx.dependency_depth"), 4.0);
  EXPECT_THROW(rumor_features(process("الف ب."), {}, deep, false), DataError);
}

TEST_F(RumorFixture, FeaturesUseGivenProfile) {
  const RumorSetup s = setup();
  Rng rng(4);
  const ProcessedText text = process(world_->sentence(SaClass::kThrt, rng));
  const FeatureVector computed = rumor_features(text, {}, s, true);
  EXPECT_EQ(computed.at("sa.Thrt"), 1.0);
  EXPECT_EQ(computed.at("sa.Ques"), 0.0);
  const SaProfile given = profile_from_acts({SaClass::kQues, SaClass::kNarrv});
  const FeatureVector v = rumor_features(text, {}, s, true, &given);
  EXPECT_EQ(v.at("sa.Ques"), 0.5);
  EXPECT_EQ(v.at("sa.Thrt"), 0.0);
}

TEST(SelectedClassesTest, CanonicalOrderAndValidation) {
  Config c = Config::defaults();
  EXPECT_EQ(selected_classes_from_config(c),
            (std::vector<SaClass>{SaClass::kQues, SaClass::kThrt, SaClass::kDeclar, SaClass::kNarrv}));
  c.set("rumor.selected_classes", "Narrv,Req,Narrv");
  EXPECT_EQ(selected_classes_from_config(c), (std::vector<SaClass>{SaClass::kReq, SaClass::kNarrv}));
  c.set("rumor.selected_classes", "Gossip");
  EXPECT_THROW(selected_classes_from_config(c), UsageError);
}

TEST(WordListsTest, MissingListIsNamed) {
  Config c;
  const Preprocessor pre;
  try {
    RumorWordLists::load(c, pre);
    FAIL();
  } catch (const ResourceError& e) {
    EXPECT_NE(std::string(e.what()).find("rumor.negation"), std::string::npos);
  }
  const auto dir = testing::make_temp_dir("lists");
  for (const char* name : {"neg", "unc", "cert"}) {
    write_file_atomic(dir / name, "x\n");
  }
  c = Config::parse("rumor.negation = neg\nrumor.uncertainty = unc\nrumor.certainty = cert\n"
                    "rumor.pronouns = pron\n",
                    dir);
  try {
    RumorWordLists::load(c, pre);
    FAIL();
  } catch (const ResourceError& e) {
    EXPECT_NE(std::string(e.what()).find("rumor.pronouns"), std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

std::vector<SaProfile> random_profiles(Rng& rng, std::size_t n) {
  std::vector<SaProfile> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<SaClass> acts(1 + rng.uniform(6));
    for (auto& a : acts) a = kAllSaClasses[rng.uniform(kNumSaClasses)];
    out.push_back(profile_from_acts(acts));
  }
  return out;
}

TEST(SignificanceTest, IdenticalGroupsFlagNothing) {
  Rng rng(5);
  const auto group = random_profiles(rng, 12);
  const SignificanceTable t = feature_significance(group, group, 0.05, TTestVariant::kWelch);
  ASSERT_EQ(t.rows.size(), kNumSaClasses);
  for (const auto& row : t.rows) {
    EXPECT_DOUBLE_EQ(row.p_value, 1.0);
    EXPECT_FALSE(row.significant);
  }
}

TEST(SignificanceTest, SymmetricUnderGroupSwap) {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const auto fr = random_profiles(rng, 2 + rng.uniform(15));
    const auto tr = random_profiles(rng, 2 + rng.uniform(15));
    const auto a = feature_significance(fr, tr, 0.05, TTestVariant::kWelch);
    const auto b = feature_significance(tr, fr, 0.05, TTestVariant::kWelch);
    for (std::size_t i = 0; i < kNumSaClasses; ++i) {
      EXPECT_EQ(a.rows[i].p_value, b.rows[i].p_value);
      EXPECT_EQ(a.rows[i].mean_fr - a.rows[i].mean_tr, -(b.rows[i].mean_fr - b.rows[i].mean_tr));
      EXPECT_EQ(a.rows[i].significant, b.rows[i].significant);
    }
  }
}

TEST(SignificanceTest, PlantedEffectIsFlagged) {
  // FR texts all threats, TR texts all declaratives.
  const std::vector<SaProfile> fr(10, profile_from_acts({SaClass::kThrt}));
  const std::vector<SaProfile> tr(10, profile_from_acts({SaClass::kDeclar}));
  const auto t = feature_significance(fr, tr, 0.05, TTestVariant::kWelch);
  for (const auto& row : t.rows) {
    const bool planted = row.cls == SaClass::kThrt || row.cls == SaClass::kDeclar;
    EXPECT_EQ(row.significant, planted) << to_string(row.cls);
    EXPECT_EQ(row.p_value, planted ? 0.0 : 1.0);
    EXPECT_EQ(row.warning.empty(), !planted);
  }
}

TEST(SignificanceTest, NoisyEffectMatchesTTest) {
  Rng rng(7);
  std::vector<SaProfile> fr, tr;
  for (int i = 0; i < 15; ++i) {
    fr.push_back(profile_from_acts({SaClass::kThrt, SaClass::kThrt,
                                    kAllSaClasses[rng.uniform(kNumSaClasses)]}));
    tr.push_back(profile_from_acts({SaClass::kDeclar, kAllSaClasses[rng.uniform(kNumSaClasses)],
                                    kAllSaClasses[rng.uniform(kNumSaClasses)]}));
  }
  const auto table = feature_significance(fr, tr, 0.01, TTestVariant::kPooled);
  for (const auto& row : table.rows) {
    std::vector<double> a, b;
    for (const auto& p : fr) a.push_back(p[row.cls]);
    for (const auto& p : tr) b.push_back(p[row.cls]);
    bool constant_equal = true;
    for (double x : a) constant_equal = constant_equal && x == a[0];
    for (double x : b) constant_equal = constant_equal && x == a[0];
    if (constant_equal) continue;
    const TTestResult r = t_test(a, b, TTestVariant::kPooled);
    EXPECT_EQ(row.p_value, r.p_value);
    EXPECT_EQ(row.significant, r.p_value <= 0.01);
  }
  EXPECT_TRUE(table.rows[index_of(SaClass::kThrt)].significant);
}

TEST(SignificanceTest, SmallGroupsAreAnError) {
  Rng rng(8);
  EXPECT_THROW(feature_significance(random_profiles(rng, 1), random_profiles(rng, 5), 0.05,
                                    TTestVariant::kWelch),
               DataError);
}

TEST(SignificanceTest, TableLayout) {
  Rng rng(9);
  const auto t = feature_significance(random_profiles(rng, 5), random_profiles(rng, 5), 0.05,
                                      TTestVariant::kWelch);
  const std::string text = format_significance(t);
  EXPECT_NE(text.find("\tSA-Ques\tSA-Req\tSA-Dir\tSA-Thre\tSA-Quot\tSA-Dec\tSA-Narrtv"),
            std::string::npos);
  EXPECT_NE(text.find("Average frequency in FR"), std::string::npos);
  EXPECT_NE(text.find("Average frequency in TR"), std::string::npos);
  EXPECT_NE(text.find("P-value"), std::string::npos);
}

TEST_F(RumorFixture, CorpusSignificanceFindsPlantedClasses) {
  const LabeledCorpus corpus = world_->veracity_corpus(20, 5);
  const auto t =
      feature_significance(corpus, *analyzer_, *resources_->preprocessor, 0.05, TTestVariant::kWelch);
  EXPECT_EQ(t.n_fr, 20u);
  EXPECT_EQ(t.n_tr, 20u);
  for (const auto& row : t.rows) {
    const bool planted = row.cls == SaClass::kThrt || row.cls == SaClass::kDeclar;
    EXPECT_EQ(row.significant, planted) << to_string(row.cls);
  }
}

TEST_F(RumorFixture, AblationWithPlantedSaSignal) {
  Hyperparams h;
  h.rf_trees = 30;
  const AblationResult r =
      ablation(world_->sa_rumor_corpus(40, 6), setup(), ModelKind::kRf, h, 5, 42);
  EXPECT_EQ(r.context_only.fold_hash, r.context_plus_sa.fold_hash);
  EXPECT_GT(r.context_plus_sa.macro_f1, r.context_only.macro_f1);
  const std::string text = format_ablation(r, setup().selected_classes);
  EXPECT_NE(text.find("\tPrecision\tRecall\tF-Measure"), std::string::npos);
  EXPECT_NE(text.find("(1) Common context features"), std::string::npos);
  EXPECT_NE(text.find("(2) Common context features + SA classes"), std::string::npos);
  EXPECT_NE(text.find("Avg."), std::string::npos);
}

TEST_F(RumorFixture, AblationWithContextOnlySignal) {
  Hyperparams h;
  h.rf_trees = 30;
  const AblationResult r =
      ablation(world_->context_rumor_corpus(40, 7), setup(), ModelKind::kRf, h, 5, 42);
  EXPECT_EQ(r.context_only.fold_hash, r.context_plus_sa.fold_hash);
  EXPECT_LT(std::abs(r.context_plus_sa.macro_f1 - r.context_only.macro_f1), 0.05);
}

TEST(DependencyDepthTest, PresentOnlyWhenEveryRecordHasIt) {
  LabeledCorpus c;
  c.labels = {"Rumor", "NonRumor"};
  c.records.resize(2);
  c.records[0].extra["dependency_depth"] = 3;
  EXPECT_FALSE(has_dependency_depth(c));
  c.records[1].extra["dependency_depth"] = 5;
  EXPECT_TRUE(has_dependency_depth(c));
}

}  // namespace
}  // namespace sact
