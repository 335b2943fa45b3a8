#include "sact/rumor.hpp"

#include <cstdio>
#include <set>

#include "sact/config.hpp"
#include "sact/error.hpp"
#include "sact/utf8.hpp"

namespace sact {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3E", v);
  return buf;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string class_list(const std::vector<SaClass>& classes) {
  std::string out;
  for (SaClass c : classes) {
    if (!out.empty()) out += ", ";
    out += to_string(c);
  }
  return out;
}

std::string sa_feature_name(SaClass c) { return "sa." + std::string(to_string(c)); }

}  // namespace

SaAnalyzer::SaAnalyzer(const Resources& resources, const Model& model, FeatureConfig features)
    : resources_(resources), model_(model), features_(features) {
  for (const auto& label : model.labels) {
    const auto c = parse_sa_class(label);
    if (!c) throw DataError("model label " + label + " is not a speech-act class");
    label_classes_.push_back(*c);
  }
}

std::vector<SaClass> SaAnalyzer::sentence_acts(const ProcessedText& text) const {
  std::vector<SaClass> acts;
  acts.reserve(text.sentences.size());
  for (const auto& sentence : text.sentences) {
    ProcessedText single;
    single.sentences.push_back(sentence);
    const VectorizeResult v = vectorize(single, resources_, features_, model_.schema);
    acts.push_back(label_classes_[predict_row(model_, v.vector.values).index]);
  }
  return acts;
}

SaProfile profile_from_acts(const std::vector<SaClass>& acts) {
  if (acts.empty()) throw DataError("cannot build an SA profile of a text without sentences");
  std::array<int, kNumSaClasses> counts{};
  for (SaClass c : acts) ++counts[index_of(c)];
  SaProfile p;
  const double n = static_cast<double>(acts.size());
  for (std::size_t i = 0; i < kNumSaClasses; ++i) p.fractions[i] = counts[i] / n;
  return p;
}

SaProfile SaAnalyzer::profile(const ProcessedText& text) const {
  return profile_from_acts(sentence_acts(text));
}

RumorWordLists RumorWordLists::load(const Config& config, const Preprocessor& preprocessor) {
  RumorWordLists lists;
  const std::pair<const char*, WordSet*> entries[] = {
      {"rumor.negation", &lists.negation},
      {"rumor.uncertainty", &lists.uncertainty},
      {"rumor.certainty", &lists.certainty},
      {"rumor.pronouns", &lists.pronouns},
  };
  for (const auto& [key, target] : entries) {
    const auto path = config.get_path(key);
    if (!path) throw ResourceError(std::string("word list ") + key + " is not configured");
    if (!std::filesystem::exists(*path)) {
      throw ResourceError(std::string("word list ") + key + " not found: " + path->string());
    }
    *target = load_word_list(*path, preprocessor);
  }
  return lists;
}

ContextFeatures context_features(const ProcessedText& text, const Resources& resources,
                                 const RumorWordLists& lists) {
  ContextFeatures f;
  f.sentence_count = static_cast<int>(text.sentences.size());
  std::set<std::string> unique;
  std::size_t code_points = 0;
  for (const auto& sentence : text.sentences) {
    if (resources.sentiment) {
      const SentimentScore s = sentiment_score(sentence.tokens, *resources.sentiment);
      f.sentiment_pos_count += s.pos_count;
      f.sentiment_neg_count += s.neg_count;
    }
    for (const auto& t : sentence.tokens) {
      if (!t.is_word) {
        if (t.surface == "?") ++f.q_mark_count;
        if (t.surface == "!") ++f.excl_count;
        if (t.surface == ":") ++f.colon_count;
        continue;
      }
      ++f.word_count;
      unique.insert(t.lemma);
      code_points += utf8::decode(t.surface).size();
      f.negation_count += lists.negation.count(t.lemma) > 0;
      f.uncertainty_count += lists.uncertainty.count(t.lemma) > 0;
      f.certainty_count += lists.certainty.count(t.lemma) > 0;
      f.pronoun_count += lists.pronouns.count(t.lemma) > 0;
    }
    if (resources.has_pos()) {
      std::vector<std::string> surfaces;
      for (const auto& t : sentence.tokens) surfaces.push_back(t.surface);
      const auto groups =
          pos_feature_groups(viterbi_tag(*resources.tagger, surfaces), *resources.tag_groups);
      f.adjective_count += groups.counts[static_cast<int>(PosGroup::kAdjective)];
      f.adverb_count += groups.counts[static_cast<int>(PosGroup::kAdverb)];
      f.verb_count += groups.counts[static_cast<int>(PosGroup::kVerb)];
    }
  }
  if (f.word_count > 0) {
    f.lexical_diversity = static_cast<double>(unique.size()) / f.word_count;
    f.mean_word_length = static_cast<double>(code_points) / f.word_count;
  }
  if (f.sentence_count > 0) {
    f.mean_sentence_length = static_cast<double>(f.word_count) / f.sentence_count;
  }
  return f;
}

std::vector<SaClass> selected_classes_from_config(const Config& config) {
  std::set<SaClass> chosen;
  for (const auto& name : config.get_list("rumor.selected_classes")) {
    const auto c = parse_sa_class(name);
    if (!c) throw UsageError("rumor.selected_classes: unknown class " + name);
    chosen.insert(*c);
  }
  return {chosen.begin(), chosen.end()};
}

std::shared_ptr<const FeatureSchema> rumor_schema(const RumorSetup& setup, bool include_sa) {
  if (!setup.resources) throw UsageError("rumor features need resources");
  std::vector<FeatureSpec> specs = {
      {"ctx.sentiment_pos", FeatureKind::kCount},
      {"ctx.sentiment_neg", FeatureKind::kCount},
      {"ctx.negation", FeatureKind::kCount},
      {"ctx.uncertainty", FeatureKind::kCount},
      {"ctx.certainty", FeatureKind::kCount},
      {"ctx.lexical_diversity", FeatureKind::kReal},
      {"ctx.pronouns", FeatureKind::kCount},
      {"ctx.words", FeatureKind::kCount},
      {"ctx.sentences", FeatureKind::kCount},
      {"ctx.mean_word_length", FeatureKind::kReal},
      {"ctx.mean_sentence_length", FeatureKind::kReal},
      {"ctx.punct.q_mark", FeatureKind::kCount},
      {"ctx.punct.excl", FeatureKind::kCount},
      {"ctx.punct.colon", FeatureKind::kCount},
  };
  if (setup.resources->has_pos()) {
    specs.push_back({"ctx.pos.adjective", FeatureKind::kCount});
    specs.push_back({"ctx.pos.adverb", FeatureKind::kCount});
    specs.push_back({"ctx.pos.verb", FeatureKind::kCount});
  }
  if (setup.include_dependency_depth) specs.push_back({"ctx.dependency_depth", FeatureKind::kReal});
  if (include_sa) {
    if (setup.selected_classes.empty()) throw UsageError("no SA classes selected for rumor features");
    for (SaClass c : setup.selected_classes) specs.push_back({sa_feature_name(c), FeatureKind::kReal});
  }
  return std::make_shared<const FeatureSchema>(std::move(specs));
}

FeatureVector rumor_features(const ProcessedText& text, const std::map<std::string, double>& extra,
                             const RumorSetup& setup, bool include_sa, const SaProfile* profile) {
  const auto schema = rumor_schema(setup, include_sa);
  const ContextFeatures c = context_features(text, *setup.resources, setup.lists);
  std::vector<double> v = {
      static_cast<double>(c.sentiment_pos_count), static_cast<double>(c.sentiment_neg_count),
      static_cast<double>(c.negation_count),      static_cast<double>(c.uncertainty_count),
      static_cast<double>(c.certainty_count),     c.lexical_diversity,
      static_cast<double>(c.pronoun_count),       static_cast<double>(c.word_count),
      static_cast<double>(c.sentence_count),      c.mean_word_length,
      c.mean_sentence_length,                     static_cast<double>(c.q_mark_count),
      static_cast<double>(c.excl_count),          static_cast<double>(c.colon_count),
  };
  if (setup.resources->has_pos()) {
    v.push_back(c.adjective_count);
    v.push_back(c.adverb_count);
    v.push_back(c.verb_count);
  }
  if (setup.include_dependency_depth) {
    const auto it = extra.find("dependency_depth");
    if (it == extra.end()) throw DataError("record lacks extra.dependency_depth");
    v.push_back(it->second);
  }
  if (include_sa) {
    SaProfile computed;
    if (!profile) {
      if (!setup.analyzer) throw UsageError("SA features need a trained SA model");
      computed = setup.analyzer->profile(text);
      profile = &computed;
    }
    for (SaClass cls : setup.selected_classes) v.push_back((*profile)[cls]);
  }
  return FeatureVector{schema, std::move(v), {}};
}

bool has_dependency_depth(const LabeledCorpus& corpus) {
  if (corpus.records.empty()) return false;
  for (const auto& r : corpus.records) {
    if (!r.extra.contains("dependency_depth")) return false;
  }
  return true;
}

SignificanceTable feature_significance(const std::vector<SaProfile>& fr,
                                       const std::vector<SaProfile>& tr, double alpha,
                                       TTestVariant variant) {
  if (fr.size() < 2 || tr.size() < 2) {
    throw DataError("significance testing needs at least 2 FR and 2 TR records, got " +
                    std::to_string(fr.size()) + " and " + std::to_string(tr.size()));
  }
  SignificanceTable table;
  table.alpha = alpha;
  table.variant = variant;
  table.n_fr = fr.size();
  table.n_tr = tr.size();
  for (SaClass c : kAllSaClasses) {
    std::vector<double> a;
    std::vector<double> b;
    for (const auto& p : fr) a.push_back(p[c]);
    for (const auto& p : tr) b.push_back(p[c]);
    SignificanceRow row;
    row.cls = c;
    bool constant_equal = false;
    try {
      const TTestResult r = t_test(a, b, variant);
      row.mean_fr = r.mean_a;
      row.mean_tr = r.mean_b;
      row.t_statistic = r.t_statistic;
      row.p_value = r.p_value;
      row.warning = r.warning;
    } catch (const DataError&) {
      constant_equal = true;
    }
    if (constant_equal) {
      // Identical constant groups: no evidence of a difference.
      row.mean_fr = a.front();
      row.mean_tr = b.front();
      row.t_statistic = 0.0;
      row.p_value = 1.0;
    }
    row.significant = row.p_value <= alpha;
    table.rows.push_back(std::move(row));
  }
  return table;
}

SignificanceTable feature_significance(const LabeledCorpus& corpus, const SaAnalyzer& analyzer,
                                       const Preprocessor& preprocessor, double alpha,
                                       TTestVariant variant) {
  std::vector<SaProfile> fr;
  std::vector<SaProfile> tr;
  for (const auto& r : corpus.records) {
    if (!r.veracity) continue;
    (*r.veracity == "FR" ? fr : tr).push_back(analyzer.profile(preprocessor.process(r.text)));
  }
  return feature_significance(fr, tr, alpha, variant);
}

std::string format_significance(const SignificanceTable& table) {
  std::string out = "# t-test variant = " + std::string(to_string(table.variant)) +
                    ", alpha = " + fixed(table.alpha) + ", n_FR = " + std::to_string(table.n_fr) +
                    ", n_TR = " + std::to_string(table.n_tr) + "\n";
  for (const auto& row : table.rows) out += "\t" + std::string(significance_column(row.cls));
  out += "\n";
  const auto line = [&](std::string_view name, auto cell) {
    out += name;
    for (const auto& row : table.rows) out += "\t" + cell(row);
    out += "\n";
  };
  line("Average frequency in FR", [](const SignificanceRow& r) { return fixed(r.mean_fr); });
  line("Average frequency in TR", [](const SignificanceRow& r) { return fixed(r.mean_tr); });
  line("P-value", [](const SignificanceRow& r) { return sci(r.p_value); });
  line("Significant", [](const SignificanceRow& r) { return std::string(r.significant ? "yes" : "no"); });
  for (const auto& row : table.rows) {
    if (!row.warning.empty()) {
      out += "# warning: " + std::string(significance_column(row.cls)) + ": " + row.warning + "\n";
    }
  }
  return out;
}

AblationResult ablation(const LabeledCorpus& corpus, const RumorSetup& setup, ModelKind kind,
                        const Hyperparams& hyperparams, int k, std::uint64_t seed) {
  if (!setup.resources || !setup.resources->preprocessor) {
    throw UsageError("rumor ablation needs loaded resources");
  }
  Dataset context;
  context.schema = rumor_schema(setup, false);
  context.labels = corpus.labels;
  Dataset combined;
  combined.schema = rumor_schema(setup, true);
  combined.labels = corpus.labels;
  for (const auto& r : corpus.records) {
    const ProcessedText text = setup.resources->preprocessor->process(r.text);
    const int target = corpus.label_index(r.label);
    context.rows.push_back(rumor_features(text, r.extra, setup, false).values);
    context.targets.push_back(target);
    combined.rows.push_back(rumor_features(text, r.extra, setup, true).values);
    combined.targets.push_back(target);
  }
  const Folds folds = stratified_kfold(context.targets, k, seed);
  AblationResult result;
  result.context_only = cross_validate(kind, context, folds, hyperparams);
  result.context_plus_sa = cross_validate(kind, combined, folds, hyperparams);
  if (result.context_only.fold_hash != result.context_plus_sa.fold_hash) {
    throw DataError("ablation arms used different folds");
  }
  for (auto* report : {&result.context_only, &result.context_plus_sa}) {
    report->config["eval.seed"] = std::to_string(seed);
  }
  return result;
}

std::string format_ablation(const AblationResult& result,
                            const std::vector<SaClass>& selected_classes) {
  std::string out = "# algo = " + result.context_only.config.at("algo") +
                    ", k = " + result.context_only.config.at("k") + "\n";
  out += "\tPrecision\tRecall\tF-Measure\n";
  const auto block = [&](const std::string& title, const EvalReport& r) {
    out += title + "\t\t\t\n";
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
      const ClassMetrics& m = r.per_class[i];
      out += r.labels[i] + "\t" + fixed(m.precision) + "\t" + fixed(m.recall) + "\t" +
             fixed(m.f1) + "\n";
    }
    out += "Avg.\t" + fixed(r.macro_precision) + "\t" + fixed(r.macro_recall) + "\t" +
           fixed(r.macro_f1) + "\n";
  };
  block("(1) Common context features", result.context_only);
  block("(2) Common context features + SA classes (" + class_list(selected_classes) + ")",
        result.context_plus_sa);
  out += "\nfold_hash_context=" + result.context_only.fold_hash + "\n";
  out += "fold_hash_context_sa=" + result.context_plus_sa.fold_hash + "\n";
  out += "macro_f1_context=" + fixed(result.context_only.macro_f1) + "\n";
  out += "macro_f1_context_sa=" + fixed(result.context_plus_sa.macro_f1) + "\n";
  return out;
}

}  // namespace sact
