// Command-line entry point: one binary, one subcommand per pipeline stage.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sact/classifiers.hpp"
#include "sact/config.hpp"
#include "sact/corpus_io.hpp"
#include "sact/error.hpp"
#include "sact/eval_stats.hpp"
#include "sact/features.hpp"
#include "sact/hash.hpp"
#include "sact/lexicon.hpp"
#include "sact/pipeline.hpp"
#include "sact/pos_tagger.hpp"
#include "sact/preprocess.hpp"
#include "sact/rumor.hpp"

namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  bool dump_config = false;
};

// Built-in defaults < config file < --set < subcommand flags.
sact::Config resolve_config(const GlobalOptions& g) {
  sact::Config config = sact::Config::defaults();
  if (!g.config_path.empty()) config.merge(sact::Config::load(g.config_path));
  for (const auto& kv : g.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw sact::UsageError("--set expects key=value, got " + kv);
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    config.set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
  }
  return config;
}

void log(const std::string& line) { std::cerr << "sact: " << line << "\n"; }

sact::ModelKind model_kind(const std::string& name) {
  const auto kind = sact::parse_model_kind(name);
  if (!kind) throw sact::UsageError("unknown algorithm " + name + " (expected nb, knn, rf or svm)");
  return *kind;
}

std::string score_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
  } else {
    sact::write_file_atomic(out_path, content);
  }
}

void warn_fingerprints(const sact::ModelArchive& archive, const sact::Resources& resources) {
  for (const auto& w : sact::fingerprint_warnings(archive, resources.fingerprints)) {
    std::cerr << "warning: " << w << "\n";
  }
}

struct Text {
  std::string id;
  std::string body;
};

// A corpus file (recognized by its header) or one text per non-blank line.
std::vector<Text> read_texts(const std::string& path) {
  const std::string content = sact::read_file(path);
  std::vector<Text> texts;
  if (content.rfind("#labels=", 0) == 0) {
    for (auto& r : sact::parse_corpus(content).records) texts.push_back({r.id, r.text});
    return texts;
  }
  std::istringstream in(content);
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    texts.push_back({std::to_string(n), line});
  }
  return texts;
}

// ---- subcommands ----

struct PreprocessArgs {
  std::string in;
  std::string out;
};

void run_preprocess(const sact::Config& config, const PreprocessArgs& a) {
  const sact::Preprocessor pre = sact::Preprocessor::from_config(config);
  std::string out = "id\tsentence\tterminal\tsurface\tlemmas\n";
  for (const auto& t : read_texts(a.in)) {
    const sact::ProcessedText p = pre.process(t.body);
    for (std::size_t s = 0; s < p.sentences.size(); ++s) {
      const auto& sentence = p.sentences[s];
      std::string surface;
      std::string lemmas;
      for (const auto& tok : sentence.tokens) {
        if (!surface.empty()) surface += ' ';
        surface += tok.surface;
        if (!tok.is_word || tok.is_stopword) continue;
        if (!lemmas.empty()) lemmas += ' ';
        lemmas += tok.lemma;
      }
      out += sact::escape_field(t.id) + "\t" + std::to_string(s) + "\t" +
             (sentence.terminal_punct ? std::string(1, *sentence.terminal_punct) : "") + "\t" +
             sact::escape_field(surface) + "\t" + sact::escape_field(lemmas) + "\n";
    }
  }
  emit(out, a.out);
}

struct BuildDictArgs {
  std::string seed;
  std::string ontology;
  std::string corpus;
  std::string out;
};

void run_build_dict(const sact::Config& config, const BuildDictArgs& a) {
  const sact::Preprocessor pre = sact::Preprocessor::from_config(config);
  sact::SaDictionary dict = sact::load_dictionary(a.seed, pre);
  const sact::Ontology ontology = sact::load_ontology(a.ontology, pre);
  const sact::LabeledCorpus corpus = sact::load_corpus(a.corpus);
  std::string log_text = "#word\tlist\tsynset\ttext_id\n";
  std::size_t added = 0;
  for (const auto& r : corpus.records) {
    const sact::ProcessedText text = pre.process(r.text);
    for (const auto& sentence : text.sentences) {
      for (const auto& tok : sentence.tokens) {
        if (!tok.is_word || tok.is_stopword || dict.in_any_list(tok.lemma)) continue;
        sact::EnrichResult e = sact::enrich(dict, tok.lemma, ontology);
        if (e.added_to.empty()) continue;
        dict = std::move(e.dictionary);
        ++added;
        const std::string& synset = dict.provenance().at(tok.lemma).synset_id;
        for (const auto& ref : e.added_to) {
          log_text += tok.lemma + "\t" + sact::to_string(ref) + "\t" + synset + "\t" +
                      sact::escape_field(r.id) + "\n";
        }
      }
    }
  }
  std::ostringstream out;
  sact::write_dictionary(dict, out);
  sact::write_file_atomic(a.out, out.str());
  sact::write_file_atomic(a.out + ".provenance", log_text);
  log("added " + std::to_string(added) + " words; dictionary version " +
      std::to_string(dict.version()));
}

struct TaggerArgs {
  std::string corpus;
  std::string model;
  std::string in;
  std::string out;
};

void run_train_tagger(const TaggerArgs& a) {
  const sact::HmmModel model = sact::HmmModel::train(sact::load_tagged_corpus(a.corpus));
  sact::write_file_atomic(a.out, model.serialize());
  log("trained tagger on " + std::to_string(model.sentence_count()) + " sentences, " +
      std::to_string(model.tagset().size()) + " tags");
}

void run_tag(const sact::Config& config, const TaggerArgs& a) {
  const sact::HmmModel model = sact::HmmModel::load(a.model);
  const bool normalize = config.get_bool("preprocess.normalize", true);
  std::string out;
  for (const auto& t : read_texts(a.in)) {
    const std::string text = normalize ? sact::normalize(t.body) : t.body;
    std::vector<std::string> words;
    for (const auto& tok : sact::tokenize(text)) words.push_back(tok.surface);
    const auto tags = sact::viterbi_tag(model, words);
    std::string line;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i) line += ' ';
      line += words[i] + "/" + tags[i];
    }
    out += line + "\n";
  }
  emit(out, a.out);
}

struct SaArgs {
  std::string corpus;
  std::string algo;
  std::string out;
  std::string model;
  std::string in;
  std::optional<int> k;
  std::optional<std::uint64_t> seed;
  bool no_enrich = false;
};

void apply_sa_flags(sact::Config& config, const SaArgs& a) {
  if (!a.algo.empty()) config.set("sa.algo", a.algo);
  if (a.k) config.set("eval.k", std::to_string(*a.k));
  if (a.seed) {
    config.set("eval.seed", std::to_string(*a.seed));
    config.set("rf.seed", std::to_string(*a.seed));
  }
  if (a.no_enrich) config.set("features.enrich", "false");
}

void run_train_sa(sact::Config config, const SaArgs& a) {
  apply_sa_flags(config, a);
  const sact::Resources resources = sact::Resources::load(config);
  const sact::LabeledCorpus corpus = sact::load_corpus(a.corpus, sact::sa_labels());
  const sact::ModelKind kind = model_kind(config.get_string("sa.algo", "rf"));
  const sact::ModelArchive archive =
      sact::train_sa_model(corpus, resources, sact::FeatureConfig::from_config(config), kind,
                           sact::Hyperparams::from_config(config));
  sact::save_model(archive, a.out);
  log("trained " + std::string(sact::to_string(kind)) + " on " +
      std::to_string(corpus.records.size()) + " texts");
}

void run_classify_sa(const sact::Config& config, const SaArgs& a) {
  const sact::Resources resources = sact::Resources::load(config);
  const sact::ModelArchive archive = sact::load_model(a.model);
  warn_fingerprints(archive, resources);
  const sact::FeatureConfig features = sact::feature_config_of(archive);
  std::string out = "id\tlabel";
  for (const auto& label : archive.model.labels) out += "\t" + label;
  out += "\n";
  for (const auto& t : read_texts(a.in)) {
    const auto vec = sact::sa_vector(t.body, resources, features, archive.model.schema);
    const sact::Prediction p = sact::predict(archive.model, vec);
    out += sact::escape_field(t.id) + "\t" + p.label;
    for (double s : p.scores) out += "\t" + score_text(s);
    out += "\n";
  }
  emit(out, a.out);
}

void run_eval_sa(sact::Config config, const SaArgs& a) {
  apply_sa_flags(config, a);
  const sact::Resources resources = sact::Resources::load(config);
  const sact::LabeledCorpus corpus = sact::load_corpus(a.corpus, sact::sa_labels());
  const sact::FeatureConfig features = sact::FeatureConfig::from_config(config);
  const sact::ModelKind kind = model_kind(config.get_string("sa.algo", "rf"));
  const sact::Dataset data = sact::sa_dataset(corpus, resources, features);
  sact::EvalReport report = sact::cross_validate(
      kind, data, static_cast<int>(config.get_int("eval.k", 10)),
      sact::Hyperparams::from_config(config),
      static_cast<std::uint64_t>(config.get_int("eval.seed", 42)));
  report.config["features.enrich"] = features.enrich ? "true" : "false";
  const std::string title = std::string("speech-act classification, ") +
                            (features.enrich ? "with" : "without") + " ontology enrichment";
  const std::string text = sact::format_report(report, title);
  if (a.out.empty()) {
    std::cout << text;
  } else {
    sact::write_file_atomic(a.out, text);
    std::cout << "macro_f1=" << fixed4(report.macro_f1) << "\n";
  }
}

struct RumorArgs {
  std::string corpus;
  std::string sa_model;
  std::string out;
  std::string algo;
  std::optional<int> k;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::string variant;
  bool ablate = false;
};

void run_ttest(sact::Config config, const RumorArgs& a) {
  if (a.alpha) config.set("ttest.alpha", score_text(*a.alpha));
  if (!a.variant.empty()) config.set("ttest.variant", a.variant);
  const sact::Resources resources = sact::Resources::load(config);
  const sact::ModelArchive archive = sact::load_model(a.sa_model);
  warn_fingerprints(archive, resources);
  const sact::LabeledCorpus corpus = sact::load_corpus(a.corpus);
  const sact::SaAnalyzer analyzer(resources, archive.model, sact::feature_config_of(archive));
  const auto table = sact::feature_significance(
      corpus, analyzer, *resources.preprocessor, config.get_double("ttest.alpha", 0.05),
      sact::parse_ttest_variant(config.get_string("ttest.variant", "welch")));
  emit(sact::format_significance(table), a.out);
}

void run_eval_rumor(sact::Config config, const RumorArgs& a) {
  if (!a.algo.empty()) config.set("rumor.algo", a.algo);
  if (a.k) config.set("eval.k", std::to_string(*a.k));
  if (a.seed) {
    config.set("eval.seed", std::to_string(*a.seed));
    config.set("rf.seed", std::to_string(*a.seed));
  }
  const sact::Resources resources = sact::Resources::load(config);
  const sact::ModelArchive archive = sact::load_model(a.sa_model);
  warn_fingerprints(archive, resources);
  const sact::LabeledCorpus corpus = sact::load_corpus(
      a.corpus, {std::string(sact::kRumorLabel), std::string(sact::kNonRumorLabel)});
  const sact::SaAnalyzer analyzer(resources, archive.model, sact::feature_config_of(archive));

  sact::RumorSetup setup;
  setup.resources = &resources;
  setup.analyzer = &analyzer;
  setup.lists = sact::RumorWordLists::load(config, *resources.preprocessor);
  setup.selected_classes = sact::selected_classes_from_config(config);
  setup.include_dependency_depth = sact::has_dependency_depth(corpus);

  const sact::ModelKind kind = model_kind(config.get_string("rumor.algo", "rf"));
  const auto hyperparams = sact::Hyperparams::from_config(config);
  const int k = static_cast<int>(config.get_int("eval.k", 10));
  const auto seed = static_cast<std::uint64_t>(config.get_int("eval.seed", 42));

  if (a.ablate) {
    const auto result = sact::ablation(corpus, setup, kind, hyperparams, k, seed);
    emit(sact::format_ablation(result, setup.selected_classes), a.out);
    return;
  }
  sact::Dataset data;
  data.schema = sact::rumor_schema(setup, true);
  data.labels = corpus.labels;
  for (const auto& r : corpus.records) {
    data.rows.push_back(
        sact::rumor_features(resources.preprocessor->process(r.text), r.extra, setup, true).values);
    data.targets.push_back(corpus.label_index(r.label));
  }
  const auto report = sact::cross_validate(kind, data, k, hyperparams, seed);
  emit(sact::format_report(report, "rumor classification, context + SA features"), a.out);
}

int exit_code(sact::ErrorKind kind) { return static_cast<int>(kind); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speech-act classification and rumor analysis for Persian text", "sact"};
  app.require_subcommand(0, 1);
  GlobalOptions g;
  app.add_option("--config", g.config_path, "Configuration file (key = value lines)");
  app.add_option("--set", g.overrides, "Override a configuration key (key=value)")->take_all();
  app.add_flag("--dump-config", g.dump_config, "Print the resolved configuration and exit");

  PreprocessArgs pre_args;
  auto* pre_cmd = app.add_subcommand("preprocess", "Normalize, split, tokenize and lemmatize texts");
  pre_cmd->add_option("--in", pre_args.in, "Corpus or plain text file")->required();
  pre_cmd->add_option("--out", pre_args.out, "Output file (default stdout)");

  BuildDictArgs dict_args;
  auto* dict_cmd = app.add_subcommand("build-dict", "Enrich a dictionary over a corpus");
  dict_cmd->add_option("--seed", dict_args.seed, "Seed dictionary")->required();
  dict_cmd->add_option("--ontology", dict_args.ontology, "Synset file")->required();
  dict_cmd->add_option("--corpus", dict_args.corpus, "Corpus to scan")->required();
  dict_cmd->add_option("--out", dict_args.out, "Enriched dictionary")->required();

  TaggerArgs tagger_args;
  auto* train_tagger_cmd = app.add_subcommand("train-tagger", "Train the HMM tagger");
  train_tagger_cmd->add_option("--corpus", tagger_args.corpus, "word/TAG corpus")->required();
  train_tagger_cmd->add_option("--out", tagger_args.out, "Model file")->required();
  auto* tag_cmd = app.add_subcommand("tag", "Tag texts with a trained tagger");
  tag_cmd->add_option("--model", tagger_args.model, "Tagger model")->required();
  tag_cmd->add_option("--in", tagger_args.in, "Corpus or plain text file")->required();
  tag_cmd->add_option("--out", tagger_args.out, "Output file (default stdout)");

  SaArgs sa_args;
  auto* train_sa_cmd = app.add_subcommand("train-sa", "Train a speech-act classifier");
  train_sa_cmd->add_option("--corpus", sa_args.corpus, "Labeled corpus")->required();
  train_sa_cmd->add_option("--algo", sa_args.algo, "nb, knn, rf or svm");
  train_sa_cmd->add_option("--out", sa_args.out, "Model archive")->required();
  train_sa_cmd->add_option("--seed", sa_args.seed, "Random seed");
  train_sa_cmd->add_flag("--no-enrich", sa_args.no_enrich, "Disable ontology enrichment");

  auto* classify_cmd = app.add_subcommand("classify-sa", "Classify texts with a trained model");
  classify_cmd->add_option("--model", sa_args.model, "Model archive")->required();
  classify_cmd->add_option("--in", sa_args.in, "Corpus or plain text file")->required();
  classify_cmd->add_option("--out", sa_args.out, "Predictions (default stdout)");

  auto* eval_cmd = app.add_subcommand("eval-sa", "Cross-validate a speech-act classifier");
  eval_cmd->add_option("--corpus", sa_args.corpus, "Labeled corpus")->required();
  eval_cmd->add_option("--algo", sa_args.algo, "nb, knn, rf or svm");
  eval_cmd->add_option("--k", sa_args.k, "Number of folds");
  eval_cmd->add_option("--seed", sa_args.seed, "Random seed");
  eval_cmd->add_option("--out", sa_args.out, "Report file (default stdout)");
  eval_cmd->add_flag("--no-enrich", sa_args.no_enrich, "Disable ontology enrichment");

  RumorArgs rumor_args;
  auto* ttest_cmd = app.add_subcommand("ttest", "Compare SA profiles of false and true rumors");
  ttest_cmd->add_option("--corpus", rumor_args.corpus, "Corpus with veracity fields")->required();
  ttest_cmd->add_option("--sa-model", rumor_args.sa_model, "Speech-act model")->required();
  ttest_cmd->add_option("--alpha", rumor_args.alpha, "Significance level");
  ttest_cmd->add_option("--variant", rumor_args.variant, "welch or pooled");
  ttest_cmd->add_option("--out", rumor_args.out, "Output file (default stdout)");

  auto* rumor_cmd = app.add_subcommand("eval-rumor", "Cross-validate rumor classification");
  rumor_cmd->add_option("--corpus", rumor_args.corpus, "Rumor corpus")->required();
  rumor_cmd->add_option("--sa-model", rumor_args.sa_model, "Speech-act model")->required();
  rumor_cmd->add_flag("--ablate", rumor_args.ablate, "Compare context-only and context+SA");
  rumor_cmd->add_option("--algo", rumor_args.algo, "nb, knn, rf or svm");
  rumor_cmd->add_option("--k", rumor_args.k, "Number of folds");
  rumor_cmd->add_option("--seed", rumor_args.seed, "Random seed");
  rumor_cmd->add_option("--out", rumor_args.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(sact::ErrorKind::kUsage);
  }

  try {
    sact::Config config = resolve_config(g);
    if (g.dump_config) {
      std::cout << config.dump();
      return 0;
    }
    if (app.got_subcommand(pre_cmd)) run_preprocess(config, pre_args);
    else if (app.got_subcommand(dict_cmd)) run_build_dict(config, dict_args);
    else if (app.got_subcommand(train_tagger_cmd)) run_train_tagger(tagger_args);
    else if (app.got_subcommand(tag_cmd)) run_tag(config, tagger_args);
    else if (app.got_subcommand(train_sa_cmd)) run_train_sa(config, sa_args);
    else if (app.got_subcommand(classify_cmd)) run_classify_sa(config, sa_args);
    else if (app.got_subcommand(eval_cmd)) run_eval_sa(config, sa_args);
    else if (app.got_subcommand(ttest_cmd)) run_ttest(config, rumor_args);
    else if (app.got_subcommand(rumor_cmd)) run_eval_rumor(config, rumor_args);
    else {
      std::cerr << "error: no subcommand given; see --help\n";
      return exit_code(sact::ErrorKind::kUsage);
    }
  } catch (const sact::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(sact::ErrorKind::kData);
  }
  return 0;
}
