#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "sact/classifiers.hpp"
#include "sact/config.hpp"
#include "sact/eval_stats.hpp"
#include "sact/features.hpp"
#include "sact/pipeline.hpp"
#include "sact/pos_tagger.hpp"
#include "sact/preprocess.hpp"
#include "synthetic.hpp"

namespace {

using sact::testing::SyntheticWorld;

const SyntheticWorld& world() {
  static const SyntheticWorld w(7);
  return w;
}

// Resources loaded once from a temporary fixture directory.
const sact::Resources& resources() {
  static const sact::Resources r = [] {
    const auto dir = sact::testing::make_temp_dir("sact-bench");
    sact::Config config = sact::Config::defaults();
    config.merge(sact::Config::load(world().write_resources(dir)));
    return sact::Resources::load(config);
  }();
  return r;
}

const sact::Dataset& sa_data() {
  static const sact::Dataset d =
      sact::sa_dataset(world().sa_corpus(100, false, 3), resources(), sact::FeatureConfig{});
  return d;
}

void BM_Process(benchmark::State& state) {
  const auto corpus = world().veracity_corpus(10, 1);
  const auto& pre = *resources().preprocessor;
  for (auto _ : state) {
    for (const auto& r : corpus.records) benchmark::DoNotOptimize(pre.process(r.text));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(corpus.records.size()));
}
BENCHMARK(BM_Process);

void BM_Vectorize(benchmark::State& state) {
  const auto corpus = world().veracity_corpus(10, 1);
  std::vector<sact::ProcessedText> texts;
  for (const auto& r : corpus.records) texts.push_back(resources().preprocessor->process(r.text));
  sact::FeatureConfig config;
  config.enrich = state.range(0) != 0;
  for (auto _ : state) {
    for (const auto& t : texts) benchmark::DoNotOptimize(sact::vectorize(t, resources(), config));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(texts.size()));
}
BENCHMARK(BM_Vectorize)->Arg(0)->Arg(1);

void BM_Viterbi(benchmark::State& state) {
  sact::Rng rng(5);
  const std::vector<std::string> tags = {"N", "V", "ADJ", "ADV", "P", "PRO"};
  std::string text;
  for (int s = 0; s < 400; ++s) {
    for (int i = 0; i < 10; ++i) {
      text += "w" + std::to_string(rng.uniform(300)) + "/" + tags[rng.uniform(tags.size())] + " ";
    }
    text += "\n";
  }
  const auto model = sact::HmmModel::train(sact::parse_tagged_corpus(text));
  std::vector<std::string> sentence;
  for (int i = 0; i < state.range(0); ++i) sentence.push_back("w" + std::to_string(i * 7 % 350));
  for (auto _ : state) benchmark::DoNotOptimize(sact::viterbi(model, sentence));
}
BENCHMARK(BM_Viterbi)->Arg(10)->Arg(40);

void BM_Train(benchmark::State& state) {
  const auto kind = static_cast<sact::ModelKind>(state.range(0));
  sact::Hyperparams h;
  h.rf_trees = 20;
  for (auto _ : state) benchmark::DoNotOptimize(sact::train(kind, sa_data(), h));
  state.SetLabel(std::string(sact::to_string(kind)));
}
BENCHMARK(BM_Train)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_Predict(benchmark::State& state) {
  const auto kind = static_cast<sact::ModelKind>(state.range(0));
  sact::Hyperparams h;
  h.rf_trees = 20;
  const auto model = sact::train(kind, sa_data(), h);
  for (auto _ : state) {
    for (const auto& row : sa_data().rows) benchmark::DoNotOptimize(sact::predict_row(model, row));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(sa_data().size()));
  state.SetLabel(std::string(sact::to_string(kind)));
}
BENCHMARK(BM_Predict)->DenseRange(0, 3);

void BM_TCdf(benchmark::State& state) {
  double t = -5.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sact::t_cdf(t, 12.0));
    t = t > 5.0 ? -5.0 : t + 0.01;
  }
}
BENCHMARK(BM_TCdf);

}  // namespace

BENCHMARK_MAIN();
