#include "sact/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "sact/error.hpp"

namespace sact {

Dataset sa_dataset(const LabeledCorpus& corpus, const Resources& resources,
                   const FeatureConfig& config) {
  if (!resources.preprocessor) throw ResourceError("no preprocessor loaded");
  Dataset data;
  data.schema = sa_feature_schema(resources);
  data.labels = corpus.labels;
  data.rows.resize(corpus.records.size());
  data.targets.resize(corpus.records.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < corpus.records.size(); i = next++) {
      try {
        const auto& r = corpus.records[i];
        const ProcessedText text = resources.preprocessor->process(r.text);
        data.rows[i] = vectorize(text, resources, config, data.schema).vector.values;
        data.targets[i] = corpus.label_index(r.label);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = corpus.records.size();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1,
                                                      std::max<std::size_t>(1, corpus.records.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return data;
}

FeatureVector sa_vector(std::string_view text, const Resources& resources,
                        const FeatureConfig& config,
                        std::shared_ptr<const FeatureSchema> schema) {
  if (!resources.preprocessor) throw ResourceError("no preprocessor loaded");
  return vectorize(resources.preprocessor->process(text), resources, config, std::move(schema))
      .vector;
}

ModelArchive train_sa_model(const LabeledCorpus& corpus, const Resources& resources,
                            const FeatureConfig& config, ModelKind kind,
                            const Hyperparams& hyperparams) {
  ModelArchive archive;
  archive.model = train(kind, sa_dataset(corpus, resources, config), hyperparams);
  archive.resource_fingerprints = resources.fingerprints;
  archive.settings["features.enrich"] = config.enrich ? "true" : "false";
  if (resources.preprocessor) {
    archive.settings["preprocess.fingerprint"] = resources.preprocessor->fingerprint();
  }
  return archive;
}

FeatureConfig feature_config_of(const ModelArchive& archive) {
  FeatureConfig config;
  if (auto it = archive.settings.find("features.enrich"); it != archive.settings.end()) {
    config.enrich = it->second == "true";
  }
  return config;
}

}  // namespace sact
