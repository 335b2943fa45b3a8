#ifndef SACT_PIPELINE_HPP_
#define SACT_PIPELINE_HPP_

#include <vector>

#include "sact/classifiers.hpp"
#include "sact/corpus_io.hpp"
#include "sact/features.hpp"

namespace sact {

// Vectorizes every record of a speech-act corpus. Each text is enriched
// against the unmodified resource dictionary, so a text's vector does not
// depend on which other texts are in the corpus. Runs across threads; the
// result is independent of scheduling.
Dataset sa_dataset(const LabeledCorpus& corpus, const Resources& resources,
                   const FeatureConfig& config);

// Processes and vectorizes one text against a model's schema.
FeatureVector sa_vector(std::string_view text, const Resources& resources,
                        const FeatureConfig& config,
                        std::shared_ptr<const FeatureSchema> schema);

// Trains on the whole corpus and records fingerprints and feature settings.
ModelArchive train_sa_model(const LabeledCorpus& corpus, const Resources& resources,
                            const FeatureConfig& config, ModelKind kind,
                            const Hyperparams& hyperparams);

// Feature settings stored in an archive; defaults for absent keys.
FeatureConfig feature_config_of(const ModelArchive& archive);

}  // namespace sact

#endif  // SACT_PIPELINE_HPP_
