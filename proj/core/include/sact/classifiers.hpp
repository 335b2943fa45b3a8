#ifndef SACT_CLASSIFIERS_HPP_
#define SACT_CLASSIFIERS_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sact/features.hpp"

namespace sact {

class Config;

enum class ModelKind { kNb, kKnn, kRf, kSvm };

// "nb", "knn", "rf", "svm".
std::string_view to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view name);

struct Hyperparams {
  double nb_alpha = 1.0;
  int knn_k = 5;
  int rf_trees = 100;
  // 0 grows trees to purity.
  int rf_max_depth = 0;
  bool rf_bootstrap = true;
  double svm_lambda = 1e-3;
  int svm_epochs = 50;
  std::uint64_t seed = 42;

  static Hyperparams from_config(const Config& config);
};

// Labeled vectors sharing one schema. `targets` index into `labels`.
struct Dataset {
  std::shared_ptr<const FeatureSchema> schema;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  std::vector<int> targets;

  std::size_t size() const { return rows.size(); }
  Dataset subset(std::span<const std::size_t> indices) const;
};

// Multinomial NB over the count and binary features. Real-valued features
// carry no multinomial interpretation and are ignored.
struct NbParams {
  double alpha = 1.0;
  std::vector<bool> used;
  std::vector<double> log_prior;
  // [label][feature]; zero for unused features.
  std::vector<std::vector<double>> log_likelihood;
};

struct KnnParams {
  int k = 5;
  // L2-normalized training rows.
  std::vector<std::vector<double>> points;
  std::vector<int> targets;
};

struct TreeNode {
  // -1 for leaves.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  // Per-label training fractions at a leaf.
  std::vector<double> distribution;
};

struct DecisionTree {
  std::uint64_t seed = 0;
  std::vector<TreeNode> nodes;

  // Majority label of the reached leaf, ties to the lower label index.
  int vote(std::span<const double> row) const;
};

struct RfParams {
  std::uint64_t seed = 0;
  int max_depth = 0;
  bool bootstrap = true;
  std::vector<DecisionTree> trees;
};

// One-vs-rest linear SVMs over max-abs scaled features plus a constant
// bias feature, trained with Pegasos.
struct SvmParams {
  double lambda = 1e-3;
  int epochs = 50;
  std::vector<double> scale;
  // [label][feature + 1]; the last weight multiplies the constant 1.
  std::vector<std::vector<double>> weights;
};

struct Model {
  ModelKind kind = ModelKind::kNb;
  std::vector<std::string> labels;
  std::shared_ptr<const FeatureSchema> schema;
  Hyperparams hyperparams;
  std::variant<NbParams, KnnParams, RfParams, SvmParams> params;
};

struct Prediction {
  std::string label;
  int index = 0;
  // Aligned with Model::labels. NB: posteriors. KNN: summed cosine
  // similarity of neighbors per label. RF: vote shares. SVM: decision values.
  std::vector<double> scores;
};

// Throws DataError when fewer than two labels occur, rows disagree with the
// schema, or NB sees a negative count/binary feature.
Model train(ModelKind kind, const Dataset& data, const Hyperparams& hyperparams);

// Throws DataError when the vector's schema does not match the model's.
Prediction predict(const Model& model, const FeatureVector& vector);
Prediction predict_row(const Model& model, std::span<const double> row);

// Per-tree votes of a random forest, in tree order.
std::vector<int> tree_votes(const Model& model, std::span<const double> row);

}  // namespace sact

#endif  // SACT_CLASSIFIERS_HPP_
