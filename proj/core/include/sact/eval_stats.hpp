#ifndef SACT_EVAL_STATS_HPP_
#define SACT_EVAL_STATS_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sact/classifiers.hpp"

namespace sact {

using Folds = std::vector<std::vector<std::size_t>>;

// Shuffles each class with a seeded stream, then deals its members
// round-robin onto the folds, continuing where the previous class stopped.
// Every fold gets per-class counts within one of each other. Fold contents
// are sorted. Throws UsageError for k < 2 or k > targets.size().
Folds stratified_kfold(std::span<const int> targets, int k, std::uint64_t seed);

// Content hash of a fold assignment.
std::string fold_hash(const Folds& folds);

// counts[true][predicted].
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::size_t num_labels)
      : counts_(num_labels, std::vector<long long>(num_labels, 0)) {}

  void add(int truth, int predicted) { ++counts_[truth][predicted]; }
  void merge(const ConfusionMatrix& other);

  std::size_t size() const { return counts_.size(); }
  long long at(std::size_t truth, std::size_t predicted) const {
    return counts_[truth][predicted];
  }
  long long row_sum(std::size_t truth) const;
  long long column_sum(std::size_t predicted) const;
  long long total() const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::vector<std::vector<long long>> counts_;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long long support = 0;
};

struct EvalReport {
  std::vector<std::string> labels;
  std::vector<ClassMetrics> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  double micro_f1 = 0.0;
  ConfusionMatrix confusion;
  Folds folds;
  std::string fold_hash;
  // Settings the report was produced with, for the header.
  std::map<std::string, std::string> config;
};

// Metrics from a pooled confusion matrix; 0/0 ratios are 0.
EvalReport make_report(std::vector<std::string> labels, ConfusionMatrix confusion);

// Trains on k-1 folds and tests on the remaining one, for every fold, and
// pools the predictions into one confusion matrix.
EvalReport cross_validate(ModelKind kind, const Dataset& data, int k,
                          const Hyperparams& hyperparams, std::uint64_t seed);

// Same, with a given fold assignment.
EvalReport cross_validate(ModelKind kind, const Dataset& data, const Folds& folds,
                          const Hyperparams& hyperparams);

// Per-class precision/recall/F-measure as rows with one column per class
// and an Avg column, followed by the confusion matrix and summary lines.
std::string format_report(const EvalReport& report, std::string_view title);

enum class TTestVariant { kPooled, kWelch };

std::string_view to_string(TTestVariant variant);
TTestVariant parse_ttest_variant(std::string_view name);

struct TTestResult {
  double t_statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;
  TTestVariant variant = TTestVariant::kWelch;
  double mean_a = 0.0;
  double mean_b = 0.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  // Set when both samples are constant with different means; p is 0.
  std::string warning;
};

// Two-sided independent two-sample t-test. Throws UsageError for samples
// smaller than 2 and DataError when both samples are constant with equal
// means.
TTestResult t_test(std::span<const double> a, std::span<const double> b, TTestVariant variant);

// Student t cumulative distribution function; df > 0.
double t_cdf(double t, double df);

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double x, double a, double b);

}  // namespace sact

#endif  // SACT_EVAL_STATS_HPP_
