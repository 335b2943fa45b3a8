#include "sact/eval_stats.hpp"

#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <vector>

#include "sact/error.hpp"
#include "sact/random.hpp"

namespace sact {
namespace {

void expect_partition(const Folds& folds, std::span<const int> targets, int k) {
  ASSERT_EQ(folds.size(), static_cast<std::size_t>(k));
  std::vector<int> seen(targets.size(), 0);
  for (const auto& fold : folds) {
    EXPECT_TRUE(std::is_sorted(fold.begin(), fold.end()));
    for (std::size_t i : fold) ++seen.at(i);
  }
  for (int s : seen) EXPECT_EQ(s, 1);
  const int labels = *std::max_element(targets.begin(), targets.end()) + 1;
  for (int l = 0; l < labels; ++l) {
    std::size_t lo = SIZE_MAX, hi = 0;
    for (const auto& fold : folds) {
      std::size_t n = 0;
      for (std::size_t i : fold) n += targets[i] == l;
      lo = std::min(lo, n);
      hi = std::max(hi, n);
    }
    EXPECT_LE(hi - lo, 1u) << "label " << l;
  }
}

TEST(KfoldTest, BalancedExample) {
  const std::vector<int> targets = {0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
  const Folds folds = stratified_kfold(targets, 5, 42);
  for (const auto& fold : folds) {
    ASSERT_EQ(fold.size(), 2u);
    EXPECT_NE(targets[fold[0]], targets[fold[1]]);
  }
}

TEST(KfoldTest, PartitionsAndStratifiesOnFuzzInputs) {
  Rng rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.uniform(60);
    const int labels = 1 + static_cast<int>(rng.uniform(5));
    std::vector<int> targets(n);
    for (auto& t : targets) t = static_cast<int>(rng.uniform(labels));
    targets[0] = labels - 1;
    const int k = 2 + static_cast<int>(rng.uniform(std::min<std::size_t>(n - 1, 10)));
    const Folds folds = stratified_kfold(targets, k, rng.next());
    expect_partition(folds, targets, k);
  }
}

TEST(KfoldTest, LeaveOneOut) {
  const std::vector<int> targets = {0, 0, 1, 2, 1, 0, 2};
  const Folds folds = stratified_kfold(targets, 7, 3);
  std::set<std::size_t> all;
  for (const auto& f : folds) {
    ASSERT_EQ(f.size(), 1u);
    all.insert(f[0]);
  }
  EXPECT_EQ(all.size(), 7u);
}

TEST(KfoldTest, SeedDeterminesAssignment) {
  std::vector<int> targets(40);
  for (std::size_t i = 0; i < targets.size(); ++i) targets[i] = i % 3;
  EXPECT_EQ(stratified_kfold(targets, 4, 5), stratified_kfold(targets, 4, 5));
  EXPECT_EQ(fold_hash(stratified_kfold(targets, 4, 5)), fold_hash(stratified_kfold(targets, 4, 5)));
  EXPECT_NE(fold_hash(stratified_kfold(targets, 4, 5)), fold_hash(stratified_kfold(targets, 4, 6)));
}

TEST(KfoldTest, RejectsBadK) {
  const std::vector<int> targets = {0, 1, 0};
  EXPECT_THROW(stratified_kfold(targets, 1, 0), UsageError);
  EXPECT_THROW(stratified_kfold(targets, 4, 0), UsageError);
}

ConfusionMatrix hand_matrix() {
  // rows = truth: A [4,0,0], B [2,1,1], C [0,1,3].
  ConfusionMatrix m(3);
  const int rows[3][3] = {{4, 0, 0}, {2, 1, 1}, {0, 1, 3}};
  for (int t = 0; t < 3; ++t) {
    for (int p = 0; p < 3; ++p) {
      for (int i = 0; i < rows[t][p]; ++i) m.add(t, p);
    }
  }
  return m;
}

TEST(ReportTest, HandComputedThreeClassMetrics) {
  const EvalReport r = make_report({"A", "B", "C"}, hand_matrix());
  EXPECT_NEAR(r.per_class[0].precision, 4.0 / 6, 1e-15);
  EXPECT_NEAR(r.per_class[0].recall, 1.0, 1e-15);
  EXPECT_NEAR(r.per_class[0].f1, 0.8, 1e-15);
  EXPECT_NEAR(r.per_class[1].precision, 0.5, 1e-15);
  EXPECT_NEAR(r.per_class[1].recall, 0.25, 1e-15);
  EXPECT_NEAR(r.per_class[1].f1, 1.0 / 3, 1e-15);
  EXPECT_NEAR(r.per_class[2].f1, 0.75, 1e-15);
  EXPECT_EQ(r.per_class[1].support, 4);
  EXPECT_NEAR(r.macro_precision, 23.0 / 36, 1e-15);
  EXPECT_NEAR(r.macro_recall, 2.0 / 3, 1e-15);
  EXPECT_NEAR(r.macro_f1, (0.8 + 1.0 / 3 + 0.75) / 3, 1e-15);
  EXPECT_NEAR(r.accuracy, 8.0 / 12, 1e-15);
  EXPECT_EQ(r.micro_f1, r.accuracy);
}

TEST(ReportTest, ZeroOverZeroIsZero) {
  ConfusionMatrix m(3);
  m.add(0, 0);
  m.add(1, 0);
  const EvalReport r = make_report({"A", "B", "C"}, m);
  EXPECT_EQ(r.per_class[1].precision, 0.0);
  EXPECT_EQ(r.per_class[1].f1, 0.0);
  EXPECT_EQ(r.per_class[2].recall, 0.0);
  EXPECT_EQ(r.per_class[2].f1, 0.0);
}

TEST(ReportTest, IdentitiesOnRandomMatrices) {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.uniform(5);
    ConfusionMatrix m(n);
    const std::size_t items = 1 + rng.uniform(100);
    for (std::size_t i = 0; i < items; ++i) m.add(rng.uniform(n), rng.uniform(n));
    std::vector<std::string> labels(n, "x");
    for (std::size_t i = 0; i < n; ++i) labels[i] += std::to_string(i);
    const EvalReport r = make_report(labels, m);
    long long diag = 0;
    for (std::size_t c = 0; c < n; ++c) {
      diag += m.at(c, c);
      EXPECT_EQ(r.per_class[c].support, m.row_sum(c));
      const double recall = m.row_sum(c) ? double(m.at(c, c)) / m.row_sum(c) : 0.0;
      EXPECT_DOUBLE_EQ(r.per_class[c].recall, recall);
    }
    EXPECT_NEAR(r.micro_f1, double(diag) / m.total(), 1e-15);
    EXPECT_NEAR(r.accuracy, double(diag) / m.total(), 1e-15);
  }
}

TEST(ConfusionTest, MergeIsOrderIndependent) {
  Rng rng(3);
  std::vector<ConfusionMatrix> parts(5, ConfusionMatrix(3));
  for (auto& p : parts) {
    for (int i = 0; i < 20; ++i) p.add(rng.uniform(3), rng.uniform(3));
  }
  ConfusionMatrix forward(3), backward(3);
  for (const auto& p : parts) forward.merge(p);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) backward.merge(*it);
  EXPECT_EQ(forward, backward);
  EXPECT_EQ(forward.total(), 100);
}

Dataset one_hot_dataset(int labels, int per_label) {
  Dataset d;
  std::vector<FeatureSpec> specs;
  for (int l = 0; l < labels; ++l) specs.push_back({"cue" + std::to_string(l), FeatureKind::kCount});
  d.schema = std::make_shared<const FeatureSchema>(specs);
  for (int l = 0; l < labels; ++l) d.labels.push_back("L" + std::to_string(l));
  for (int i = 0; i < per_label; ++i) {
    for (int l = 0; l < labels; ++l) {
      std::vector<double> row(labels, 0.0);
      row[l] = 1.0 + i % 3;
      d.rows.push_back(row);
      d.targets.push_back(l);
    }
  }
  return d;
}

TEST(CrossValidateTest, SeparableDataScoresPerfectly) {
  const Dataset d = one_hot_dataset(4, 10);
  Hyperparams h;
  h.rf_trees = 10;
  for (ModelKind kind : {ModelKind::kNb, ModelKind::kKnn, ModelKind::kRf, ModelKind::kSvm}) {
    const EvalReport r = cross_validate(kind, d, 5, h, 42);
    EXPECT_DOUBLE_EQ(r.macro_f1, 1.0) << to_string(kind);
    EXPECT_EQ(r.confusion.total(), 40);
  }
}

TEST(CrossValidateTest, ConstantPredictorRecall) {
  // All-zero features: NB falls back to the prior, which favors L0 in every
  // training split.
  Dataset d;
  d.schema = std::make_shared<const FeatureSchema>(
      std::vector<FeatureSpec>{{"f", FeatureKind::kCount}});
  d.labels = {"L0", "L1", "L2"};
  for (int i = 0; i < 30; ++i) {
    d.rows.push_back({0.0});
    d.targets.push_back(i < 20 ? 0 : (i < 25 ? 1 : 2));
  }
  const EvalReport r = cross_validate(ModelKind::kNb, d, 5, {}, 1);
  EXPECT_EQ(r.per_class[0].recall, 1.0);
  EXPECT_EQ(r.per_class[1].recall, 0.0);
  EXPECT_EQ(r.per_class[2].recall, 0.0);
  EXPECT_NEAR(r.per_class[0].precision, 2.0 / 3, 1e-15);
}

TEST(CrossValidateTest, GivenFoldsMatchSeededFolds) {
  const Dataset d = one_hot_dataset(3, 8);
  const EvalReport a = cross_validate(ModelKind::kKnn, d, 4, {}, 9);
  const EvalReport b = cross_validate(ModelKind::kKnn, d, stratified_kfold(d.targets, 4, 9), {});
  EXPECT_EQ(a.confusion, b.confusion);
  EXPECT_EQ(a.fold_hash, b.fold_hash);
  EXPECT_EQ(a.config.at("algo"), "knn");
}

TEST(CrossValidateTest, FormatHasTableLayout) {
  const EvalReport r = make_report({"A", "B", "C"}, hand_matrix());
  const std::string text = format_report(r, "demo");
  EXPECT_NE(text.find("# demo"), std::string::npos);
  EXPECT_NE(text.find("\tA\tB\tC\tAvg"), std::string::npos);
  EXPECT_NE(text.find("Precision\t0.6667\t0.5000\t0.7500\t0.6389"), std::string::npos);
  EXPECT_NE(text.find("F-Measure"), std::string::npos);
  EXPECT_NE(text.find("accuracy=0.6667"), std::string::npos);
}

// Student t density and CDF by adaptive quadrature.
double t_density(double x, double df) {
  const double c = std::lgamma((df + 1) / 2) - std::lgamma(df / 2) -
                   0.5 * std::log(df * std::numbers::pi);
  return std::exp(c - (df + 1) / 2 * std::log1p(x * x / df));
}

double oracle_upper_tail(double t, double df) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([&](double x) { return t_density(t + x, df); }, 0.0,
                              std::numeric_limits<double>::infinity(), 1e-13);
}

double oracle_cdf(double t, double df) {
  if (t < 0) return oracle_upper_tail(-t, df);
  const double mid = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double x) { return t_density(x, df); }, 0.0, t, 10, 1e-13);
  return 0.5 + mid;
}

TEST(TCdfTest, SpecialValues) {
  EXPECT_DOUBLE_EQ(t_cdf(0.0, 5), 0.5);
  EXPECT_GE(t_cdf(50, 10), 1 - 1e-9);
  EXPECT_NEAR(t_cdf(1.96, 1000), oracle_cdf(1.96, 1000), 1e-4);
  // Cauchy closed form for df = 1.
  EXPECT_NEAR(t_cdf(1.0, 1), 0.75, 1e-14);
}

TEST(TCdfTest, MatchesQuadratureOracle) {
  for (double df : {1.0, 1.5, 2.0, 3.0, 5.0, 7.5, 10.0, 30.0, 100.0, 1000.0}) {
    for (double t = -10.0; t <= 10.0; t += 0.25) {
      const double want = oracle_cdf(t, df);
      EXPECT_NEAR(t_cdf(t, df), want, 1e-10 * want) << "t=" << t << " df=" << df;
    }
  }
}

TEST(TCdfTest, SymmetricAndMonotone) {
  for (double df : {1.0, 2.5, 9.0, 400.0}) {
    double prev = 0.0;
    for (double t = -12.0; t <= 12.0; t += 0.05) {
      const double c = t_cdf(t, df);
      EXPECT_NEAR(c + t_cdf(-t, df), 1.0, 1e-12);
      EXPECT_GE(c, prev);
      prev = c;
    }
  }
}

TEST(IncompleteBetaTest, ClosedForms) {
  for (double x : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
    EXPECT_NEAR(incomplete_beta(x, 1, 1), x, 1e-14);
    EXPECT_NEAR(incomplete_beta(x, 3, 1), x * x * x, 1e-14);
    EXPECT_NEAR(incomplete_beta(x, 1, 4), 1 - std::pow(1 - x, 4), 1e-14);
  }
}

TEST(TTestTest, IdenticalSamples) {
  const std::vector<double> a = {1, 2, 4, 7};
  for (auto v : {TTestVariant::kPooled, TTestVariant::kWelch}) {
    const TTestResult r = t_test(a, a, v);
    EXPECT_EQ(r.t_statistic, 0.0);
    EXPECT_DOUBLE_EQ(r.p_value, 1.0);
  }
}

TEST(TTestTest, PooledEqualsWelchForEqualSizesAndVariances) {
  const std::vector<double> a = {1, 2, 3, 4}, b = {11, 12, 13, 14};
  const TTestResult p = t_test(a, b, TTestVariant::kPooled);
  const TTestResult w = t_test(a, b, TTestVariant::kWelch);
  EXPECT_NEAR(p.t_statistic, w.t_statistic, 1e-12);
  EXPECT_NEAR(p.degrees_of_freedom, 6.0, 1e-12);
  EXPECT_NEAR(w.degrees_of_freedom, 6.0, 1e-12);
}

TEST(TTestTest, SmallExampleAgainstQuadrature) {
  const std::vector<double> a = {1, 2, 3}, b = {4, 5, 6};
  const double t = -3.0 / std::sqrt(2.0 / 3.0);
  for (auto v : {TTestVariant::kPooled, TTestVariant::kWelch}) {
    const TTestResult r = t_test(a, b, v);
    EXPECT_NEAR(r.t_statistic, t, 1e-12);
    EXPECT_NEAR(r.degrees_of_freedom, 4.0, 1e-12);
    EXPECT_NEAR(r.p_value, 2 * oracle_upper_tail(-t, 4.0), 1e-6);
    EXPECT_DOUBLE_EQ(r.mean_a, 2.0);
    EXPECT_DOUBLE_EQ(r.mean_b, 5.0);
  }
}

TEST(TTestTest, WelchFormulaOnRandomSamples) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(2 + rng.uniform(20)), b(2 + rng.uniform(20));
    for (auto& x : a) x = rng.uniform_real() * 10;
    for (auto& x : b) x = rng.uniform_real() * 10 + rng.uniform_real() * 3;
    const auto mean = [](const std::vector<double>& v) {
      return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    };
    const auto var = [&](const std::vector<double>& v) {
      const double m = mean(v);
      double s = 0;
      for (double x : v) s += (x - m) * (x - m);
      return s / (v.size() - 1);
    };
    const double se_a = var(a) / a.size(), se_b = var(b) / b.size();
    const double t = (mean(a) - mean(b)) / std::sqrt(se_a + se_b);
    const double df = (se_a + se_b) * (se_a + se_b) /
                      (se_a * se_a / (a.size() - 1) + se_b * se_b / (b.size() - 1));
    const TTestResult r = t_test(a, b, TTestVariant::kWelch);
    EXPECT_NEAR(r.t_statistic, t, 1e-9 * std::max(1.0, std::abs(t)));
    EXPECT_NEAR(r.degrees_of_freedom, df, 1e-9 * df);
    EXPECT_NEAR(r.p_value, 2 * (1 - oracle_cdf(std::abs(t), df)), 1e-8);
    // Antisymmetry.
    const TTestResult s = t_test(b, a, TTestVariant::kWelch);
    EXPECT_EQ(s.t_statistic, -r.t_statistic);
    EXPECT_EQ(s.p_value, r.p_value);
    EXPECT_GE(r.p_value, 0.0);
    EXPECT_LE(r.p_value, 1.0);
  }
}

TEST(TTestTest, DegenerateSamples) {
  const std::vector<double> one = {1.0}, c2 = {2, 2, 2}, c3 = {3, 3};
  EXPECT_THROW(t_test(one, c2, TTestVariant::kWelch), UsageError);
  EXPECT_THROW(t_test(c2, c2, TTestVariant::kWelch), DataError);
  const TTestResult r = t_test(c2, c3, TTestVariant::kPooled);
  EXPECT_EQ(r.p_value, 0.0);
  EXPECT_TRUE(std::isinf(r.t_statistic));
  EXPECT_LT(r.t_statistic, 0.0);
  EXPECT_FALSE(r.warning.empty());
}

TEST(TTestTest, VariantNames) {
  EXPECT_EQ(parse_ttest_variant("pooled"), TTestVariant::kPooled);
  EXPECT_EQ(parse_ttest_variant(to_string(TTestVariant::kWelch)), TTestVariant::kWelch);
  EXPECT_THROW(parse_ttest_variant("paired"), UsageError);
}

}  // namespace
}  // namespace sact
