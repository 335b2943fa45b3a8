#include "sact/eval_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "sact/error.hpp"
#include "sact/hash.hpp"
#include "sact/random.hpp"

namespace sact {

namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string hyperparam_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Continued fraction for I_x(a, b) (modified Lentz), valid for
// x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double x, double a, double b) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 10000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

// I_x(a, b) given both x and 1 - x, so callers can supply an accurate
// complement.
double incomplete_beta_pair(double x, double one_minus_x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (one_minus_x <= 0.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log(one_minus_x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(x, a, b) / a;
  }
  return 1.0 - front * beta_continued_fraction(one_minus_x, b, a) / b;
}

// Two-sided tail probability P(|T| >= |t|) for df degrees of freedom.
double two_sided_p(double t, double df) {
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  return incomplete_beta_pair(df / (df + t2), t2 / (df + t2), df / 2.0, 0.5);
}

double mean_of(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double variance_of(std::span<const double> xs, double mean) {
  double s = 0.0;
  for (double x : xs) s += (x - mean) * (x - mean);
  return s / static_cast<double>(xs.size() - 1);
}

}  // namespace

Folds stratified_kfold(std::span<const int> targets, int k, std::uint64_t seed) {
  if (k < 2) throw UsageError("cross-validation needs k >= 2, got " + std::to_string(k));
  if (static_cast<std::size_t>(k) > targets.size()) {
    throw UsageError("k = " + std::to_string(k) + " exceeds the dataset size " +
                     std::to_string(targets.size()));
  }
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < targets.size(); ++i) by_class[targets[i]].push_back(i);
  Folds folds(static_cast<std::size_t>(k));
  std::size_t next = 0;
  for (auto& [label, members] : by_class) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(label)));
    rng.shuffle(std::span<std::size_t>(members));
    for (std::size_t i : members) {
      folds[next].push_back(i);
      next = (next + 1) % folds.size();
    }
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

std::string fold_hash(const Folds& folds) {
  Fnv1a h;
  h.update_u64(folds.size());
  for (const auto& fold : folds) {
    h.update_u64(fold.size());
    for (std::size_t i : fold) h.update_u64(i);
  }
  return h.hex();
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (counts_.empty()) {
    counts_ = other.counts_;
    return;
  }
  if (other.size() != size()) throw DataError("cannot merge confusion matrices of different sizes");
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) counts_[i][j] += other.counts_[i][j];
  }
}

long long ConfusionMatrix::row_sum(std::size_t truth) const {
  return std::accumulate(counts_[truth].begin(), counts_[truth].end(), 0LL);
}

long long ConfusionMatrix::column_sum(std::size_t predicted) const {
  long long s = 0;
  for (const auto& row : counts_) s += row[predicted];
  return s;
}

long long ConfusionMatrix::total() const {
  long long s = 0;
  for (std::size_t i = 0; i < size(); ++i) s += row_sum(i);
  return s;
}

EvalReport make_report(std::vector<std::string> labels, ConfusionMatrix confusion) {
  EvalReport r;
  const std::size_t l = labels.size();
  r.labels = std::move(labels);
  r.per_class.resize(l);
  long long correct = 0;
  long long false_pos = 0;
  long long false_neg = 0;
  for (std::size_t c = 0; c < l; ++c) {
    const double tp = static_cast<double>(confusion.at(c, c));
    const long long row = confusion.row_sum(c);
    const long long col = confusion.column_sum(c);
    ClassMetrics& m = r.per_class[c];
    m.support = row;
    m.precision = ratio(tp, static_cast<double>(col));
    m.recall = ratio(tp, static_cast<double>(row));
    m.f1 = ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
    r.macro_precision += m.precision;
    r.macro_recall += m.recall;
    r.macro_f1 += m.f1;
    correct += confusion.at(c, c);
    false_pos += col - confusion.at(c, c);
    false_neg += row - confusion.at(c, c);
  }
  if (l > 0) {
    r.macro_precision /= static_cast<double>(l);
    r.macro_recall /= static_cast<double>(l);
    r.macro_f1 /= static_cast<double>(l);
  }
  r.accuracy = ratio(static_cast<double>(correct), static_cast<double>(confusion.total()));
  // Micro-averaged F1 from pooled TP/FP/FN.
  const double micro_p =
      ratio(static_cast<double>(correct), static_cast<double>(correct + false_pos));
  const double micro_r =
      ratio(static_cast<double>(correct), static_cast<double>(correct + false_neg));
  // Equal P and R (always the case for single-label data) give F1 = P
  // exactly, without the rounding of the harmonic-mean formula.
  r.micro_f1 = micro_p == micro_r ? micro_p
                                  : ratio(2.0 * micro_p * micro_r, micro_p + micro_r);
  r.confusion = std::move(confusion);
  return r;
}

EvalReport cross_validate(ModelKind kind, const Dataset& data, const Folds& folds,
                          const Hyperparams& hyperparams) {
  std::vector<int> fold_of(data.size(), -1);
  for (std::size_t f = 0; f < folds.size(); ++f) {
    for (std::size_t i : folds[f]) {
      if (i >= data.size() || fold_of[i] != -1) throw UsageError("folds do not partition the dataset");
      fold_of[i] = static_cast<int>(f);
    }
  }
  if (std::find(fold_of.begin(), fold_of.end(), -1) != fold_of.end()) {
    throw UsageError("folds do not cover the dataset");
  }

  ConfusionMatrix pooled(data.labels.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<std::size_t> train_idx;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (fold_of[i] != static_cast<int>(f)) train_idx.push_back(i);
    }
    const Model model = train(kind, data.subset(train_idx), hyperparams);
    ConfusionMatrix part(data.labels.size());
    for (std::size_t i : folds[f]) {
      part.add(data.targets[i], predict_row(model, data.rows[i]).index);
    }
    pooled.merge(part);
  }

  EvalReport report = make_report(data.labels, std::move(pooled));
  report.folds = folds;
  report.fold_hash = fold_hash(folds);
  report.config["algo"] = std::string(to_string(kind));
  report.config["k"] = std::to_string(folds.size());
  switch (kind) {
    case ModelKind::kNb:
      report.config["nb.alpha"] = hyperparam_text(hyperparams.nb_alpha);
      break;
    case ModelKind::kKnn:
      report.config["knn.k"] = std::to_string(hyperparams.knn_k);
      break;
    case ModelKind::kRf:
      report.config["rf.trees"] = std::to_string(hyperparams.rf_trees);
      report.config["rf.seed"] = std::to_string(hyperparams.seed);
      report.config["rf.max_depth"] = std::to_string(hyperparams.rf_max_depth);
      report.config["rf.bootstrap"] = hyperparams.rf_bootstrap ? "true" : "false";
      break;
    case ModelKind::kSvm:
      report.config["svm.lambda"] = hyperparam_text(hyperparams.svm_lambda);
      report.config["svm.epochs"] = std::to_string(hyperparams.svm_epochs);
      report.config["svm.seed"] = std::to_string(hyperparams.seed);
      break;
  }
  return report;
}

EvalReport cross_validate(ModelKind kind, const Dataset& data, int k,
                          const Hyperparams& hyperparams, std::uint64_t seed) {
  EvalReport report =
      cross_validate(kind, data, stratified_kfold(data.targets, k, seed), hyperparams);
  report.config["eval.seed"] = std::to_string(seed);
  return report;
}

std::string format_report(const EvalReport& report, std::string_view title) {
  std::string out = "# " + std::string(title) + "\n";
  for (const auto& [key, value] : report.config) out += "# " + key + " = " + value + "\n";
  for (const auto& label : report.labels) out += "\t" + label;
  out += "\tAvg\n";
  const auto row = [&](std::string_view name, auto field, double avg) {
    out += name;
    for (const auto& m : report.per_class) out += "\t" + fixed(m.*field);
    out += "\t" + fixed(avg) + "\n";
  };
  row("Precision", &ClassMetrics::precision, report.macro_precision);
  row("Recall", &ClassMetrics::recall, report.macro_recall);
  row("F-Measure", &ClassMetrics::f1, report.macro_f1);
  out += "\nConfusion matrix (rows: true, columns: predicted)\n";
  for (const auto& label : report.labels) out += "\t" + label;
  out += "\n";
  for (std::size_t i = 0; i < report.labels.size(); ++i) {
    out += report.labels[i];
    for (std::size_t j = 0; j < report.labels.size(); ++j) {
      out += "\t" + std::to_string(report.confusion.at(i, j));
    }
    out += "\n";
  }
  out += "\naccuracy=" + fixed(report.accuracy) + "\n";
  out += "micro_f1=" + fixed(report.micro_f1) + "\n";
  out += "macro_f1=" + fixed(report.macro_f1) + "\n";
  if (!report.fold_hash.empty()) out += "fold_hash=" + report.fold_hash + "\n";
  return out;
}

std::string_view to_string(TTestVariant variant) {
  return variant == TTestVariant::kPooled ? "pooled" : "welch";
}

TTestVariant parse_ttest_variant(std::string_view name) {
  if (name == "pooled") return TTestVariant::kPooled;
  if (name == "welch") return TTestVariant::kWelch;
  throw UsageError("unknown t-test variant " + std::string(name) + " (expected pooled or welch)");
}

TTestResult t_test(std::span<const double> a, std::span<const double> b, TTestVariant variant) {
  if (a.size() < 2 || b.size() < 2) {
    throw UsageError("t-test needs at least 2 values per sample, got " + std::to_string(a.size()) +
                     " and " + std::to_string(b.size()));
  }
  TTestResult r;
  r.variant = variant;
  r.n_a = a.size();
  r.n_b = b.size();
  r.mean_a = mean_of(a);
  r.mean_b = mean_of(b);
  const double va = variance_of(a, r.mean_a);
  const double vb = variance_of(b, r.mean_b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());

  double se = 0.0;
  if (variant == TTestVariant::kPooled) {
    r.degrees_of_freedom = na + nb - 2.0;
    const double pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / r.degrees_of_freedom;
    se = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  } else {
    const double sa = va / na;
    const double sb = vb / nb;
    se = std::sqrt(sa + sb);
    const double den = sa * sa / (na - 1.0) + sb * sb / (nb - 1.0);
    r.degrees_of_freedom = den > 0.0 ? (sa + sb) * (sa + sb) / den : na + nb - 2.0;
  }

  const double diff = r.mean_a - r.mean_b;
  if (se == 0.0) {
    if (diff == 0.0) {
      throw DataError("t statistic undefined: both samples are constant with equal means");
    }
    r.t_statistic = diff > 0 ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
    r.warning = "both samples are constant with different means; p-value set to 0";
    return r;
  }
  r.t_statistic = diff / se;
  r.p_value = std::clamp(two_sided_p(r.t_statistic, r.degrees_of_freedom), 0.0, 1.0);
  return r;
}

double t_cdf(double t, double df) {
  if (!(df > 0.0)) throw UsageError("t distribution needs df > 0");
  if (std::isnan(t)) return t;
  const double tail = 0.5 * two_sided_p(t, df);
  return t > 0.0 ? 1.0 - tail : tail;
}

double incomplete_beta(double x, double a, double b) {
  if (x < 0.0 || x > 1.0 || !(a > 0.0) || !(b > 0.0)) {
    throw UsageError("incomplete beta needs 0 <= x <= 1 and positive shape parameters");
  }
  return incomplete_beta_pair(x, 1.0 - x, a, b);
}

}  // namespace sact
