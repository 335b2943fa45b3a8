#include "sact/classifiers.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>

#include "sact/config.hpp"
#include "sact/error.hpp"
#include "sact/random.hpp"

namespace sact {

namespace {

constexpr std::array<std::string_view, 4> kKindNames = {"nb", "knn", "rf", "svm"};

int argmax(std::span<const double> scores) {
  int best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = static_cast<int>(i);
  }
  return best;
}

void check_dataset(const Dataset& data) {
  if (!data.schema) throw DataError("dataset has no feature schema");
  if (data.rows.size() != data.targets.size()) throw DataError("dataset rows/targets size mismatch");
  std::set<int> present;
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    if (data.rows[i].size() != data.schema->size()) {
      throw DataError("dataset row " + std::to_string(i) + " does not match the schema");
    }
    const int t = data.targets[i];
    if (t < 0 || t >= static_cast<int>(data.labels.size())) {
      throw DataError("dataset row " + std::to_string(i) + " has an undeclared label");
    }
    present.insert(t);
  }
  if (present.size() < 2) throw DataError("training needs at least two labels, found " +
                                          std::to_string(present.size()));
}

// ---- naive Bayes ----

NbParams train_nb(const Dataset& data, double alpha) {
  const std::size_t f = data.schema->size();
  const std::size_t l = data.labels.size();
  NbParams p;
  p.alpha = alpha;
  p.used.assign(f, false);
  std::size_t used_count = 0;
  for (std::size_t j = 0; j < f; ++j) {
    p.used[j] = (*data.schema)[j].kind != FeatureKind::kReal;
    used_count += p.used[j];
  }
  std::vector<std::vector<double>> counts(l, std::vector<double>(f, 0.0));
  std::vector<double> docs(l, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int y = data.targets[i];
    docs[y] += 1.0;
    for (std::size_t j = 0; j < f; ++j) {
      if (!p.used[j]) continue;
      const double x = data.rows[i][j];
      if (x < 0.0) {
        throw DataError("naive Bayes needs non-negative features; " + (*data.schema)[j].name +
                        " is " + std::to_string(x) + " in row " + std::to_string(i));
      }
      counts[y][j] += x;
    }
  }
  p.log_prior.resize(l);
  p.log_likelihood.assign(l, std::vector<double>(f, 0.0));
  for (std::size_t c = 0; c < l; ++c) {
    p.log_prior[c] = std::log(docs[c] / static_cast<double>(data.size()));
    double total = 0.0;
    for (std::size_t j = 0; j < f; ++j) total += counts[c][j];
    const double denom = total + alpha * static_cast<double>(used_count);
    for (std::size_t j = 0; j < f; ++j) {
      if (p.used[j]) p.log_likelihood[c][j] = std::log((counts[c][j] + alpha) / denom);
    }
  }
  return p;
}

std::vector<double> predict_nb(const NbParams& p, std::span<const double> row) {
  const std::size_t l = p.log_prior.size();
  std::vector<double> log_post(l);
  for (std::size_t c = 0; c < l; ++c) {
    double s = p.log_prior[c];
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (p.used[j] && row[j] != 0.0) s += row[j] * p.log_likelihood[c][j];
    }
    log_post[c] = s;
  }
  const double top = *std::max_element(log_post.begin(), log_post.end());
  double z = 0.0;
  for (double v : log_post) z += std::exp(v - top);
  for (double& v : log_post) v = std::exp(v - top) / z;
  return log_post;
}

// ---- k nearest neighbors ----

std::vector<double> l2_normalized(std::span<const double> row) {
  double norm = 0.0;
  for (double x : row) norm += x * x;
  norm = std::sqrt(norm);
  std::vector<double> out(row.begin(), row.end());
  if (norm > 0.0) {
    for (double& x : out) x /= norm;
  }
  return out;
}

KnnParams train_knn(const Dataset& data, int k) {
  if (k < 1) throw UsageError("knn.k must be positive");
  KnnParams p;
  p.k = k;
  p.targets = data.targets;
  p.points.reserve(data.size());
  for (const auto& row : data.rows) p.points.push_back(l2_normalized(row));
  return p;
}

int predict_knn(const KnnParams& p, std::size_t num_labels, std::span<const double> row,
                std::vector<double>* scores) {
  const std::vector<double> q = l2_normalized(row);
  std::vector<std::pair<double, std::size_t>> sims(p.points.size());
  for (std::size_t i = 0; i < p.points.size(); ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) dot += q[j] * p.points[i][j];
    sims[i] = {dot, i};
  }
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(p.k), sims.size());
  std::partial_sort(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(k), sims.end(),
                    [](const auto& a, const auto& b) {
                      return a.first != b.first ? a.first > b.first : a.second < b.second;
                    });
  std::vector<double> votes(num_labels, 0.0);
  std::vector<double> distance(num_labels, 0.0);
  std::vector<int> hits(num_labels, 0);
  for (std::size_t i = 0; i < k; ++i) {
    const int y = p.targets[sims[i].second];
    votes[y] += sims[i].first;
    distance[y] += 1.0 - sims[i].first;
    ++hits[y];
  }
  int best = -1;
  for (std::size_t c = 0; c < num_labels; ++c) {
    if (hits[c] == 0) continue;
    if (best < 0 || votes[c] > votes[best] ||
        (votes[c] == votes[best] && distance[c] < distance[best])) {
      best = static_cast<int>(c);
    }
  }
  *scores = std::move(votes);
  return best < 0 ? 0 : best;
}

// ---- random forest ----

double gini(std::span<const double> counts, double n) {
  if (n <= 0.0) return 0.0;
  double s = 1.0;
  for (double c : counts) s -= (c / n) * (c / n);
  return s;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, int max_depth, Rng& rng)
      : data_(data), max_depth_(max_depth), rng_(rng) {
    const std::size_t f = data.schema->size();
    mtry_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(f))));
  }

  DecisionTree build(std::vector<std::size_t> samples) {
    DecisionTree tree;
    grow(tree, std::move(samples), 0);
    return tree;
  }

 private:
  int grow(DecisionTree& tree, std::vector<std::size_t> samples, int depth) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    const std::size_t l = data_.labels.size();
    std::vector<double> counts(l, 0.0);
    for (std::size_t i : samples) counts[data_.targets[i]] += 1.0;
    const bool pure =
        std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0; }) <= 1;
    const bool depth_limited = max_depth_ > 0 && depth >= max_depth_;
    std::optional<Split> split;
    if (!pure && !depth_limited && samples.size() > 1) split = best_split(samples);
    if (!split) {
      TreeNode& leaf = tree.nodes[id];
      leaf.distribution.resize(l);
      for (std::size_t c = 0; c < l; ++c) {
        leaf.distribution[c] = counts[c] / static_cast<double>(samples.size());
      }
      return id;
    }
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t i : samples) {
      (data_.rows[i][split->feature] <= split->threshold ? left : right).push_back(i);
    }
    samples.clear();
    samples.shrink_to_fit();
    const int l_id = grow(tree, std::move(left), depth + 1);
    const int r_id = grow(tree, std::move(right), depth + 1);
    TreeNode& node = tree.nodes[id];
    node.feature = split->feature;
    node.threshold = split->threshold;
    node.left = l_id;
    node.right = r_id;
    return id;
  }

  // Examines features in random order until `mtry_` have been tried and a
  // valid split exists, or every feature has been tried.
  std::optional<Split> best_split(const std::vector<std::size_t>& samples) {
    const std::size_t f = data_.schema->size();
    std::vector<int> order(f);
    std::iota(order.begin(), order.end(), 0);
    rng_.shuffle(std::span<int>(order));
    std::optional<Split> best;
    std::size_t tried = 0;
    for (int feature : order) {
      if (tried >= mtry_ && best) break;
      ++tried;
      if (auto s = best_split_on(samples, feature); s && (!best || s->impurity < best->impurity)) {
        best = s;
      }
    }
    return best;
  }

  std::optional<Split> best_split_on(const std::vector<std::size_t>& samples, int feature) {
    const std::size_t l = data_.labels.size();
    std::vector<std::pair<double, int>> items;
    items.reserve(samples.size());
    for (std::size_t i : samples) items.emplace_back(data_.rows[i][feature], data_.targets[i]);
    std::sort(items.begin(), items.end());
    if (items.front().first == items.back().first) return std::nullopt;
    std::vector<double> right(l, 0.0);
    std::vector<double> left(l, 0.0);
    for (const auto& [x, y] : items) right[y] += 1.0;
    const double n = static_cast<double>(items.size());
    std::optional<Split> best;
    for (std::size_t i = 0; i + 1 < items.size(); ++i) {
      left[items[i].second] += 1.0;
      right[items[i].second] -= 1.0;
      const double a = items[i].first;
      const double b = items[i + 1].first;
      if (a == b) continue;
      const double nl = static_cast<double>(i + 1);
      const double nr = n - nl;
      const double impurity = (nl * gini(left, nl) + nr * gini(right, nr)) / n;
      if (!best || impurity < best->impurity) {
        double threshold = a + (b - a) / 2.0;
        if (!(threshold < b)) threshold = a;
        best = Split{feature, threshold, impurity};
      }
    }
    return best;
  }

  const Dataset& data_;
  int max_depth_;
  Rng& rng_;
  std::size_t mtry_;
};

RfParams train_rf(const Dataset& data, const Hyperparams& hp) {
  if (hp.rf_trees < 1) throw UsageError("rf.trees must be positive");
  RfParams p;
  p.seed = hp.seed;
  p.max_depth = hp.rf_max_depth;
  p.bootstrap = hp.rf_bootstrap;
  p.trees.resize(static_cast<std::size_t>(hp.rf_trees));

  // Each tree draws from its own stream, so any thread schedule yields the
  // sequential result.
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t t = next++; t < p.trees.size(); t = next++) {
      const std::uint64_t tree_seed = mix_seed(hp.seed, t);
      Rng rng(tree_seed);
      std::vector<std::size_t> samples(data.size());
      if (hp.rf_bootstrap) {
        for (auto& s : samples) s = rng.uniform(data.size());
      } else {
        std::iota(samples.begin(), samples.end(), 0);
      }
      TreeBuilder builder(data, hp.rf_max_depth, rng);
      p.trees[t] = builder.build(std::move(samples));
      p.trees[t].seed = tree_seed;
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(p.trees.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return p;
}

// ---- linear SVM ----

SvmParams train_svm(const Dataset& data, const Hyperparams& hp) {
  if (hp.svm_lambda <= 0.0) throw UsageError("svm.lambda must be positive");
  if (hp.svm_epochs < 1) throw UsageError("svm.epochs must be positive");
  const std::size_t f = data.schema->size();
  SvmParams p;
  p.lambda = hp.svm_lambda;
  p.epochs = hp.svm_epochs;
  p.scale.assign(f, 0.0);
  for (const auto& row : data.rows) {
    for (std::size_t j = 0; j < f; ++j) p.scale[j] = std::max(p.scale[j], std::abs(row[j]));
  }
  for (double& s : p.scale) {
    if (s == 0.0) s = 1.0;
  }
  std::vector<std::vector<double>> xs(data.size(), std::vector<double>(f + 1, 1.0));
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < f; ++j) xs[i][j] = data.rows[i][j] / p.scale[j];
  }

  p.weights.assign(data.labels.size(), std::vector<double>(f + 1, 0.0));
  for (std::size_t c = 0; c < data.labels.size(); ++c) {
    // Same stream for every label keeps one-vs-rest problems symmetric.
    Rng rng(hp.seed);
    std::vector<std::size_t> order(data.size());
    std::vector<double>& w = p.weights[c];
    double t = 0.0;
    for (int epoch = 0; epoch < hp.svm_epochs; ++epoch) {
      std::iota(order.begin(), order.end(), 0);
      rng.shuffle(std::span<std::size_t>(order));
      for (std::size_t i : order) {
        t += 1.0;
        const double eta = 1.0 / (hp.svm_lambda * t);
        const double y = data.targets[i] == static_cast<int>(c) ? 1.0 : -1.0;
        double dot = 0.0;
        for (std::size_t j = 0; j <= f; ++j) dot += w[j] * xs[i][j];
        const double shrink = 1.0 - eta * hp.svm_lambda;
        for (double& wj : w) wj *= shrink;
        if (y * dot < 1.0) {
          for (std::size_t j = 0; j <= f; ++j) w[j] += eta * y * xs[i][j];
        }
      }
    }
    for (double wj : w) {
      if (!std::isfinite(wj)) throw DataError("SVM training diverged");
    }
  }
  return p;
}

std::vector<double> predict_svm(const SvmParams& p, std::span<const double> row) {
  std::vector<double> out(p.weights.size());
  for (std::size_t c = 0; c < p.weights.size(); ++c) {
    const auto& w = p.weights[c];
    double dot = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) dot += w[j] * (row[j] / p.scale[j]);
    dot += w[row.size()];
    out[c] = dot;
  }
  return out;
}

}  // namespace

std::string_view to_string(ModelKind kind) { return kKindNames[static_cast<int>(kind)]; }

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<ModelKind>(i);
  }
  return std::nullopt;
}

Hyperparams Hyperparams::from_config(const Config& config) {
  Hyperparams h;
  h.nb_alpha = config.get_double("nb.alpha", h.nb_alpha);
  h.knn_k = static_cast<int>(config.get_int("knn.k", h.knn_k));
  h.rf_trees = static_cast<int>(config.get_int("rf.trees", h.rf_trees));
  h.rf_max_depth = static_cast<int>(config.get_int("rf.max_depth", h.rf_max_depth));
  h.rf_bootstrap = config.get_bool("rf.bootstrap", h.rf_bootstrap);
  h.svm_lambda = config.get_double("svm.lambda", h.svm_lambda);
  h.svm_epochs = static_cast<int>(config.get_int("svm.epochs", h.svm_epochs));
  h.seed = static_cast<std::uint64_t>(config.get_int("rf.seed", static_cast<long long>(h.seed)));
  return h;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.schema = schema;
  out.labels = labels;
  out.rows.reserve(indices.size());
  out.targets.reserve(indices.size());
  for (std::size_t i : indices) {
    out.rows.push_back(rows[i]);
    out.targets.push_back(targets[i]);
  }
  return out;
}

int DecisionTree::vote(std::span<const double> row) const {
  int id = 0;
  while (nodes[id].feature >= 0) {
    id = row[nodes[id].feature] <= nodes[id].threshold ? nodes[id].left : nodes[id].right;
  }
  return argmax(nodes[id].distribution);
}

Model train(ModelKind kind, const Dataset& data, const Hyperparams& hyperparams) {
  check_dataset(data);
  Model m;
  m.kind = kind;
  m.labels = data.labels;
  m.schema = data.schema;
  m.hyperparams = hyperparams;
  switch (kind) {
    case ModelKind::kNb:
      if (hyperparams.nb_alpha <= 0.0) throw UsageError("nb.alpha must be positive");
      m.params = train_nb(data, hyperparams.nb_alpha);
      break;
    case ModelKind::kKnn:
      m.params = train_knn(data, hyperparams.knn_k);
      break;
    case ModelKind::kRf:
      m.params = train_rf(data, hyperparams);
      break;
    case ModelKind::kSvm:
      m.params = train_svm(data, hyperparams);
      break;
  }
  return m;
}

Prediction predict_row(const Model& model, std::span<const double> row) {
  if (row.size() != model.schema->size()) {
    throw DataError("vector has " + std::to_string(row.size()) + " features, model expects " +
                    std::to_string(model.schema->size()));
  }
  Prediction out;
  switch (model.kind) {
    case ModelKind::kNb:
      out.scores = predict_nb(std::get<NbParams>(model.params), row);
      out.index = argmax(out.scores);
      break;
    case ModelKind::kKnn:
      out.index = predict_knn(std::get<KnnParams>(model.params), model.labels.size(), row,
                              &out.scores);
      break;
    case ModelKind::kRf: {
      const auto& rf = std::get<RfParams>(model.params);
      out.scores.assign(model.labels.size(), 0.0);
      for (const auto& tree : rf.trees) out.scores[tree.vote(row)] += 1.0;
      for (double& s : out.scores) s /= static_cast<double>(rf.trees.size());
      out.index = argmax(out.scores);
      break;
    }
    case ModelKind::kSvm:
      out.scores = predict_svm(std::get<SvmParams>(model.params), row);
      out.index = argmax(out.scores);
      break;
  }
  out.label = model.labels[out.index];
  return out;
}

Prediction predict(const Model& model, const FeatureVector& vector) {
  if (!vector.schema) throw DataError("vector has no schema");
  const FeatureVector aligned = align(vector, model.schema);
  return predict_row(model, aligned.values);
}

std::vector<int> tree_votes(const Model& model, std::span<const double> row) {
  if (model.kind != ModelKind::kRf) throw UsageError("tree votes need a random forest");
  std::vector<int> out;
  for (const auto& tree : std::get<RfParams>(model.params).trees) out.push_back(tree.vote(row));
  return out;
}

}  // namespace sact
