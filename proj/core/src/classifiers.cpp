#include "itca/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numeric>

#include "itca/errors.hpp"
#include "itca/rng.hpp"

namespace itca {

std::string to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::lda: return "lda";
    case ClassifierKind::soft_lda: return "soft_lda";
    case ClassifierKind::nearest_centroid: return "nearest_centroid";
    case ClassifierKind::random_forest: return "random_forest";
    case ClassifierKind::majority: return "majority";
    case ClassifierKind::oracle: return "oracle";
  }
  throw ConfigError("unknown classifier kind");
}

ClassifierKind classifier_kind_from_string(const std::string& name) {
  if (name == "lda") return ClassifierKind::lda;
  if (name == "soft_lda") return ClassifierKind::soft_lda;
  if (name == "nearest_centroid") return ClassifierKind::nearest_centroid;
  if (name == "random_forest") return ClassifierKind::random_forest;
  if (name == "majority") return ClassifierKind::majority;
  if (name == "oracle") return ClassifierKind::oracle;
  throw ConfigError("unknown classifier kind: " + name);
}

void ClassifierSpec::validate() const {
  if (params.shrinkage < 0.0) throw ConfigError("classifier: shrinkage must be >= 0");
  if (kind == ClassifierKind::random_forest) {
    if (params.trees < 1) throw ConfigError("classifier: tree count must be >= 1");
    if (params.min_leaf < 1) throw ConfigError("classifier: min_leaf must be >= 1");
    if (params.max_features < 0) throw ConfigError("classifier: max_features must be >= 0");
  }
  if (kind == ClassifierKind::oracle) {
    const auto& s = params.oracle_same_distributed;
    if (!s.empty() && s.size() < 2) {
      throw ConfigError("classifier: oracle set S needs >= 2 classes (or empty)");
    }
    if (!params.oracle_class_probabilities.empty()) {
      double sum = 0.0;
      for (double p : params.oracle_class_probabilities) {
        if (p < 0.0) throw ConfigError("classifier: oracle probabilities must be >= 0");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        throw ConfigError("classifier: oracle probabilities must sum to 1");
      }
    } else if (!s.empty()) {
      throw ConfigError("classifier: oracle with nonempty S needs class probabilities");
    }
  }
}

nlohmann::json ClassifierSpec::to_json() const {
  nlohmann::json p;
  switch (kind) {
    case ClassifierKind::lda:
    case ClassifierKind::soft_lda:
      p["shrinkage"] = params.shrinkage;
      break;
    case ClassifierKind::random_forest:
      p["trees"] = params.trees;
      p["max_features"] = params.max_features;
      p["min_leaf"] = params.min_leaf;
      p["bootstrap"] = params.bootstrap;
      break;
    case ClassifierKind::oracle:
      p["same_distributed"] = params.oracle_same_distributed;
      p["class_probabilities"] = params.oracle_class_probabilities;
      break;
    default:
      break;
  }
  return nlohmann::json{{"kind", to_string(kind)}, {"params", p}, {"seed", seed}};
}

ClassifierSpec ClassifierSpec::from_json(const nlohmann::json& j) {
  ClassifierSpec spec;
  spec.kind = classifier_kind_from_string(j.at("kind").get<std::string>());
  spec.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("params")) {
    const auto& p = j.at("params");
    spec.params.shrinkage = p.value("shrinkage", spec.params.shrinkage);
    spec.params.trees = p.value("trees", spec.params.trees);
    spec.params.max_features = p.value("max_features", spec.params.max_features);
    spec.params.min_leaf = p.value("min_leaf", spec.params.min_leaf);
    spec.params.bootstrap = p.value("bootstrap", spec.params.bootstrap);
    if (p.contains("same_distributed")) {
      spec.params.oracle_same_distributed = p.at("same_distributed").get<std::vector<int>>();
    }
    if (p.contains("class_probabilities")) {
      spec.params.oracle_class_probabilities =
          p.at("class_probabilities").get<std::vector<double>>();
    }
  }
  spec.validate();
  return spec;
}

class TrainedClassifier::Impl {
 public:
  virtual ~Impl() = default;
  virtual int k() const = 0;
  virtual int d() const = 0;
  virtual std::vector<int> predict(const Eigen::MatrixXd& x, const PredictContext& ctx) const = 0;
  virtual Eigen::MatrixXd decision_scores(const Eigen::MatrixXd&) const {
    throw ComputeError("decision scores are only defined for lda / soft_lda");
  }

 protected:
  void check_width(const Eigen::MatrixXd& x) const {
    if (x.cols() != d()) throw DimensionMismatch(x.cols(), d());
  }
};

TrainedClassifier::TrainedClassifier(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

int TrainedClassifier::k() const { return impl_->k(); }
int TrainedClassifier::d() const { return impl_->d(); }

std::vector<int> TrainedClassifier::predict(const Eigen::MatrixXd& features,
                                            const PredictContext& ctx) const {
  return impl_->predict(features, ctx);
}

Eigen::MatrixXd TrainedClassifier::decision_scores(const Eigen::MatrixXd& features) const {
  return impl_->decision_scores(features);
}

namespace {

int argmax_lowest_index(const Eigen::VectorXd& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i) {
    if (v(i) > v(best)) best = i;
  }
  return best;
}

std::vector<int> class_counts(std::span<const int> labels, int k) {
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int y : labels) {
    if (y < 1 || y > k) throw LabelOutOfRange(y, k);
    ++counts[static_cast<std::size_t>(y - 1)];
  }
  return counts;
}

// ---------------------------------------------------------------------------
// LDA / soft LDA

class LdaImpl : public TrainedClassifier::Impl {
 public:
  LdaImpl(const Eigen::MatrixXd& x, std::span<const int> labels, int k, double shrinkage,
          bool soft)
      : k_(k), d_(static_cast<int>(x.cols())), soft_(soft) {
    const int n = static_cast<int>(x.rows());
    const auto counts = class_counts(labels, k);
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] == 0) throw DegenerateClass(c + 1);
    }

    means_.resize(k, d_);
    means_.setZero();
    for (int i = 0; i < n; ++i) {
      means_.row(labels[static_cast<std::size_t>(i)] - 1) += x.row(i);
    }
    log_priors_.resize(k);
    for (int c = 0; c < k; ++c) {
      means_.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
      log_priors_(c) = std::log(static_cast<double>(counts[static_cast<std::size_t>(c)]) /
                                static_cast<double>(n));
    }

    // Pooled within-class covariance with a trace-scaled ridge; the ridge
    // keeps the solve well-posed even for rank-deficient folds.
    Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(d_, d_);
    for (int i = 0; i < n; ++i) {
      const Eigen::RowVectorXd centered =
          x.row(i) - means_.row(labels[static_cast<std::size_t>(i)] - 1);
      pooled.noalias() += centered.transpose() * centered;
    }
    pooled /= static_cast<double>(std::max(n - k, 1));
    double scale = pooled.trace() / static_cast<double>(d_);
    if (!(scale > 0.0)) scale = 1.0;
    pooled += (shrinkage * scale > 0.0 ? shrinkage * scale : 1e-12) *
              Eigen::MatrixXd::Identity(d_, d_);

    const Eigen::LLT<Eigen::MatrixXd> llt(pooled);
    if (llt.info() != Eigen::Success) throw NonPositiveDefinite();
    // delta_c(x) = x' Sigma^-1 mu_c - 0.5 mu_c' Sigma^-1 mu_c + log p_c
    weights_ = llt.solve(means_.transpose());  // d x k, column c = Sigma^-1 mu_c
    offsets_.resize(k);
    for (int c = 0; c < k; ++c) {
      offsets_(c) = -0.5 * means_.row(c).dot(weights_.col(c)) + log_priors_(c);
    }
  }

  int k() const override { return k_; }
  int d() const override { return d_; }

  Eigen::MatrixXd decision_scores(const Eigen::MatrixXd& x) const override {
    check_width(x);
    Eigen::MatrixXd scores = x * weights_;
    scores.rowwise() += offsets_.transpose();
    return scores;
  }

  std::vector<int> predict(const Eigen::MatrixXd& x, const PredictContext& ctx) const override {
    const Eigen::MatrixXd scores = decision_scores(x);
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    if (!soft_) {
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        out[static_cast<std::size_t>(i)] = argmax_lowest_index(scores.row(i).transpose()) + 1;
      }
      return out;
    }
    // Soft prediction: one multinomial draw from softmax(scores) per row.
    Rng rng(mix_seed(ctx.seed, 0x736f6674ULL));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const Eigen::VectorXd row = scores.row(i).transpose();
      const double m = row.maxCoeff();
      Eigen::VectorXd probs = (row.array() - m).exp();
      probs /= probs.sum();
      double u = rng.next_double();
      int label = k_;
      for (int c = 0; c < k_; ++c) {
        u -= probs(c);
        if (u < 0.0) {
          label = c + 1;
          break;
        }
      }
      out[static_cast<std::size_t>(i)] = label;
    }
    return out;
  }

 private:
  int k_;
  int d_;
  bool soft_;
  Eigen::MatrixXd means_;     // k x d
  Eigen::VectorXd log_priors_;
  Eigen::MatrixXd weights_;   // d x k
  Eigen::VectorXd offsets_;   // k
};

// ---------------------------------------------------------------------------
// Nearest centroid

class NearestCentroidImpl : public TrainedClassifier::Impl {
 public:
  NearestCentroidImpl(const Eigen::MatrixXd& x, std::span<const int> labels, int k)
      : k_(k), d_(static_cast<int>(x.cols())) {
    const auto counts = class_counts(labels, k);
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] == 0) throw DegenerateClass(c + 1);
    }
    centroids_.resize(k, d_);
    centroids_.setZero();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      centroids_.row(labels[static_cast<std::size_t>(i)] - 1) += x.row(i);
    }
    for (int c = 0; c < k; ++c) {
      centroids_.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
    }
  }

  int k() const override { return k_; }
  int d() const override { return d_; }

  std::vector<int> predict(const Eigen::MatrixXd& x, const PredictContext&) const override {
    check_width(x);
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      int best = 0;
      double best_dist = (x.row(i) - centroids_.row(0)).squaredNorm();
      for (int c = 1; c < k_; ++c) {
        const double dist = (x.row(i) - centroids_.row(c)).squaredNorm();
        if (dist < best_dist) {
          best = c;
          best_dist = dist;
        }
      }
      out[static_cast<std::size_t>(i)] = best + 1;
    }
    return out;
  }

 private:
  int k_;
  int d_;
  Eigen::MatrixXd centroids_;
};

// ---------------------------------------------------------------------------
// Majority ("best guess"): always the largest training class.

class MajorityImpl : public TrainedClassifier::Impl {
 public:
  MajorityImpl(const Eigen::MatrixXd& x, std::span<const int> labels, int k)
      : k_(k), d_(static_cast<int>(x.cols())) {
    const auto counts = class_counts(labels, k);
    label_ = 1;
    for (int c = 1; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > counts[static_cast<std::size_t>(label_ - 1)]) {
        label_ = c + 1;
      }
    }
  }

  int k() const override { return k_; }
  int d() const override { return d_; }

  std::vector<int> predict(const Eigen::MatrixXd& x, const PredictContext&) const override {
    check_width(x);
    return std::vector<int>(static_cast<std::size_t>(x.rows()), label_);
  }

 private:
  int k_;
  int d_;
  int label_;
};

// ---------------------------------------------------------------------------
// Random forest: bagged CART trees, Gini impurity, per-split feature
// subsample of ceil(sqrt(d)), majority vote with lowest-index ties.

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int label = 0;
};

class CartTree {
 public:
  void build(const Eigen::MatrixXd& x, std::span<const int> labels, int k,
             const std::vector<int>& sample_indices, int max_features, int min_leaf, Rng& rng) {
    k_ = k;
    min_leaf_ = min_leaf;
    std::vector<int> indices = sample_indices;
    nodes_.clear();
    build_node(x, labels, indices, 0, static_cast<int>(indices.size()), max_features, rng);
  }

  int predict_row(const Eigen::MatrixXd& x, Eigen::Index row) const {
    int node = 0;
    while (nodes_[static_cast<std::size_t>(node)].feature >= 0) {
      const auto& nd = nodes_[static_cast<std::size_t>(node)];
      node = (x(row, nd.feature) <= nd.threshold) ? nd.left : nd.right;
    }
    return nodes_[static_cast<std::size_t>(node)].label;
  }

 private:
  // Builds a node over indices[begin, end); returns its index.
  int build_node(const Eigen::MatrixXd& x, std::span<const int> labels,
                 std::vector<int>& indices, int begin, int end, int max_features, Rng& rng) {
    const int node_id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    const int n_node = end - begin;

    std::vector<int> counts(static_cast<std::size_t>(k_), 0);
    for (int i = begin; i < end; ++i) {
      ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(indices[static_cast<std::size_t>(i)])] - 1)];
    }
    int majority = 1;
    bool pure = true;
    for (int c = 0; c < k_; ++c) {
      if (counts[static_cast<std::size_t>(c)] > counts[static_cast<std::size_t>(majority - 1)]) {
        majority = c + 1;
      }
      if (counts[static_cast<std::size_t>(c)] != 0 && counts[static_cast<std::size_t>(c)] != n_node) {
        pure = false;
      }
    }
    if (pure || n_node < 2 * min_leaf_) {
      nodes_[static_cast<std::size_t>(node_id)].label = majority;
      return node_id;
    }

    // Feature subsample without replacement.
    const int d = static_cast<int>(x.cols());
    std::vector<int> features(static_cast<std::size_t>(d));
    std::iota(features.begin(), features.end(), 0);
    const int m = std::min(max_features, d);
    for (int i = 0; i < m; ++i) {
      const auto j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(d - i)));
      std::swap(features[static_cast<std::size_t>(i)], features[static_cast<std::size_t>(j)]);
    }

    const double parent_gini = gini(counts, n_node);
    double best_gain = 0.0;
    int best_feature = -1;
    double best_threshold = 0.0;

    std::vector<std::pair<double, int>> order(static_cast<std::size_t>(n_node));
    std::vector<int> left_counts(static_cast<std::size_t>(k_));
    for (int fi = 0; fi < m; ++fi) {
      const int f = features[static_cast<std::size_t>(fi)];
      for (int i = 0; i < n_node; ++i) {
        const int row = indices[static_cast<std::size_t>(begin + i)];
        order[static_cast<std::size_t>(i)] = {x(row, f), labels[static_cast<std::size_t>(row)]};
      }
      std::sort(order.begin(), order.end());
      std::fill(left_counts.begin(), left_counts.end(), 0);
      for (int i = 0; i + 1 < n_node; ++i) {
        ++left_counts[static_cast<std::size_t>(order[static_cast<std::size_t>(i)].second - 1)];
        const int nl = i + 1;
        const int nr = n_node - nl;
        if (nl < min_leaf_ || nr < min_leaf_) continue;
        if (order[static_cast<std::size_t>(i)].first ==
            order[static_cast<std::size_t>(i + 1)].first) {
          continue;  // cannot split between equal values
        }
        double left_gini_sum = 0.0;
        for (int c = 0; c < k_; ++c) {
          const double lc = left_counts[static_cast<std::size_t>(c)];
          left_gini_sum += lc * lc;
        }
        double right_gini_sum = 0.0;
        for (int c = 0; c < k_; ++c) {
          const double rc = counts[static_cast<std::size_t>(c)] -
                            left_counts[static_cast<std::size_t>(c)];
          right_gini_sum += rc * rc;
        }
        const double gini_l = 1.0 - left_gini_sum / (static_cast<double>(nl) * nl);
        const double gini_r = 1.0 - right_gini_sum / (static_cast<double>(nr) * nr);
        const double weighted = (nl * gini_l + nr * gini_r) / static_cast<double>(n_node);
        const double gain = parent_gini - weighted;
        if (gain > best_gain + 1e-15) {
          best_gain = gain;
          best_feature = f;
          best_threshold = 0.5 * (order[static_cast<std::size_t>(i)].first +
                                  order[static_cast<std::size_t>(i + 1)].first);
        }
      }
    }

    if (best_feature < 0) {
      nodes_[static_cast<std::size_t>(node_id)].label = majority;
      return node_id;
    }

    const auto mid = std::partition(
        indices.begin() + begin, indices.begin() + end,
        [&](int row) { return x(row, best_feature) <= best_threshold; });
    const int split = static_cast<int>(mid - indices.begin());
    if (split == begin || split == end) {  // numeric edge; give up on this node
      nodes_[static_cast<std::size_t>(node_id)].label = majority;
      return node_id;
    }

    nodes_[static_cast<std::size_t>(node_id)].feature = best_feature;
    nodes_[static_cast<std::size_t>(node_id)].threshold = best_threshold;
    const int left = build_node(x, labels, indices, begin, split, max_features, rng);
    nodes_[static_cast<std::size_t>(node_id)].left = left;
    const int right = build_node(x, labels, indices, split, end, max_features, rng);
    nodes_[static_cast<std::size_t>(node_id)].right = right;
    return node_id;
  }

  static double gini(const std::vector<int>& counts, int n) {
    double sum = 0.0;
    for (int c : counts) sum += static_cast<double>(c) * c;
    return 1.0 - sum / (static_cast<double>(n) * n);
  }

  std::vector<TreeNode> nodes_;
  int k_ = 0;
  int min_leaf_ = 2;
};

class RandomForestImpl : public TrainedClassifier::Impl {
 public:
  RandomForestImpl(const Eigen::MatrixXd& x, std::span<const int> labels, int k,
                   const ClassifierParams& params, std::uint64_t seed)
      : k_(k), d_(static_cast<int>(x.cols())) {
    const auto counts = class_counts(labels, k);
    (void)counts;
    const int n = static_cast<int>(x.rows());
    const int max_features =
        params.max_features > 0
            ? params.max_features
            : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d_))));
    trees_.resize(static_cast<std::size_t>(params.trees));
    for (int t = 0; t < params.trees; ++t) {
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t) + 0x7472656573ULL));
      std::vector<int> sample;
      sample.reserve(static_cast<std::size_t>(n));
      if (params.bootstrap) {
        for (int i = 0; i < n; ++i) {
          sample.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n))));
        }
      } else {
        sample.resize(static_cast<std::size_t>(n));
        std::iota(sample.begin(), sample.end(), 0);
      }
      trees_[static_cast<std::size_t>(t)].build(x, labels, k, sample, max_features,
                                                params.min_leaf, rng);
    }
  }

  int k() const override { return k_; }
  int d() const override { return d_; }

  std::vector<int> predict(const Eigen::MatrixXd& x, const PredictContext&) const override {
    check_width(x);
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    std::vector<int> votes(static_cast<std::size_t>(k_));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      std::fill(votes.begin(), votes.end(), 0);
      for (const auto& tree : trees_) {
        ++votes[static_cast<std::size_t>(tree.predict_row(x, i) - 1)];
      }
      int best = 1;
      for (int c = 1; c < k_; ++c) {
        if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best - 1)]) {
          best = c + 1;
        }
      }
      out[static_cast<std::size_t>(i)] = best;
    }
    return out;
  }

 private:
  int k_;
  int d_;
  std::vector<CartTree> trees_;
};

// ---------------------------------------------------------------------------
// Oracle: perfect outside S, proportional guess over S's combined labels.

class OracleImpl : public TrainedClassifier::Impl {
 public:
  OracleImpl(int k, int d, std::vector<int> same_distributed, std::vector<double> probs)
      : k_(k), d_(d), s_(std::move(same_distributed)), probs_(std::move(probs)) {
    std::sort(s_.begin(), s_.end());
    for (int k0 : s_) {
      if (k0 < 1 || static_cast<std::size_t>(k0) > probs_.size()) {
        throw ConfigError("oracle: class probabilities do not cover S member " +
                          std::to_string(k0));
      }
    }
  }

  int k() const override { return k_; }
  int d() const override { return d_; }

  std::vector<int> predict(const Eigen::MatrixXd& x, const PredictContext& ctx) const override {
    check_width(x);
    if (ctx.partition == nullptr ||
        ctx.original_labels.size() != static_cast<std::size_t>(x.rows())) {
      throw ComputeError(
          "oracle classifier requires original labels and the partition at predict time");
    }
    const Partition& p = *ctx.partition;

    // Weights over combined labels for the guess within S.
    std::vector<double> weights(static_cast<std::size_t>(k_), 0.0);
    double total = 0.0;
    for (int k0 : s_) {
      const double w = probs_[static_cast<std::size_t>(k0 - 1)];
      weights[static_cast<std::size_t>(p.apply(k0) - 1)] += w;
      total += w;
    }

    Rng rng(mix_seed(ctx.seed, 0x6f7261636cULL));
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const int y = ctx.original_labels[static_cast<std::size_t>(i)];
      if (!std::binary_search(s_.begin(), s_.end(), y)) {
        out[static_cast<std::size_t>(i)] = p.apply(y);
        continue;
      }
      double u = rng.next_double() * total;
      int label = p.apply(s_.back());
      for (int c = 0; c < k_; ++c) {
        u -= weights[static_cast<std::size_t>(c)];
        if (u < 0.0) {
          label = c + 1;
          break;
        }
      }
      out[static_cast<std::size_t>(i)] = label;
    }
    return out;
  }

 private:
  int k_;
  int d_;
  std::vector<int> s_;
  std::vector<double> probs_;
};

}  // namespace

TrainedClassifier fit(const ClassifierSpec& spec, const Eigen::MatrixXd& features,
                      std::span<const int> combined_labels, int k, std::uint64_t fit_seed) {
  spec.validate();
  if (features.rows() < 1) throw ConfigError("fit: empty training set");
  if (combined_labels.size() != static_cast<std::size_t>(features.rows())) {
    throw ConfigError("fit: label count does not match row count");
  }
  if (k < 1) throw ConfigError("fit: k must be positive");
  const std::uint64_t seed = fit_seed != 0 ? fit_seed : spec.seed;

  switch (spec.kind) {
    case ClassifierKind::lda:
      return TrainedClassifier(std::make_shared<LdaImpl>(features, combined_labels, k,
                                                         spec.params.shrinkage, false));
    case ClassifierKind::soft_lda:
      return TrainedClassifier(std::make_shared<LdaImpl>(features, combined_labels, k,
                                                         spec.params.shrinkage, true));
    case ClassifierKind::nearest_centroid:
      return TrainedClassifier(
          std::make_shared<NearestCentroidImpl>(features, combined_labels, k));
    case ClassifierKind::majority:
      return TrainedClassifier(std::make_shared<MajorityImpl>(features, combined_labels, k));
    case ClassifierKind::random_forest:
      return TrainedClassifier(std::make_shared<RandomForestImpl>(features, combined_labels, k,
                                                                  spec.params, seed));
    case ClassifierKind::oracle: {
      std::vector<double> probs = spec.params.oracle_class_probabilities;
      return TrainedClassifier(std::make_shared<OracleImpl>(
          k, static_cast<int>(features.cols()), spec.params.oracle_same_distributed,
          std::move(probs)));
    }
  }
  throw ConfigError("unknown classifier kind");
}

}  // namespace itca
