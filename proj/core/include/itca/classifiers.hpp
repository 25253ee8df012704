#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <nlohmann/json_fwd.hpp>
#include <span>
#include <string>
#include <vector>

#include "itca/partition.hpp"

namespace itca {

enum class ClassifierKind {
  lda,
  soft_lda,
  nearest_centroid,
  random_forest,
  majority,
  oracle,
};

std::string to_string(ClassifierKind kind);
ClassifierKind classifier_kind_from_string(const std::string& name);

// Per-kind hyperparameters. Fields not used by a kind are ignored.
struct ClassifierParams {
  // lda / soft_lda: ridge added to the pooled covariance as
  // shrinkage * (tr(Sigma)/d) * I.
  double shrinkage = 1e-6;
  // random_forest
  int trees = 100;
  int max_features = 0;  // 0 = ceil(sqrt(d))
  int min_leaf = 2;
  bool bootstrap = true;
  // oracle: the same-distributed set S (original labels) and the class
  // probabilities (length K0) used for guessing within S.
  std::vector<int> oracle_same_distributed;
  std::vector<double> oracle_class_probabilities;
};

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::lda;
  ClassifierParams params;
  std::uint64_t seed = 0;

  void validate() const;

  nlohmann::json to_json() const;
  static ClassifierSpec from_json(const nlohmann::json& j);
};

// Side channel for prediction. Soft kinds consume `seed` (one multinomial
// draw per row). The oracle is a test instrument: the evaluation harness
// hands it the rows' original labels and the partition under evaluation.
// Everything else ignores the context.
struct PredictContext {
  std::uint64_t seed = 0;
  std::span<const int> original_labels{};
  const Partition* partition = nullptr;
};

// An immutable fitted predictor. Cheap to copy (shared state).
class TrainedClassifier {
 public:
  class Impl;

  int k() const;
  int d() const;
  // Hard labels in [1, k]; throws DimensionMismatch on wrong feature width.
  std::vector<int> predict(const Eigen::MatrixXd& features,
                           const PredictContext& ctx = {}) const;
  // Decision scores (lda / soft_lda only), one row per sample.
  Eigen::MatrixXd decision_scores(const Eigen::MatrixXd& features) const;

  explicit TrainedClassifier(std::shared_ptr<const Impl> impl);

 private:
  std::shared_ptr<const Impl> impl_;
};

// Trains on combined labels in [1, k]. `fit_seed` overrides spec.seed when
// nonzero so (partition, fold) cells can use schedule-independent streams.
TrainedClassifier fit(const ClassifierSpec& spec, const Eigen::MatrixXd& features,
                      std::span<const int> combined_labels, int k,
                      std::uint64_t fit_seed = 0);

}  // namespace itca
