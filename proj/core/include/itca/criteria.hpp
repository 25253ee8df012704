#pragma once

#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "itca/classifiers.hpp"
#include "itca/dataset.hpp"
#include "itca/partition.hpp"

namespace itca {

enum class Criterion {
  itca,
  itca_alt,
  acc,
  mi,
  aac_proportion,
  aac_cardinality,
  ckl,
  pe,
};

std::string to_string(Criterion c);
Criterion criterion_from_string(const std::string& name);
std::span<const Criterion> all_criteria();

// Which dataset the class proportions come from: the full dataset (the
// default) or the evaluation fold alone (the alternative convention, under
// which itca and itca_alt coincide).
enum class ProportionSource { full_dataset, eval_fold };

struct CriterionReport {
  std::string name;
  std::vector<double> per_fold;
  double mean = 0.0;
  double stderr_ = 0.0;  // sd(per_fold) / sqrt(R)

  nlohmann::json to_json() const;
  static CriterionReport from_json(const nlohmann::json& j);
};

// Per combined class: evaluation-fold conditional accuracy and the class
// proportion in the full dataset. Accuracies pool correct/total counts
// across evaluation folds.
struct ConditionalAccuracyTable {
  std::vector<double> accuracy;
  std::vector<double> proportion;
};

// --- single-split criteria -------------------------------------------------
// All take materialized train/eval subsets of one dataset. `phat_full`
// supplies the class proportions of the enclosing dataset (train+eval under
// a plain split, the whole dataset under CV); when absent it is computed
// from train and eval. `eval_seed` feeds soft/oracle prediction.

struct SplitOptions {
  ProportionSource proportions = ProportionSource::full_dataset;
  std::optional<std::vector<double>> phat_full;
  std::uint64_t eval_seed = 0;
};

double itca_split(const Dataset& train, const Dataset& eval, const Partition& p,
                  const ClassifierSpec& spec, const SplitOptions& opts = {});
double itca_alt_split(const Dataset& train, const Dataset& eval, const Partition& p,
                      const ClassifierSpec& spec, const SplitOptions& opts = {});
double acc_split(const Dataset& train, const Dataset& eval, const Partition& p,
                 const ClassifierSpec& spec, const SplitOptions& opts = {});
double mi_split(const Dataset& train, const Dataset& eval, const Partition& p,
                const ClassifierSpec& spec, const SplitOptions& opts = {});
enum class AacVariant { proportion, cardinality };
double aac_split(const Dataset& train, const Dataset& eval, const Partition& p,
                 const ClassifierSpec& spec, AacVariant variant, const SplitOptions& opts = {});
double ckl_split(const Dataset& train, const Dataset& eval, const Partition& p,
                 const ClassifierSpec& spec, const SplitOptions& opts = {});
double pe_split(const Dataset& train, const Dataset& eval, const Partition& p,
                const ClassifierSpec& spec, const SplitOptions& opts = {});

// --- value layer ------------------------------------------------------------
// Criterion values from already-computed predictions; shared by the split
// functions and reusable when one fit serves several criteria.

struct EvalFrame {
  const Partition& partition;
  std::span<const int> predicted;       // combined labels, [1, K]
  std::span<const int> eval_labels;     // original labels, [1, K0]
  std::span<const double> phat;         // length K0, per the chosen convention
};

double itca_value(const EvalFrame& frame);
double itca_alt_value(const EvalFrame& frame);
double acc_value(const EvalFrame& frame);
double mi_value(const EvalFrame& frame);
double aac_value(const EvalFrame& frame, AacVariant variant);
double pe_value(const EvalFrame& frame);
// CKL additionally needs the evaluation features and the LDA shrinkage rule.
double ckl_value(const EvalFrame& frame, const Eigen::MatrixXd& eval_features, double shrinkage);

// --- cross-validation -------------------------------------------------------

struct CvOptions {
  ProportionSource proportions = ProportionSource::full_dataset;
  // Base seed for per-(partition, fold) classifier streams; combined with
  // the partition text and fold index so results are schedule-independent.
  std::uint64_t base_seed = 0;
};

struct PartitionEvaluation {
  std::vector<CriterionReport> reports;  // parallel to the requested criteria
  ConditionalAccuracyTable cond_acc;
};

// Fits the classifier once per fold and evaluates every requested criterion
// from the same predictions.
PartitionEvaluation evaluate_partition(const Dataset& ds, const Partition& p,
                                       const ClassifierSpec& spec, const FoldPlan& folds,
                                       std::span<const Criterion> criteria,
                                       const CvOptions& opts = {});

CriterionReport cv(Criterion criterion, const Dataset& ds, const Partition& p,
                   const ClassifierSpec& spec, const FoldPlan& folds,
                   const CvOptions& opts = {});

// --- population-level forms ---------------------------------------------------

// Sum over classes of [-q_k log q_k] * a_k.
double p_itca(std::span<const double> class_probs, std::span<const double> conditional_accuracies);
// Entropy of the joint correct-prediction probabilities: -sum c_k log c_k.
double p_pe(std::span<const double> joint_correct_probs);

}  // namespace itca
