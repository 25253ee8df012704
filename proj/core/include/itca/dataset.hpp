#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "itca/partition.hpp"

namespace itca {

// A labeled feature matrix. Rows are samples; labels are 1..k0 and every
// class appears at least once. Immutable by convention after construction.
struct Dataset {
  Eigen::MatrixXd features;  // n x d
  std::vector<int> labels;   // length n, values in [1, k0]
  int k0 = 0;

  int n() const { return static_cast<int>(features.rows()); }
  int d() const { return static_cast<int>(features.cols()); }

  // Checks the invariants (finiteness, label range, class coverage); throws.
  void validate() const;
};

struct CsvLoadResult {
  Dataset dataset;
  // Raw label values in first-appearance order; label_names[i] is class i+1.
  std::vector<std::string> label_names;
};

// Loads a comma-separated file with a header row. All columns except the
// label column must be numeric. Labels are re-encoded to [1, K0] by first
// appearance.
CsvLoadResult load_csv(const std::filesystem::path& path, const std::string& label_column);

// Writes the dataset back out; feature columns then the label column.
// Numbers use shortest round-trip formatting, so identical datasets
// produce identical bytes.
void write_csv(const Dataset& ds, const std::filesystem::path& path,
               const std::vector<std::string>& feature_names = {},
               const std::vector<std::string>& label_names = {},
               const std::string& label_column = "label");

// Empirical class proportions; sums to one.
std::vector<double> class_proportions(const Dataset& ds);

// A deterministic stratified fold assignment: fold sizes differ by at most
// one overall and within every class.
struct FoldPlan {
  int r = 0;
  std::vector<int> assignment;  // length n, values in [0, r)
  std::uint64_t seed = 0;

  std::vector<int> eval_indices(int fold) const;
  std::vector<int> train_indices(int fold) const;
};

FoldPlan stratified_folds(const Dataset& ds, int r, std::uint64_t seed);

// The synthetic generative model: class centers laid down by a random walk
// with fixed step length, regenerated until the minimal pairwise center
// distance exceeds sigma; then Y* uniform over true classes, Y uniform
// within the true class, X ~ N(mu_{Y*}, sigma^2 I).
struct SimulationConfig {
  int k0 = 0;
  Partition true_partition = Partition::identity(1);  // k0 classes onto K* groups
  double step_length = 0.0;                           // l
  double sigma = 0.0;
  int n = 0;
  int d = 0;
  std::uint64_t seed = 0;
  int max_center_attempts = 1000;

  void validate() const;
};

struct SimulationResult {
  Dataset dataset;
  Eigen::MatrixXd centers;       // K* x d
  std::vector<int> true_labels;  // Y*, length n
};

SimulationResult simulate(const SimulationConfig& cfg);

// Extracts the rows of `ds` named by `indices` as a standalone dataset
// (k0 is inherited even if some classes are absent from the subset).
Dataset subset(const Dataset& ds, const std::vector<int>& indices);

}  // namespace itca
