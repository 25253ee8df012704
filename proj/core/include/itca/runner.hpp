#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "itca/search.hpp"

namespace itca {

// One benchmark cell: a criterion scored with a search strategy (pruned or
// not). Exhaustive cells double as the criterion-comparison table.
struct SweepCell {
  Criterion criterion = Criterion::itca;
  Strategy strategy = Strategy::exhaustive;
  bool prune = false;

  std::string label() const;
};

struct SweepConfig {
  int k0 = 8;
  // True combinations to simulate; empty = every ordinal combination with
  // K >= 2 (identity included, the all-combined map excluded).
  std::vector<Partition> truths;
  // When positive, draw this many truths without replacement instead.
  int sample_truths = 0;

  double step_length = 3.0;
  double sigma = 1.5;
  int n = 2000;
  int d = 5;
  int folds = 5;
  ClassifierSpec classifier;
  std::vector<SweepCell> cells;
  std::uint64_t seed = 0;
  int jobs = 0;
};

struct SweepInstanceResult {
  std::string truth;
  int k_star = 0;
  std::string cell;
  std::string chosen;
  int hamming = 0;
  bool success = false;
  std::size_t evaluations = 0;
};

struct SweepCellSummary {
  std::string cell;
  int successes = 0;
  int datasets = 0;
  double avg_hamming = 0.0;
  int max_hamming = 0;
  double avg_evaluations = 0.0;
};

struct SweepResult {
  std::vector<SweepInstanceResult> instances;
  std::vector<SweepCellSummary> summaries;
};

SweepResult run_sweep(const SweepConfig& cfg);

void write_sweep_summary_csv(const SweepResult& result, const std::filesystem::path& path);
void write_sweep_instances_csv(const SweepResult& result, const std::filesystem::path& path);

// Named suites from the simulation protocol.
SweepConfig suite_config(const std::string& name);

}  // namespace itca
