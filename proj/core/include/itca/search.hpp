#pragma once

#include <cstdint>
#include <functional>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <utility>
#include <vector>

#include "itca/criteria.hpp"

namespace itca {

enum class Strategy { exhaustive, greedy, bfs };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

struct SearchConfig {
  Strategy strategy = Strategy::exhaustive;
  Criterion criterion = Criterion::itca;
  ClassifierSpec classifier;
  bool ordinal = true;
  std::vector<std::pair<int, int>> forbidden_merges;
  bool prune = false;
  int folds = 5;
  std::uint64_t seed = 0;
  // Worker threads for within-round candidate evaluation (1 = serial,
  // 0 = hardware). Results are seed-derived per (partition, fold), so the
  // outcome does not depend on this setting.
  int jobs = 1;

  nlohmann::json to_json() const;
  static SearchConfig from_json(const nlohmann::json& j);
};

struct EvaluatedPartition {
  Partition partition;
  CriterionReport report;
};

struct PrunedPartition {
  Partition partition;
  std::string reason;
};

struct SearchTrace {
  std::vector<EvaluatedPartition> evaluated;
  std::vector<PrunedPartition> pruned;
  Partition best = Partition::identity(1);
  double best_value = 0.0;
  std::size_t evaluation_count = 0;
};

SearchTrace exhaustive_search(const Dataset& ds, const SearchConfig& cfg);
SearchTrace greedy_search(const Dataset& ds, const SearchConfig& cfg);
SearchTrace bfs_search(const Dataset& ds, const SearchConfig& cfg);
SearchTrace run_search(const Dataset& ds, const SearchConfig& cfg);

enum class PruneDecision { keep, prune };

// Necessary condition for the merge of combined classes i and j (1-based)
// to improve p-ITCA: the right-hand side
//   [p_i log(p_i) a_i + p_j log(p_j) a_j] / [(p_i + p_j) log(p_i + p_j)]
// is a lower bound on a conditional accuracy, so a value above one rules
// the merge out.
PruneDecision prune_check(const Partition& p, int i, int j,
                          const ConditionalAccuracyTable& cond_acc);

// Internal entry point shared with the benchmark runner: evaluation goes
// through the supplied callback (e.g. a memo cache). The optional batch
// callback receives each round's candidates up front so the provider can
// evaluate them concurrently before the serial walk re-queries them.
using PartitionEvaluator = std::function<const PartitionEvaluation&(const Partition&)>;
using PartitionPrefetch = std::function<void(const std::vector<Partition>&)>;
SearchTrace search_with_evaluator(int k0, const SearchConfig& cfg,
                                  const PartitionEvaluator& evaluate,
                                  const PartitionPrefetch& prefetch = {});

}  // namespace itca
