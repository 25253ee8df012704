#include "itca/search.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <nlohmann/json.hpp>
#include <unordered_map>
#include <unordered_set>

#include "itca/errors.hpp"
#include "itca/parallel.hpp"

namespace itca {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::exhaustive: return "exhaustive";
    case Strategy::greedy: return "greedy";
    case Strategy::bfs: return "bfs";
  }
  throw ConfigError("unknown strategy");
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "exhaustive") return Strategy::exhaustive;
  if (name == "greedy") return Strategy::greedy;
  if (name == "bfs") return Strategy::bfs;
  throw ConfigError("unknown strategy: " + name);
}

nlohmann::json SearchConfig::to_json() const {
  nlohmann::json forbidden = nlohmann::json::array();
  for (const auto& [a, b] : forbidden_merges) forbidden.push_back({a, b});
  return nlohmann::json{
      {"strategy", to_string(strategy)},   {"criterion", to_string(criterion)},
      {"classifier", classifier.to_json()}, {"ordinal", ordinal},
      {"forbidden_merges", forbidden},     {"prune", prune},
      {"folds", folds},                    {"seed", seed},
      {"jobs", jobs}};
}

SearchConfig SearchConfig::from_json(const nlohmann::json& j) {
  SearchConfig cfg;
  cfg.strategy = strategy_from_string(j.at("strategy").get<std::string>());
  cfg.criterion = criterion_from_string(j.at("criterion").get<std::string>());
  cfg.classifier = ClassifierSpec::from_json(j.at("classifier"));
  cfg.ordinal = j.value("ordinal", true);
  if (j.contains("forbidden_merges")) {
    for (const auto& pair : j.at("forbidden_merges")) {
      cfg.forbidden_merges.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
    }
  }
  cfg.prune = j.value("prune", false);
  cfg.folds = j.value("folds", 5);
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.jobs = j.value("jobs", 1);
  return cfg;
}

PruneDecision prune_check(const Partition& p, int i, int j,
                          const ConditionalAccuracyTable& cond_acc) {
  if (i < 1 || i > p.k() || j < 1 || j > p.k() || i == j) {
    throw ConfigError("prune_check: class indices out of range");
  }
  const double pi = cond_acc.proportion[static_cast<std::size_t>(i - 1)];
  const double pj = cond_acc.proportion[static_cast<std::size_t>(j - 1)];
  const double ai = cond_acc.accuracy[static_cast<std::size_t>(i - 1)];
  const double aj = cond_acc.accuracy[static_cast<std::size_t>(j - 1)];
  const double psum = pi + pj;
  // Merging everything into one class puts the criterion at zero.
  if (psum >= 1.0) return PruneDecision::prune;
  const double denom = psum * std::log(psum);
  if (denom == 0.0) return PruneDecision::prune;
  const double numer = (pi > 0.0 ? pi * std::log(pi) * ai : 0.0) +
                       (pj > 0.0 ? pj * std::log(pj) * aj : 0.0);
  return (numer / denom > 1.0) ? PruneDecision::prune : PruneDecision::keep;
}

namespace {

struct BestTracker {
  const Partition* partition = nullptr;
  double value = -std::numeric_limits<double>::infinity();

  void offer(const Partition& p, double v) {
    if (partition == nullptr || v > value ||
        (v == value && prefer_partition(p, *partition))) {
      partition = &p;
      value = v;
    }
  }
};

// Argmax over the evaluated set, restricted to the allowed combinations
// (K >= 2): the all-combined map is evaluated and traced but is the
// degenerate resolution, never an answer. Falls back to the overall max
// when nothing with K >= 2 exists (k0 = 1).
SearchTrace pick_best(SearchTrace trace) {
  BestTracker best;
  for (const auto& e : trace.evaluated) {
    if (e.partition.k() >= 2) best.offer(e.partition, e.report.mean);
  }
  if (best.partition == nullptr) {
    for (const auto& e : trace.evaluated) best.offer(e.partition, e.report.mean);
  }
  trace.best = best.partition != nullptr ? *best.partition : Partition::identity(1);
  trace.best_value = best.value;
  trace.evaluation_count = trace.evaluated.size();
  return trace;
}

class TraceBuilder {
 public:
  explicit TraceBuilder(const SearchConfig& cfg) : criterion_(cfg.criterion) {}

  // Returns the criterion mean for p, evaluating at most once.
  double evaluate(const Partition& p, const PartitionEvaluator& evaluator) {
    const auto [it, inserted] = index_.try_emplace(p, trace_.evaluated.size());
    if (inserted) {
      const PartitionEvaluation& eval = evaluator(p);
      CriterionReport report;
      for (const auto& r : eval.reports) {
        if (r.name == to_string(criterion_)) {
          report = r;
          break;
        }
      }
      trace_.evaluated.push_back(EvaluatedPartition{p, std::move(report)});
    }
    return trace_.evaluated[it->second].report.mean;
  }

  bool seen(const Partition& p) const { return index_.contains(p); }

  void record_pruned(const Partition& p, std::string reason) {
    trace_.pruned.push_back(PrunedPartition{p, std::move(reason)});
  }

  SearchTrace finish() { return pick_best(std::move(trace_)); }

 private:
  Criterion criterion_;
  SearchTrace trace_;
  std::unordered_map<Partition, std::size_t, PartitionHash> index_;
};

std::vector<Partition> allowed_merges(const Partition& p, const SearchConfig& cfg,
                                      const ConditionalAccuracyTable& cond_acc,
                                      TraceBuilder& builder) {
  std::vector<Partition> out;
  if (p.k() < 2) return out;
  const auto consider = [&](int gi, int gj, const Partition& merged) {
    if (cfg.prune && prune_check(p, gi, gj, cond_acc) == PruneDecision::prune) {
      builder.record_pruned(merged, "accuracy bound exceeded for (" + std::to_string(gi) +
                                        "," + std::to_string(gj) + ") of " + p.text());
      return;
    }
    out.push_back(merged);
  };
  // Mirror neighbors() but track which pair produced each merge so the
  // pruning rule sees the right (i, j).
  const auto gs = p.groups();
  const auto forbidden = [&](int gi, int gj) {
    for (const auto& [a, b] : cfg.forbidden_merges) {
      const auto& gi_members = gs[static_cast<std::size_t>(gi - 1)];
      const auto& gj_members = gs[static_cast<std::size_t>(gj - 1)];
      const auto contains = [](const std::vector<int>& v, int x) {
        return std::find(v.begin(), v.end(), x) != v.end();
      };
      if ((contains(gi_members, a) && contains(gj_members, b)) ||
          (contains(gi_members, b) && contains(gj_members, a))) {
        return true;
      }
    }
    return false;
  };
  if (cfg.ordinal) {
    for (int g = 1; g < p.k(); ++g) {
      if (forbidden(g, g + 1)) continue;
      consider(g, g + 1, merge_classes(p, g, g + 1));
    }
  } else {
    for (int gi = 1; gi <= p.k(); ++gi) {
      for (int gj = gi + 1; gj <= p.k(); ++gj) {
        if (forbidden(gi, gj)) continue;
        consider(gi, gj, merge_classes(p, gi, gj));
      }
    }
  }
  return out;
}

}  // namespace

SearchTrace search_with_evaluator(int k0, const SearchConfig& cfg,
                                  const PartitionEvaluator& evaluate,
                                  const PartitionPrefetch& prefetch) {
  TraceBuilder builder(cfg);
  const auto prefetch_batch = [&](const std::vector<Partition>& batch) {
    if (prefetch && batch.size() > 1) prefetch(batch);
  };

  switch (cfg.strategy) {
    case Strategy::exhaustive: {
      builder.evaluate(Partition::identity(k0), evaluate);  // baseline first
      const auto allowed = [&](const Partition& p) {
        for (const auto& [a, b] : cfg.forbidden_merges) {
          if (a >= 1 && b >= 1 && a <= p.k0() && b <= p.k0() && p.apply(a) == p.apply(b)) {
            return false;
          }
        }
        return true;
      };
      // Enumerate in bounded batches so candidate evaluation can run
      // concurrently without materializing the whole space.
      constexpr std::size_t kBatch = 512;
      std::vector<Partition> batch;
      const auto flush = [&] {
        prefetch_batch(batch);
        for (const auto& p : batch) builder.evaluate(p, evaluate);
        batch.clear();
      };
      const auto visit = [&](const Partition& p) {
        if (!allowed(p)) return;
        batch.push_back(p);
        if (batch.size() >= kBatch) flush();
      };
      if (cfg.ordinal) {
        for_each_ordinal(k0, true, visit);
      } else {
        for_each_nominal(k0, true, visit);  // throws TooManyClasses beyond the cap
      }
      flush();
      break;
    }

    case Strategy::greedy: {
      Partition incumbent = Partition::identity(k0);
      double incumbent_value = builder.evaluate(incumbent, evaluate);
      while (incumbent.k() > 2) {
        const ConditionalAccuracyTable& cond_acc = evaluate(incumbent).cond_acc;
        const auto candidates = allowed_merges(incumbent, cfg, cond_acc, builder);
        prefetch_batch(candidates);
        const Partition* best = nullptr;
        double best_value = incumbent_value;
        for (const auto& candidate : candidates) {
          const double v = builder.evaluate(candidate, evaluate);
          // Strict improvement; ties stop the descent.
          if (v > best_value || (best != nullptr && v == best_value &&
                                 prefer_partition(candidate, *best))) {
            best = &candidate;
            best_value = v;
          }
        }
        if (best == nullptr) break;
        incumbent = *best;
        incumbent_value = best_value;
      }
      break;
    }

    case Strategy::bfs: {
      Partition identity = Partition::identity(k0);
      std::deque<Partition> queue;
      std::unordered_set<Partition, PartitionHash> visited;
      std::unordered_map<Partition, double, PartitionHash> value_of;

      const double id_value = builder.evaluate(identity, evaluate);
      value_of.emplace(identity, id_value);
      visited.insert(identity);
      queue.push_back(identity);
      while (!queue.empty()) {
        const Partition current = queue.front();
        queue.pop_front();
        if (current.k() < 3) continue;  // merging below K=2 is never expanded
        const double current_value = value_of.at(current);
        const ConditionalAccuracyTable& cond_acc = evaluate(current).cond_acc;
        const auto candidates = allowed_merges(current, cfg, cond_acc, builder);
        std::vector<Partition> unvisited;
        for (const auto& candidate : candidates) {
          if (!visited.contains(candidate) && !builder.seen(candidate)) {
            unvisited.push_back(candidate);
          }
        }
        prefetch_batch(unvisited);
        for (const auto& candidate : candidates) {
          if (visited.contains(candidate)) continue;
          const double v = builder.evaluate(candidate, evaluate);
          visited.insert(candidate);
          if (v > current_value) {
            value_of.emplace(candidate, v);
            queue.push_back(candidate);
          }
        }
      }
      break;
    }
  }

  return builder.finish();
}

namespace {

SearchTrace run_with_dataset(const Dataset& ds, const SearchConfig& cfg) {
  FoldPlan folds = stratified_folds(ds, cfg.folds, cfg.seed);
  CvOptions cv_opts;
  cv_opts.base_seed = cfg.seed;

  // Criteria evaluated per partition: the search criterion only. A map
  // keyed by the canonical partition makes re-queries (the incumbent's
  // conditional accuracies) free; node-based storage keeps returned
  // references stable across inserts.
  std::unordered_map<Partition, PartitionEvaluation, PartitionHash> cache;
  std::mutex cache_mutex;
  const std::array<Criterion, 1> wanted = {cfg.criterion};
  const auto compute = [&](const Partition& p) {
    return evaluate_partition(ds, p, cfg.classifier, folds, wanted, cv_opts);
  };
  const PartitionEvaluator evaluator = [&](const Partition& p) -> const PartitionEvaluation& {
    {
      const std::lock_guard<std::mutex> lock(cache_mutex);
      const auto it = cache.find(p);
      if (it != cache.end()) return it->second;
    }
    PartitionEvaluation eval = compute(p);
    const std::lock_guard<std::mutex> lock(cache_mutex);
    return cache.emplace(p, std::move(eval)).first->second;
  };
  // Per-partition seeds make parallel candidate evaluation give the same
  // numbers as the serial walk.
  const PartitionPrefetch prefetcher = [&](const std::vector<Partition>& batch) {
    if (cfg.jobs == 1) return;
    std::vector<const Partition*> misses;
    {
      const std::lock_guard<std::mutex> lock(cache_mutex);
      for (const auto& p : batch) {
        if (!cache.contains(p)) misses.push_back(&p);
      }
    }
    parallel_for(misses.size(), cfg.jobs, [&](std::size_t i) { evaluator(*misses[i]); });
  };
  return search_with_evaluator(ds.k0, cfg, evaluator, prefetcher);
}

}  // namespace

SearchTrace exhaustive_search(const Dataset& ds, const SearchConfig& cfg) {
  SearchConfig c = cfg;
  c.strategy = Strategy::exhaustive;
  return run_with_dataset(ds, c);
}

SearchTrace greedy_search(const Dataset& ds, const SearchConfig& cfg) {
  SearchConfig c = cfg;
  c.strategy = Strategy::greedy;
  return run_with_dataset(ds, c);
}

SearchTrace bfs_search(const Dataset& ds, const SearchConfig& cfg) {
  SearchConfig c = cfg;
  c.strategy = Strategy::bfs;
  return run_with_dataset(ds, c);
}

SearchTrace run_search(const Dataset& ds, const SearchConfig& cfg) {
  return run_with_dataset(ds, cfg);
}

}  // namespace itca
