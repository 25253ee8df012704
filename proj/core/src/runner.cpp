#include "itca/runner.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_map>

#include "itca/errors.hpp"
#include "itca/parallel.hpp"
#include "itca/reports.hpp"
#include "itca/rng.hpp"

namespace itca {

std::string SweepCell::label() const {
  std::string s = to_string(criterion) + "/" + to_string(strategy);
  if (prune) s += "_pruned";
  return s;
}

namespace {

std::vector<Partition> default_truths(int k0) {
  // Every ordinal combination with K >= 2: identity in, all-combined out.
  std::vector<Partition> truths;
  for_each_ordinal(k0, true, [&](const Partition& p) {
    if (p.k() >= 2) truths.push_back(p);
  });
  return truths;
}

}  // namespace

SweepConfig suite_config(const std::string& name) {
  SweepConfig cfg;
  cfg.classifier.kind = ClassifierKind::lda;
  if (name == "k0_6") {
    cfg.k0 = 6;
  } else if (name == "k0_8") {
    cfg.k0 = 8;
  } else if (name == "k0_20") {
    cfg.k0 = 20;
    cfg.n = 10000;
    cfg.sample_truths = 50;
  } else {
    throw ConfigError("unknown suite: " + name + " (expected k0_6, k0_8 or k0_20)");
  }
  return cfg;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  if (cfg.cells.empty()) throw ConfigError("run_sweep: no cells requested");

  std::vector<Partition> truths = cfg.truths.empty() ? default_truths(cfg.k0) : cfg.truths;
  if (cfg.sample_truths > 0 && cfg.sample_truths < static_cast<int>(truths.size())) {
    Rng rng(mix_seed(cfg.seed, 0x747275746873ULL));
    for (std::size_t i = 0; i < static_cast<std::size_t>(cfg.sample_truths); ++i) {
      const std::size_t j = i + rng.next_below(truths.size() - i);
      std::swap(truths[i], truths[j]);
    }
    truths.erase(truths.begin() + cfg.sample_truths, truths.end());
  }

  // Criteria needed anywhere in the sweep, computed in one fit per fold.
  std::vector<Criterion> wanted;
  for (const auto& cell : cfg.cells) {
    if (std::find(wanted.begin(), wanted.end(), cell.criterion) == wanted.end()) {
      wanted.push_back(cell.criterion);
    }
  }

  std::vector<std::vector<SweepInstanceResult>> per_dataset(truths.size());
  parallel_for(truths.size(), cfg.jobs, [&](std::size_t t) {
    const Partition& truth = truths[t];
    const std::uint64_t data_seed = mix_seed(cfg.seed, truth.text());

    SimulationConfig sim;
    sim.k0 = cfg.k0;
    sim.true_partition = truth;
    sim.step_length = cfg.step_length;
    sim.sigma = cfg.sigma;
    sim.n = cfg.n;
    sim.d = cfg.d;
    sim.seed = data_seed;
    const Dataset ds = simulate(sim).dataset;
    const FoldPlan folds = stratified_folds(ds, cfg.folds, data_seed);

    CvOptions cv_opts;
    cv_opts.base_seed = data_seed;
    std::unordered_map<Partition, PartitionEvaluation, PartitionHash> cache;
    const PartitionEvaluator evaluator =
        [&](const Partition& p) -> const PartitionEvaluation& {
      auto it = cache.find(p);
      if (it == cache.end()) {
        it = cache.emplace(p, evaluate_partition(ds, p, cfg.classifier, folds, wanted, cv_opts))
                 .first;
      }
      return it->second;
    };

    const OrdinalEncoding truth_code = encode_ordinal(truth);
    for (const auto& cell : cfg.cells) {
      SearchConfig sc;
      sc.strategy = cell.strategy;
      sc.criterion = cell.criterion;
      sc.classifier = cfg.classifier;
      sc.ordinal = true;
      sc.prune = cell.prune;
      sc.folds = cfg.folds;
      sc.seed = data_seed;
      const SearchTrace trace = search_with_evaluator(cfg.k0, sc, evaluator);

      SweepInstanceResult row;
      row.truth = truth.text();
      row.k_star = truth.k();
      row.cell = cell.label();
      row.chosen = trace.best.text();
      row.hamming = hamming(truth_code, encode_ordinal(trace.best));
      row.success = trace.best == truth;
      row.evaluations = trace.evaluation_count;
      per_dataset[t].push_back(std::move(row));
    }
  });

  SweepResult result;
  for (auto& rows : per_dataset) {
    for (auto& row : rows) result.instances.push_back(std::move(row));
  }

  std::map<std::string, SweepCellSummary> summary;
  for (const auto& row : result.instances) {
    auto& s = summary[row.cell];
    s.cell = row.cell;
    ++s.datasets;
    if (row.success) ++s.successes;
    s.avg_hamming += row.hamming;
    s.max_hamming = std::max(s.max_hamming, row.hamming);
    s.avg_evaluations += static_cast<double>(row.evaluations);
  }
  for (const auto& cell : cfg.cells) {
    auto& s = summary[cell.label()];
    if (s.datasets > 0) {
      s.avg_hamming /= s.datasets;
      s.avg_evaluations /= s.datasets;
    }
    result.summaries.push_back(s);
  }
  return result;
}

void write_sweep_summary_csv(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path.string());
  out << "cell,successes,datasets,avg_hamming,max_hamming,avg_evaluations\n";
  for (const auto& s : result.summaries) {
    out << s.cell << ',' << s.successes << ',' << s.datasets << ','
        << format_double(s.avg_hamming) << ',' << s.max_hamming << ','
        << format_double(s.avg_evaluations) << '\n';
  }
}

void write_sweep_instances_csv(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path.string());
  out << "truth,k_star,cell,chosen,hamming,success,evaluations\n";
  for (const auto& row : result.instances) {
    out << '"' << row.truth << "\"," << row.k_star << ',' << row.cell << ",\"" << row.chosen
        << "\"," << row.hamming << ',' << (row.success ? 1 : 0) << ',' << row.evaluations
        << '\n';
  }
}

}  // namespace itca
