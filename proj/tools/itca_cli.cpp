// Command-line front end: analyze labeled CSVs, generate synthetic
// datasets, run criterion/strategy benchmark sweeps, evaluate the
// class-combination theory grids, and run the clustering baselines.
//
// Exit codes: 0 success, 2 usage/configuration error, 3 computation error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <numeric>

#include "itca/baselines.hpp"
#include "itca/errors.hpp"
#include "itca/reports.hpp"
#include "itca/runner.hpp"
#include "itca/search.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalFlags {
  std::uint64_t seed = 1;
  int folds = 5;
  std::string criterion = "itca";
  std::string classifier = "lda";
  std::string strategy = "exhaustive";
  bool nominal = false;
  bool prune = false;
  int jobs = 0;
  std::string out_dir = ".";
  int rf_trees = 100;
};

void add_global_flags(CLI::App* cmd, GlobalFlags& flags) {
  cmd->add_option("--seed", flags.seed, "Base seed for all randomness");
  cmd->add_option("--folds", flags.folds, "Cross-validation fold count")->check(CLI::Range(2, 100));
  cmd->add_option("--criterion", flags.criterion,
                  "itca|itca_alt|acc|mi|aac_proportion|aac_cardinality|ckl|pe");
  cmd->add_option("--classifier", flags.classifier,
                  "lda|soft_lda|nearest_centroid|random_forest|majority");
  cmd->add_option("--strategy", flags.strategy, "exhaustive|greedy|bfs");
  cmd->add_flag("--nominal", flags.nominal, "Arbitrary merges (default: adjacent only)");
  auto* ordinal = cmd->add_flag_callback(
      "--ordinal", [&flags] { flags.nominal = false; }, "Merge adjacent classes only (default)");
  ordinal->excludes("--nominal");
  cmd->add_flag("--prune", flags.prune, "Apply the accuracy-bound pruning rule");
  cmd->add_option("--jobs", flags.jobs, "Worker threads (0 = hardware)");
  cmd->add_option("--out-dir", flags.out_dir, "Output directory");
  cmd->add_option("--rf-trees", flags.rf_trees, "Random forest tree count")
      ->check(CLI::PositiveNumber);
}

itca::ClassifierSpec make_classifier(const GlobalFlags& flags) {
  itca::ClassifierSpec spec;
  spec.kind = itca::classifier_kind_from_string(flags.classifier);
  if (spec.kind == itca::ClassifierKind::oracle) {
    throw itca::ConfigError("the oracle classifier is a test instrument, not a CLI algorithm");
  }
  spec.params.trees = flags.rf_trees;
  spec.seed = flags.seed;
  return spec;
}

itca::SearchConfig make_search_config(const GlobalFlags& flags) {
  itca::SearchConfig cfg;
  cfg.strategy = itca::strategy_from_string(flags.strategy);
  cfg.criterion = itca::criterion_from_string(flags.criterion);
  cfg.classifier = make_classifier(flags);
  cfg.ordinal = !flags.nominal;
  cfg.prune = flags.prune;
  cfg.folds = flags.folds;
  cfg.seed = flags.seed;
  cfg.jobs = flags.jobs;
  return cfg;
}

json simulation_config_json(const itca::SimulationConfig& cfg) {
  return json{{"k0", cfg.k0},
              {"true_partition", cfg.true_partition.text()},
              {"step_length", cfg.step_length},
              {"sigma", cfg.sigma},
              {"n", cfg.n},
              {"d", cfg.d},
              {"seed", cfg.seed}};
}

itca::SimulationConfig simulation_config_from_json(const json& j) {
  itca::SimulationConfig cfg;
  cfg.k0 = j.at("k0").get<int>();
  cfg.true_partition = itca::Partition::parse(j.at("true_partition").get<std::string>());
  cfg.step_length = j.at("step_length").get<double>();
  cfg.sigma = j.at("sigma").get<double>();
  cfg.n = j.at("n").get<int>();
  cfg.d = j.at("d").get<int>();
  cfg.seed = j.value("seed", std::uint64_t{0});
  return cfg;
}

// ---------------------------------------------------------------------------

// First-appearance label encoding is arbitrary; adjacency in ordinal mode
// must follow the labels' natural order. Numeric label names are re-mapped
// into ascending numeric order (no-op for nominal searches).
void order_numeric_labels(itca::Dataset& ds, std::vector<std::string>& names) {
  std::vector<double> values(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    try {
      std::size_t used = 0;
      values[i] = std::stod(names[i], &used);
      if (used != names[i].size()) return;
    } catch (const std::exception&) {
      return;
    }
  }
  std::vector<std::size_t> order(names.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<int> new_label_of(names.size());
  std::vector<std::string> sorted_names(names.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    new_label_of[order[rank]] = static_cast<int>(rank) + 1;
    sorted_names[rank] = names[order[rank]];
  }
  for (auto& y : ds.labels) y = new_label_of[static_cast<std::size_t>(y - 1)];
  names = std::move(sorted_names);
}

int cmd_analyze(const std::string& csv_path, const std::string& label_column,
                const GlobalFlags& flags) {
  auto loaded = itca::load_csv(csv_path, label_column);
  if (!flags.nominal) order_numeric_labels(loaded.dataset, loaded.label_names);
  const itca::Dataset& ds = loaded.dataset;
  itca::SearchConfig cfg = make_search_config(flags);

  const itca::SearchTrace trace = itca::run_search(ds, cfg);

  const fs::path out_dir(flags.out_dir);
  fs::create_directories(out_dir);
  itca::write_trace_jsonl(trace, out_dir / "trace.jsonl");
  json summary = itca::search_summary(trace);
  summary["criterion"] = itca::to_string(cfg.criterion);
  summary["classifier"] = itca::to_string(cfg.classifier.kind);
  summary["label_names"] = loaded.label_names;
  {
    std::ofstream out(out_dir / "summary.json", std::ios::binary);
    out << summary.dump(2) << '\n';
  }
  itca::write_criterion_vs_k_csv(trace, out_dir / "criterion_vs_k.csv");
  itca::write_criterion_vs_k_svg(trace, out_dir / "criterion_vs_k.svg");

  itca::RunManifest manifest = itca::RunManifest::create("analyze");
  manifest.data["csv"] = csv_path;
  manifest.data["label_column"] = label_column;
  manifest.data["search"] = cfg.to_json();
  manifest.data["out_dir"] = flags.out_dir;
  manifest.data["jobs"] = flags.jobs;
  manifest.write(out_dir / "manifest.json");

  std::cout << "best " << trace.best.text() << "  " << itca::to_string(cfg.criterion) << " "
            << itca::format_double(trace.best_value) << "  (" << trace.evaluation_count - 1
            << " combinations evaluated + baseline)\n";
  return 0;
}

int cmd_simulate(const std::string& config_path, const GlobalFlags& flags) {
  std::ifstream in(config_path);
  if (!in) throw itca::FileNotFound(config_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw itca::ParseFailure(std::string("simulate config: ") + e.what());
  }
  itca::SimulationConfig cfg = simulation_config_from_json(j);
  if (!j.contains("seed")) cfg.seed = flags.seed;

  const itca::SimulationResult result = itca::simulate(cfg);
  const fs::path out_dir(flags.out_dir);
  fs::create_directories(out_dir);
  itca::write_csv(result.dataset, out_dir / "dataset.csv");

  json sidecar;
  sidecar["config"] = simulation_config_json(cfg);
  sidecar["true_partition"] = cfg.true_partition.text();
  json centers = json::array();
  for (Eigen::Index r = 0; r < result.centers.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < result.centers.cols(); ++c) {
      row.push_back(result.centers(r, c));
    }
    centers.push_back(row);
  }
  sidecar["centers"] = centers;
  {
    std::ofstream out(out_dir / "dataset.json", std::ios::binary);
    out << sidecar.dump(2) << '\n';
  }

  itca::RunManifest manifest = itca::RunManifest::create("simulate");
  manifest.data["config"] = simulation_config_json(cfg);
  manifest.data["out_dir"] = flags.out_dir;
  manifest.write(out_dir / "manifest.json");

  std::cout << "wrote " << (out_dir / "dataset.csv").string() << " (" << result.dataset.n()
            << " x " << result.dataset.d() << ", k0 " << result.dataset.k0 << ")\n";
  return 0;
}

int cmd_benchmark(const std::string& suite, const std::vector<std::string>& criteria,
                  const std::vector<std::string>& strategies, const GlobalFlags& flags,
                  int sample, int k0_custom, int n_custom) {
  itca::SweepConfig cfg;
  if (suite == "custom") {
    if (k0_custom < 2) throw itca::ConfigError("custom suite needs --k0 >= 2");
    cfg.k0 = k0_custom;
    if (n_custom > 0) cfg.n = n_custom;
  } else {
    cfg = itca::suite_config(suite);
  }
  if (sample > 0) cfg.sample_truths = sample;
  cfg.folds = flags.folds;
  cfg.seed = flags.seed;
  cfg.jobs = flags.jobs;
  cfg.classifier = make_classifier(flags);

  for (const auto& c : criteria) {
    for (const auto& s : strategies) {
      itca::SweepCell cell;
      cell.criterion = itca::criterion_from_string(c);
      const bool pruned = s.size() > 7 && s.substr(s.size() - 7) == "_pruned";
      cell.strategy = itca::strategy_from_string(pruned ? s.substr(0, s.size() - 7) : s);
      cell.prune = pruned;
      cfg.cells.push_back(cell);
    }
  }

  const itca::SweepResult result = itca::run_sweep(cfg);
  const fs::path out_dir(flags.out_dir);
  fs::create_directories(out_dir);
  itca::write_sweep_summary_csv(result, out_dir / "benchmark_summary.csv");
  itca::write_sweep_instances_csv(result, out_dir / "benchmark_instances.csv");

  itca::RunManifest manifest = itca::RunManifest::create("benchmark");
  manifest.data["suite"] = suite;
  manifest.data["criteria"] = criteria;
  manifest.data["strategies"] = strategies;
  manifest.data["classifier"] = cfg.classifier.to_json();
  manifest.data["folds"] = cfg.folds;
  manifest.data["seed"] = cfg.seed;
  manifest.data["sample"] = cfg.sample_truths;
  manifest.data["k0"] = cfg.k0;
  manifest.data["n"] = cfg.n;
  manifest.data["jobs"] = cfg.jobs;
  manifest.data["out_dir"] = flags.out_dir;
  manifest.write(out_dir / "manifest.json");

  for (const auto& s : result.summaries) {
    std::cout << s.cell << ": " << s.successes << "/" << s.datasets << " successes, avg hamming "
              << itca::format_double(s.avg_hamming) << ", max " << s.max_hamming
              << ", avg evaluations " << itca::format_double(s.avg_evaluations) << "\n";
  }
  return 0;
}

int cmd_theory(const std::string& algorithm, int resolution, double separation,
               const GlobalFlags& flags, int grid_n, int replicates,
               bool restrict_domain) {
  itca::RegionGridConfig cfg;
  cfg.resolution = resolution;
  cfg.separation = separation;
  cfg.jobs = flags.jobs;
  if (algorithm == "oracle") {
    cfg.algorithm = itca::RegionAlgorithm::oracle;
  } else if (algorithm == "lda-limit") {
    cfg.algorithm = itca::RegionAlgorithm::lda_limit;
  } else if (algorithm == "lda") {
    cfg.algorithm = itca::RegionAlgorithm::lda;
  } else if (algorithm == "empirical") {
    cfg.algorithm = itca::RegionAlgorithm::empirical;
    itca::EmpiricalPlan plan;
    plan.classifier.kind = itca::classifier_kind_from_string(flags.classifier);
    plan.classifier.params.trees = flags.rf_trees;
    plan.classifier.seed = flags.seed;
    plan.folds = flags.folds;
    plan.n = grid_n;
    plan.replicates = replicates;
    plan.seed = flags.seed;
    cfg.plan = plan;
  } else {
    throw itca::ConfigError("unknown theory algorithm: " + algorithm);
  }
  if (restrict_domain || algorithm == "empirical") {
    cfg.domain = itca::RegionDomain{0.1, 0.7, 0.8};
  }

  const itca::RegionGrid grid = itca::region_grid(cfg);
  const fs::path out_dir(flags.out_dir);
  fs::create_directories(out_dir);
  itca::write_region_csv(grid, out_dir / "region.csv");
  itca::write_region_svg(grid, out_dir / "region.svg");

  itca::RunManifest manifest = itca::RunManifest::create("theory");
  manifest.data["algorithm"] = algorithm;
  manifest.data["resolution"] = resolution;
  manifest.data["separation"] = separation;
  manifest.data["classifier"] = flags.classifier;
  manifest.data["rf_trees"] = flags.rf_trees;
  manifest.data["n"] = grid_n;
  manifest.data["replicates"] = replicates;
  manifest.data["restrict"] = restrict_domain;
  manifest.data["folds"] = flags.folds;
  manifest.data["seed"] = flags.seed;
  manifest.data["out_dir"] = flags.out_dir;
  manifest.write(out_dir / "manifest.json");

  std::cout << "area fraction " << itca::format_double(grid.area_fraction) << " over "
            << grid.cells.size() << " cells\n";
  return 0;
}

int cmd_baselines(const std::string& csv_path, const std::string& label_column, int k_star,
                  const std::string& method, const GlobalFlags& flags) {
  const auto loaded = itca::load_csv(csv_path, label_column);
  itca::Partition result = itca::Partition::identity(loaded.dataset.k0);
  if (method == "kmeans") {
    result = itca::kmeans_combine(loaded.dataset, k_star, flags.seed);
  } else {
    result = itca::hierarchical_combine(loaded.dataset, k_star,
                                        itca::linkage_from_string(method));
  }
  const fs::path out_dir(flags.out_dir);
  fs::create_directories(out_dir);
  json out{{"method", method},
           {"k_star", k_star},
           {"partition", result.text()},
           {"label_names", loaded.label_names}};
  {
    std::ofstream f(out_dir / "baseline.json", std::ios::binary);
    f << out.dump(2) << '\n';
  }

  itca::RunManifest manifest = itca::RunManifest::create("baselines");
  manifest.data["csv"] = csv_path;
  manifest.data["label_column"] = label_column;
  manifest.data["k_star"] = k_star;
  manifest.data["method"] = method;
  manifest.data["seed"] = flags.seed;
  manifest.data["out_dir"] = flags.out_dir;
  manifest.write(out_dir / "manifest.json");

  std::cout << result.text() << "\n";
  return 0;
}

// Re-run a recorded analyze/simulate/benchmark manifest.
int cmd_rerun(const std::string& manifest_path, GlobalFlags flags) {
  const itca::RunManifest manifest = itca::RunManifest::load(manifest_path);
  const std::string command = manifest.data.at("command").get<std::string>();
  if (manifest.data.contains("out_dir")) {
    flags.out_dir = manifest.data.at("out_dir").get<std::string>();
  }
  if (command == "analyze") {
    const itca::SearchConfig cfg = itca::SearchConfig::from_json(manifest.data.at("search"));
    flags.seed = cfg.seed;
    flags.folds = cfg.folds;
    flags.criterion = itca::to_string(cfg.criterion);
    flags.classifier = itca::to_string(cfg.classifier.kind);
    flags.strategy = itca::to_string(cfg.strategy);
    flags.nominal = !cfg.ordinal;
    flags.prune = cfg.prune;
    if (manifest.data.contains("jobs")) flags.jobs = manifest.data.at("jobs").get<int>();
    flags.rf_trees = cfg.classifier.params.trees;
    return cmd_analyze(manifest.data.at("csv").get<std::string>(),
                       manifest.data.at("label_column").get<std::string>(), flags);
  }
  if (command == "simulate") {
    const itca::SimulationConfig cfg = simulation_config_from_json(manifest.data.at("config"));
    const itca::SimulationResult result = itca::simulate(cfg);
    const fs::path out_dir(flags.out_dir);
    fs::create_directories(out_dir);
    itca::write_csv(result.dataset, out_dir / "dataset.csv");
    std::cout << "wrote " << (out_dir / "dataset.csv").string() << "\n";
    return 0;
  }
  if (command == "benchmark") {
    const auto& d = manifest.data;
    const itca::ClassifierSpec clf = itca::ClassifierSpec::from_json(d.at("classifier"));
    flags.seed = d.at("seed").get<std::uint64_t>();
    flags.folds = d.at("folds").get<int>();
    flags.classifier = itca::to_string(clf.kind);
    flags.jobs = d.value("jobs", 0);
    flags.rf_trees = clf.params.trees;
    return cmd_benchmark(d.at("suite").get<std::string>(),
                         d.at("criteria").get<std::vector<std::string>>(),
                         d.at("strategies").get<std::vector<std::string>>(), flags,
                         d.value("sample", 0), d.value("k0", 0), d.value("n", 0));
  }
  if (command == "theory") {
    const auto& d = manifest.data;
    flags.seed = d.at("seed").get<std::uint64_t>();
    flags.classifier = d.at("classifier").get<std::string>();
    flags.folds = d.value("folds", flags.folds);
    flags.rf_trees = d.value("rf_trees", 100);
    return cmd_theory(d.at("algorithm").get<std::string>(), d.at("resolution").get<int>(),
                      d.at("separation").get<double>(), flags, d.at("n").get<int>(),
                      d.at("replicates").get<int>(), d.value("restrict", false));
  }
  if (command == "baselines") {
    const auto& d = manifest.data;
    flags.seed = d.at("seed").get<std::uint64_t>();
    return cmd_baselines(d.at("csv").get<std::string>(),
                         d.at("label_column").get<std::string>(), d.at("k_star").get<int>(),
                         d.at("method").get<std::string>(), flags);
  }
  throw itca::ConfigError("manifest command '" + command + "' is not re-runnable");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Class-combination search by entropy-weighted classification accuracy"};
  app.require_subcommand(1);

  GlobalFlags flags;

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Search class combinations for a labeled CSV");
  std::string csv_path;
  std::string label_column = "label";
  analyze->add_option("csv", csv_path, "Input CSV path")->required();
  analyze->add_option("--label-column", label_column, "Label column name");
  add_global_flags(analyze, flags);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic dataset");
  std::string sim_config;
  simulate->add_option("config", sim_config, "Simulation config JSON")->required();
  add_global_flags(simulate, flags);

  // benchmark
  auto* benchmark = app.add_subcommand("benchmark", "Criterion/strategy sweep over true combinations");
  std::string suite = "k0_8";
  std::vector<std::string> criteria{"itca"};
  std::vector<std::string> strategies{"exhaustive"};
  int sample = 0;
  int k0_custom = 0;
  int n_custom = 0;
  benchmark->add_option("--suite", suite, "k0_6|k0_8|k0_20|custom");
  benchmark->add_option("--criteria", criteria, "Criteria to score")->delimiter(',');
  benchmark
      ->add_option("--strategies", strategies,
                   "exhaustive|greedy|bfs|greedy_pruned|bfs_pruned")
      ->delimiter(',');
  benchmark->add_option("--sample", sample, "Random subset of true combinations");
  benchmark->add_option("--k0", k0_custom, "Custom suite: class count");
  benchmark->add_option("--n", n_custom, "Custom suite: sample size");
  add_global_flags(benchmark, flags);

  // theory
  auto* theory = app.add_subcommand("theory", "Class-combination region grids");
  std::string algorithm = "oracle";
  int resolution = 200;
  double separation = 10.0;
  int grid_n = 5000;
  int replicates = 1;
  bool restrict_domain = false;
  theory->add_option("--algorithm", algorithm, "oracle|lda-limit|lda|empirical");
  theory->add_option("--resolution", resolution, "Cells per axis")->check(CLI::Range(2, 2000));
  theory->add_option("--separation", separation, "||mu||/sigma for the lda form");
  theory->add_option("--n", grid_n, "Empirical mode: points per cell");
  theory->add_option("--replicates", replicates, "Empirical mode: datasets per cell");
  theory->add_flag("--restrict", restrict_domain, "Restrict to 0.1<=p<=0.7, p1+p2<=0.8");
  add_global_flags(theory, flags);

  // baselines
  auto* baselines = app.add_subcommand("baselines", "Clustering-based class combination");
  std::string bl_csv;
  std::string bl_label_column = "label";
  int k_star = 0;
  std::string method = "kmeans";
  baselines->add_option("csv", bl_csv, "Input CSV path")->required();
  baselines->add_option("--label-column", bl_label_column, "Label column name");
  baselines->add_option("--k-star", k_star, "Target number of combined classes")->required();
  baselines->add_option("--method", method, "kmeans|single|complete|average");
  add_global_flags(baselines, flags);

  // rerun
  auto* rerun = app.add_subcommand("rerun", "Re-run a recorded manifest");
  std::string manifest_path;
  rerun->add_option("manifest", manifest_path, "Path to manifest.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(csv_path, label_column, flags);
    if (simulate->parsed()) return cmd_simulate(sim_config, flags);
    if (benchmark->parsed()) {
      return cmd_benchmark(suite, criteria, strategies, flags, sample, k0_custom, n_custom);
    }
    if (theory->parsed()) {
      return cmd_theory(algorithm, resolution, separation, flags, grid_n, replicates,
                        restrict_domain);
    }
    if (baselines->parsed()) {
      return cmd_baselines(bl_csv, bl_label_column, k_star, method, flags);
    }
    if (rerun->parsed()) return cmd_rerun(manifest_path, flags);
  } catch (const itca::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const itca::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
