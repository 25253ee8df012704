#include "itca/theory.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "itca/criteria.hpp"
#include "itca/errors.hpp"
#include "itca/parallel.hpp"
#include "itca/rng.hpp"

namespace itca {

double normal_cdf(double z) {
  // erfc keeps full precision in the lower tail, where 1 - Phi(-z) cancels.
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

namespace {

void check_omega(double p1, double p2) {
  if (!(p1 > 0.0) || !(p2 > 0.0) || !(p1 + p2 < 1.0)) throw OutOfOmega(p1, p2);
}

}  // namespace

double oracle_delta(double p1, double p2) {
  check_omega(p1, p2);
  const double p12 = p1 + p2;
  return p1 * p1 * std::log(p1) + p2 * p2 * std::log(p2) - p12 * p12 * std::log(p12);
}

double lda_delta(double p1, double p2, double separation, bool limit_form) {
  check_omega(p1, p2);
  const double pmax = std::max(p1, p2);
  const double p12 = p1 + p2;
  if (limit_form) {
    return pmax * std::log(pmax) - p12 * std::log(p12);
  }
  if (!(separation > 0.0)) throw ConfigError("lda_delta: separation must be positive");
  const double p3 = 1.0 - p12;
  const double s = separation;
  // Before the merge only the larger of the two same-distributed classes is
  // ever predicted; after the merge the combined class takes its place.
  const double before = -normal_cdf(s / 2.0 + std::log(pmax / p3) / s) * pmax * std::log(pmax) -
                        normal_cdf(s / 2.0 - std::log(pmax / p3) / s) * p3 * std::log(p3);
  const double after = -normal_cdf(s / 2.0 + std::log(p12 / p3) / s) * p12 * std::log(p12) -
                       normal_cdf(s / 2.0 - std::log(p12 / p3) / s) * p3 * std::log(p3);
  return after - before;
}

double empirical_delta_cell(double p1, double p2, const EmpiricalPlan& plan,
                            std::uint64_t cell_seed) {
  check_omega(p1, p2);
  const double p3 = 1.0 - p1 - p2;

  // Three observed classes: 1 and 2 share a Gaussian at the origin, class 3
  // sits at distance step_length along a seed-derived unit direction.
  Rng rng(mix_seed(cell_seed, 0x63656c6cULL));
  Eigen::VectorXd direction(plan.d);
  double norm2 = 0.0;
  do {
    for (int i = 0; i < plan.d; ++i) direction(i) = rng.next_normal();
    norm2 = direction.squaredNorm();
  } while (norm2 == 0.0);
  direction *= plan.step_length / std::sqrt(norm2);

  Dataset ds;
  ds.k0 = 3;
  ds.labels.resize(static_cast<std::size_t>(plan.n));
  ds.features.resize(plan.n, plan.d);
  for (int i = 0; i < plan.n; ++i) {
    const double u = rng.next_double();
    const int y = u < p1 ? 1 : (u < p1 + p2 ? 2 : 3);
    ds.labels[static_cast<std::size_t>(i)] = y;
    for (int j = 0; j < plan.d; ++j) {
      const double center = (y == 3) ? direction(j) : 0.0;
      ds.features(i, j) = center + plan.sigma * rng.next_normal();
    }
  }
  // Guarantee every class appears (tiny proportions at small n).
  for (int c = 1; c <= 3; ++c) {
    if (std::find(ds.labels.begin(), ds.labels.end(), c) == ds.labels.end()) {
      ds.labels[static_cast<std::size_t>(c - 1)] = c;
    }
  }

  ClassifierSpec spec = plan.classifier;
  if (spec.kind == ClassifierKind::oracle) {
    spec.params.oracle_same_distributed = {1, 2};
    spec.params.oracle_class_probabilities = {p1, p2, p3};
  }

  const Partition identity = Partition::identity(3);
  const Partition merged = Partition::parse("{(1,2),3}");
  double delta_sum = 0.0;
  for (int rep = 0; rep < std::max(1, plan.replicates); ++rep) {
    const std::uint64_t rep_seed = mix_seed(cell_seed, static_cast<std::uint64_t>(rep));
    const FoldPlan folds = stratified_folds(ds, plan.folds, rep_seed);
    CvOptions opts;
    opts.base_seed = rep_seed;
    const std::array<Criterion, 1> itca_only = {Criterion::itca};
    const double with_merge =
        evaluate_partition(ds, merged, spec, folds, itca_only, opts).reports[0].mean;
    const double without =
        evaluate_partition(ds, identity, spec, folds, itca_only, opts).reports[0].mean;
    delta_sum += with_merge - without;
  }
  return delta_sum / static_cast<double>(std::max(1, plan.replicates));
}

RegionGrid region_grid(const RegionGridConfig& cfg) {
  if (cfg.resolution < 2) throw ConfigError("region_grid: resolution must be >= 2");
  if (cfg.algorithm == RegionAlgorithm::empirical && !cfg.plan.has_value()) {
    throw ConfigError("region_grid: empirical mode needs a simulation plan");
  }
  const RegionDomain domain = cfg.domain.value_or(RegionDomain{});

  RegionGrid grid;
  grid.resolution = cfg.resolution;
  const double step = 1.0 / static_cast<double>(cfg.resolution);

  // In-domain cell centers plus their grid coordinates (seed tags).
  std::vector<std::pair<int, int>> coords;
  for (int i = 0; i < cfg.resolution; ++i) {
    for (int j = 0; j < cfg.resolution; ++j) {
      const double p1 = (i + 0.5) * step;
      const double p2 = (j + 0.5) * step;
      if (!(p1 > 0.0 && p2 > 0.0 && p1 + p2 < 1.0)) continue;
      if (p1 < domain.p_min || p2 < domain.p_min) continue;
      if (p1 > domain.p_max || p2 > domain.p_max) continue;
      if (p1 + p2 > domain.sum_max) continue;
      coords.emplace_back(i, j);
      grid.cells.push_back(RegionCell{p1, p2, 0.0});
    }
  }

  const auto fill_cell = [&](std::size_t c) {
    auto& cell = grid.cells[c];
    switch (cfg.algorithm) {
      case RegionAlgorithm::oracle:
        cell.delta = oracle_delta(cell.p1, cell.p2);
        break;
      case RegionAlgorithm::lda_limit:
        cell.delta = lda_delta(cell.p1, cell.p2, 1.0, true);
        break;
      case RegionAlgorithm::lda:
        cell.delta = lda_delta(cell.p1, cell.p2, cfg.separation, false);
        break;
      case RegionAlgorithm::empirical: {
        const auto [i, j] = coords[c];
        const std::uint64_t cell_seed =
            mix_seed(cfg.plan->seed,
                     static_cast<std::uint64_t>(i) * 0x10001ULL + static_cast<std::uint64_t>(j));
        cell.delta = empirical_delta_cell(cell.p1, cell.p2, *cfg.plan, cell_seed);
        break;
      }
    }
  };
  if (cfg.algorithm == RegionAlgorithm::empirical) {
    parallel_for(grid.cells.size(), cfg.jobs, fill_cell);
  } else {
    for (std::size_t c = 0; c < grid.cells.size(); ++c) fill_cell(c);
  }

  std::size_t positive = 0;
  for (const auto& cell : grid.cells) {
    if (cell.delta > 0.0) ++positive;
  }
  if (!grid.cells.empty()) {
    grid.area_fraction = static_cast<double>(positive) / static_cast<double>(grid.cells.size());
  }
  return grid;
}

}  // namespace itca
