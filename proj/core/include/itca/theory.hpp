#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "itca/classifiers.hpp"

namespace itca {

// Standard Gaussian CDF, |error| < 1e-10.
double normal_cdf(double z);

// Oracle class-combination signal on Omega = {p1, p2 > 0, p1 + p2 < 1}:
//   p1^2 log p1 + p2^2 log p2 - (p1+p2)^2 log(p1+p2),
// positive exactly where merging the two same-distributed classes improves
// the population criterion. Throws OutOfOmega.
double oracle_delta(double p1, double p2);

// LDA improvement from merging two same-distributed classes against a
// third class at `separation` = ||mu|| / sigma. The full form uses the
// Gaussian-CDF accuracies; the limit form is its separation -> infinity
// reduction max(p1,p2) log max(p1,p2) - (p1+p2) log(p1+p2).
double lda_delta(double p1, double p2, double separation, bool limit_form = false);

enum class RegionAlgorithm { oracle, lda_limit, lda, empirical };

struct RegionDomain {
  double p_min = 0.0;   // cells with p1 or p2 below this are excluded
  double p_max = 1.0;   // ... or above this
  double sum_max = 1.0; // cells with p1 + p2 above this are excluded
};

// Per-cell generative plan for empirical grids: a three-class population
// with classes 1 and 2 sharing one Gaussian and class 3 at distance
// step_length, proportions (p1, p2, 1-p1-p2).
struct EmpiricalPlan {
  ClassifierSpec classifier;
  double step_length = 5.0;
  double sigma = 1.0;
  int n = 5000;
  int d = 5;
  int folds = 5;
  int replicates = 1;
  std::uint64_t seed = 0;
};

struct RegionGridConfig {
  RegionAlgorithm algorithm = RegionAlgorithm::oracle;
  int resolution = 200;  // cells per axis over (0, 1)
  double separation = 10.0;  // lda full form
  std::optional<RegionDomain> domain;
  std::optional<EmpiricalPlan> plan;  // required for empirical
  int jobs = 0;  // worker threads for empirical cells; 0 = hardware
};

struct RegionCell {
  double p1 = 0.0;
  double p2 = 0.0;
  double delta = 0.0;
};

struct RegionGrid {
  int resolution = 0;
  std::vector<RegionCell> cells;   // in-domain cell centers only
  double area_fraction = 0.0;      // fraction of in-domain cells with delta > 0
};

RegionGrid region_grid(const RegionGridConfig& cfg);

// One empirical cell: simulate the three-class population at (p1, p2) and
// return the CV criterion difference ITCA({(1,2),3}) - ITCA({1,2,3}).
double empirical_delta_cell(double p1, double p2, const EmpiricalPlan& plan,
                            std::uint64_t cell_seed);

}  // namespace itca
