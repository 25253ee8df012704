#include "itca/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "itca/errors.hpp"
#include "itca/rng.hpp"

namespace itca {

std::string to_string(Linkage l) {
  switch (l) {
    case Linkage::single: return "single";
    case Linkage::complete: return "complete";
    case Linkage::average: return "average";
  }
  throw ConfigError("unknown linkage");
}

Linkage linkage_from_string(const std::string& name) {
  if (name == "single") return Linkage::single;
  if (name == "complete") return Linkage::complete;
  if (name == "average") return Linkage::average;
  throw ConfigError("unknown linkage: " + name);
}

Eigen::MatrixXd class_centers(const Dataset& ds) {
  Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(ds.k0, ds.d());
  std::vector<int> counts(static_cast<std::size_t>(ds.k0), 0);
  for (int i = 0; i < ds.n(); ++i) {
    const int y = ds.labels[static_cast<std::size_t>(i)];
    centers.row(y - 1) += ds.features.row(i);
    ++counts[static_cast<std::size_t>(y - 1)];
  }
  for (int c = 0; c < ds.k0; ++c) {
    centers.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
  }
  return centers;
}

namespace {

void check_k_star(int k_star, int k0) {
  if (k_star < 1 || k_star > k0) {
    throw ConfigError("k_star must be in [1, " + std::to_string(k0) + "], got " +
                      std::to_string(k_star));
  }
}

}  // namespace

Partition kmeans_combine(const Dataset& ds, int k_star, std::uint64_t seed) {
  check_k_star(k_star, ds.k0);
  const Eigen::MatrixXd centers = class_centers(ds);
  const int k0 = ds.k0;
  if (k_star == k0) return Partition::identity(k0);
  if (k_star == 1) return Partition::all_combined(k0);

  Rng rng(mix_seed(seed, 0x6b6d65616e73ULL));
  constexpr int kMaxRestarts = 32;
  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    // k-means++ seeding over the K0 center rows.
    std::vector<int> chosen;
    chosen.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k0))));
    std::vector<double> dist2(static_cast<std::size_t>(k0));
    while (static_cast<int>(chosen.size()) < k_star) {
      double total = 0.0;
      for (int i = 0; i < k0; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int c : chosen) {
          best = std::min(best, (centers.row(i) - centers.row(c)).squaredNorm());
        }
        dist2[static_cast<std::size_t>(i)] = best;
        total += best;
      }
      int pick;
      if (total <= 0.0) {
        pick = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k0)));
      } else {
        double u = rng.next_double() * total;
        pick = k0 - 1;
        for (int i = 0; i < k0; ++i) {
          u -= dist2[static_cast<std::size_t>(i)];
          if (u < 0.0) {
            pick = i;
            break;
          }
        }
      }
      chosen.push_back(pick);
    }

    Eigen::MatrixXd means(k_star, ds.d());
    for (int c = 0; c < k_star; ++c) {
      means.row(c) = centers.row(chosen[static_cast<std::size_t>(c)]);
    }

    // Lloyd iterations.
    std::vector<int> assignment(static_cast<std::size_t>(k0), 0);
    bool empty_cluster = false;
    for (int iter = 0; iter < 100; ++iter) {
      bool changed = iter == 0;
      for (int i = 0; i < k0; ++i) {
        int best = 0;
        double best_dist = (centers.row(i) - means.row(0)).squaredNorm();
        for (int c = 1; c < k_star; ++c) {
          const double dist = (centers.row(i) - means.row(c)).squaredNorm();
          if (dist < best_dist) {
            best = c;
            best_dist = dist;
          }
        }
        if (assignment[static_cast<std::size_t>(i)] != best) changed = true;
        assignment[static_cast<std::size_t>(i)] = best;
      }
      std::vector<int> sizes(static_cast<std::size_t>(k_star), 0);
      means.setZero();
      for (int i = 0; i < k0; ++i) {
        means.row(assignment[static_cast<std::size_t>(i)]) += centers.row(i);
        ++sizes[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])];
      }
      empty_cluster = false;
      for (int c = 0; c < k_star; ++c) {
        if (sizes[static_cast<std::size_t>(c)] == 0) {
          empty_cluster = true;
        } else {
          means.row(c) /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);
        }
      }
      if (empty_cluster || !changed) break;
    }
    if (empty_cluster) continue;  // re-seed

    std::vector<int> raw(assignment.size());
    for (std::size_t i = 0; i < assignment.size(); ++i) raw[i] = assignment[i] + 1;
    return Partition::canonicalize(raw);
  }
  throw ComputeError("kmeans_combine: empty cluster after repeated re-seeding");
}

Partition hierarchical_combine(const Dataset& ds, int k_star, Linkage linkage) {
  check_k_star(k_star, ds.k0);
  const Eigen::MatrixXd centers = class_centers(ds);
  const int k0 = ds.k0;

  // Naive agglomeration over the K0 centers (K0 is small in every use).
  std::vector<std::vector<int>> clusters;
  for (int i = 0; i < k0; ++i) clusters.push_back({i});

  const auto cluster_distance = [&](const std::vector<int>& a, const std::vector<int>& b) {
    double best = linkage == Linkage::single ? std::numeric_limits<double>::infinity() : 0.0;
    double sum = 0.0;
    for (int i : a) {
      for (int j : b) {
        const double dist = (centers.row(i) - centers.row(j)).norm();
        switch (linkage) {
          case Linkage::single: best = std::min(best, dist); break;
          case Linkage::complete: best = std::max(best, dist); break;
          case Linkage::average: sum += dist; break;
        }
      }
    }
    if (linkage == Linkage::average) {
      return sum / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
    }
    return best;
  };

  while (static_cast<int>(clusters.size()) > k_star) {
    std::size_t best_a = 0;
    std::size_t best_b = 1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        const double dist = cluster_distance(clusters[a], clusters[b]);
        if (dist < best_dist) {
          best_dist = dist;
          best_a = a;
          best_b = b;
        }
      }
    }
    auto merged = clusters[best_a];
    merged.insert(merged.end(), clusters[best_b].begin(), clusters[best_b].end());
    std::sort(merged.begin(), merged.end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best_b));
    clusters[best_a] = std::move(merged);
  }

  std::vector<int> raw(static_cast<std::size_t>(k0), 0);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (int i : clusters[c]) raw[static_cast<std::size_t>(i)] = static_cast<int>(c) + 1;
  }
  return Partition::canonicalize(raw);
}

}  // namespace itca
