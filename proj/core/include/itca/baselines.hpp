#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "itca/dataset.hpp"
#include "itca/partition.hpp"

namespace itca {

enum class Linkage { single, complete, average };

std::string to_string(Linkage l);
Linkage linkage_from_string(const std::string& name);

// Per-class feature means, one row per original class.
Eigen::MatrixXd class_centers(const Dataset& ds);

// K-means (k-means++ seeding, Lloyd iterations) on the K0 class centers;
// classes sharing a cluster are combined. Deterministic given the seed.
Partition kmeans_combine(const Dataset& ds, int k_star, std::uint64_t seed);

// Agglomerative clustering on the K0 class centers, cut at k_star
// clusters; lowest-index pair on distance ties.
Partition hierarchical_combine(const Dataset& ds, int k_star, Linkage linkage);

}  // namespace itca
