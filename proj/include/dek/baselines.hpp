#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "dek/clustering.hpp"
#include "dek/dataset.hpp"
#include "dek/gower.hpp"
#include "dek/rng.hpp"

namespace dek {

enum class Seeding { uniform_random_rows, kmeans_plus_plus };

enum class PrototypeUpdate {
  median_mode,       // Gower assignment, per-cluster median/mode centroids
  euclidean_onehot,  // squared Euclidean on one-hot expanded rows, mean centroids
};

struct LloydConfig {
  std::size_t k = 2;
  std::size_t max_iters = 300;
  Seeding seeding = Seeding::kmeans_plus_plus;
  std::uint64_t seed = 0;
  /// Stop once no centroid moves by more than this (Gower distance). With 0
  /// the loop runs to a fixed point or max_iters.
  double tol = 0.0;
  PrototypeUpdate update = PrototypeUpdate::median_mode;
};

enum class Linkage { single, complete, average };

std::string_view to_string(Linkage l) noexcept;
Linkage parse_linkage(std::string_view name);

struct HierConfig {
  std::size_t k = 2;
  Linkage linkage = Linkage::average;
};

/// Row indices of K distinct seeds: the first uniform, each next one drawn
/// with probability proportional to the squared Gower distance to its nearest
/// chosen seed. When every remaining row coincides with a seed, the next seed
/// is uniform over the unchosen rows. Throws TooFewRows.
std::vector<std::size_t> kmeans_pp_rows(const Dataset& ds, std::size_t k, Rng& rng);
CentroidMatrix kmeans_pp_seed(const Dataset& ds, std::size_t k, Rng& rng);

/// Lloyd iteration under Gower distance. An empty cluster is re-seeded at the
/// row farthest from its assigned centroid. `history` holds the objective
/// after every assignment step. Throws TooFewRows.
ClusteringResult lloyd_cluster(const Dataset& ds, const LloydConfig& cfg);

/// Agglomerative clustering on the Gower matrix, merging the closest pair
/// (lowest index pair on ties) until K clusters remain. Labels are ordered by
/// each cluster's smallest row index; centroids are median/mode prototypes.
/// `history` holds the merge distances. Throws TooFewRows.
ClusteringResult hierarchical_cluster(const Dataset& ds, const HierConfig& cfg);
ClusteringResult hierarchical_cluster(const Dataset& ds, const DistanceMatrix& distances, const HierConfig& cfg);

/// Rows expanded to D_con continuous values followed by one-hot blocks.
std::vector<std::vector<double>> onehot_rows(const Dataset& ds);
std::vector<double> onehot(PointView p, const Schema& schema);

}  // namespace dek
