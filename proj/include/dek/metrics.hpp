#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "dek/clustering.hpp"
#include "dek/dataset.hpp"
#include "dek/gower.hpp"

namespace dek {

enum class DistanceKind { gower, euclidean_onehot };

std::string_view to_string(DistanceKind k) noexcept;
DistanceKind parse_distance_kind(std::string_view name);

/// Index value plus a flag raised when the value is +infinity by convention
/// (coincident prototypes for DBI, zero diameter for Dunn).
struct IndexValue {
  double value = 0.0;
  bool flagged = false;
};

struct MetricReport {
  double dbi = 0.0;
  double sc = 0.0;
  double dvi = 0.0;
  double sse = 0.0;
  std::size_t k_effective = 0;
  bool degenerate_centroids = false;
  bool zero_diameter = false;
};

/// Relabels to 0..K'-1 in order of first appearance of each nonempty cluster.
std::vector<std::size_t> compact_labels(std::span<const std::size_t> assignment, std::size_t* k_effective = nullptr);

/// Davies-Bouldin over nonempty clusters. Scatter S_i is the mean distance of
/// members to the cluster prototype (median/mode under Gower, mean of one-hot
/// rows under euclidean_onehot). Coincident prototypes give +inf, flagged.
/// Throws TooFewClusters.
IndexValue davies_bouldin(const Dataset& ds, std::span<const std::size_t> assignment,
                          DistanceKind kind = DistanceKind::gower);

/// Mean silhouette; singleton members contribute 0. Throws TooFewClusters.
double silhouette(const DistanceMatrix& distances, std::span<const std::size_t> assignment);

/// Min inter-cluster point distance over max intra-cluster diameter. A zero
/// diameter gives +inf, flagged. Throws TooFewClusters.
IndexValue dunn(const DistanceMatrix& distances, std::span<const std::size_t> assignment);

/// Sum of squared distances to the assigned centroid. Under gower the
/// result's reported centroids are used; under euclidean_onehot the centroid
/// of each cluster is the mean of its one-hot expanded rows.
double sse(const Dataset& ds, const ClusteringResult& result, DistanceKind kind = DistanceKind::gower);

/// Pairwise Euclidean distances between one-hot expanded rows.
DistanceMatrix euclidean_onehot_matrix(const Dataset& ds);

/// All four indices on the given precomputed matrix. Empty clusters are dropped.
MetricReport evaluate(const Dataset& ds, const DistanceMatrix& distances, const ClusteringResult& result,
                      DistanceKind kind = DistanceKind::gower);

}  // namespace dek
