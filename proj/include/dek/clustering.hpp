#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "dek/dataset.hpp"

namespace dek {

/// K cluster prototypes over a dataset schema.
using CentroidMatrix = std::vector<MixedPoint>;

struct ClusteringResult {
  std::string method;
  std::size_t k = 0;
  CentroidMatrix centroids;
  std::vector<std::size_t> assignment;  // per row, in [0, k)
  std::vector<std::size_t> sizes;       // per cluster, sums to n
  double objective = 0.0;
  double runtime_seconds = 0.0;
  std::uint64_t seed = 0;
  /// DEK: best objective per generation. Lloyd: objective after each assignment
  /// step. Hierarchical: merge distances in merge order.
  std::vector<double> history;
  std::size_t iterations = 0;
  bool converged = true;
};

std::vector<std::size_t> cluster_sizes(std::span<const std::size_t> assignment, std::size_t k);

/// Per-dimension median of the continuous columns (mean of the two middle
/// values for even counts) and mode of the categorical columns (lowest index
/// on ties). These minimize the summed Gower distance to the members.
MixedPoint median_mode_prototype(const Dataset& ds, std::span<const std::size_t> members);

/// Prototype per cluster; nullopt for clusters without members.
std::vector<std::optional<MixedPoint>> cluster_prototypes(const Dataset& ds, std::span<const std::size_t> assignment,
                                                          std::size_t k);

/// Index of the nearest centroid under Gower distance, lowest index on ties.
std::size_t nearest_centroid(PointView point, const CentroidMatrix& centroids, std::span<const double> widths,
                             double* distance = nullptr);

/// Serialized result: schema hash, method, K, seed, objective, centroids with
/// category labels, assignment and sizes. `config` is embedded verbatim so the
/// artifact can be replayed. Runtime is included only when requested, which
/// keeps artifacts byte-identical across repeated runs.
nlohmann::json result_to_json(const ClusteringResult& result, const Schema& schema, const nlohmann::json& config,
                              bool include_runtime = false);

}  // namespace dek
