#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "dek/clustering.hpp"
#include "dek/dataset.hpp"
#include "dek/de_engine.hpp"

namespace dek {

enum class ObjectiveVariant {
  stabilized,     // gower(d, x_j) / ln(1 + sep_j)
  paper_literal,  // gower(d, x_j) / ln(sep_j)
};

std::string_view to_string(ObjectiveVariant v) noexcept;
ObjectiveVariant parse_variant(std::string_view name);

/// Sentinel value of phi when the separation denominator is singular.
inline constexpr double kPenalty = 1e9;

struct DekConfig {
  std::size_t k = 2;
  de::DEConfig de;
  ObjectiveVariant variant = ObjectiveVariant::stabilized;
  double epsilon_sep = 1e-9;
};

/// Flat genome length: K * (D_con + sum of category counts).
std::size_t genome_length(const Schema& schema, std::size_t k) noexcept;

/// Genome layout per centroid: D_con continuous slots, then for each
/// categorical column a block of selection probabilities. Categorical values
/// become one-hot blocks.
std::vector<double> encode(const CentroidMatrix& centroids, const Schema& schema);

/// Inverse layout mapping. Each categorical block decodes to the index of its
/// largest entry (lowest index on ties). Total on any real vector of the right
/// length; throws LengthMismatch otherwise.
CentroidMatrix decode(std::span<const double> genome, const Schema& schema, std::size_t k);

/// Minimum Gower distance from `centroid` to any of `others`.
double separation(PointView centroid, std::span<const PointView> others, std::span<const double> widths);

/// Separation-aware point-to-centroid cost. Throws NotEnoughCentroids when
/// `others` is empty.
double phi(PointView point, PointView centroid, std::span<const PointView> others, std::span<const double> widths,
           ObjectiveVariant variant, double epsilon_sep);

/// Sum over rows of the minimum phi over centroids.
double objective(const Dataset& ds, const CentroidMatrix& centroids, ObjectiveVariant variant,
                 double epsilon_sep = 1e-9);

struct Assignment {
  std::vector<std::size_t> labels;
  double objective = 0.0;
};

/// Per-row argmin of phi (lowest index on ties) and the resulting objective.
Assignment assign_by_phi(const Dataset& ds, const CentroidMatrix& centroids, ObjectiveVariant variant,
                         double epsilon_sep = 1e-9);

/// Differential-evolution search over flat genomes in [0, 1]^(K * expanded_dim).
/// Expects a normalized dataset. Throws InvalidConfig (K < 2, epsilon <= 0)
/// or TooFewRows (n < K).
ClusteringResult run_dek(const Dataset& ds, const DekConfig& cfg);

}  // namespace dek
