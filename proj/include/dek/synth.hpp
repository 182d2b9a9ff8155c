#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dek/dataset.hpp"

namespace dek {

/// Planted-partition generator parameters.
struct SynthSpec {
  std::size_t n_per_cluster = 100;
  std::size_t k_true = 3;
  std::size_t d_con = 4;
  std::vector<std::size_t> choice_counts{3, 3, 3};
  /// Gap between neighbouring cluster centers along every continuous
  /// dimension, in units of the within-cluster standard deviation.
  double separation = 6.0;
  /// Probability that a categorical cell takes its cluster's modal category.
  double purity = 0.95;
  std::uint64_t seed = 0;
};

struct SynthData {
  Dataset dataset;  // normalized
  std::vector<std::size_t> labels;
};

/// Continuous columns: unit-variance Gaussians around per-cluster centers;
/// each dimension orders the clusters by its own random permutation, spacing
/// neighbours `separation` apart. Categorical columns: the cluster's modal
/// category with probability `purity`, otherwise uniform over the other
/// categories. Rows are shuffled, then the table is normalized.
/// Throws InvalidSpec.
SynthData generate(const SynthSpec& spec);

/// Schema used by generate(): columns x0..x{d_con-1} then c0.. with labels v0, v1, ...
Schema synth_schema(const SynthSpec& spec);

/// Pair-counting adjusted Rand index. Throws LengthMismatch.
double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b);

}  // namespace dek
