#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "dek/dataset.hpp"

namespace dek {

/// Gower dissimilarity: the mean over all m columns of the per-column terms,
/// |a_k - b_k| / R_k for continuous columns (0 when R_k == 0) and a 0/1
/// mismatch for categorical columns. Clamped into [0, 1].
///
/// `range_widths` holds one R_k per continuous column. Throws SchemaMismatch
/// when the point shapes disagree with the schema.
double gower_distance(PointView a, PointView b, const Schema& schema, std::span<const double> range_widths);

/// Same computation without shape checks, for inner loops whose shapes are
/// already validated.
inline double gower_unchecked(PointView a, PointView b, std::span<const double> range_widths) noexcept {
  double sum = 0.0;
  const std::size_t dc = a.continuous.size();
  for (std::size_t k = 0; k < dc; ++k) {
    const double w = range_widths[k];
    if (w > 0.0) {
      const double d = a.continuous[k] - b.continuous[k];
      sum += (d < 0.0 ? -d : d) / w;
    }
  }
  const std::size_t dk = a.categorical.size();
  for (std::size_t l = 0; l < dk; ++l) sum += a.categorical[l] != b.categorical[l] ? 1.0 : 0.0;
  const double g = sum / static_cast<double>(dc + dk);
  return g < 0.0 ? 0.0 : (g > 1.0 ? 1.0 : g);
}

/// Dense symmetric n x n matrix with zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) noexcept {
    values_[i * n_ + j] = v;
    values_[j * n_ + i] = v;
  }
  std::span<const double> row(std::size_t i) const noexcept { return {values_.data() + i * n_, n_}; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// All pairwise Gower distances of the dataset rows. Rows are split across
/// `jobs` threads; every entry is computed independently so the result is
/// identical for any job count.
DistanceMatrix pairwise_matrix(const Dataset& ds, std::size_t jobs = 1);

/// Debug dump: n rows of n comma-separated values.
void write_matrix_csv(const DistanceMatrix& m, const std::filesystem::path& path);

}  // namespace dek
