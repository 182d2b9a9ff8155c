#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dek/baselines.hpp"
#include "dek/dataset.hpp"
#include "dek/dek_core.hpp"
#include "dek/metrics.hpp"

namespace dek {

enum class SweepMethod { dek, lloyd };

struct SweepOptions {
  std::size_t k_min = 2;
  std::size_t k_max = 8;
  std::size_t runs_per_k = 1;
  SweepMethod method = SweepMethod::lloyd;
  std::uint64_t base_seed = 0;
  DekConfig dek;      // k and seed are overwritten per run
  LloydConfig lloyd;  // k and seed are overwritten per run
  DistanceKind distance = DistanceKind::gower;
  std::size_t jobs = 1;
};

struct SsePoint {
  std::size_t k = 0;
  double mean = 0.0;
  double std = 0.0;   // sample standard deviation, 0 for a single run
  double best = 0.0;  // minimum over runs
  std::vector<double> values;
};

struct SseCurve {
  std::vector<SsePoint> points;
  std::size_t runs = 0;
};

/// SSE of every K in [k_min, k_max] over runs_per_k runs seeded
/// base_seed + run. Throws InvalidRange unless 2 <= k_min < k_max <= n.
SseCurve sweep_k(const Dataset& ds, const SweepOptions& options);

enum class ElbowStatistic { mean, best };

/// K at the largest second difference
///   (SSE(K-1) - SSE(K)) - (SSE(K) - SSE(K+1))
/// over interior points, smallest K on ties. Throws CurveTooShort below 3 points.
std::size_t pick_elbow(std::span<const std::size_t> ks, std::span<const double> sse);
std::size_t pick_elbow(const SseCurve& curve, ElbowStatistic statistic = ElbowStatistic::mean);

/// "k,mean_sse,std_sse,best_sse" rows.
std::string curve_csv(const SseCurve& curve);

}  // namespace dek
