#include "dek/model_selection.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "dek/error.hpp"
#include "dek/parallel.hpp"

namespace dek {
namespace {

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

SseCurve sweep_k(const Dataset& ds, const SweepOptions& options) {
  if (options.k_min < 2 || options.k_min >= options.k_max || options.k_max > ds.size())
    throw Error(ErrorCode::InvalidRange, "need 2 <= k_min < k_max <= n, got [" + std::to_string(options.k_min) + ", " +
                                             std::to_string(options.k_max) + "] with n = " + std::to_string(ds.size()));
  if (options.runs_per_k < 1) throw Error(ErrorCode::InvalidRange, "runs_per_k must be at least 1");

  const std::size_t span = options.k_max - options.k_min + 1;
  const std::size_t runs = options.runs_per_k;
  std::vector<double> values(span * runs);

  parallel_for(span * runs, options.jobs, [&](std::size_t task) {
    const std::size_t k = options.k_min + task / runs;
    const std::uint64_t seed = options.base_seed + task % runs;
    ClusteringResult result;
    if (options.method == SweepMethod::dek) {
      DekConfig cfg = options.dek;
      cfg.k = k;
      cfg.de.seed = seed;
      result = run_dek(ds, cfg);
    } else {
      LloydConfig cfg = options.lloyd;
      cfg.k = k;
      cfg.seed = seed;
      result = lloyd_cluster(ds, cfg);
    }
    values[task] = sse(ds, result, options.distance);
  });

  SseCurve curve;
  curve.runs = runs;
  for (std::size_t s = 0; s < span; ++s) {
    SsePoint p;
    p.k = options.k_min + s;
    p.values.assign(values.begin() + static_cast<std::ptrdiff_t>(s * runs),
                    values.begin() + static_cast<std::ptrdiff_t>((s + 1) * runs));
    double sum = 0.0;
    for (double v : p.values) sum += v;
    p.mean = sum / static_cast<double>(runs);
    double sq = 0.0;
    for (double v : p.values) sq += (v - p.mean) * (v - p.mean);
    p.std = runs > 1 ? std::sqrt(sq / static_cast<double>(runs - 1)) : 0.0;
    p.best = *std::min_element(p.values.begin(), p.values.end());
    curve.points.push_back(std::move(p));
  }
  return curve;
}

std::size_t pick_elbow(std::span<const std::size_t> ks, std::span<const double> sse) {
  if (ks.size() != sse.size()) throw Error(ErrorCode::LengthMismatch, "K and SSE lists differ in length");
  if (ks.size() < 3) throw Error(ErrorCode::CurveTooShort, "elbow needs at least 3 curve points");
  std::size_t best = 1;
  double best_curvature = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 1; t + 1 < ks.size(); ++t) {
    const double curvature = (sse[t - 1] - sse[t]) - (sse[t] - sse[t + 1]);
    if (curvature > best_curvature) {
      best_curvature = curvature;
      best = t;
    }
  }
  return ks[best];
}

std::size_t pick_elbow(const SseCurve& curve, ElbowStatistic statistic) {
  std::vector<std::size_t> ks;
  std::vector<double> values;
  for (const SsePoint& p : curve.points) {
    ks.push_back(p.k);
    values.push_back(statistic == ElbowStatistic::mean ? p.mean : p.best);
  }
  return pick_elbow(ks, values);
}

std::string curve_csv(const SseCurve& curve) {
  std::string out = "k,mean_sse,std_sse,best_sse\n";
  for (const SsePoint& p : curve.points)
    out += std::to_string(p.k) + "," + fmt(p.mean) + "," + fmt(p.std) + "," + fmt(p.best) + "\n";
  return out;
}

}  // namespace dek
