#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dek/baselines.hpp"
#include "dek/dataset.hpp"
#include "dek/dek_core.hpp"
#include "dek/metrics.hpp"
#include "dek/model_selection.hpp"

namespace dek {

struct BenchDataset {
  std::string name;
  Dataset data;  // normalized by run_bench
};

/// Method identifiers: "dek", "km" (Lloyd, uniform row seeding),
/// "km++" (Lloyd, K-means++ seeding), "hc" (agglomerative).
struct BenchSpec {
  std::vector<BenchDataset> datasets;
  std::vector<std::string> methods{"dek", "km", "km++", "hc"};
  std::optional<std::size_t> k;  // nullopt: choose by SSE elbow per dataset
  std::size_t runs = 20;
  std::uint64_t base_seed = 0;
  ObjectiveVariant variant = ObjectiveVariant::stabilized;
  de::DEConfig de;
  LloydConfig lloyd;  // k, seed and seeding are set per run
  HierConfig hier;    // k is set per dataset
  // elbow sweep (Gower-Lloyd with K-means++ seeding)
  std::size_t elbow_k_min = 2;
  std::size_t elbow_k_max = 8;
  std::size_t elbow_runs = 5;
  ElbowStatistic elbow_statistic = ElbowStatistic::best;
  DistanceKind metric_distance = DistanceKind::gower;
  std::size_t jobs = 1;
};

struct RunRecord {
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  MetricReport metrics;
  double seconds = 0.0;
};

/// Aggregate over successful runs with finite values.
struct Aggregate {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 when fewer than 2 values
  double best = 0.0;
  std::size_t count = 0;
};

struct MethodReport {
  std::string dataset;
  std::string method;
  std::size_t k = 0;
  std::vector<RunRecord> runs;
  Aggregate dbi, sc, dvi;
  std::size_t failed = 0;
};

struct RunReport {
  std::vector<MethodReport> entries;
  std::vector<std::optional<SseCurve>> elbow_curves;  // per dataset, when K came from the elbow
  nlohmann::json config;
};

/// R seeded runs (seed = base_seed + run index) per (dataset, method) on a
/// bounded worker pool. Failed runs are recorded with their error, excluded
/// from the aggregates and counted in `failed`.
RunReport run_bench(const BenchSpec& spec);

/// Mean/std/best for one metric. Lower is better for DBI, higher for SC and DVI.
Aggregate aggregate(const std::vector<RunRecord>& runs, double MetricReport::*field, bool lower_is_better);

/// Machine-readable report. Timings are included only when requested so that
/// the default artifact is byte-identical across repeated runs.
nlohmann::json report_to_json(const RunReport& report, bool include_timing = false);

/// Comparison table: one row per (dataset, metric), one column per method,
/// "mean±std", best mean per row marked with '*'.
std::string report_table(const RunReport& report);

/// Long form: dataset,method,k,metric,mean,std,best,count,failed.
std::string report_csv(const RunReport& report);

}  // namespace dek
