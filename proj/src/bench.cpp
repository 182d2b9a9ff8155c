#include "dek/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "dek/error.hpp"
#include "dek/parallel.hpp"

namespace dek {
namespace {

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json aggregate_json(const Aggregate& a) {
  return {{"mean", finite_or_null(a.mean)}, {"std", finite_or_null(a.std)}, {"best", finite_or_null(a.best)},
          {"count", a.count}};
}

struct MetricRow {
  const char* name;
  Aggregate MethodReport::*field;
  bool lower_is_better;
};

constexpr MetricRow kMetricRows[] = {
    {"DBI", &MethodReport::dbi, true},
    {"SC", &MethodReport::sc, false},
    {"DVI", &MethodReport::dvi, false},
};

nlohmann::json spec_json(const BenchSpec& spec) {
  nlohmann::json datasets = nlohmann::json::array();
  for (const auto& d : spec.datasets)
    datasets.push_back({{"name", d.name}, {"rows", d.data.size()}, {"schema_hash", d.data.schema().hash()}});
  return {
      {"datasets", datasets},
      {"methods", spec.methods},
      {"k", spec.k ? nlohmann::json(*spec.k) : nlohmann::json("elbow")},
      {"runs", spec.runs},
      {"base_seed", spec.base_seed},
      {"variant", to_string(spec.variant)},
      {"np", spec.de.population},
      {"f", spec.de.scale},
      {"cr", spec.de.crossover},
      {"max_gs", spec.de.max_generations},
      {"mutation", spec.de.mutation == de::Mutation::rand1 ? "rand1" : "best1"},
      {"lloyd_max_iters", spec.lloyd.max_iters},
      {"linkage", to_string(spec.hier.linkage)},
      {"elbow", {{"k_min", spec.elbow_k_min}, {"k_max", spec.elbow_k_max}, {"runs", spec.elbow_runs},
                 {"statistic", spec.elbow_statistic == ElbowStatistic::mean ? "mean" : "best"}}},
      {"metric_distance", to_string(spec.metric_distance)},
  };
}

}  // namespace

Aggregate aggregate(const std::vector<RunRecord>& runs, double MetricReport::*field, bool lower_is_better) {
  std::vector<double> values;
  for (const auto& r : runs)
    if (r.ok && std::isfinite(r.metrics.*field)) values.push_back(r.metrics.*field);
  Aggregate a;
  a.count = values.size();
  if (values.empty()) {
    a.mean = a.std = a.best = std::numeric_limits<double>::quiet_NaN();
    return a;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  a.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - a.mean) * (v - a.mean);
  a.std = values.size() > 1 ? std::sqrt(sq / static_cast<double>(values.size() - 1)) : 0.0;
  a.best = lower_is_better ? *std::min_element(values.begin(), values.end())
                           : *std::max_element(values.begin(), values.end());
  return a;
}

RunReport run_bench(const BenchSpec& spec) {
  if (spec.runs < 1) throw Error(ErrorCode::InvalidConfig, "runs must be at least 1");
  for (const auto& m : spec.methods)
    if (m != "dek" && m != "km" && m != "km++" && m != "hc")
      throw Error(ErrorCode::InvalidConfig, "unknown method '" + m + "'");

  const std::size_t nd = spec.datasets.size();
  std::vector<Dataset> data;
  std::vector<DistanceMatrix> matrices;
  for (const auto& d : spec.datasets) {
    data.push_back(normalize(d.data));
    matrices.push_back(spec.metric_distance == DistanceKind::gower ? pairwise_matrix(data.back(), spec.jobs)
                                                                   : euclidean_onehot_matrix(data.back()));
  }

  RunReport report;
  report.config = spec_json(spec);
  report.elbow_curves.resize(nd);
  std::vector<std::size_t> ks(nd);
  for (std::size_t d = 0; d < nd; ++d) {
    if (spec.k) {
      ks[d] = *spec.k;
      continue;
    }
    SweepOptions sweep;
    sweep.k_min = spec.elbow_k_min;
    sweep.k_max = std::min(spec.elbow_k_max, data[d].size());
    sweep.runs_per_k = spec.elbow_runs;
    sweep.method = SweepMethod::lloyd;
    sweep.base_seed = spec.base_seed;
    sweep.lloyd = spec.lloyd;
    sweep.lloyd.seeding = Seeding::kmeans_plus_plus;
    sweep.jobs = spec.jobs;
    report.elbow_curves[d] = sweep_k(data[d], sweep);
    ks[d] = pick_elbow(*report.elbow_curves[d], spec.elbow_statistic);
  }

  const std::size_t nm = spec.methods.size();
  const std::size_t runs = spec.runs;
  for (std::size_t d = 0; d < nd; ++d)
    for (const auto& m : spec.methods) {
      MethodReport entry;
      entry.dataset = spec.datasets[d].name;
      entry.method = m;
      entry.k = ks[d];
      entry.runs.resize(runs);
      report.entries.push_back(std::move(entry));
    }

  parallel_for(nd * nm * runs, spec.jobs, [&](std::size_t task) {
    const std::size_t d = task / (nm * runs);
    const std::size_t m = (task / runs) % nm;
    const std::size_t r = task % runs;
    const std::string& method = spec.methods[m];
    RunRecord& record = report.entries[d * nm + m].runs[r];
    record.seed = spec.base_seed + r;
    const auto start = std::chrono::steady_clock::now();
    try {
      ClusteringResult result;
      if (method == "dek") {
        DekConfig cfg;
        cfg.k = ks[d];
        cfg.de = spec.de;
        cfg.de.seed = record.seed;
        cfg.variant = spec.variant;
        result = run_dek(data[d], cfg);
      } else if (method == "hc") {
        HierConfig cfg = spec.hier;
        cfg.k = ks[d];
        result = hierarchical_cluster(data[d], matrices[d], cfg);
      } else {
        LloydConfig cfg = spec.lloyd;
        cfg.k = ks[d];
        cfg.seed = record.seed;
        cfg.seeding = method == "km++" ? Seeding::kmeans_plus_plus : Seeding::uniform_random_rows;
        result = lloyd_cluster(data[d], cfg);
      }
      record.metrics = evaluate(data[d], matrices[d], result, spec.metric_distance);
    } catch (const std::exception& e) {
      record.ok = false;
      record.error = e.what();
    }
    record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });

  for (auto& entry : report.entries) {
    entry.dbi = aggregate(entry.runs, &MetricReport::dbi, true);
    entry.sc = aggregate(entry.runs, &MetricReport::sc, false);
    entry.dvi = aggregate(entry.runs, &MetricReport::dvi, false);
    entry.failed = static_cast<std::size_t>(std::count_if(entry.runs.begin(), entry.runs.end(), [](const RunRecord& r) { return !r.ok; }));
  }
  return report;
}

nlohmann::json report_to_json(const RunReport& report, bool include_timing) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : report.entries) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : e.runs) {
      nlohmann::json item = {{"seed", r.seed}, {"ok", r.ok}};
      if (r.ok) {
        item["dbi"] = finite_or_null(r.metrics.dbi);
        item["sc"] = finite_or_null(r.metrics.sc);
        item["dvi"] = finite_or_null(r.metrics.dvi);
        item["sse"] = finite_or_null(r.metrics.sse);
        item["k_effective"] = r.metrics.k_effective;
        item["degenerate_centroids"] = r.metrics.degenerate_centroids;
        item["zero_diameter"] = r.metrics.zero_diameter;
      } else {
        item["error"] = r.error;
      }
      if (include_timing) item["seconds"] = r.seconds;
      runs.push_back(std::move(item));
    }
    entries.push_back({{"dataset", e.dataset},
                       {"method", e.method},
                       {"k", e.k},
                       {"failed", e.failed},
                       {"dbi", aggregate_json(e.dbi)},
                       {"sc", aggregate_json(e.sc)},
                       {"dvi", aggregate_json(e.dvi)},
                       {"runs", std::move(runs)}});
  }
  nlohmann::json curves = nlohmann::json::array();
  for (const auto& c : report.elbow_curves) {
    if (!c) {
      curves.push_back(nullptr);
      continue;
    }
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : c->points) pts.push_back({{"k", p.k}, {"mean_sse", p.mean}, {"std_sse", p.std}, {"best_sse", p.best}});
    curves.push_back(std::move(pts));
  }
  return {{"config", report.config}, {"entries", std::move(entries)}, {"elbow_curves", std::move(curves)}};
}

std::string report_table(const RunReport& report) {
  std::vector<std::string> datasets, methods;
  for (const auto& e : report.entries) {
    if (std::find(datasets.begin(), datasets.end(), e.dataset) == datasets.end()) datasets.push_back(e.dataset);
    if (std::find(methods.begin(), methods.end(), e.method) == methods.end()) methods.push_back(e.method);
  }
  auto find = [&](const std::string& d, const std::string& m) -> const MethodReport* {
    for (const auto& e : report.entries)
      if (e.dataset == d && e.method == m) return &e;
    return nullptr;
  };

  std::size_t name_width = 9;
  for (const auto& d : datasets) name_width = std::max(name_width, d.size() + 2);
  constexpr int cell = 18;
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(name_width)) << "Dataset" << std::setw(8) << "Metric";
  for (const auto& m : methods) {
    std::string upper = m;
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    out << std::setw(cell) << upper;
  }
  out << "\n";

  for (const auto& d : datasets) {
    bool first = true;
    for (const MetricRow& row : kMetricRows) {
      // best mean in this row
      double best = std::numeric_limits<double>::quiet_NaN();
      for (const auto& m : methods)
        if (const MethodReport* e = find(d, m); e && (e->*row.field).count > 0) {
          const double v = (e->*row.field).mean;
          if (std::isnan(best) || (row.lower_is_better ? v < best : v > best)) best = v;
        }
      std::string k_note;
      if (first) {
        if (const MethodReport* e = find(d, methods.front())) k_note = " (K=" + std::to_string(e->k) + ")";
      }
      out << std::setw(static_cast<int>(name_width)) << (first ? d : "") << std::setw(8) << row.name;
      for (const auto& m : methods) {
        const MethodReport* e = find(d, m);
        std::ostringstream c;
        if (!e || (e->*row.field).count == 0) {
          c << "n/a";
        } else {
          const Aggregate& a = e->*row.field;
          c << std::fixed << std::setprecision(4) << a.mean << "±" << a.std;
          if (a.mean == best) c << "*";
        }
        // "±" is two bytes in UTF-8 but one column on screen
        const std::string text = c.str();
        const bool has_pm = text.find("±") != std::string::npos;
        out << std::setw(cell + (has_pm ? 1 : 0)) << text;
      }
      if (first) out << k_note;
      out << "\n";
      first = false;
    }
  }
  for (const auto& e : report.entries)
    if (e.failed > 0) out << "! " << e.dataset << "/" << e.method << ": " << e.failed << " failed run(s)\n";
  return out.str();
}

std::string report_csv(const RunReport& report) {
  std::ostringstream out;
  out << "dataset,method,k,metric,mean,std,best,count,failed\n";
  out << std::setprecision(17);
  for (const auto& e : report.entries)
    for (const MetricRow& row : kMetricRows) {
      const Aggregate& a = e.*row.field;
      out << e.dataset << "," << e.method << "," << e.k << "," << row.name << "," << a.mean << "," << a.std << ","
          << a.best << "," << a.count << "," << e.failed << "\n";
    }
  return out.str();
}

}  // namespace dek
