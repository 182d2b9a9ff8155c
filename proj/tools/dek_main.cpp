#include <cstdint>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dek/baselines.hpp"
#include "dek/bench.hpp"
#include "dek/dataset.hpp"
#include "dek/dek_core.hpp"
#include "dek/error.hpp"
#include "dek/gower.hpp"
#include "dek/io.hpp"
#include "dek/metrics.hpp"
#include "dek/model_selection.hpp"
#include "dek/parallel.hpp"
#include "dek/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kRuntime = 3 };

/// Bad flag values discovered after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t random_seed() {
  std::random_device rd;
  const std::uint64_t hi = rd();
  const std::uint64_t lo = rd();
  // 53 bits keep the seed exact for JSON readers that parse numbers as doubles
  return ((hi << 32) | lo) & ((std::uint64_t{1} << 53) - 1);
}

/// A flag whose value, when given on the command line, overrides one config key.
struct Override {
  std::string key;
  CLI::Option* option;
  std::function<json()> value;
};

template <class T>
void bind_option(CLI::App* app, std::vector<Override>& out, const std::string& flag, const std::string& key, T& storage,
          const std::string& help) {
  CLI::Option* opt = app->add_option(flag, storage, help);
  out.push_back({key, opt, [&storage] { return json(storage); }});
}

void apply_overrides(json& config, const std::vector<Override>& overrides) {
  for (const auto& o : overrides)
    if (o.option->count() > 0) config[o.key] = o.value();
}

/// Merges a config file into `config`. The file may be a bare config object or
/// a previously written artifact holding one under "config".
void merge_config_file(json& config, const std::string& path) {
  json doc;
  try {
    doc = json::parse(dek::read_file(path));
  } catch (const json::parse_error& e) {
    throw UsageError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (doc.is_object() && doc.contains("config") && doc["config"].is_object()) doc = doc["config"];
  if (!doc.is_object()) throw UsageError("config file " + path + " must hold a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!config.contains(it.key())) throw UsageError("config file " + path + " has unknown key '" + it.key() + "'");
    config[it.key()] = it.value();
  }
}

template <class T>
T get(const json& config, const std::string& key) {
  try {
    return config.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError("config key '" + key + "' has an invalid value: " + config.at(key).dump());
  }
}

std::uint64_t resolve_seed(json& config) {
  if (config["seed"].is_null()) config["seed"] = random_seed();
  return get<std::uint64_t>(config, "seed");
}

dek::de::Mutation parse_mutation(const std::string& name) {
  if (name == "rand1") return dek::de::Mutation::rand1;
  if (name == "best1") return dek::de::Mutation::best1;
  throw UsageError("unknown mutation '" + name + "' (expected rand1 or best1)");
}

dek::Seeding parse_seeding(const std::string& name) {
  if (name == "kmeans++") return dek::Seeding::kmeans_plus_plus;
  if (name == "uniform") return dek::Seeding::uniform_random_rows;
  throw UsageError("unknown seeding '" + name + "' (expected kmeans++ or uniform)");
}

dek::PrototypeUpdate parse_update(const std::string& name) {
  if (name == "median_mode") return dek::PrototypeUpdate::median_mode;
  if (name == "euclidean_onehot") return dek::PrototypeUpdate::euclidean_onehot;
  throw UsageError("unknown update '" + name + "' (expected median_mode or euclidean_onehot)");
}

dek::ElbowStatistic parse_statistic(const std::string& name) {
  if (name == "mean") return dek::ElbowStatistic::mean;
  if (name == "best") return dek::ElbowStatistic::best;
  throw UsageError("unknown statistic '" + name + "' (expected mean or best)");
}

/// Converts library parse errors for enum-valued keys into usage errors.
template <class Fn>
auto enum_value(Fn&& fn) {
  try {
    return fn();
  } catch (const dek::Error& e) {
    throw UsageError(e.what());
  }
}

dek::de::DEConfig de_config(const json& config, std::uint64_t seed, std::size_t eval_jobs) {
  dek::de::DEConfig de;
  de.population = get<std::size_t>(config, "np");
  de.scale = get<double>(config, "f");
  de.crossover = get<double>(config, "cr");
  de.max_generations = get<std::size_t>(config, "max_gs");
  de.mutation = parse_mutation(get<std::string>(config, "mutation"));
  de.seed = seed;
  de.eval_jobs = eval_jobs;
  if (de.population < 4) throw UsageError("np must be at least 4");
  if (de.max_generations < 1) throw UsageError("max_gs must be at least 1");
  if (!(de.scale >= 0.0 && de.scale <= 1.0)) throw UsageError("f must lie in [0, 1]");
  if (!(de.crossover >= 0.0 && de.crossover <= 1.0)) throw UsageError("cr must lie in [0, 1]");
  return de;
}

dek::LloydConfig lloyd_config(const json& config) {
  dek::LloydConfig lloyd;
  lloyd.max_iters = get<std::size_t>(config, "max_iters");
  lloyd.tol = get<double>(config, "tol");
  lloyd.seeding = parse_seeding(get<std::string>(config, "seeding"));
  lloyd.update = parse_update(get<std::string>(config, "update"));
  if (lloyd.max_iters < 1) throw UsageError("max_iters must be at least 1");
  return lloyd;
}

// ---------------------------------------------------------------------------
// option groups shared by several subcommands

struct DeFlags {
  std::size_t np = 60;
  double f = 0.7;
  double cr = 0.8;
  std::size_t max_gs = 1500;
  std::string mutation = "rand1";
  std::string variant = "stabilized";
  double epsilon_sep = 1e-9;

  void add(CLI::App* app, std::vector<Override>& ov) {
    bind_option(app, ov, "--np", "np", np, "DE population size (default 60)");
    bind_option(app, ov, "--f", "f", f, "DE differential weight F in [0,1] (default 0.7)");
    bind_option(app, ov, "--cr", "cr", cr, "DE crossover probability Cr in [0,1] (default 0.8)");
    bind_option(app, ov, "--max-gs", "max_gs", max_gs, "DE generations (default 1500)");
    bind_option(app, ov, "--mutation", "mutation", mutation, "DE mutation: rand1 or best1 (default rand1)");
    bind_option(app, ov, "--variant", "variant", variant, "DEK objective: stabilized or paper_literal (default stabilized)");
    bind_option(app, ov, "--epsilon-sep", "epsilon_sep", epsilon_sep,
         "separation below which a centroid is penalized (default 1e-9)");
  }
  json values() const {
    return {{"np", np},           {"f", f},
            {"cr", cr},           {"max_gs", max_gs},
            {"mutation", mutation}, {"variant", variant},
            {"epsilon_sep", epsilon_sep}};
  }
};

struct LloydFlags {
  std::size_t max_iters = 300;
  double tol = 0.0;
  std::string seeding = "kmeans++";
  std::string update = "median_mode";

  void add(CLI::App* app, std::vector<Override>& ov) {
    bind_option(app, ov, "--max-iters", "max_iters", max_iters, "Lloyd iteration cap (default 300)");
    bind_option(app, ov, "--tol", "tol", tol, "Lloyd stops once no centroid moves further than this (default 0)");
    bind_option(app, ov, "--seeding", "seeding", seeding, "Lloyd seeding: kmeans++ or uniform (default kmeans++)");
    bind_option(app, ov, "--update", "update", update,
         "Lloyd prototype update: median_mode or euclidean_onehot (default median_mode)");
  }
  json values() const {
    return {{"max_iters", max_iters}, {"tol", tol}, {"seeding", seeding}, {"update", update}};
  }
};

struct Common {
  std::size_t jobs = 1;
  bool record_timing = false;

  void add(CLI::App* app, bool timing) {
    app->add_option("--jobs", jobs, "worker threads (default: DEK_JOBS or hardware concurrency)")
        ->check(CLI::PositiveNumber);
    if (timing) app->add_flag("--record-timing", record_timing, "include wall-clock timings in the output artifact");
  }
};

void add_data_flags(CLI::App* app, std::string& data, std::string& schema) {
  app->add_option("--data", data, "CSV data file")->required()->check(CLI::ExistingFile);
  app->add_option("--schema", schema, "JSON schema file")->required()->check(CLI::ExistingFile);
}

std::string join_counts(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

std::string format_value(double v) {
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

void write_history_csv(const fs::path& path, const std::string& header, const std::vector<double>& history) {
  std::ostringstream out;
  out << header << "\n" << std::setprecision(17);
  for (std::size_t i = 0; i < history.size(); ++i) out << i + 1 << "," << history[i] << "\n";
  dek::write_file_atomic(path, out.str());
}

/// Centroids in the units of the input data (continuous slots undo the min-max scaling).
dek::CentroidMatrix to_data_units(const dek::CentroidMatrix& centroids, const dek::Dataset& raw) {
  dek::CentroidMatrix out = centroids;
  for (auto& c : out)
    for (std::size_t k = 0; k < c.continuous.size(); ++k) {
      const dek::Range r = raw.ranges()[k];
      if (r.width() > 0.0) c.continuous[k] = r.min + c.continuous[k] * r.width();
      else c.continuous[k] = r.min;
    }
  return out;
}

// ---------------------------------------------------------------------------
// validate

struct ValidateCmd {
  std::string data, schema;

  void add(CLI::App& root) {
    CLI::App* app = root.add_subcommand("validate", "load and validate a dataset against its schema");
    add_data_flags(app, data, schema);
    app->callback([this] { run(); });
  }
  void run() {
    const dek::Dataset ds = dek::load_dataset(data, schema);
    const dek::Schema& s = ds.schema();
    std::cout << "n=" << ds.size() << " D_con=" << s.continuous_count() << " D_cat=" << s.categorical_count()
              << " choices=[" << join_counts(s.choice_counts()) << "]\n";
    std::cout << "m=" << s.dimension() << " expanded_dim=" << s.expanded_dimension() << " schema_hash=" << s.hash()
              << "\n";
  }
};

// ---------------------------------------------------------------------------
// cluster

struct ClusterCmd {
  std::string data, schema, config_path, out, trace, dump;
  std::string method = "dek";
  std::size_t k = 2;
  std::uint64_t seed = 0;
  std::string linkage = "average";
  std::string metric_distance = "gower";
  DeFlags de;
  LloydFlags lloyd;
  Common common;
  std::vector<Override> ov;
  CLI::App* app = nullptr;

  void add(CLI::App& root) {
    app = root.add_subcommand("cluster", "run one clustering and write its result as JSON");
    add_data_flags(app, data, schema);
    bind_option(app, ov, "--method", "method", method, "dek, lloyd or hier (default dek)");
    bind_option(app, ov, "--k", "k", k, "number of clusters (default 2; dek needs at least 2)");
    bind_option(app, ov, "--seed", "seed", seed, "random seed; drawn at random and recorded when omitted");
    app->add_option("--config", config_path, "JSON config, or a previous result whose config is replayed")
        ->check(CLI::ExistingFile);
    app->add_option("--out", out, "result JSON path (default: print to stdout)");
    app->add_option("--trace", trace, "write the per-step objective history as CSV");
    app->add_option("--dump-distances", dump, "write the pairwise Gower matrix as CSV");
    de.add(app, ov);
    lloyd.add(app, ov);
    bind_option(app, ov, "--linkage", "linkage", linkage, "hier linkage: single, complete or average (default average)");
    bind_option(app, ov, "--metric-distance", "metric_distance", metric_distance,
         "distance for the reported indices: gower or euclidean_onehot (default gower)");
    common.add(app, true);
    app->callback([this] { run(); });
  }

  json defaults() const {
    json c = {{"method", "dek"}, {"k", 2}, {"seed", nullptr}, {"linkage", "average"}, {"metric_distance", "gower"}};
    c.update(de.values());
    c.update(lloyd.values());
    return c;
  }

  void run() {
    json config = defaults();
    if (!config_path.empty()) merge_config_file(config, config_path);
    apply_overrides(config, ov);

    const std::string m = get<std::string>(config, "method");
    if (m != "dek" && m != "lloyd" && m != "hier") throw UsageError("unknown method '" + m + "' (expected dek, lloyd or hier)");
    const std::size_t kk = get<std::size_t>(config, "k");
    if (m == "dek" && kk < 2) throw UsageError("dek needs --k >= 2 for its separation term");
    if (kk < 1) throw UsageError("--k must be at least 1");
    const auto kind = enum_value([&] { return dek::parse_distance_kind(get<std::string>(config, "metric_distance")); });
    const auto variant = enum_value([&] { return dek::parse_variant(get<std::string>(config, "variant")); });
    const auto link = enum_value([&] { return dek::parse_linkage(get<std::string>(config, "linkage")); });
    const std::uint64_t s = resolve_seed(config);
    const dek::de::DEConfig de_cfg = de_config(config, s, common.jobs);
    dek::LloydConfig lloyd_cfg = lloyd_config(config);
    const double eps = get<double>(config, "epsilon_sep");
    if (!(eps > 0.0)) throw UsageError("epsilon_sep must be positive");

    const dek::Dataset raw = dek::load_dataset(data, schema);
    const dek::Dataset ds = dek::normalize(raw);

    dek::ClusteringResult result;
    if (m == "dek") {
      dek::DekConfig cfg;
      cfg.k = kk;
      cfg.de = de_cfg;
      cfg.variant = variant;
      cfg.epsilon_sep = eps;
      result = dek::run_dek(ds, cfg);
    } else if (m == "lloyd") {
      lloyd_cfg.k = kk;
      lloyd_cfg.seed = s;
      result = dek::lloyd_cluster(ds, lloyd_cfg);
    } else {
      dek::HierConfig cfg;
      cfg.k = kk;
      cfg.linkage = link;
      result = dek::hierarchical_cluster(ds, dek::pairwise_matrix(ds, common.jobs), cfg);
      result.seed = s;
    }

    const dek::DistanceMatrix gower = dek::pairwise_matrix(ds, common.jobs);
    if (!dump.empty()) dek::write_matrix_csv(gower, dump);
    if (!trace.empty()) {
      const char* header = m == "dek" ? "generation,best_objective" : m == "lloyd" ? "step,objective" : "merge,distance";
      write_history_csv(trace, header, result.history);
    }

    dek::ClusteringResult reported = result;
    reported.centroids = to_data_units(result.centroids, raw);
    json doc = dek::result_to_json(reported, raw.schema(), config, common.record_timing);
    std::optional<dek::MetricReport> metrics;
    try {
      metrics = dek::evaluate(ds, kind == dek::DistanceKind::gower ? gower : dek::euclidean_onehot_matrix(ds), result, kind);
    } catch (const dek::Error& e) {
      if (e.code() != dek::ErrorCode::TooFewClusters) throw;
    }
    if (metrics) {
      doc["metrics"] = {{"dbi", metrics->dbi < 1e308 ? json(metrics->dbi) : json(nullptr)},
                        {"sc", metrics->sc},
                        {"dvi", metrics->dvi < 1e308 ? json(metrics->dvi) : json(nullptr)},
                        {"sse", metrics->sse},
                        {"k_effective", metrics->k_effective},
                        {"degenerate_centroids", metrics->degenerate_centroids},
                        {"zero_diameter", metrics->zero_diameter},
                        {"distance", std::string(dek::to_string(kind))}};
    }

    const std::string text = doc.dump(2) + "\n";
    std::ostream& info = out.empty() ? std::cerr : std::cout;
    if (out.empty())
      std::cout << text;
    else
      dek::write_file_atomic(out, text);

    info << "method=" << result.method << " K=" << result.k << " seed=" << s
         << " objective=" << format_value(result.objective) << " sizes=[" << join_counts(result.sizes) << "]\n";
    if (metrics)
      info << "DBI=" << format_value(metrics->dbi) << (metrics->degenerate_centroids ? " (coincident prototypes)" : "")
           << " SC=" << format_value(metrics->sc) << " DVI=" << format_value(metrics->dvi)
           << (metrics->zero_diameter ? " (zero diameter)" : "") << " SSE=" << format_value(metrics->sse)
           << " K_effective=" << metrics->k_effective << "\n";
    else
      info << "validity indices need at least 2 nonempty clusters\n";
  }
};

// ---------------------------------------------------------------------------
// sweep-k

struct SweepCmd {
  std::string data, schema, out, curve_out, config_path;
  std::string method = "lloyd";
  std::size_t k_min = 2, k_max = 8, runs = 1;
  std::uint64_t seed = 0;
  std::string statistic = "mean";
  std::string distance = "gower";
  DeFlags de;
  LloydFlags lloyd;
  Common common;
  std::vector<Override> ov;

  void add(CLI::App& root) {
    CLI::App* app = root.add_subcommand("sweep-k", "SSE curve over a K range and the elbow choice");
    add_data_flags(app, data, schema);
    bind_option(app, ov, "--method", "method", method, "lloyd or dek (default lloyd)");
    bind_option(app, ov, "--k-min", "k_min", k_min, "smallest K (default 2)");
    bind_option(app, ov, "--k-max", "k_max", k_max, "largest K (default 8)");
    bind_option(app, ov, "--runs", "runs", runs, "seeded runs per K (default 1)");
    bind_option(app, ov, "--seed", "seed", seed, "base seed; run r uses seed + r; drawn at random when omitted");
    bind_option(app, ov, "--statistic", "statistic", statistic, "curve fed to the elbow rule: mean or best (default mean)");
    bind_option(app, ov, "--distance", "distance", distance, "SSE distance: gower or euclidean_onehot (default gower)");
    app->add_option("--config", config_path, "JSON config, or a previous sweep artifact to replay")
        ->check(CLI::ExistingFile);
    app->add_option("--out", out, "write chosen K, curve and config as JSON");
    app->add_option("--curve", curve_out, "write the curve as CSV (k,mean_sse,std_sse,best_sse)");
    de.add(app, ov);
    lloyd.add(app, ov);
    common.add(app, false);
    app->callback([this] { run(); });
  }

  void run() {
    json config = {{"method", "lloyd"}, {"k_min", 2},        {"k_max", 8},
                   {"runs", 1},         {"seed", nullptr},   {"statistic", "mean"},
                   {"distance", "gower"}};
    config.update(de.values());
    config.update(lloyd.values());
    if (!config_path.empty()) merge_config_file(config, config_path);
    apply_overrides(config, ov);

    dek::SweepOptions o;
    const std::string m = get<std::string>(config, "method");
    if (m == "lloyd")
      o.method = dek::SweepMethod::lloyd;
    else if (m == "dek")
      o.method = dek::SweepMethod::dek;
    else
      throw UsageError("unknown sweep method '" + m + "' (expected lloyd or dek)");
    o.k_min = get<std::size_t>(config, "k_min");
    o.k_max = get<std::size_t>(config, "k_max");
    o.runs_per_k = get<std::size_t>(config, "runs");
    o.base_seed = resolve_seed(config);
    o.distance = enum_value([&] { return dek::parse_distance_kind(get<std::string>(config, "distance")); });
    o.dek.de = de_config(config, o.base_seed, 1);
    o.dek.variant = enum_value([&] { return dek::parse_variant(get<std::string>(config, "variant")); });
    o.dek.epsilon_sep = get<double>(config, "epsilon_sep");
    o.lloyd = lloyd_config(config);
    o.jobs = common.jobs;
    const auto stat = parse_statistic(get<std::string>(config, "statistic"));
    if (o.k_min < 2 || o.k_min >= o.k_max) throw UsageError("need 2 <= --k-min < --k-max");

    const dek::Dataset ds = dek::normalize(dek::load_dataset(data, schema));
    const dek::SseCurve curve = dek::sweep_k(ds, o);
    const std::size_t chosen = dek::pick_elbow(curve, stat);

    std::cout << std::left << std::setw(4) << "K" << std::setw(16) << "mean_sse" << std::setw(16) << "std_sse"
              << "best_sse\n";
    for (const auto& p : curve.points)
      std::cout << std::setw(4) << p.k << std::setw(16) << format_value(p.mean) << std::setw(16) << format_value(p.std)
                << format_value(p.best) << "\n";
    std::cout << "chosen K = " << chosen << "\n";

    if (!curve_out.empty()) dek::write_file_atomic(curve_out, dek::curve_csv(curve));
    if (!out.empty()) {
      json pts = json::array();
      for (const auto& p : curve.points)
        pts.push_back({{"k", p.k}, {"mean_sse", p.mean}, {"std_sse", p.std}, {"best_sse", p.best}, {"values", p.values}});
      const json doc = {{"chosen_k", chosen}, {"schema_hash", ds.schema().hash()}, {"curve", pts}, {"config", config}};
      dek::write_file_atomic(out, doc.dump(2) + "\n");
    }
  }
};

// ---------------------------------------------------------------------------
// bench

struct BenchCmd {
  std::vector<std::string> data, schema, names;
  std::string out, table_out, csv_out, methods = "dek,km,km++,hc";
  std::size_t k = 0, runs = 20;
  std::uint64_t seed = 0;
  std::size_t elbow_k_min = 2, elbow_k_max = 8, elbow_runs = 5;
  std::string elbow_statistic = "best", metric_distance = "gower", linkage = "average";
  DeFlags de;
  LloydFlags lloyd;
  Common common;
  CLI::Option* k_opt = nullptr;
  CLI::Option* seed_opt = nullptr;

  void add(CLI::App& root) {
    CLI::App* app = root.add_subcommand("bench", "repeated seeded runs of several methods with aggregated indices");
    app->add_option("--data", data, "CSV data file (repeat for several datasets)")->required()->check(CLI::ExistingFile);
    app->add_option("--schema", schema, "JSON schema file, one per --data or a single shared one")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--name", names, "dataset display name, one per --data (default: file stem)");
    app->add_option("--methods", methods, "comma-separated subset of dek,km,km++,hc (default all)");
    k_opt = app->add_option("--k", k, "fixed K for every dataset (default: chosen by the SSE elbow)");
    app->add_option("--runs", runs, "seeded runs per method (default 20)")->check(CLI::PositiveNumber);
    seed_opt = app->add_option("--seed", seed, "base seed; run r uses seed + r; drawn at random when omitted");
    app->add_option("--elbow-k-min", elbow_k_min, "elbow sweep smallest K (default 2)");
    app->add_option("--elbow-k-max", elbow_k_max, "elbow sweep largest K (default 8)");
    app->add_option("--elbow-runs", elbow_runs, "Lloyd runs per K in the elbow sweep (default 5)");
    app->add_option("--elbow-statistic", elbow_statistic, "elbow curve statistic: mean or best (default best)");
    app->add_option("--metric-distance", metric_distance, "distance for the indices: gower or euclidean_onehot");
    app->add_option("--linkage", linkage, "hc linkage: single, complete or average (default average)");
    std::vector<Override> unused;
    de.add(app, unused);
    lloyd.add(app, unused);
    app->add_option("--out", out, "report JSON path");
    app->add_option("--table", table_out, "write the comparison table to this file");
    app->add_option("--csv", csv_out, "write the long-form CSV summary to this file");
    common.add(app, true);
    app->callback([this] { run(); });
  }

  void run() {
    if (schema.size() != 1 && schema.size() != data.size())
      throw UsageError("give one --schema per --data, or a single shared --schema");
    if (!names.empty() && names.size() != data.size()) throw UsageError("give one --name per --data");

    dek::BenchSpec spec;
    spec.methods.clear();
    std::stringstream list(methods);
    for (std::string item; std::getline(list, item, ',');)
      if (!item.empty()) spec.methods.push_back(item);
    for (const auto& m : spec.methods)
      if (m != "dek" && m != "km" && m != "km++" && m != "hc") throw UsageError("unknown method '" + m + "'");
    if (spec.methods.empty()) throw UsageError("--methods is empty");
    if (k_opt->count() > 0) {
      if (k < 1) throw UsageError("--k must be at least 1");
      spec.k = k;
    }
    spec.runs = runs;
    spec.base_seed = seed_opt->count() > 0 ? seed : random_seed();
    spec.variant = enum_value([&] { return dek::parse_variant(de.variant); });
    spec.de = de_config(json(de.values()), spec.base_seed, 1);
    spec.lloyd = lloyd_config(json(lloyd.values()));
    spec.hier.linkage = enum_value([&] { return dek::parse_linkage(linkage); });
    spec.elbow_k_min = elbow_k_min;
    spec.elbow_k_max = elbow_k_max;
    spec.elbow_runs = elbow_runs;
    spec.elbow_statistic = parse_statistic(elbow_statistic);
    spec.metric_distance = enum_value([&] { return dek::parse_distance_kind(metric_distance); });
    spec.jobs = common.jobs;

    for (std::size_t d = 0; d < data.size(); ++d) {
      const std::string name = names.empty() ? fs::path(data[d]).stem().string() : names[d];
      spec.datasets.push_back({name, dek::load_dataset(data[d], schema.size() == 1 ? schema[0] : schema[d])});
    }

    const dek::RunReport report = dek::run_bench(spec);
    json doc = dek::report_to_json(report, common.record_timing);
    doc["config"]["epsilon_sep"] = de.epsilon_sep;
    doc["config"]["lloyd_seeding_per_method"] = {{"km", "uniform"}, {"km++", "kmeans++"}};
    const std::string table = dek::report_table(report);
    std::cout << table;
    if (!out.empty()) dek::write_file_atomic(out, doc.dump(2) + "\n");
    if (!table_out.empty()) dek::write_file_atomic(table_out, table);
    if (!csv_out.empty()) dek::write_file_atomic(csv_out, dek::report_csv(report));
  }
};

// ---------------------------------------------------------------------------
// synth

struct SynthCmd {
  dek::SynthSpec spec;
  std::string choices = "3,3,3";
  std::string data_out, schema_out, labels_out;
  CLI::Option* seed_opt = nullptr;

  void add(CLI::App& root) {
    CLI::App* app = root.add_subcommand("synth", "generate a planted-partition mixed dataset");
    app->add_option("--n-per-cluster", spec.n_per_cluster, "rows per planted cluster (default 100)");
    app->add_option("--k-true", spec.k_true, "planted clusters (default 3)");
    app->add_option("--d-con", spec.d_con, "continuous columns (default 4)");
    app->add_option("--choices", choices, "comma-separated category counts, empty for none (default 3,3,3)");
    app->add_option("--separation", spec.separation, "center spacing in within-cluster standard deviations (default 6)");
    app->add_option("--purity", spec.purity, "probability of the cluster's modal category (default 0.95)");
    seed_opt = app->add_option("--seed", spec.seed, "generator seed; drawn at random and printed when omitted");
    app->add_option("--out-data", data_out, "CSV output path")->required();
    app->add_option("--out-schema", schema_out, "schema JSON output path")->required();
    app->add_option("--out-labels", labels_out, "planted labels CSV output path");
    app->callback([this] { run(); });
  }

  void run() {
    spec.choice_counts.clear();
    std::stringstream list(choices);
    for (std::string item; std::getline(list, item, ',');) {
      if (item.empty()) continue;
      try {
        std::size_t used = 0;
        const unsigned long v = std::stoul(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        spec.choice_counts.push_back(v);
      } catch (const std::exception&) {
        throw UsageError("--choices entry '" + item + "' is not a count");
      }
    }
    if (seed_opt->count() == 0) spec.seed = random_seed();
    const dek::SynthData out = enum_value([&] { return dek::generate(spec); });
    dek::write_file_atomic(data_out, dek::to_csv(out.dataset));
    dek::save_schema(out.dataset.schema(), schema_out);
    if (!labels_out.empty()) {
      std::string text = "label\n";
      for (std::size_t l : out.labels) text += std::to_string(l) + "\n";
      dek::write_file_atomic(labels_out, text);
    }
    std::cout << "n=" << out.dataset.size() << " D_con=" << spec.d_con << " D_cat=" << spec.choice_counts.size()
              << " K_true=" << spec.k_true << " seed=" << spec.seed << "\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App root{"Mixed-data clustering with differential-evolution centroid search"};
  root.require_subcommand(1);
  root.set_help_all_flag("--help-all", "print help for every subcommand");

  ValidateCmd validate;
  ClusterCmd cluster;
  SweepCmd sweep;
  BenchCmd bench;
  SynthCmd synth;
  validate.add(root);
  cluster.add(root);
  sweep.add(root);
  bench.add(root);
  synth.add(root);
  const std::size_t jobs = dek::default_jobs();
  cluster.common.jobs = sweep.common.jobs = bench.common.jobs = jobs;

  try {
    root.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = root.exit(e);
    return code == 0 ? kOk : kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const dek::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.is_data_error()) return kData;
    switch (e.code()) {
      case dek::ErrorCode::InvalidConfig:
      case dek::ErrorCode::InvalidRange:
      case dek::ErrorCode::InvalidSpec:
        return kUsage;
      default:
        return kRuntime;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kOk;
}
