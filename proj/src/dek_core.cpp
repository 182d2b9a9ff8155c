#include "dek/dek_core.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "dek/error.hpp"
#include "dek/gower.hpp"

namespace dek {
namespace {

double cost(double distance, double sep, ObjectiveVariant variant, double epsilon_sep) {
  if (sep < epsilon_sep) return kPenalty;
  if (variant == ObjectiveVariant::stabilized) return distance / std::log1p(sep);
  const double denom = std::log(sep);
  if (denom == 0.0) return kPenalty;
  return distance / denom;
}

/// Separation of every centroid from the rest.
std::vector<double> separations(std::span<const PointView> centroids, std::span<const double> widths) {
  const std::size_t k = centroids.size();
  std::vector<double> sep(k, std::numeric_limits<double>::infinity());
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) {
      const double d = gower_unchecked(centroids[a], centroids[b], widths);
      sep[a] = std::min(sep[a], d);
      sep[b] = std::min(sep[b], d);
    }
  return sep;
}

/// Shared evaluation core. When `labels` is non-null the argmin per row is stored.
double evaluate(const Dataset& ds, std::span<const PointView> centroids, ObjectiveVariant variant, double epsilon_sep,
                std::size_t* labels) {
  const std::span<const double> widths(ds.range_widths());
  const std::vector<double> sep = separations(centroids, widths);
  const std::size_t k = centroids.size();
  double total = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const PointView row = ds.row(i);
    std::size_t best_j = 0;
    double best = cost(gower_unchecked(row, centroids[0], widths), sep[0], variant, epsilon_sep);
    for (std::size_t j = 1; j < k; ++j) {
      const double c = cost(gower_unchecked(row, centroids[j], widths), sep[j], variant, epsilon_sep);
      if (c < best) {
        best = c;
        best_j = j;
      }
    }
    if (labels) labels[i] = best_j;
    total += best;
  }
  return total;
}

std::vector<PointView> views_of(const CentroidMatrix& centroids, const Schema& schema) {
  std::vector<PointView> views;
  views.reserve(centroids.size());
  for (const MixedPoint& c : centroids) {
    if (c.continuous.size() != schema.continuous_count() || c.categorical.size() != schema.categorical_count())
      throw Error(ErrorCode::SchemaMismatch, "centroid shape does not match the schema");
    views.push_back(c.view());
  }
  return views;
}

/// Decodes a genome into views that borrow its continuous slots; categorical
/// argmax results go to `cats` (k * D_cat entries).
std::vector<PointView> decode_views(std::span<const double> genome, const Schema& schema, std::size_t k,
                                    std::vector<int>& cats) {
  const std::size_t dc = schema.continuous_count();
  const std::size_t dk = schema.categorical_count();
  const std::size_t stride = schema.expanded_dimension();
  const auto& counts = schema.choice_counts();
  cats.resize(k * dk);
  std::vector<PointView> views(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double* base = genome.data() + j * stride;
    std::size_t offset = dc;
    for (std::size_t l = 0; l < dk; ++l) {
      std::size_t arg = 0;
      for (std::size_t c = 1; c < counts[l]; ++c)
        if (base[offset + c] > base[offset + arg]) arg = c;
      cats[j * dk + l] = static_cast<int>(arg);
      offset += counts[l];
    }
    views[j] = {std::span<const double>(base, dc), std::span<const int>(cats.data() + j * dk, dk)};
  }
  return views;
}

void require_centroids(std::size_t k) {
  if (k < 2) throw Error(ErrorCode::NotEnoughCentroids, "separation needs at least 2 centroids, got " + std::to_string(k));
}

}  // namespace

std::string_view to_string(ObjectiveVariant v) noexcept {
  return v == ObjectiveVariant::stabilized ? "stabilized" : "paper_literal";
}

ObjectiveVariant parse_variant(std::string_view name) {
  if (name == "stabilized") return ObjectiveVariant::stabilized;
  if (name == "paper_literal") return ObjectiveVariant::paper_literal;
  throw Error(ErrorCode::InvalidConfig, "unknown objective variant '" + std::string(name) + "'");
}

std::size_t genome_length(const Schema& schema, std::size_t k) noexcept { return k * schema.expanded_dimension(); }

std::vector<double> encode(const CentroidMatrix& centroids, const Schema& schema) {
  const std::size_t dc = schema.continuous_count();
  const auto& counts = schema.choice_counts();
  std::vector<double> genome(genome_length(schema, centroids.size()), 0.0);
  const std::size_t stride = schema.expanded_dimension();
  for (std::size_t j = 0; j < centroids.size(); ++j) {
    const MixedPoint& c = centroids[j];
    if (c.continuous.size() != dc || c.categorical.size() != counts.size())
      throw Error(ErrorCode::SchemaMismatch, "centroid " + std::to_string(j) + " does not match the schema");
    double* base = genome.data() + j * stride;
    std::copy(c.continuous.begin(), c.continuous.end(), base);
    std::size_t offset = dc;
    for (std::size_t l = 0; l < counts.size(); ++l) {
      const int v = c.categorical[l];
      if (v < 0 || static_cast<std::size_t>(v) >= counts[l])
        throw Error(ErrorCode::UnknownCategory, "centroid " + std::to_string(j) + " has an invalid category index");
      base[offset + static_cast<std::size_t>(v)] = 1.0;
      offset += counts[l];
    }
  }
  return genome;
}

CentroidMatrix decode(std::span<const double> genome, const Schema& schema, std::size_t k) {
  if (genome.size() != genome_length(schema, k))
    throw Error(ErrorCode::LengthMismatch, "genome has " + std::to_string(genome.size()) + " entries, expected " +
                                               std::to_string(genome_length(schema, k)));
  std::vector<int> cats;
  const auto views = decode_views(genome, schema, k, cats);
  CentroidMatrix out(k);
  for (std::size_t j = 0; j < k; ++j) {
    out[j].continuous.assign(views[j].continuous.begin(), views[j].continuous.end());
    out[j].categorical.assign(views[j].categorical.begin(), views[j].categorical.end());
  }
  return out;
}

double separation(PointView centroid, std::span<const PointView> others, std::span<const double> widths) {
  double sep = std::numeric_limits<double>::infinity();
  for (const PointView& o : others) sep = std::min(sep, gower_unchecked(centroid, o, widths));
  return sep;
}

double phi(PointView point, PointView centroid, std::span<const PointView> others, std::span<const double> widths,
           ObjectiveVariant variant, double epsilon_sep) {
  if (others.empty()) throw Error(ErrorCode::NotEnoughCentroids, "phi needs at least one other centroid");
  return cost(gower_unchecked(point, centroid, widths), separation(centroid, others, widths), variant, epsilon_sep);
}

double objective(const Dataset& ds, const CentroidMatrix& centroids, ObjectiveVariant variant, double epsilon_sep) {
  require_centroids(centroids.size());
  const auto views = views_of(centroids, ds.schema());
  return evaluate(ds, views, variant, epsilon_sep, nullptr);
}

Assignment assign_by_phi(const Dataset& ds, const CentroidMatrix& centroids, ObjectiveVariant variant,
                         double epsilon_sep) {
  require_centroids(centroids.size());
  const auto views = views_of(centroids, ds.schema());
  Assignment out;
  out.labels.resize(ds.size());
  out.objective = evaluate(ds, views, variant, epsilon_sep, out.labels.data());
  return out;
}

ClusteringResult run_dek(const Dataset& ds, const DekConfig& cfg) {
  if (cfg.k < 2) throw Error(ErrorCode::InvalidConfig, "DEK needs K >= 2, got " + std::to_string(cfg.k));
  if (!(cfg.epsilon_sep > 0.0)) throw Error(ErrorCode::InvalidConfig, "epsilon_sep must be positive");
  if (ds.size() < cfg.k)
    throw Error(ErrorCode::TooFewRows, std::to_string(ds.size()) + " rows cannot form " + std::to_string(cfg.k) + " clusters");

  const auto start = std::chrono::steady_clock::now();
  const Schema& schema = ds.schema();
  de::DEConfig de_cfg = cfg.de;
  de_cfg.bounds = {de::Bounds{0.0, 1.0}};

  const auto fitness = [&](std::span<const double> genome) {
    std::vector<int> cats;
    const auto views = decode_views(genome, schema, cfg.k, cats);
    return evaluate(ds, views, cfg.variant, cfg.epsilon_sep, nullptr);
  };
  de::DEResult found = de::run(de_cfg, genome_length(schema, cfg.k), fitness);

  ClusteringResult result;
  result.method = "dek";
  result.k = cfg.k;
  result.seed = cfg.de.seed;
  result.centroids = decode(found.best, schema, cfg.k);
  Assignment a = assign_by_phi(ds, result.centroids, cfg.variant, cfg.epsilon_sep);
  result.assignment = std::move(a.labels);
  result.objective = a.objective;
  result.sizes = cluster_sizes(result.assignment, cfg.k);
  result.history = std::move(found.history);
  result.iterations = de_cfg.max_generations;
  result.converged = true;
  result.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace dek
