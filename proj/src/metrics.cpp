#include "dek/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dek/baselines.hpp"
#include "dek/error.hpp"

namespace dek {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::size_t> require_clusters(std::span<const std::size_t> assignment, std::size_t& k) {
  auto labels = compact_labels(assignment, &k);
  if (k < 2) throw Error(ErrorCode::TooFewClusters, "need at least 2 nonempty clusters, got " + std::to_string(k));
  return labels;
}

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s);
}

std::vector<std::vector<double>> onehot_means(const std::vector<std::vector<double>>& rows,
                                              const std::vector<std::size_t>& labels, std::size_t k) {
  const std::size_t dim = rows.empty() ? 0 : rows.front().size();
  std::vector<std::vector<double>> means(k, std::vector<double>(dim, 0.0));
  const auto sizes = cluster_sizes(labels, k);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t d = 0; d < dim; ++d) means[labels[i]][d] += rows[i][d];
  for (std::size_t j = 0; j < k; ++j)
    for (double& v : means[j]) v /= static_cast<double>(sizes[j]);
  return means;
}

}  // namespace

std::string_view to_string(DistanceKind k) noexcept { return k == DistanceKind::gower ? "gower" : "euclidean_onehot"; }

DistanceKind parse_distance_kind(std::string_view name) {
  if (name == "gower") return DistanceKind::gower;
  if (name == "euclidean_onehot") return DistanceKind::euclidean_onehot;
  throw Error(ErrorCode::InvalidConfig, "unknown distance kind '" + std::string(name) + "'");
}

std::vector<std::size_t> compact_labels(std::span<const std::size_t> assignment, std::size_t* k_effective) {
  std::vector<std::size_t> remap;
  std::vector<std::size_t> out(assignment.size());
  constexpr std::size_t unset = std::numeric_limits<std::size_t>::max();
  std::size_t next = 0;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    const std::size_t a = assignment[i];
    if (a >= remap.size()) remap.resize(a + 1, unset);
    if (remap[a] == unset) remap[a] = next++;
    out[i] = remap[a];
  }
  if (k_effective) *k_effective = next;
  return out;
}

IndexValue davies_bouldin(const Dataset& ds, std::span<const std::size_t> assignment, DistanceKind kind) {
  std::size_t k = 0;
  const auto labels = require_clusters(assignment, k);
  const auto sizes = cluster_sizes(labels, k);
  std::vector<double> scatter(k, 0.0);
  std::vector<std::vector<double>> between(k, std::vector<double>(k, 0.0));

  if (kind == DistanceKind::gower) {
    const std::span<const double> widths(ds.range_widths());
    const auto protos = cluster_prototypes(ds, labels, k);
    for (std::size_t i = 0; i < ds.size(); ++i)
      scatter[labels[i]] += gower_unchecked(ds.row(i), protos[labels[i]]->view(), widths);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) between[a][b] = gower_unchecked(protos[a]->view(), protos[b]->view(), widths);
  } else {
    const auto rows = onehot_rows(ds);
    const auto means = onehot_means(rows, labels, k);
    for (std::size_t i = 0; i < rows.size(); ++i) scatter[labels[i]] += euclidean(rows[i], means[labels[i]]);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) between[a][b] = euclidean(means[a], means[b]);
  }
  for (std::size_t j = 0; j < k; ++j) scatter[j] /= static_cast<double>(sizes[j]);

  IndexValue out;
  double total = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    double worst = 0.0;
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      if (between[a][b] == 0.0) {
        out.flagged = true;
        worst = kInf;
      } else {
        worst = std::max(worst, (scatter[a] + scatter[b]) / between[a][b]);
      }
    }
    total += worst;
  }
  out.value = total / static_cast<double>(k);
  return out;
}

double silhouette(const DistanceMatrix& distances, std::span<const std::size_t> assignment) {
  std::size_t k = 0;
  const auto labels = require_clusters(assignment, k);
  const std::size_t n = labels.size();
  if (distances.size() != n) throw Error(ErrorCode::SchemaMismatch, "distance matrix size does not match assignment");
  const auto sizes = cluster_sizes(labels, k);

  double total = 0.0;
  std::vector<double> sums(k);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t own = labels[i];
    if (sizes[own] == 1) continue;  // s(i) = 0
    std::fill(sums.begin(), sums.end(), 0.0);
    const auto row = distances.row(i);
    for (std::size_t j = 0; j < n; ++j) sums[labels[j]] += row[j];
    const double a = sums[own] / static_cast<double>(sizes[own] - 1);
    double b = kInf;
    for (std::size_t c = 0; c < k; ++c)
      if (c != own) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

IndexValue dunn(const DistanceMatrix& distances, std::span<const std::size_t> assignment) {
  std::size_t k = 0;
  const auto labels = require_clusters(assignment, k);
  const std::size_t n = labels.size();
  if (distances.size() != n) throw Error(ErrorCode::SchemaMismatch, "distance matrix size does not match assignment");
  double inter = kInf;
  double diameter = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distances(i, j);
      if (labels[i] == labels[j])
        diameter = std::max(diameter, d);
      else
        inter = std::min(inter, d);
    }
  if (diameter == 0.0) return {kInf, true};
  return {inter / diameter, false};
}

double sse(const Dataset& ds, const ClusteringResult& result, DistanceKind kind) {
  double total = 0.0;
  if (kind == DistanceKind::gower) {
    const std::span<const double> widths(ds.range_widths());
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const double d = gower_unchecked(ds.row(i), result.centroids.at(result.assignment[i]).view(), widths);
      total += d * d;
    }
    return total;
  }
  std::size_t k = 0;
  const auto labels = compact_labels(result.assignment, &k);
  const auto rows = onehot_rows(ds);
  const auto means = onehot_means(rows, labels, k);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double d = euclidean(rows[i], means[labels[i]]);
    total += d * d;
  }
  return total;
}

DistanceMatrix euclidean_onehot_matrix(const Dataset& ds) {
  const auto rows = onehot_rows(ds);
  DistanceMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = i + 1; j < rows.size(); ++j) m.set(i, j, euclidean(rows[i], rows[j]));
  return m;
}

MetricReport evaluate(const Dataset& ds, const DistanceMatrix& distances, const ClusteringResult& result,
                      DistanceKind kind) {
  MetricReport report;
  compact_labels(result.assignment, &report.k_effective);
  const IndexValue dbi = davies_bouldin(ds, result.assignment, kind);
  const IndexValue dvi = dunn(distances, result.assignment);
  report.dbi = dbi.value;
  report.degenerate_centroids = dbi.flagged;
  report.sc = silhouette(distances, result.assignment);
  report.dvi = dvi.value;
  report.zero_diameter = dvi.flagged;
  report.sse = sse(ds, result, kind);
  return report;
}

}  // namespace dek
