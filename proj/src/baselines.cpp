#include "dek/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dek/error.hpp"

namespace dek {
namespace {

using Clock = std::chrono::steady_clock;

void check_rows(const Dataset& ds, std::size_t k) {
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "K must be at least 1");
  if (ds.size() < k)
    throw Error(ErrorCode::TooFewRows, std::to_string(ds.size()) + " rows cannot form " + std::to_string(k) + " clusters");
}

std::vector<std::size_t> uniform_rows(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t t = 0; t < k; ++t) std::swap(idx[t], idx[t + rng.index(n - t)]);
  idx.resize(k);
  return idx;
}

double squared_euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

/// Moves each empty cluster's centroid onto the row farthest from its assigned
/// centroid. Rows at distance 0 are never used, so duplicate-only data can
/// leave a cluster empty.
template <class AssignFn, class PlaceFn>
void repair_empty(std::size_t k, std::vector<std::size_t>& labels, std::vector<double>& dist, AssignFn&& assign,
                  PlaceFn&& place) {
  for (std::size_t attempt = 0; attempt < k; ++attempt) {
    const auto sizes = cluster_sizes(labels, k);
    const auto empty = std::find(sizes.begin(), sizes.end(), std::size_t{0});
    if (empty == sizes.end()) return;
    std::size_t far = labels.size();
    double far_d = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (dist[i] > far_d) {
        far_d = dist[i];
        far = i;
      }
    if (far == labels.size()) return;
    place(static_cast<std::size_t>(empty - sizes.begin()), far);
    assign();
  }
}

ClusteringResult lloyd_median_mode(const Dataset& ds, const LloydConfig& cfg, const std::vector<std::size_t>& seeds) {
  const std::span<const double> widths(ds.range_widths());
  const std::size_t n = ds.size();
  const std::size_t k = cfg.k;
  CentroidMatrix centroids;
  for (std::size_t r : seeds) centroids.push_back(ds.point(r));

  std::vector<std::size_t> labels(n);
  std::vector<double> dist(n);
  auto assign = [&] {
    for (std::size_t i = 0; i < n; ++i) labels[i] = nearest_centroid(ds.row(i), centroids, widths, &dist[i]);
  };
  auto place = [&](std::size_t j, std::size_t row) { centroids[j] = ds.point(row); };
  auto assign_and_repair = [&] {
    assign();
    repair_empty(k, labels, dist, assign, place);
    double total = 0.0;
    for (double d : dist) total += d;
    return total;
  };

  ClusteringResult result;
  result.history.push_back(assign_and_repair());
  result.converged = false;
  for (std::size_t iter = 1; iter <= cfg.max_iters; ++iter) {
    const auto protos = cluster_prototypes(ds, labels, k);
    double movement = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (!protos[j]) continue;
      movement = std::max(movement, gower_unchecked(centroids[j].view(), protos[j]->view(), widths));
      centroids[j] = *protos[j];
    }
    result.history.push_back(assign_and_repair());
    result.iterations = iter;
    if (movement <= cfg.tol) {
      result.converged = true;
      break;
    }
  }
  result.centroids = std::move(centroids);
  result.assignment = std::move(labels);
  result.objective = result.history.back();
  return result;
}

ClusteringResult lloyd_onehot(const Dataset& ds, const LloydConfig& cfg, const std::vector<std::size_t>& seeds) {
  const Schema& schema = ds.schema();
  const auto rows = onehot_rows(ds);
  const std::size_t n = rows.size();
  const std::size_t k = cfg.k;
  const std::size_t dim = schema.expanded_dimension();
  std::vector<std::vector<double>> centers;
  for (std::size_t r : seeds) centers.push_back(rows[r]);

  std::vector<std::size_t> labels(n);
  std::vector<double> dist(n);
  auto assign = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = squared_euclidean(rows[i], centers[0]);
      for (std::size_t j = 1; j < k; ++j) {
        const double d = squared_euclidean(rows[i], centers[j]);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      labels[i] = best;
      dist[i] = best_d;
    }
  };
  auto place = [&](std::size_t j, std::size_t row) { centers[j] = rows[row]; };
  auto assign_and_repair = [&] {
    assign();
    repair_empty(k, labels, dist, assign, place);
    double total = 0.0;
    for (double d : dist) total += d;
    return total;
  };

  ClusteringResult result;
  result.history.push_back(assign_and_repair());
  result.converged = false;
  for (std::size_t iter = 1; iter <= cfg.max_iters; ++iter) {
    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    const auto sizes = cluster_sizes(labels, k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t d = 0; d < dim; ++d) sums[labels[i]][d] += rows[i][d];
    double movement = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (sizes[j] == 0) continue;
      for (double& v : sums[j]) v /= static_cast<double>(sizes[j]);
      movement = std::max(movement, std::sqrt(squared_euclidean(centers[j], sums[j])));
      centers[j] = std::move(sums[j]);
    }
    result.history.push_back(assign_and_repair());
    result.iterations = iter;
    if (movement <= cfg.tol) {
      result.converged = true;
      break;
    }
  }

  // Report centers in mixed form: continuous slots copied, blocks by argmax.
  const auto& counts = schema.choice_counts();
  for (const auto& c : centers) {
    MixedPoint p;
    p.continuous.assign(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(schema.continuous_count()));
    std::size_t offset = schema.continuous_count();
    for (std::size_t cnt : counts) {
      const auto block = c.begin() + static_cast<std::ptrdiff_t>(offset);
      p.categorical.push_back(static_cast<int>(std::max_element(block, block + static_cast<std::ptrdiff_t>(cnt)) - block));
      offset += cnt;
    }
    result.centroids.push_back(std::move(p));
  }
  result.assignment = std::move(labels);
  result.objective = result.history.back();
  return result;
}

double linkage_update(Linkage linkage, double d_im, double d_jm, std::size_t size_i, std::size_t size_j) {
  switch (linkage) {
    case Linkage::single: return std::min(d_im, d_jm);
    case Linkage::complete: return std::max(d_im, d_jm);
    case Linkage::average:
      return (static_cast<double>(size_i) * d_im + static_cast<double>(size_j) * d_jm) /
             static_cast<double>(size_i + size_j);
  }
  return d_im;
}

}  // namespace

std::string_view to_string(Linkage l) noexcept {
  switch (l) {
    case Linkage::single: return "single";
    case Linkage::complete: return "complete";
    case Linkage::average: return "average";
  }
  return "average";
}

Linkage parse_linkage(std::string_view name) {
  if (name == "single") return Linkage::single;
  if (name == "complete") return Linkage::complete;
  if (name == "average") return Linkage::average;
  throw Error(ErrorCode::InvalidConfig, "unknown linkage '" + std::string(name) + "'");
}

std::vector<double> onehot(PointView p, const Schema& schema) {
  std::vector<double> out(schema.expanded_dimension(), 0.0);
  std::copy(p.continuous.begin(), p.continuous.end(), out.begin());
  std::size_t offset = schema.continuous_count();
  const auto& counts = schema.choice_counts();
  for (std::size_t l = 0; l < counts.size(); ++l) {
    out[offset + static_cast<std::size_t>(p.categorical[l])] = 1.0;
    offset += counts[l];
  }
  return out;
}

std::vector<std::vector<double>> onehot_rows(const Dataset& ds) {
  std::vector<std::vector<double>> out;
  out.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) out.push_back(onehot(ds.row(i), ds.schema()));
  return out;
}

std::vector<std::size_t> kmeans_pp_rows(const Dataset& ds, std::size_t k, Rng& rng) {
  check_rows(ds, k);
  const std::span<const double> widths(ds.range_widths());
  const std::size_t n = ds.size();
  std::vector<std::size_t> chosen{rng.index(n)};
  std::vector<bool> taken(n, false);
  taken[chosen[0]] = true;
  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = gower_unchecked(ds.row(i), ds.row(chosen[0]), widths);

  while (chosen.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (!taken[i]) total += nearest[i] * nearest[i];
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = rng.uniform01() * total;
      double cumulative = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i] || nearest[i] == 0.0) continue;
        cumulative += nearest[i] * nearest[i];
        pick = i;  // last positive-weight row absorbs rounding at the top end
        if (cumulative > target) break;
      }
    } else {
      std::size_t r = rng.index(n - chosen.size());
      for (std::size_t i = 0; i < n; ++i)
        if (!taken[i] && r-- == 0) {
          pick = i;
          break;
        }
    }
    taken[pick] = true;
    chosen.push_back(pick);
    for (std::size_t i = 0; i < n; ++i)
      nearest[i] = std::min(nearest[i], gower_unchecked(ds.row(i), ds.row(pick), widths));
  }
  return chosen;
}

CentroidMatrix kmeans_pp_seed(const Dataset& ds, std::size_t k, Rng& rng) {
  CentroidMatrix out;
  for (std::size_t r : kmeans_pp_rows(ds, k, rng)) out.push_back(ds.point(r));
  return out;
}

ClusteringResult lloyd_cluster(const Dataset& ds, const LloydConfig& cfg) {
  check_rows(ds, cfg.k);
  if (cfg.max_iters < 1) throw Error(ErrorCode::InvalidConfig, "max_iters must be at least 1");
  const auto start = Clock::now();
  Rng rng(cfg.seed);
  const auto seeds = cfg.seeding == Seeding::kmeans_plus_plus ? kmeans_pp_rows(ds, cfg.k, rng)
                                                               : uniform_rows(ds.size(), cfg.k, rng);
  ClusteringResult result =
      cfg.update == PrototypeUpdate::median_mode ? lloyd_median_mode(ds, cfg, seeds) : lloyd_onehot(ds, cfg, seeds);
  result.method = cfg.seeding == Seeding::kmeans_plus_plus ? "km++" : "km";
  result.k = cfg.k;
  result.seed = cfg.seed;
  result.sizes = cluster_sizes(result.assignment, cfg.k);
  result.runtime_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

ClusteringResult hierarchical_cluster(const Dataset& ds, const HierConfig& cfg) {
  return hierarchical_cluster(ds, pairwise_matrix(ds), cfg);
}

ClusteringResult hierarchical_cluster(const Dataset& ds, const DistanceMatrix& distances, const HierConfig& cfg) {
  check_rows(ds, cfg.k);
  const std::size_t n = ds.size();
  if (distances.size() != n) throw Error(ErrorCode::SchemaMismatch, "distance matrix size does not match the dataset");
  const auto start = Clock::now();

  std::vector<double> d = distances.values();
  auto at = [&](std::size_t i, std::size_t j) -> double& { return d[i * n + j]; };
  std::vector<bool> active(n, true);
  std::vector<std::size_t> size(n, 1);
  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};

  // nearest active partner with a larger index; lowest index on ties
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> nn(n, none);
  std::vector<double> nn_d(n, std::numeric_limits<double>::infinity());
  auto refresh = [&](std::size_t i) {
    nn[i] = none;
    nn_d[i] = std::numeric_limits<double>::infinity();
    for (std::size_t j = i + 1; j < n; ++j)
      if (active[j] && at(i, j) < nn_d[i]) {
        nn_d[i] = at(i, j);
        nn[i] = j;
      }
  };
  for (std::size_t i = 0; i < n; ++i) refresh(i);

  ClusteringResult result;
  for (std::size_t remaining = n; remaining > cfg.k; --remaining) {
    std::size_t i = none;
    for (std::size_t a = 0; a < n; ++a)
      if (active[a] && nn[a] != none && (i == none || nn_d[a] < nn_d[i])) i = a;
    const std::size_t j = nn[i];
    result.history.push_back(nn_d[i]);

    for (std::size_t m = 0; m < n; ++m) {
      if (!active[m] || m == i || m == j) continue;
      const double v = linkage_update(cfg.linkage, at(i, m), at(j, m), size[i], size[j]);
      at(i, m) = v;
      at(m, i) = v;
    }
    active[j] = false;
    size[i] += size[j];
    members[i].insert(members[i].end(), members[j].begin(), members[j].end());
    members[j].clear();

    for (std::size_t m = 0; m < j; ++m) {
      if (!active[m] || m == i) continue;
      if (nn[m] == i || nn[m] == j) {
        refresh(m);
      } else if (m < i && (at(m, i) < nn_d[m] || (at(m, i) == nn_d[m] && i < nn[m]))) {
        nn[m] = i;
        nn_d[m] = at(m, i);
      }
    }
    refresh(i);
  }

  result.assignment.assign(n, 0);
  std::size_t label = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (!active[r]) continue;
    for (std::size_t row : members[r]) result.assignment[row] = label;
    ++label;
  }

  const std::span<const double> widths(ds.range_widths());
  const auto protos = cluster_prototypes(ds, result.assignment, cfg.k);
  for (const auto& p : protos) result.centroids.push_back(*p);
  result.objective = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    result.objective += gower_unchecked(ds.row(r), result.centroids[result.assignment[r]].view(), widths);

  result.method = "hc";
  result.k = cfg.k;
  result.sizes = cluster_sizes(result.assignment, cfg.k);
  result.iterations = n - cfg.k;
  result.runtime_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

}  // namespace dek
