#pragma once

// Brute-force reference implementations used only by the tests. They work on
// plain row tables and deliberately share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <vector>

namespace oracle {

/// A row in schema-free form: continuous values and categorical codes.
struct Row {
  std::vector<double> x;
  std::vector<int> c;
};

inline double gower(const Row& a, const Row& b, const std::vector<double>& ranges) {
  double total = 0.0;
  for (std::size_t k = 0; k < a.x.size(); ++k)
    if (ranges[k] != 0.0) total += std::fabs(a.x[k] - b.x[k]) / ranges[k];
  for (std::size_t l = 0; l < a.c.size(); ++l)
    if (a.c[l] != b.c[l]) total += 1.0;
  return total / static_cast<double>(a.x.size() + a.c.size());
}

/// Sum over rows of min_j d(row, x_j) / ln(1 + min_{c != j} d(x_j, x_c)),
/// with 1e9 whenever the separation falls below eps.
inline double dek_objective(const std::vector<Row>& rows, const std::vector<Row>& centroids,
                            const std::vector<double>& ranges, double eps = 1e-9) {
  double total = 0.0;
  for (const Row& r : rows) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centroids.size(); ++j) {
      double sep = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < centroids.size(); ++c)
        if (c != j) sep = std::min(sep, gower(centroids[j], centroids[c], ranges));
      const double value = sep < eps ? 1e9 : gower(r, centroids[j], ranges) / std::log(1.0 + sep);
      best = std::min(best, value);
    }
    total += best;
  }
  return total;
}

inline std::vector<std::vector<double>> matrix(const std::vector<Row>& rows, const std::vector<double>& ranges) {
  std::vector<std::vector<double>> d(rows.size(), std::vector<double>(rows.size(), 0.0));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) d[i][j] = gower(rows[i], rows[j], ranges);
  return d;
}

/// Median (midpoint of the two middle values for even counts) and lowest-index mode.
inline Row prototype(const std::vector<Row>& members, const std::vector<std::size_t>& choices) {
  Row p;
  const std::size_t dc = members.front().x.size();
  for (std::size_t k = 0; k < dc; ++k) {
    std::vector<double> v;
    for (const Row& m : members) v.push_back(m.x[k]);
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    p.x.push_back(n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0);
  }
  for (std::size_t l = 0; l < choices.size(); ++l) {
    std::vector<int> count(choices[l], 0);
    for (const Row& m : members) ++count[static_cast<std::size_t>(m.c[l])];
    int best = 0;
    for (std::size_t v = 1; v < count.size(); ++v)
      if (count[v] > count[static_cast<std::size_t>(best)]) best = static_cast<int>(v);
    p.c.push_back(best);
  }
  return p;
}

inline std::map<std::size_t, std::vector<std::size_t>> groups(const std::vector<std::size_t>& labels) {
  std::map<std::size_t, std::vector<std::size_t>> g;
  for (std::size_t i = 0; i < labels.size(); ++i) g[labels[i]].push_back(i);
  return g;
}

inline double davies_bouldin(const std::vector<Row>& rows, const std::vector<std::size_t>& labels,
                             const std::vector<double>& ranges, const std::vector<std::size_t>& choices) {
  const auto g = groups(labels);
  std::vector<Row> protos;
  std::vector<double> scatter;
  for (const auto& [label, idx] : g) {
    std::vector<Row> members;
    for (std::size_t i : idx) members.push_back(rows[i]);
    protos.push_back(prototype(members, choices));
    double s = 0.0;
    for (const Row& m : members) s += gower(m, protos.back(), ranges);
    scatter.push_back(s / static_cast<double>(members.size()));
  }
  double total = 0.0;
  for (std::size_t a = 0; a < protos.size(); ++a) {
    double worst = 0.0;
    for (std::size_t b = 0; b < protos.size(); ++b)
      if (a != b) worst = std::max(worst, (scatter[a] + scatter[b]) / gower(protos[a], protos[b], ranges));
    total += worst;
  }
  return total / static_cast<double>(protos.size());
}

inline double silhouette(const std::vector<std::vector<double>>& d, const std::vector<std::size_t>& labels) {
  const auto g = groups(labels);
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& own = g.at(labels[i]);
    if (own.size() == 1) continue;
    double a = 0.0;
    for (std::size_t j : own)
      if (j != i) a += d[i][j];
    a /= static_cast<double>(own.size() - 1);
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [label, idx] : g) {
      if (label == labels[i]) continue;
      double s = 0.0;
      for (std::size_t j : idx) s += d[i][j];
      b = std::min(b, s / static_cast<double>(idx.size()));
    }
    if (std::max(a, b) > 0.0) total += (b - a) / std::max(a, b);
  }
  return total / static_cast<double>(labels.size());
}

inline double dunn(const std::vector<std::vector<double>>& d, const std::vector<std::size_t>& labels) {
  const auto g = groups(labels);
  double min_between = std::numeric_limits<double>::infinity();
  double max_within = 0.0;
  for (const auto& [la, ia] : g)
    for (const auto& [lb, ib] : g)
      for (std::size_t i : ia)
        for (std::size_t j : ib) {
          if (la == lb)
            max_within = std::max(max_within, d[i][j]);
          else
            min_between = std::min(min_between, d[i][j]);
        }
  return min_between / max_within;
}

/// Pair-counting ARI by explicit enumeration of all pairs.
inline double ari_pairs(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  double both = 0, only_a = 0, only_b = 0, neither = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const bool sa = a[i] == a[j];
      const bool sb = b[i] == b[j];
      if (sa && sb) ++both;
      else if (sa) ++only_a;
      else if (sb) ++only_b;
      else ++neither;
    }
  const double total = both + only_a + only_b + neither;
  const double expected = (both + only_a) * (both + only_b) / total;
  const double maximum = ((both + only_a) + (both + only_b)) / 2.0;
  return (both - expected) / (maximum - expected);
}

}  // namespace oracle
