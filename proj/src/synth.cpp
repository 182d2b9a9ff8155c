#include "dek/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "dek/error.hpp"
#include "dek/rng.hpp"

namespace dek {

Schema synth_schema(const SynthSpec& spec) {
  std::vector<ColumnSpec> cols;
  for (std::size_t d = 0; d < spec.d_con; ++d) cols.push_back({"x" + std::to_string(d), ColumnKind::continuous, {}});
  for (std::size_t l = 0; l < spec.choice_counts.size(); ++l) {
    ColumnSpec c{"c" + std::to_string(l), ColumnKind::categorical, {}};
    for (std::size_t v = 0; v < spec.choice_counts[l]; ++v) c.categories.push_back("v" + std::to_string(v));
    cols.push_back(std::move(c));
  }
  return Schema(std::move(cols));
}

SynthData generate(const SynthSpec& spec) {
  if (spec.k_true < 1 || spec.n_per_cluster < 1) throw Error(ErrorCode::InvalidSpec, "need k_true >= 1 and n_per_cluster >= 1");
  if (spec.d_con + spec.choice_counts.size() == 0) throw Error(ErrorCode::InvalidSpec, "need at least one column");
  if (!(spec.separation >= 0.0) || !std::isfinite(spec.separation)) throw Error(ErrorCode::InvalidSpec, "separation must be >= 0");
  for (std::size_t n : spec.choice_counts) {
    if (n < 2) throw Error(ErrorCode::InvalidSpec, "categorical columns need at least 2 choices");
    // small slack so purity = 1/N given as a rounded decimal is accepted
    if (!(spec.purity >= 1.0 / static_cast<double>(n) - 1e-12 && spec.purity <= 1.0))
      throw Error(ErrorCode::InvalidSpec, "purity must lie in [1/N, 1] for every categorical column");
  }

  Schema schema = synth_schema(spec);
  Rng rng(spec.seed);
  const std::size_t k = spec.k_true;
  const std::size_t dc = spec.d_con;
  const std::size_t dk = spec.choice_counts.size();
  const std::size_t n = k * spec.n_per_cluster;

  // per-dimension cluster ordering
  std::vector<std::vector<std::size_t>> order(dc, std::vector<std::size_t>(k));
  for (auto& perm : order) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t t = k; t > 1; --t) std::swap(perm[t - 1], perm[rng.index(t)]);
  }
  std::vector<std::size_t> offset(dk);
  for (std::size_t l = 0; l < dk; ++l) offset[l] = rng.index(spec.choice_counts[l]);

  std::vector<double> cont(n * dc);
  std::vector<int> cat(n * dk);
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i / spec.n_per_cluster;
    labels[i] = c;
    for (std::size_t d = 0; d < dc; ++d)
      cont[i * dc + d] = spec.separation * static_cast<double>(order[d][c]) + rng.normal();
    for (std::size_t l = 0; l < dk; ++l) {
      const std::size_t choices = spec.choice_counts[l];
      const std::size_t modal = (c + offset[l]) % choices;
      std::size_t v = modal;
      if (rng.uniform01() >= spec.purity) {
        v = rng.index(choices - 1);
        if (v >= modal) ++v;
      }
      cat[i * dk + l] = static_cast<int>(v);
    }
  }

  // Fisher-Yates over rows, labels moving along
  for (std::size_t t = n; t > 1; --t) {
    const std::size_t j = rng.index(t);
    const std::size_t i = t - 1;
    if (i == j) continue;
    for (std::size_t d = 0; d < dc; ++d) std::swap(cont[i * dc + d], cont[j * dc + d]);
    for (std::size_t l = 0; l < dk; ++l) std::swap(cat[i * dk + l], cat[j * dk + l]);
    std::swap(labels[i], labels[j]);
  }

  return {normalize(Dataset(std::move(schema), n, std::move(cont), std::move(cat))), std::move(labels)};
}

double adjusted_rand_index(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "label vectors differ in length");
  const std::size_t n = a.size();
  auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> table;
  std::map<std::size_t, std::size_t> rows, cols;
  for (std::size_t i = 0; i < n; ++i) {
    ++table[{a[i], b[i]}];
    ++rows[a[i]];
    ++cols[b[i]];
  }
  double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [key, count] : table) index += choose2(static_cast<double>(count));
  for (const auto& [key, count] : rows) sum_rows += choose2(static_cast<double>(count));
  for (const auto& [key, count] : cols) sum_cols += choose2(static_cast<double>(count));
  const double total = choose2(static_cast<double>(n));
  if (total == 0.0) return 1.0;
  const double expected = sum_rows * sum_cols / total;
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) return 1.0;  // both partitions trivial and identical in shape
  return (index - expected) / (max_index - expected);
}

}  // namespace dek
