#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dek/dataset.hpp"
#include "dek/rng.hpp"
#include "oracles.hpp"

namespace testutil {

inline dek::Schema make_schema(std::size_t d_con, const std::vector<std::size_t>& choices) {
  std::vector<dek::ColumnSpec> cols;
  for (std::size_t d = 0; d < d_con; ++d) cols.push_back({"x" + std::to_string(d), dek::ColumnKind::continuous, {}});
  for (std::size_t l = 0; l < choices.size(); ++l) {
    dek::ColumnSpec c{"c" + std::to_string(l), dek::ColumnKind::categorical, {}};
    for (std::size_t v = 0; v < choices[l]; ++v) c.categories.push_back("v" + std::to_string(v));
    cols.push_back(std::move(c));
  }
  return dek::Schema(std::move(cols));
}

/// Random normalized mixed dataset with values in [0, 1].
inline dek::Dataset random_dataset(dek::Rng& rng, std::size_t n, std::size_t d_con,
                                   const std::vector<std::size_t>& choices) {
  std::vector<double> cont(n * d_con);
  std::vector<int> cat(n * choices.size());
  for (double& v : cont) v = rng.uniform01();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < choices.size(); ++l)
      cat[i * choices.size() + l] = static_cast<int>(rng.index(choices[l]));
  return dek::normalize(dek::Dataset(make_schema(d_con, choices), n, std::move(cont), std::move(cat)));
}

/// Random shape: 0..3 continuous, 0..3 categorical with 2..4 choices, at least one column.
inline dek::Dataset random_shape_dataset(dek::Rng& rng, std::size_t n) {
  std::size_t d_con = rng.index(4);
  std::vector<std::size_t> choices(rng.index(4));
  for (auto& c : choices) c = 2 + rng.index(3);
  if (d_con + choices.size() == 0) d_con = 1;
  return random_dataset(rng, n, d_con, choices);
}

inline oracle::Row to_row(const dek::MixedPoint& p) { return {p.continuous, p.categorical}; }

inline std::vector<oracle::Row> rows_of(const dek::Dataset& ds) {
  std::vector<oracle::Row> rows;
  for (std::size_t i = 0; i < ds.size(); ++i) rows.push_back(to_row(ds.point(i)));
  return rows;
}

/// Range widths recomputed directly from the row table.
inline std::vector<double> widths_of(const std::vector<oracle::Row>& rows) {
  std::vector<double> w;
  if (rows.empty()) return w;
  for (std::size_t k = 0; k < rows.front().x.size(); ++k) {
    double lo = rows.front().x[k], hi = lo;
    for (const auto& r : rows) {
      lo = std::min(lo, r.x[k]);
      hi = std::max(hi, r.x[k]);
    }
    w.push_back(hi - lo);
  }
  return w;
}

inline std::vector<std::size_t> random_labels(dek::Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i < k ? i : rng.index(k);
  return labels;
}

}  // namespace testutil
