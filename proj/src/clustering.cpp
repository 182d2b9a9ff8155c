#include "dek/clustering.hpp"

#include <algorithm>

#include "dek/gower.hpp"

namespace dek {

std::vector<std::size_t> cluster_sizes(std::span<const std::size_t> assignment, std::size_t k) {
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t a : assignment) ++sizes.at(a);
  return sizes;
}

MixedPoint median_mode_prototype(const Dataset& ds, std::span<const std::size_t> members) {
  const Schema& schema = ds.schema();
  MixedPoint p;
  p.continuous.resize(schema.continuous_count());
  p.categorical.resize(schema.categorical_count());
  if (members.empty()) return p;

  std::vector<double> column(members.size());
  for (std::size_t k = 0; k < schema.continuous_count(); ++k) {
    for (std::size_t t = 0; t < members.size(); ++t) column[t] = ds.continuous_at(members[t], k);
    const std::size_t mid = column.size() / 2;
    std::nth_element(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(mid), column.end());
    const double upper = column[mid];
    if (column.size() % 2 == 1) {
      p.continuous[k] = upper;
    } else {
      const double lower = *std::max_element(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(mid));
      p.continuous[k] = lower + (upper - lower) / 2.0;
    }
  }

  const auto& counts = schema.choice_counts();
  std::vector<std::size_t> tally;
  for (std::size_t l = 0; l < schema.categorical_count(); ++l) {
    tally.assign(counts[l], 0);
    for (std::size_t i : members) ++tally[static_cast<std::size_t>(ds.categorical_at(i, l))];
    p.categorical[l] = static_cast<int>(std::max_element(tally.begin(), tally.end()) - tally.begin());
  }
  return p;
}

std::vector<std::optional<MixedPoint>> cluster_prototypes(const Dataset& ds, std::span<const std::size_t> assignment,
                                                          std::size_t k) {
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < assignment.size(); ++i) members.at(assignment[i]).push_back(i);
  std::vector<std::optional<MixedPoint>> out(k);
  for (std::size_t j = 0; j < k; ++j)
    if (!members[j].empty()) out[j] = median_mode_prototype(ds, members[j]);
  return out;
}

std::size_t nearest_centroid(PointView point, const CentroidMatrix& centroids, std::span<const double> widths,
                             double* distance) {
  std::size_t best = 0;
  double best_d = gower_unchecked(point, centroids.front().view(), widths);
  for (std::size_t j = 1; j < centroids.size(); ++j) {
    const double d = gower_unchecked(point, centroids[j].view(), widths);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  if (distance) *distance = best_d;
  return best;
}

nlohmann::json result_to_json(const ClusteringResult& result, const Schema& schema, const nlohmann::json& config,
                              bool include_runtime) {
  nlohmann::json centroids = nlohmann::json::array();
  for (const MixedPoint& c : result.centroids) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t col = 0; col < schema.dimension(); ++col) {
      const ColumnSpec& spec = schema.columns()[col];
      if (spec.kind == ColumnKind::continuous)
        obj[spec.name] = c.continuous.at(schema.slot(col));
      else
        obj[spec.name] = spec.categories.at(static_cast<std::size_t>(c.categorical.at(schema.slot(col))));
    }
    centroids.push_back(std::move(obj));
  }
  nlohmann::json doc = {
      {"method", result.method},
      {"schema_hash", schema.hash()},
      {"k", result.k},
      {"seed", result.seed},
      {"objective", result.objective},
      {"iterations", result.iterations},
      {"converged", result.converged},
      {"centroids", std::move(centroids)},
      {"assignment", result.assignment},
      {"sizes", result.sizes},
      {"config", config},
  };
  if (include_runtime) doc["runtime_seconds"] = result.runtime_seconds;
  return doc;
}

}  // namespace dek
