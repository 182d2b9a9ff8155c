#include "dek/gower.hpp"

#include <charconv>
#include <cstdlib>
#include <string>

#include "dek/error.hpp"
#include "dek/io.hpp"
#include "dek/parallel.hpp"

namespace dek {

std::size_t default_jobs() {
  if (const char* env = std::getenv("DEK_JOBS")) {
    const std::string_view s(env);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size() && v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

double gower_distance(PointView a, PointView b, const Schema& schema, std::span<const double> range_widths) {
  if (a.continuous.size() != schema.continuous_count() || b.continuous.size() != schema.continuous_count() ||
      a.categorical.size() != schema.categorical_count() || b.categorical.size() != schema.categorical_count() ||
      range_widths.size() != schema.continuous_count())
    throw Error(ErrorCode::SchemaMismatch, "point or range shape does not match the schema");
  return gower_unchecked(a, b, range_widths);
}

DistanceMatrix pairwise_matrix(const Dataset& ds, std::size_t jobs) {
  const std::size_t n = ds.size();
  DistanceMatrix m(n);
  const auto widths = std::span<const double>(ds.range_widths());
  parallel_for(n, jobs, [&](std::size_t i) {
    const PointView a = ds.row(i);
    for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, gower_unchecked(a, ds.row(j), widths));
  });
  return m;
}

void write_matrix_csv(const DistanceMatrix& m, const std::filesystem::path& path) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j) out += ',';
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, m(i, j));
      out.append(buf, ptr);
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

}  // namespace dek
