#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace dek {

enum class ColumnKind { continuous, categorical };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::continuous;
  std::vector<std::string> categories;  // categorical only, >= 2 distinct labels
};

/// Ordered column layout of a mixed-variable table. Validated on construction.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<ColumnSpec> columns);

  static Schema from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;

  const std::vector<ColumnSpec>& columns() const noexcept { return columns_; }

  /// Number of columns (continuous + categorical).
  std::size_t dimension() const noexcept { return columns_.size(); }
  std::size_t continuous_count() const noexcept { return continuous_columns_.size(); }
  std::size_t categorical_count() const noexcept { return categorical_columns_.size(); }
  /// Continuous count plus the total number of categories over categorical columns.
  std::size_t expanded_dimension() const noexcept { return expanded_dim_; }

  /// Category counts, in categorical-column order.
  const std::vector<std::size_t>& choice_counts() const noexcept { return choice_counts_; }

  /// Column indices of each kind, in schema order.
  const std::vector<std::size_t>& continuous_columns() const noexcept { return continuous_columns_; }
  const std::vector<std::size_t>& categorical_columns() const noexcept { return categorical_columns_; }

  /// Position of a column within the storage of its kind.
  std::size_t slot(std::size_t column) const { return slots_.at(column); }

  /// Index of the named column, or columns().size() when absent.
  std::size_t find(std::string_view name) const noexcept;

  /// Stable 64-bit FNV-1a digest of the canonical JSON form, hex encoded.
  std::string hash() const;

  bool operator==(const Schema& other) const;

 private:
  std::vector<ColumnSpec> columns_;
  std::vector<std::size_t> continuous_columns_;
  std::vector<std::size_t> categorical_columns_;
  std::vector<std::size_t> choice_counts_;
  std::vector<std::size_t> slots_;
  std::size_t expanded_dim_ = 0;
};

/// Non-owning view of one mixed-variable point.
struct PointView {
  std::span<const double> continuous;
  std::span<const int> categorical;
};

/// Owning mixed-variable point: continuous values then categorical indices,
/// each in schema order for its kind.
struct MixedPoint {
  std::vector<double> continuous;
  std::vector<int> categorical;

  PointView view() const noexcept { return {continuous, categorical}; }
  bool operator==(const MixedPoint&) const = default;
};

struct Range {
  double min = 0.0;
  double max = 0.0;
  double width() const noexcept { return max - min; }
  bool operator==(const Range&) const = default;
};

/// Immutable validated table. Continuous values are stored row-major
/// (n x D_con), categorical indices row-major (n x D_cat).
class Dataset {
 public:
  Dataset() = default;
  Dataset(Schema schema, std::size_t rows, std::vector<double> continuous,
          std::vector<int> categorical);

  const Schema& schema() const noexcept { return schema_; }
  std::size_t size() const noexcept { return rows_; }
  const std::vector<Range>& ranges() const noexcept { return ranges_; }

  /// Range widths per continuous column, the R_k divisors of the Gower terms.
  const std::vector<double>& range_widths() const noexcept { return widths_; }

  PointView row(std::size_t i) const noexcept;
  MixedPoint point(std::size_t i) const;

  double continuous_at(std::size_t row, std::size_t slot) const noexcept {
    return continuous_[row * schema_.continuous_count() + slot];
  }
  int categorical_at(std::size_t row, std::size_t slot) const noexcept {
    return categorical_[row * schema_.categorical_count() + slot];
  }

  const std::vector<double>& continuous_values() const noexcept { return continuous_; }
  const std::vector<int>& categorical_values() const noexcept { return categorical_; }

  bool operator==(const Dataset& other) const;

 private:
  Schema schema_;
  std::size_t rows_ = 0;
  std::vector<double> continuous_;
  std::vector<int> categorical_;
  std::vector<Range> ranges_;
  std::vector<double> widths_;
};

Schema load_schema(const std::filesystem::path& path);
void save_schema(const Schema& schema, const std::filesystem::path& path);

/// Reads an RFC-4180 CSV whose header names the schema columns in any order.
Dataset load_dataset(const std::filesystem::path& csv_path, const std::filesystem::path& schema_path);
Dataset load_dataset(const std::filesystem::path& csv_path, const Schema& schema);
Dataset parse_dataset(std::string_view csv_text, const Schema& schema);

/// Writes the header in schema order and categorical cells as labels.
/// Continuous values use round-trip precision.
std::string to_csv(const Dataset& ds);
void write_csv(const Dataset& ds, const std::filesystem::path& path);

/// Min-max scales every continuous column into [0, 1]; constant columns become 0.
Dataset normalize(const Dataset& ds);

}  // namespace dek
