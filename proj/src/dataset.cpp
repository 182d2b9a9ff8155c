#include "dek/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>
#include <unordered_map>

#include "dek/error.hpp"
#include "dek/io.hpp"

namespace dek {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

// --- Schema -----------------------------------------------------------------

Schema::Schema(std::vector<ColumnSpec> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw Error(ErrorCode::InvalidSchema, "schema has no columns");
  std::set<std::string> names;
  slots_.resize(columns_.size());
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const ColumnSpec& col = columns_[c];
    if (col.name.empty()) throw Error(ErrorCode::InvalidSchema, "column " + std::to_string(c) + " has an empty name");
    if (!names.insert(col.name).second) throw Error(ErrorCode::InvalidSchema, "duplicate column name '" + col.name + "'");
    if (col.kind == ColumnKind::continuous) {
      if (!col.categories.empty())
        throw Error(ErrorCode::InvalidSchema, "continuous column '" + col.name + "' has a category list");
      slots_[c] = continuous_columns_.size();
      continuous_columns_.push_back(c);
    } else {
      if (col.categories.size() < 2)
        throw Error(ErrorCode::InvalidSchema, "categorical column '" + col.name + "' needs at least 2 categories");
      std::set<std::string> labels(col.categories.begin(), col.categories.end());
      if (labels.size() != col.categories.size())
        throw Error(ErrorCode::InvalidSchema, "categorical column '" + col.name + "' has duplicate categories");
      slots_[c] = categorical_columns_.size();
      categorical_columns_.push_back(c);
      choice_counts_.push_back(col.categories.size());
    }
  }
  expanded_dim_ = continuous_columns_.size();
  for (std::size_t n : choice_counts_) expanded_dim_ += n;
}

Schema Schema::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("columns") || !doc["columns"].is_array())
    throw Error(ErrorCode::InvalidSchema, "expected an object with a \"columns\" array");
  std::vector<ColumnSpec> cols;
  for (const auto& item : doc["columns"]) {
    if (!item.is_object() || !item.contains("name") || !item["name"].is_string() || !item.contains("kind") ||
        !item["kind"].is_string())
      throw Error(ErrorCode::InvalidSchema, "each column needs string \"name\" and \"kind\"");
    ColumnSpec spec;
    spec.name = item["name"].get<std::string>();
    const auto kind = item["kind"].get<std::string>();
    if (kind == "continuous") {
      spec.kind = ColumnKind::continuous;
      if (item.contains("categories"))
        throw Error(ErrorCode::InvalidSchema, "continuous column '" + spec.name + "' has a category list");
    } else if (kind == "categorical") {
      spec.kind = ColumnKind::categorical;
      if (!item.contains("categories") || !item["categories"].is_array())
        throw Error(ErrorCode::InvalidSchema, "categorical column '" + spec.name + "' lacks \"categories\"");
      for (const auto& label : item["categories"]) {
        if (label.is_string())
          spec.categories.push_back(label.get<std::string>());
        else if (label.is_number())
          spec.categories.push_back(label.dump());
        else
          throw Error(ErrorCode::InvalidSchema, "category labels of '" + spec.name + "' must be strings");
      }
    } else {
      throw Error(ErrorCode::InvalidSchema, "column '" + spec.name + "' has unknown kind '" + kind + "'");
    }
    cols.push_back(std::move(spec));
  }
  return Schema(std::move(cols));
}

nlohmann::json Schema::to_json() const {
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : columns_) {
    nlohmann::json item = {{"name", c.name}, {"kind", c.kind == ColumnKind::continuous ? "continuous" : "categorical"}};
    if (c.kind == ColumnKind::categorical) item["categories"] = c.categories;
    cols.push_back(std::move(item));
  }
  return {{"columns", std::move(cols)}};
}

std::size_t Schema::find(std::string_view name) const noexcept {
  for (std::size_t c = 0; c < columns_.size(); ++c)
    if (columns_[c].name == name) return c;
  return columns_.size();
}

std::string Schema::hash() const {
  const std::string canonical = to_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

bool Schema::operator==(const Schema& other) const {
  if (columns_.size() != other.columns_.size()) return false;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const auto& a = columns_[c];
    const auto& b = other.columns_[c];
    if (a.name != b.name || a.kind != b.kind || a.categories != b.categories) return false;
  }
  return true;
}

Schema load_schema(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidSchema, path.string() + ": " + e.what());
  }
  return Schema::from_json(doc);
}

void save_schema(const Schema& schema, const std::filesystem::path& path) {
  write_file_atomic(path, schema.to_json().dump(2) + "\n");
}

// --- Dataset ----------------------------------------------------------------

Dataset::Dataset(Schema schema, std::size_t rows, std::vector<double> continuous, std::vector<int> categorical)
    : schema_(std::move(schema)), rows_(rows), continuous_(std::move(continuous)), categorical_(std::move(categorical)) {
  const std::size_t dc = schema_.continuous_count();
  const std::size_t dk = schema_.categorical_count();
  if (rows_ == 0) throw Error(ErrorCode::EmptyDataset, "dataset has no rows");
  if (continuous_.size() != rows_ * dc || categorical_.size() != rows_ * dk)
    throw Error(ErrorCode::SchemaMismatch, "value storage does not match rows x schema");

  ranges_.assign(dc, Range{});
  for (std::size_t k = 0; k < dc; ++k) {
    double lo = continuous_[k];
    double hi = continuous_[k];
    for (std::size_t i = 0; i < rows_; ++i) {
      const double v = continuous_[i * dc + k];
      if (!std::isfinite(v))
        throw Error(ErrorCode::NonNumericContinuous, "row " + std::to_string(i) + " column '" +
                                                         schema_.columns()[schema_.continuous_columns()[k]].name +
                                                         "' is not finite");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    ranges_[k] = {lo, hi};
  }
  widths_.resize(dc);
  for (std::size_t k = 0; k < dc; ++k) widths_[k] = ranges_[k].width();

  const auto& counts = schema_.choice_counts();
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t l = 0; l < dk; ++l) {
      const int v = categorical_[i * dk + l];
      if (v < 0 || static_cast<std::size_t>(v) >= counts[l])
        throw Error(ErrorCode::UnknownCategory, "row " + std::to_string(i) + " column '" +
                                                    schema_.columns()[schema_.categorical_columns()[l]].name +
                                                    "' has category index " + std::to_string(v) + " out of range");
    }
}

PointView Dataset::row(std::size_t i) const noexcept {
  const std::size_t dc = schema_.continuous_count();
  const std::size_t dk = schema_.categorical_count();
  return {std::span<const double>(continuous_.data() + i * dc, dc), std::span<const int>(categorical_.data() + i * dk, dk)};
}

MixedPoint Dataset::point(std::size_t i) const {
  const PointView v = row(i);
  return {{v.continuous.begin(), v.continuous.end()}, {v.categorical.begin(), v.categorical.end()}};
}

bool Dataset::operator==(const Dataset& other) const {
  return schema_ == other.schema_ && rows_ == other.rows_ && continuous_ == other.continuous_ &&
         categorical_ == other.categorical_ && ranges_ == other.ranges_;
}

Dataset parse_dataset(std::string_view csv_text, const Schema& schema) {
  const auto records = parse_csv(csv_text);
  if (records.empty()) throw Error(ErrorCode::EmptyDataset, "CSV has no header row");

  // header position -> schema column
  const auto& header = records.front().fields;
  std::vector<std::size_t> column_of(header.size());
  std::vector<bool> seen(schema.dimension(), false);
  for (std::size_t h = 0; h < header.size(); ++h) {
    const std::string name(trim(header[h]));
    const std::size_t c = schema.find(name);
    if (c == schema.dimension()) throw Error(ErrorCode::UnknownColumn, "CSV column '" + name + "' is not in the schema");
    if (seen[c]) throw Error(ErrorCode::UnknownColumn, "CSV column '" + name + "' appears twice");
    seen[c] = true;
    column_of[h] = c;
  }
  for (std::size_t c = 0; c < schema.dimension(); ++c)
    if (!seen[c]) throw Error(ErrorCode::UnknownColumn, "schema column '" + schema.columns()[c].name + "' missing from CSV");

  std::vector<std::unordered_map<std::string, int>> lookup(schema.categorical_count());
  for (std::size_t l = 0; l < schema.categorical_count(); ++l) {
    const auto& cats = schema.columns()[schema.categorical_columns()[l]].categories;
    for (std::size_t j = 0; j < cats.size(); ++j) lookup[l].emplace(cats[j], static_cast<int>(j));
  }

  const std::size_t rows = records.size() - 1;
  if (rows == 0) throw Error(ErrorCode::EmptyDataset, "CSV has a header but no data rows");
  const std::size_t dc = schema.continuous_count();
  const std::size_t dk = schema.categorical_count();
  std::vector<double> cont(rows * dc);
  std::vector<int> cat(rows * dk);

  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::size_t i = r - 1;
    const std::string where = "line " + std::to_string(rec.line) + " (row " + std::to_string(i) + ")";
    if (rec.fields.size() != header.size())
      throw Error(ErrorCode::SchemaMismatch, where + " has " + std::to_string(rec.fields.size()) + " fields, expected " +
                                                 std::to_string(header.size()));
    for (std::size_t h = 0; h < header.size(); ++h) {
      const std::size_t c = column_of[h];
      const ColumnSpec& spec = schema.columns()[c];
      const std::string_view cell = trim(rec.fields[h]);
      if (cell.empty()) throw Error(ErrorCode::MissingValue, where + " column '" + spec.name + "' is empty");
      if (spec.kind == ColumnKind::continuous) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v))
          throw Error(ErrorCode::NonNumericContinuous,
                      where + " column '" + spec.name + "' value '" + std::string(cell) + "' is not a finite number");
        cont[i * dc + schema.slot(c)] = v;
      } else {
        const auto& map = lookup[schema.slot(c)];
        const auto it = map.find(std::string(cell));
        if (it == map.end())
          throw Error(ErrorCode::UnknownCategory,
                      where + " column '" + spec.name + "' value '" + std::string(cell) + "' is not a known category");
        cat[i * dk + schema.slot(c)] = it->second;
      }
    }
  }
  return Dataset(schema, rows, std::move(cont), std::move(cat));
}

Dataset load_dataset(const std::filesystem::path& csv_path, const Schema& schema) {
  return parse_dataset(read_file(csv_path), schema);
}

Dataset load_dataset(const std::filesystem::path& csv_path, const std::filesystem::path& schema_path) {
  return load_dataset(csv_path, load_schema(schema_path));
}

std::string to_csv(const Dataset& ds) {
  const Schema& schema = ds.schema();
  std::string out;
  for (std::size_t c = 0; c < schema.dimension(); ++c) {
    if (c) out += ',';
    out += csv_escape(schema.columns()[c].name);
  }
  out += '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t c = 0; c < schema.dimension(); ++c) {
      if (c) out += ',';
      const ColumnSpec& spec = schema.columns()[c];
      if (spec.kind == ColumnKind::continuous)
        out += format_double(ds.continuous_at(i, schema.slot(c)));
      else
        out += csv_escape(spec.categories[static_cast<std::size_t>(ds.categorical_at(i, schema.slot(c)))]);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) { write_file_atomic(path, to_csv(ds)); }

Dataset normalize(const Dataset& ds) {
  const std::size_t dc = ds.schema().continuous_count();
  std::vector<double> cont = ds.continuous_values();
  for (std::size_t k = 0; k < dc; ++k) {
    const Range r = ds.ranges()[k];
    const double width = r.width();
    for (std::size_t i = 0; i < ds.size(); ++i) {
      double& v = cont[i * dc + k];
      v = width > 0.0 ? (v - r.min) / width : 0.0;
    }
  }
  return Dataset(ds.schema(), ds.size(), std::move(cont), ds.categorical_values());
}

}  // namespace dek
