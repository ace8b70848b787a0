#include "craft/dataset.hpp"

#include <charconv>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "craft/error.hpp"

namespace craft {

Column Column::categorical(std::string name, std::vector<std::string> categories) {
  return Column{std::move(name), FeatureKind::Categorical, std::move(categories)};
}

Column Column::numeric(std::string name) { return Column{std::move(name), FeatureKind::Numeric, {}}; }

void Schema::validate() const {
  if (columns.empty()) throw Error(ErrorKind::SchemaInvalid, "schema has no feature columns");
  std::unordered_set<std::string> names;
  for (const auto& col : columns) {
    if (col.name.empty()) throw Error(ErrorKind::SchemaInvalid, "column with empty name");
    if (!names.insert(col.name).second)
      throw Error(ErrorKind::SchemaInvalid, "duplicate column name", std::nullopt, col.name);
    if (col.kind == FeatureKind::Categorical) {
      std::unordered_set<std::string> labels(col.categories.begin(), col.categories.end());
      if (labels.size() != col.categories.size())
        throw Error(ErrorKind::SchemaInvalid, "duplicate category label", std::nullopt, col.name);
      if (labels.size() < 2)
        throw Error(ErrorKind::SchemaInvalid, "categorical column needs at least two categories",
                    std::nullopt, col.name);
    } else if (!col.categories.empty()) {
      throw Error(ErrorKind::SchemaInvalid, "numeric column lists categories", std::nullopt, col.name);
    }
  }
  if (label_column && names.count(*label_column))
    throw Error(ErrorKind::SchemaInvalid, "label column is also a feature column", std::nullopt,
                *label_column);
}

std::optional<std::size_t> Schema::find(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i].name == name) return i;
  return std::nullopt;
}

Dataset::Dataset(Schema schema, std::size_t rows, std::vector<std::vector<std::int32_t>> categorical,
                 std::vector<std::vector<double>> numeric, std::vector<std::int32_t> labels,
                 std::vector<std::string> label_names)
    : schema_(std::move(schema)),
      rows_(rows),
      categorical_(std::move(categorical)),
      numeric_(std::move(numeric)),
      labels_(std::move(labels)),
      label_names_(std::move(label_names)) {
  schema_.validate();
  if (rows_ == 0) throw Error(ErrorKind::EmptyDataset, "dataset has no rows");
  slot_.resize(schema_.columns.size());
  for (std::size_t d = 0; d < schema_.columns.size(); ++d) {
    if (schema_.columns[d].kind == FeatureKind::Categorical) {
      slot_[d] = categorical_features_.size();
      categorical_features_.push_back(d);
    } else {
      slot_[d] = numeric_features_.size();
      numeric_features_.push_back(d);
    }
  }
  if (categorical_.size() != categorical_features_.size() || numeric_.size() != numeric_features_.size())
    throw Error(ErrorKind::InvalidArgument, "column storage does not match schema");
  for (std::size_t s = 0; s < categorical_.size(); ++s) {
    const auto& col = categorical_[s];
    const auto& name = schema_.columns[categorical_features_[s]].name;
    if (col.size() != rows_) throw Error(ErrorKind::RowArity, "column length mismatch", std::nullopt, name);
    const auto card = static_cast<std::int32_t>(cardinality(s));
    for (std::size_t n = 0; n < rows_; ++n)
      if (col[n] < 0 || col[n] >= card) throw Error(ErrorKind::UnknownCategory, "category code out of range", n, name);
  }
  for (std::size_t s = 0; s < numeric_.size(); ++s) {
    const auto& col = numeric_[s];
    const auto& name = schema_.columns[numeric_features_[s]].name;
    if (col.size() != rows_) throw Error(ErrorKind::RowArity, "column length mismatch", std::nullopt, name);
    for (std::size_t n = 0; n < rows_; ++n)
      if (!std::isfinite(col[n])) throw Error(ErrorKind::NonFiniteNumeric, "non-finite numeric value", n, name);
  }
  if (!labels_.empty()) {
    if (labels_.size() != rows_) throw Error(ErrorKind::LengthMismatch, "label count differs from row count");
    for (auto l : labels_)
      if (l < 0) throw Error(ErrorKind::InvalidArgument, "negative label code");
  }
}

std::vector<std::string> Dataset::feature_names() const {
  std::vector<std::string> out;
  out.reserve(schema_.columns.size());
  for (const auto& c : schema_.columns) out.push_back(c.name);
  return out;
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.schema_ == b.schema_ && a.rows_ == b.rows_ && a.categorical_ == b.categorical_ &&
         a.numeric_ == b.numeric_ && a.labels_ == b.labels_ && a.label_names_ == b.label_names_;
}

namespace {

double parse_numeric(const std::string& text, std::size_t row, const std::string& column) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  if (first < last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec == std::errc::result_out_of_range)
    throw Error(ErrorKind::NonFiniteNumeric, "numeric value out of range: '" + text + "'", row, column);
  if (ec != std::errc() || ptr != last || first == last)
    throw Error(ErrorKind::NonFiniteNumeric, "not a finite number: '" + text + "'", row, column);
  if (!std::isfinite(value))
    throw Error(ErrorKind::NonFiniteNumeric, "not a finite number: '" + text + "'", row, column);
  return value;
}

}  // namespace

Dataset ingest(const Schema& schema, const RawTable& table) {
  schema.validate();
  const std::size_t width = table.header.size();

  // header position -> schema column (or label)
  constexpr std::size_t kLabel = static_cast<std::size_t>(-1);
  std::vector<std::size_t> target(width);
  std::vector<bool> seen(schema.columns.size(), false);
  bool label_seen = false;
  for (std::size_t j = 0; j < width; ++j) {
    const auto& name = table.header[j];
    if (schema.label_column && name == *schema.label_column) {
      if (label_seen) throw Error(ErrorKind::SchemaInvalid, "label column repeated in header", std::nullopt, name);
      label_seen = true;
      target[j] = kLabel;
      continue;
    }
    auto idx = schema.find(name);
    if (!idx) throw Error(ErrorKind::UnknownColumn, "header column not in schema", std::nullopt, name);
    if (seen[*idx]) throw Error(ErrorKind::SchemaInvalid, "column repeated in header", std::nullopt, name);
    seen[*idx] = true;
    target[j] = *idx;
  }
  for (std::size_t d = 0; d < schema.columns.size(); ++d)
    if (!seen[d]) throw Error(ErrorKind::MissingColumn, "schema column missing from header", std::nullopt,
                              schema.columns[d].name);
  if (schema.label_column && !label_seen)
    throw Error(ErrorKind::MissingColumn, "label column missing from header", std::nullopt, *schema.label_column);

  std::vector<std::size_t> slot(schema.columns.size());
  std::size_t n_cat = 0, n_num = 0;
  std::vector<std::unordered_map<std::string, std::int32_t>> lookup;
  for (std::size_t d = 0; d < schema.columns.size(); ++d) {
    const auto& col = schema.columns[d];
    if (col.kind == FeatureKind::Categorical) {
      slot[d] = n_cat++;
      auto& map = lookup.emplace_back();
      for (std::size_t t = 0; t < col.categories.size(); ++t) map.emplace(col.categories[t], static_cast<std::int32_t>(t));
    } else {
      slot[d] = n_num++;
    }
  }

  const std::size_t n_rows = table.rows.size();
  std::vector<std::vector<std::int32_t>> categorical(n_cat, std::vector<std::int32_t>(n_rows));
  std::vector<std::vector<double>> numeric(n_num, std::vector<double>(n_rows));
  std::vector<std::int32_t> labels;
  std::vector<std::string> label_names;
  std::unordered_map<std::string, std::int32_t> label_codes;
  if (schema.label_column) labels.resize(n_rows);

  for (std::size_t n = 0; n < n_rows; ++n) {
    const auto& row = table.rows[n];
    if (row.size() != width)
      throw Error(ErrorKind::RowArity,
                  "expected " + std::to_string(width) + " fields, found " + std::to_string(row.size()), n);
    for (std::size_t j = 0; j < width; ++j) {
      if (target[j] == kLabel) {
        auto [it, inserted] = label_codes.emplace(row[j], static_cast<std::int32_t>(label_names.size()));
        if (inserted) label_names.push_back(row[j]);
        labels[n] = it->second;
        continue;
      }
      const std::size_t d = target[j];
      const auto& col = schema.columns[d];
      if (col.kind == FeatureKind::Categorical) {
        const auto& map = lookup[slot[d]];
        auto it = map.find(row[j]);
        if (it == map.end()) throw Error(ErrorKind::UnknownCategory, "unknown category '" + row[j] + "'", n, col.name);
        categorical[slot[d]][n] = it->second;
      } else {
        numeric[slot[d]][n] = parse_numeric(row[j], n, col.name);
      }
    }
  }
  if (n_rows == 0) throw Error(ErrorKind::EmptyDataset, "data has no rows");
  return Dataset(schema, n_rows, std::move(categorical), std::move(numeric), std::move(labels),
                 std::move(label_names));
}

}  // namespace craft
