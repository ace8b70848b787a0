#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace craft {

enum class FeatureKind { Categorical, Numeric };

struct Column {
  std::string name;
  FeatureKind kind = FeatureKind::Numeric;
  std::vector<std::string> categories;  // empty for numeric columns

  static Column categorical(std::string name, std::vector<std::string> categories);
  static Column numeric(std::string name);

  friend bool operator==(const Column&, const Column&) = default;
};

struct Schema {
  std::vector<Column> columns;
  // Held out from clustering; only the metrics read it.
  std::optional<std::string> label_column;

  // Throws SchemaInvalid on duplicate names, categorical columns with fewer
  // than two distinct labels, an empty column list, or a label column that
  // collides with a feature column.
  void validate() const;

  std::size_t size() const { return columns.size(); }
  std::optional<std::size_t> find(const std::string& name) const;

  friend bool operator==(const Schema&, const Schema&) = default;
};

// Raw text table as read from CSV: one header plus string cells.
struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Immutable column store over N rows. Features keep their schema order
// d = 0..D-1; each feature also has a slot inside its kind group, which is
// how the per-kind arrays are indexed.
class Dataset {
 public:
  Dataset(Schema schema, std::size_t rows, std::vector<std::vector<std::int32_t>> categorical,
          std::vector<std::vector<double>> numeric, std::vector<std::int32_t> labels = {},
          std::vector<std::string> label_names = {});

  const Schema& schema() const { return schema_; }
  std::size_t rows() const { return rows_; }
  std::size_t features() const { return schema_.columns.size(); }
  std::size_t categorical_count() const { return categorical_features_.size(); }
  std::size_t numeric_count() const { return numeric_features_.size(); }

  FeatureKind kind(std::size_t feature) const { return schema_.columns[feature].kind; }
  std::size_t slot(std::size_t feature) const { return slot_[feature]; }
  const std::vector<std::size_t>& categorical_features() const { return categorical_features_; }
  const std::vector<std::size_t>& numeric_features() const { return numeric_features_; }

  std::size_t cardinality(std::size_t cat_slot) const {
    return schema_.columns[categorical_features_[cat_slot]].categories.size();
  }
  std::int32_t code(std::size_t row, std::size_t cat_slot) const { return categorical_[cat_slot][row]; }
  double value(std::size_t row, std::size_t num_slot) const { return numeric_[num_slot][row]; }
  std::span<const std::int32_t> categorical_column(std::size_t cat_slot) const { return categorical_[cat_slot]; }
  std::span<const double> numeric_column(std::size_t num_slot) const { return numeric_[num_slot]; }

  bool has_labels() const { return !labels_.empty(); }
  std::span<const std::int32_t> labels() const { return labels_; }
  const std::vector<std::string>& label_names() const { return label_names_; }

  std::vector<std::string> feature_names() const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  Schema schema_;
  std::size_t rows_;
  std::vector<std::vector<std::int32_t>> categorical_;
  std::vector<std::vector<double>> numeric_;
  std::vector<std::int32_t> labels_;
  std::vector<std::string> label_names_;
  std::vector<std::size_t> slot_;
  std::vector<std::size_t> categorical_features_;
  std::vector<std::size_t> numeric_features_;
};

// Maps category labels to codes, parses numerics, and splits out the label
// column. Header names are matched to schema columns by name, so CSV column
// order is free. Label values are coded in order of first appearance.
Dataset ingest(const Schema& schema, const RawTable& table);

}  // namespace craft
