#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace craft {

enum class ErrorKind {
  UnknownCategory,
  NonFiniteNumeric,
  RowArity,
  UnknownColumn,
  MissingColumn,
  SchemaInvalid,
  EmptyDataset,
  EmptyCluster,
  RhoOutOfRange,
  InvalidArgument,
  KTooLarge,
  LengthMismatch,
  NonBinaryFeature,
  NonNumericFeature,
  SpecInvalid,
  Io,
  Config,
};

std::string_view to_string(ErrorKind kind);

// Every failure the library reports carries a kind plus, for ingestion
// problems, the offending data row (0-based, header excluded) and column.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> row = std::nullopt,
        std::optional<std::string> column = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  const std::optional<std::size_t>& row() const noexcept { return row_; }
  const std::optional<std::string>& column() const noexcept { return column_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> row_;
  std::optional<std::string> column_;
};

}  // namespace craft
