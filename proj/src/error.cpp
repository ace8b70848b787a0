#include "craft/error.hpp"

namespace craft {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownCategory: return "UnknownCategory";
    case ErrorKind::NonFiniteNumeric: return "NonFiniteNumeric";
    case ErrorKind::RowArity: return "RowArity";
    case ErrorKind::UnknownColumn: return "UnknownColumn";
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::SchemaInvalid: return "SchemaInvalid";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::EmptyCluster: return "EmptyCluster";
    case ErrorKind::RhoOutOfRange: return "RhoOutOfRange";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::KTooLarge: return "KTooLarge";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NonBinaryFeature: return "NonBinaryFeature";
    case ErrorKind::NonNumericFeature: return "NonNumericFeature";
    case ErrorKind::SpecInvalid: return "SpecInvalid";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

namespace {

std::string decorate(const std::string& message, const std::optional<std::size_t>& row,
                     const std::optional<std::string>& column) {
  std::string out = message;
  if (row) out += " (row " + std::to_string(*row) + ")";
  if (column) out += " (column '" + *column + "')";
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> row,
             std::optional<std::string> column)
    : std::runtime_error(decorate(message, row, column)),
      kind_(kind),
      row_(row),
      column_(std::move(column)) {}

}  // namespace craft
