#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "craft/dataset.hpp"

namespace craft::io {

Schema schema_from_json(const nlohmann::json& j);
nlohmann::json schema_to_json(const Schema& schema);
Schema load_schema(const std::filesystem::path& path);

// RFC 4180 style: comma separated, double-quote quoting, "" escapes,
// LF or CRLF line ends. The first record is the header.
RawTable read_csv(std::istream& in);
RawTable read_csv(const std::filesystem::path& path);

Dataset load_dataset(const std::filesystem::path& data, const std::filesystem::path& schema);

// %.17g, which round-trips every finite double.
std::string format_double(double v);

void write_csv(std::ostream& out, const Dataset& data);

// Writes the schema first; an empty dataset cannot exist, so the data file is
// always written when this returns.
void emit(const Dataset& data, const std::filesystem::path& data_path, const std::filesystem::path& schema_path);

// Write to a sibling temp file, then rename over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace craft::io
