#include "craft/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "craft/error.hpp"

namespace craft::io {

using nlohmann::json;

Schema schema_from_json(const json& j) {
  if (!j.is_object() || !j.contains("columns") || !j["columns"].is_array())
    throw Error(ErrorKind::SchemaInvalid, "schema must be an object with a 'columns' array");
  Schema schema;
  for (const auto& c : j["columns"]) {
    if (!c.is_object() || !c.contains("name") || !c["name"].is_string() || !c.contains("kind"))
      throw Error(ErrorKind::SchemaInvalid, "column entries need 'name' and 'kind'");
    const auto name = c["name"].get<std::string>();
    const auto kind = c["kind"].get<std::string>();
    if (kind == "numeric") {
      schema.columns.push_back(Column::numeric(name));
    } else if (kind == "categorical") {
      if (!c.contains("categories") || !c["categories"].is_array())
        throw Error(ErrorKind::SchemaInvalid, "categorical column needs 'categories'", std::nullopt, name);
      std::vector<std::string> cats;
      for (const auto& t : c["categories"]) {
        if (!t.is_string()) throw Error(ErrorKind::SchemaInvalid, "category labels must be strings", std::nullopt, name);
        cats.push_back(t.get<std::string>());
      }
      schema.columns.push_back(Column::categorical(name, std::move(cats)));
    } else {
      throw Error(ErrorKind::SchemaInvalid, "unknown column kind '" + kind + "'", std::nullopt, name);
    }
  }
  if (j.contains("label_column") && !j["label_column"].is_null()) {
    if (!j["label_column"].is_string()) throw Error(ErrorKind::SchemaInvalid, "'label_column' must be a string");
    schema.label_column = j["label_column"].get<std::string>();
  }
  schema.validate();
  return schema;
}

json schema_to_json(const Schema& schema) {
  json cols = json::array();
  for (const auto& c : schema.columns) {
    if (c.kind == FeatureKind::Numeric)
      cols.push_back({{"name", c.name}, {"kind", "numeric"}});
    else
      cols.push_back({{"name", c.name}, {"kind", "categorical"}, {"categories", c.categories}});
  }
  json j = {{"columns", cols}};
  if (schema.label_column) j["label_column"] = *schema.label_column;
  return j;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Schema load_schema(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SchemaInvalid, "'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return schema_from_json(j);
}

RawTable read_csv(std::istream& in) {
  RawTable table;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  bool any = false;
  bool have_header = false;

  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    // A blank line carries no record.
    if (!(record.size() == 1 && record[0].empty())) {
      if (!have_header) {
        table.header = std::move(record);
        have_header = true;
      } else {
        table.rows.push_back(std::move(record));
      }
    }
    record.clear();
    field_started = false;
  };

  char ch;
  while (in.get(ch)) {
    any = true;
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!field_started && field.empty()) {
          in_quotes = true;
          field_started = true;
        } else {
          field += ch;
        }
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
        break;
      case '\r':
        if (in.peek() == '\n') break;
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field += ch;
        field_started = true;
    }
  }
  if (in_quotes) throw Error(ErrorKind::Io, "unterminated quoted CSV field");
  if (any && (!field.empty() || !record.empty())) end_record();
  if (!have_header) throw Error(ErrorKind::Io, "CSV input has no header row");
  return table;
}

RawTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  return read_csv(in);
}

Dataset load_dataset(const std::filesystem::path& data, const std::filesystem::path& schema) {
  return ingest(load_schema(schema), read_csv(data));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void put_field(std::ostream& out, const std::string& s) {
  bool quote = s.empty() ? false : s.find_first_of(",\"\r\n") != std::string::npos;
  if (!quote && !s.empty() && (s.front() == ' ' || s.back() == ' ')) quote = true;
  if (!quote) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

void write_csv(std::ostream& out, const Dataset& data) {
  const auto& schema = data.schema();
  for (std::size_t d = 0; d < schema.columns.size(); ++d) {
    if (d) out << ',';
    put_field(out, schema.columns[d].name);
  }
  if (schema.label_column) {
    out << ',';
    put_field(out, *schema.label_column);
  }
  out << '\n';
  for (std::size_t n = 0; n < data.rows(); ++n) {
    for (std::size_t d = 0; d < data.features(); ++d) {
      if (d) out << ',';
      const auto s = data.slot(d);
      if (data.kind(d) == FeatureKind::Categorical)
        put_field(out, schema.columns[d].categories[data.code(n, s)]);
      else
        out << format_double(data.value(n, s));
    }
    if (schema.label_column) {
      out << ',';
      if (data.has_labels()) put_field(out, data.label_names()[data.labels()[n]]);
    }
    out << '\n';
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot move result into '" + path.string() + "'");
  }
}

void emit(const Dataset& data, const std::filesystem::path& data_path, const std::filesystem::path& schema_path) {
  write_file_atomic(schema_path, schema_to_json(data.schema()).dump(2) + "\n");
  std::ostringstream ss;
  write_csv(ss, data);
  write_file_atomic(data_path, ss.str());
}

}  // namespace craft::io
