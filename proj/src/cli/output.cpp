#include <charconv>
#include <cmath>
#include <ostream>

#include "inert/cli.hpp"

namespace inert::cli {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

namespace {

std::string cell_text(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) {
    return std::to_string(*i);
  }
  return std::get<std::string>(cell);
}

std::string scalar_text(const nlohmann::ordered_json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "nan";
  return v.dump();
}

nlohmann::ordered_json cell_json(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    if (!std::isfinite(*d)) return nullptr;
    return *d;
  }
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  return std::get<std::string>(cell);
}

// JSON has no NaN; map non-finite numbers to null.
nlohmann::ordered_json sanitize(const nlohmann::ordered_json& v) {
  if (v.is_number_float() && !std::isfinite(v.get<double>())) return nullptr;
  if (v.is_structured()) {
    nlohmann::ordered_json out = v;
    for (auto& item : out) item = sanitize(item);
    return out;
  }
  return v;
}

}  // namespace

void write_csv(std::ostream& out, const Report& report) {
  for (const auto& [key, value] : report.config.items()) {
    out << "# config." << key << '=' << scalar_text(value) << '\n';
  }
  for (const auto& [key, value] : report.results.items()) {
    out << "# results." << key << '=' << scalar_text(value) << '\n';
  }
  for (std::size_t c = 0; c < report.table.columns.size(); ++c) {
    if (c) out << ',';
    out << csv_field(report.table.columns[c]);
  }
  out << '\n';
  for (const auto& row : report.table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << csv_field(cell_text(row[c]));
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const Report& report) {
  nlohmann::ordered_json doc;
  doc["config"] = sanitize(report.config);
  nlohmann::ordered_json results = sanitize(report.results);
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : report.table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      obj[report.table.columns[c]] = cell_json(row[c]);
    }
    rows.push_back(std::move(obj));
  }
  results[report.table_name] = std::move(rows);
  doc["results"] = std::move(results);
  out << doc.dump(2) << '\n';
}

}  // namespace inert::cli
