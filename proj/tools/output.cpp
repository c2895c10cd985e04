#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "usage.hpp"

namespace eacomm::cli {

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != header.size()) throw std::logic_error("ResultTable: row width does not match header");
  rows.push_back(std::move(row));
}

void ResultTable::add_meta(const std::string& key, const std::string& value) { metadata.emplace_back(key, value); }

long ResultTable::failed_rows() const {
  long col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "status") col = static_cast<long>(i);
  }
  if (col < 0) return 0;
  long failed = 0;
  for (const auto& r : rows) {
    const auto* s = std::get_if<std::string>(&r[col]);
    failed += !(s && *s == "ok");
  }
  return failed;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw UsageError("unknown output format '" + name + "' (expected csv or json)");
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string csv_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    return std::isfinite(*d) ? format_number(*d) : quote(std::isnan(*d) ? "nan" : (*d > 0 ? "inf" : "-inf"));
  }
  return quote(std::get<std::string>(c));
}

}  // namespace

void write_csv(const ResultTable& t, std::ostream& os) {
  for (const auto& [k, v] : t.metadata) os << "# " << k << ": " << v << "\n";
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i]);
    os << "\n";
  }
}

void write_json(const ResultTable& t, std::ostream& os) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.metadata) meta[k] = v;
  doc["metadata"] = meta;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (const auto* d = std::get_if<double>(&r[i])) {
        obj[t.header[i]] = std::isfinite(*d) ? nlohmann::ordered_json(*d) : nlohmann::ordered_json(nullptr);
      } else {
        obj[t.header[i]] = std::get<std::string>(r[i]);
      }
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = rows;
  os << doc.dump(2) << "\n";
}

void write_table(const ResultTable& t, OutputFormat f, const std::string& path) {
  auto emit = [&](std::ostream& os) { f == OutputFormat::Csv ? write_csv(t, os) : write_json(t, os); };
  if (path.empty() || path == "-") {
    emit(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open output file '" + path + "'");
  emit(out);
}

}  // namespace eacomm::cli
