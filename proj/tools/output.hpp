#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace eacomm::cli {

using Cell = std::variant<double, std::string>;

// Header, rows and ordered metadata of one experiment or sweep.
struct ResultTable {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  void add_row(std::vector<Cell> row);
  void add_meta(const std::string& key, const std::string& value);
  // Rows whose "status" column is not "ok".
  long failed_rows() const;
};

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(const std::string& name);
// 17 significant digits; round-trips any double.
std::string format_number(double v);
void write_csv(const ResultTable& table, std::ostream& os);
void write_json(const ResultTable& table, std::ostream& os);
// Writes to `path`, or to stdout when path is empty or "-".
void write_table(const ResultTable& table, OutputFormat format, const std::string& path);

}  // namespace eacomm::cli
