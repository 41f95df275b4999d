#pragma once

#include <map>
#include <string>
#include <vector>

namespace confdirac::cli {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  friend bool operator==(const Table&, const Table&);
};

struct Check {
  std::string name;
  bool pass = false;
  double defect = 0.0;
  double tolerance = 0.0;

  friend bool operator==(const Check&, const Check&);
};

/// Scalars, text fields, checks and one table of a run. Doubles are written
/// with 17 significant digits, so reading a record back yields identical values.
struct ResultRecord {
  std::string command;
  std::string config_hash;
  std::string timestamp;
  std::map<std::string, std::string> config;  ///< canonical config echo
  std::map<std::string, double> scalars;
  std::map<std::string, std::string> text;
  std::vector<Check> checks;
  Table table;

  bool passed() const;
  void add_check(const std::string& name, bool pass, double defect, double tolerance);

  std::string to_text() const;     ///< the keyed record (without the table)
  std::string table_csv() const;
  static ResultRecord parse(const std::string& record_text, const std::string& table_csv = "");

  /// Writes <prefix>.record.txt and <prefix>.table.csv.
  void write(const std::string& prefix) const;
  static ResultRecord read(const std::string& prefix);

  /// Equality of everything except the timestamp.
  bool same_result(const ResultRecord& other) const;
};

/// Human-readable rendering of the table (for stdout).
std::string format_table(const Table& table, std::size_t max_rows = 40);

}  // namespace confdirac::cli
