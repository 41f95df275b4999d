#include "confdirac_cli/record.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace confdirac::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw std::runtime_error("record: bad number '" + s + "'");
  return v;
}

// NaN-aware bitwise-faithful comparison.
bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("record: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

bool operator==(const Table& a, const Table& b) {
  if (a.columns != b.columns || a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].size() != b.rows[i].size()) return false;
    for (std::size_t j = 0; j < a.rows[i].size(); ++j)
      if (!same(a.rows[i][j], b.rows[i][j])) return false;
  }
  return true;
}

bool operator==(const Check& a, const Check& b) {
  return a.name == b.name && a.pass == b.pass && same(a.defect, b.defect) && same(a.tolerance, b.tolerance);
}

bool ResultRecord::passed() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

void ResultRecord::add_check(const std::string& name, bool pass, double defect, double tolerance) {
  checks.push_back({name, pass, defect, tolerance});
}

std::string ResultRecord::to_text() const {
  std::ostringstream o;
  o << "# confdirac result record\n";
  o << "command = " << command << '\n';
  o << "config_hash = " << config_hash << '\n';
  o << "timestamp = " << timestamp << '\n';
  for (const auto& [k, v] : config) o << "config." << k << " = " << one_line(v) << '\n';
  for (const auto& [k, v] : scalars) o << "scalar." << k << " = " << fmt(v) << '\n';
  for (const auto& [k, v] : text) o << "text." << k << " = " << one_line(v) << '\n';
  for (const auto& c : checks)
    o << "check." << c.name << " = " << (c.pass ? "pass" : "fail") << " defect=" << fmt(c.defect)
      << " tolerance=" << fmt(c.tolerance) << '\n';
  o << "overall = " << (passed() ? "pass" : "fail") << '\n';
  return o.str();
}

std::string ResultRecord::table_csv() const {
  std::ostringstream o;
  for (std::size_t j = 0; j < table.columns.size(); ++j) o << (j ? "," : "") << table.columns[j];
  o << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) o << (j ? "," : "") << fmt(row[j]);
    o << '\n';
  }
  return o.str();
}

ResultRecord ResultRecord::parse(const std::string& record_text, const std::string& table_csv) {
  ResultRecord r;
  std::istringstream in(record_text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw std::runtime_error("record: malformed line '" + line + "'");
    const std::string key = line.substr(0, eq), value = line.substr(eq + 3);
    if (key == "command") r.command = value;
    else if (key == "config_hash") r.config_hash = value;
    else if (key == "timestamp") r.timestamp = value;
    else if (key == "overall") continue;
    else if (key.rfind("config.", 0) == 0) r.config[key.substr(7)] = value;
    else if (key.rfind("scalar.", 0) == 0) r.scalars[key.substr(7)] = parse_double(value);
    else if (key.rfind("text.", 0) == 0) r.text[key.substr(5)] = value;
    else if (key.rfind("check.", 0) == 0) {
      Check c;
      c.name = key.substr(6);
      std::istringstream cs(value);
      std::string verdict, d, t;
      cs >> verdict >> d >> t;
      if ((verdict != "pass" && verdict != "fail") || d.rfind("defect=", 0) != 0 || t.rfind("tolerance=", 0) != 0)
        throw std::runtime_error("record: malformed check '" + line + "'");
      c.pass = verdict == "pass";
      c.defect = parse_double(d.substr(7));
      c.tolerance = parse_double(t.substr(10));
      r.checks.push_back(c);
    } else {
      throw std::runtime_error("record: unknown key '" + key + "'");
    }
  }
  std::istringstream tin(table_csv);
  if (std::getline(tin, line) && !line.empty()) {
    std::istringstream hs(line);
    std::string col;
    while (std::getline(hs, col, ',')) r.table.columns.push_back(col);
    while (std::getline(tin, line)) {
      if (line.empty()) continue;
      std::vector<double> row;
      std::istringstream rs(line);
      std::string cell;
      while (std::getline(rs, cell, ',')) row.push_back(parse_double(cell));
      r.table.rows.push_back(std::move(row));
    }
  }
  return r;
}

void ResultRecord::write(const std::string& prefix) const {
  {
    std::ofstream out(prefix + ".record.txt");
    if (!out) throw std::runtime_error("record: cannot write " + prefix + ".record.txt");
    out << to_text();
  }
  std::ofstream out(prefix + ".table.csv");
  if (!out) throw std::runtime_error("record: cannot write " + prefix + ".table.csv");
  out << table_csv();
}

ResultRecord ResultRecord::read(const std::string& prefix) {
  return parse(slurp(prefix + ".record.txt"), slurp(prefix + ".table.csv"));
}

bool ResultRecord::same_result(const ResultRecord& o) const {
  if (command != o.command || config_hash != o.config_hash || config != o.config || text != o.text ||
      checks != o.checks || !(table == o.table) || scalars.size() != o.scalars.size())
    return false;
  for (const auto& [k, v] : scalars) {
    const auto it = o.scalars.find(k);
    if (it == o.scalars.end() || !same(v, it->second)) return false;
  }
  return true;
}

std::string format_table(const Table& table, std::size_t max_rows) {
  std::ostringstream o;
  for (const auto& c : table.columns) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%16s", c.c_str());
    o << buf;
  }
  o << '\n';
  const std::size_t shown = std::min(max_rows, table.rows.size());
  for (std::size_t i = 0; i < shown; ++i) {
    for (double v : table.rows[i]) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%16.10g", v);
      o << buf;
    }
    o << '\n';
  }
  if (shown < table.rows.size()) o << "  ... " << table.rows.size() - shown << " more rows in the CSV\n";
  return o.str();
}

}  // namespace confdirac::cli
