#include "ci2d/report.hpp"

#include <cstdio>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace ci2d {

void Ledger::add(int level, const std::string& window, const std::string& name,
                 Real value) {
  rows.push_back({level, window, name, value, std::nullopt, std::nullopt});
}

void Ledger::add_checked(int level, const std::string& window,
                         const std::string& name, Real value, Real target,
                         bool pass) {
  rows.push_back({level, window, name, value, target, pass});
}

std::string format_real(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

void write_csv(std::ostream& os, const Ledger& ledger) {
  os << "level,window,norm_name,value,target,pass\r\n";
  for (const auto& r : ledger.rows) {
    os << r.level << ',' << csv_quote(r.window) << ',' << csv_quote(r.norm_name)
       << ',' << format_real(r.value) << ',';
    if (r.target) os << format_real(*r.target);
    os << ',';
    if (r.pass) os << (*r.pass ? "true" : "false");
    os << "\r\n";
  }
}

Ledger parse_csv(std::istream& is) {
  Ledger out;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
      char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          cur += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        cells.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    cells.push_back(cur);
    if (cells.size() != 6) throw std::runtime_error("malformed ledger CSV row");
    LedgerRow r;
    r.level = std::stoi(cells[0]);
    r.window = cells[1];
    r.norm_name = cells[2];
    r.value = std::stod(cells[3]);
    if (!cells[4].empty()) r.target = std::stod(cells[4]);
    if (!cells[5].empty()) r.pass = cells[5] == "true";
    out.rows.push_back(r);
  }
  return out;
}

void write_table(std::ostream& os, const Ledger& ledger) {
  os << std::left << std::setw(6) << "level" << std::setw(26) << "window"
     << std::setw(30) << "norm" << std::setw(24) << "value" << std::setw(24)
     << "target" << "pass\n";
  for (const auto& r : ledger.rows) {
    os << std::left << std::setw(6) << r.level << std::setw(26) << r.window
       << std::setw(30) << r.norm_name << std::setw(24) << format_real(r.value)
       << std::setw(24) << (r.target ? format_real(*r.target) : std::string("-"))
       << (r.pass ? (*r.pass ? "pass" : "FAIL") : "-") << "\n";
  }
}

}  // namespace ci2d
