#ifndef CI2D_REPORT_HPP
#define CI2D_REPORT_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ci2d/types.hpp"

namespace ci2d {

struct LedgerRow {
  int level = 0;
  std::string window;
  std::string norm_name;
  Real value = 0;
  std::optional<Real> target;
  std::optional<bool> pass;
};

struct Ledger {
  std::vector<LedgerRow> rows;

  void add(int level, const std::string& window, const std::string& name,
           Real value);
  void add_checked(int level, const std::string& window, const std::string& name,
                   Real value, Real target, bool pass);
};

/// RFC-4180 CSV with header (level,window,norm_name,value,target,pass);
/// deterministic order and %.17g numbers so values round trip exactly.
void write_csv(std::ostream& os, const Ledger& ledger);
Ledger parse_csv(std::istream& is);

/// Human-readable fixed-width table.
void write_table(std::ostream& os, const Ledger& ledger);

std::string format_real(Real v);

}  // namespace ci2d

#endif  // CI2D_REPORT_HPP
