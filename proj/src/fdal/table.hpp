#ifndef FDAL_TABLE_HPP
#define FDAL_TABLE_HPP

#include <string>
#include <vector>

namespace fdal {

/// Result table in the experiment layout: a DoF column, one column per jump
/// value and a trailing inner-iteration column. Cells are kept as strings so
/// dagger markers and parenthesized fallback counts round-trip exactly.
struct ResultTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string caption;
};

void emit_csv(const ResultTable &table, const std::string &path);
ResultTable read_csv(const std::string &path);

}  // namespace fdal

#endif
