#include "fdal/table.hpp"

#include <fstream>
#include <sstream>

#include "fdal/errors.hpp"

namespace fdal {

namespace {

std::string escape(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::vector<std::string> split_csv_line(const std::string &line, long lineno) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c == '\r') {
      // ignore
    } else {
      cur += c;
    }
  }
  if (quoted) throw ParseError("unterminated quote in CSV", lineno);
  cells.push_back(cur);
  return cells;
}

}  // namespace

void emit_csv(const ResultTable &table, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  if (!table.caption.empty()) out << "# " << table.caption << "\n";
  for (std::size_t j = 0; j < table.header.size(); ++j)
    out << (j ? "," : "") << escape(table.header[j]);
  out << "\n";
  for (const auto &row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << escape(row[j]);
    out << "\n";
  }
}

ResultTable read_csv(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  ResultTable table;
  std::string line;
  long lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (table.caption.empty() && line.size() > 2) table.caption = line.substr(2);
      continue;
    }
    auto cells = split_csv_line(line, lineno);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

}  // namespace fdal
