#include "fdal/matrix_market.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fdal {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

struct MmHeader {
  std::string object, format, field, symmetry;
};

MmHeader read_banner(std::istream &in, long &lineno) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty Matrix Market file", 1);
  ++lineno;
  std::istringstream ss(line);
  std::string tag;
  MmHeader h;
  ss >> tag >> h.object >> h.format >> h.field >> h.symmetry;
  if (tag != "%%MatrixMarket" || h.object != "matrix")
    throw ParseError("malformed Matrix Market banner", 1);
  if (h.field != "real") throw ParseError("only real matrices are supported", 1);
  if (h.format != "coordinate" && h.format != "array")
    throw ParseError("unknown Matrix Market format '" + h.format + "'", 1);
  if (h.symmetry != "general" && h.symmetry != "symmetric")
    throw ParseError("unsupported symmetry '" + h.symmetry + "'", 1);
  return h;
}

bool next_data_line(std::istream &in, std::string &line, long &lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '%') continue;
    return true;
  }
  return false;
}

}  // namespace

void mm_write(const SparseMatrix &a, const std::string &path, bool symmetric) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix coordinate real "
      << (symmetric ? "symmetric" : "general") << "\n";
  long count = 0;
  for (int i = 0; i < a.rows; ++i)
    for (long k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      if (!symmetric || a.col_idx[k] <= i) ++count;
  out << a.rows << " " << a.cols << " " << count << "\n";
  for (int i = 0; i < a.rows; ++i)
    for (long k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      if (symmetric && a.col_idx[k] > i) continue;
      out << (i + 1) << " " << (a.col_idx[k] + 1) << " " << fmt17(a.values[k]) << "\n";
    }
}

void mm_write(const DenseMatrix &a, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix array real general\n";
  out << a.rows << " " << a.cols << "\n";
  for (int j = 0; j < a.cols; ++j)
    for (int i = 0; i < a.rows; ++i) out << fmt17(a(i, j)) << "\n";
}

void mm_write(const std::vector<double> &v, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix array real general\n";
  out << v.size() << " 1\n";
  for (double x : v) out << fmt17(x) << "\n";
}

SparseMatrix mm_read_sparse(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  long lineno = 0;
  const MmHeader h = read_banner(in, lineno);
  if (h.format != "coordinate")
    throw ParseError("expected coordinate format for a sparse matrix", lineno);
  std::string line;
  if (!next_data_line(in, line, lineno)) throw ParseError("missing size line", lineno);
  std::istringstream ss(line);
  int rows = 0, cols = 0;
  long nnz = 0;
  if (!(ss >> rows >> cols >> nnz)) throw ParseError("malformed size line", lineno);
  std::vector<int> ti, tj;
  std::vector<double> tv;
  for (long k = 0; k < nnz; ++k) {
    if (!next_data_line(in, line, lineno))
      throw ParseError("unexpected end of file; expected " + std::to_string(nnz) + " entries",
                       lineno);
    std::istringstream es(line);
    int i = 0, j = 0;
    double v = 0.0;
    if (!(es >> i >> j >> v)) throw ParseError("malformed entry", lineno);
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw ParseError("index out of bounds", lineno);
    ti.push_back(i - 1);
    tj.push_back(j - 1);
    tv.push_back(v);
    if (h.symmetry == "symmetric" && i != j) {
      ti.push_back(j - 1);
      tj.push_back(i - 1);
      tv.push_back(v);
    }
  }
  return SparseMatrix::from_triplets(rows, cols, ti, tj, tv);
}

DenseMatrix mm_read_dense(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  long lineno = 0;
  const MmHeader h = read_banner(in, lineno);
  if (h.format != "array") throw ParseError("expected array format", lineno);
  std::string line;
  if (!next_data_line(in, line, lineno)) throw ParseError("missing size line", lineno);
  std::istringstream ss(line);
  int rows = 0, cols = 0;
  if (!(ss >> rows >> cols)) throw ParseError("malformed size line", lineno);
  DenseMatrix a(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      if (!next_data_line(in, line, lineno)) throw ParseError("unexpected end of file", lineno);
      std::istringstream es(line);
      double v;
      if (!(es >> v)) throw ParseError("malformed value", lineno);
      a(i, j) = v;
      if (h.symmetry == "symmetric" && i != j) a(j, i) = v;
    }
  return a;
}

std::vector<double> mm_read_vector(const std::string &path) {
  const DenseMatrix a = mm_read_dense(path);
  if (a.cols != 1) throw IoError(path + " is not a vector (cols != 1)");
  std::vector<double> v(a.rows);
  for (int i = 0; i < a.rows; ++i) v[i] = a(i, 0);
  return v;
}

}  // namespace fdal
