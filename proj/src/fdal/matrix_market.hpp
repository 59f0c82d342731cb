#ifndef FDAL_MATRIX_MARKET_HPP
#define FDAL_MATRIX_MARKET_HPP

#include <string>
#include <vector>

#include "fdal/dense.hpp"
#include "fdal/sparse.hpp"

namespace fdal {

// Matrix Market I/O, lossless to 17 significant digits. Sparse matrices use
// the coordinate format (symmetric storage when the symmetric flag is set),
// dense matrices and vectors the array format.

void mm_write(const SparseMatrix &a, const std::string &path, bool symmetric = false);
void mm_write(const DenseMatrix &a, const std::string &path);
void mm_write(const std::vector<double> &v, const std::string &path);

SparseMatrix mm_read_sparse(const std::string &path);
DenseMatrix mm_read_dense(const std::string &path);
std::vector<double> mm_read_vector(const std::string &path);

}  // namespace fdal

#endif
