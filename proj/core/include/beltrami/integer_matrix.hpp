#pragma once

// Sparse integer matrices with overflow-checked arithmetic, used by the exact eigensolver.

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace beltrami {

struct IntegerOverflow : std::overflow_error {
  using std::overflow_error::overflow_error;
};

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

// Column-compressed sparse matrix of int64 entries.
class SparseIntMatrix {
 public:
  SparseIntMatrix() = default;
  SparseIntMatrix(int rows, int cols) : rows_(rows), cols_(cols), columns_(static_cast<std::size_t>(cols)) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  void add(int row, int col, std::int64_t value);
  const std::vector<std::pair<int, std::int64_t>>& column(int c) const { return columns_[static_cast<std::size_t>(c)]; }
  std::int64_t at(int row, int col) const;
  std::size_t nonzeros() const;

  // y = M x, checked.
  std::vector<std::int64_t> multiply(const std::vector<std::int64_t>& x) const;
  // y = (M - shift I) x, checked.
  std::vector<std::int64_t> multiply_shifted(const std::vector<std::int64_t>& x, std::int64_t shift) const;
  std::vector<double> multiply(const std::vector<double>& x) const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<std::vector<std::pair<int, std::int64_t>>> columns_;
};

// Indices of a maximal set of linearly independent columns of a dense column-major
// integer matrix, found by elimination modulo a 61-bit prime. Independence modulo p
// implies independence over Q, so the returned columns are always independent.
std::vector<int> independent_columns(const std::vector<std::int64_t>& column_major, int rows, int cols);

}  // namespace beltrami
