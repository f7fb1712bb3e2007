#include "beltrami/integer_matrix.hpp"

#include <algorithm>

namespace beltrami {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw IntegerOverflow("int64 overflow in addition");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw IntegerOverflow("int64 overflow in multiplication");
  return r;
}

void SparseIntMatrix::add(int row, int col, std::int64_t value) {
  if (value == 0) return;
  auto& c = columns_.at(static_cast<std::size_t>(col));
  auto it = std::lower_bound(c.begin(), c.end(), row, [](const auto& e, int r) { return e.first < r; });
  if (it != c.end() && it->first == row) {
    it->second = checked_add(it->second, value);
    if (it->second == 0) c.erase(it);
  } else {
    c.insert(it, {row, value});
  }
}

std::int64_t SparseIntMatrix::at(int row, int col) const {
  const auto& c = column(col);
  auto it = std::lower_bound(c.begin(), c.end(), row, [](const auto& e, int r) { return e.first < r; });
  return (it != c.end() && it->first == row) ? it->second : 0;
}

std::size_t SparseIntMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& c : columns_) n += c.size();
  return n;
}

std::vector<std::int64_t> SparseIntMatrix::multiply(const std::vector<std::int64_t>& x) const {
  return multiply_shifted(x, 0);
}

std::vector<std::int64_t> SparseIntMatrix::multiply_shifted(const std::vector<std::int64_t>& x,
                                                            std::int64_t shift) const {
  std::vector<std::int64_t> y(static_cast<std::size_t>(rows_), 0);
  for (int c = 0; c < cols_; ++c) {
    const std::int64_t xc = x[static_cast<std::size_t>(c)];
    if (xc == 0) continue;
    for (const auto& [r, v] : columns_[static_cast<std::size_t>(c)])
      y[static_cast<std::size_t>(r)] = checked_add(y[static_cast<std::size_t>(r)], checked_mul(v, xc));
  }
  if (shift != 0)
    for (int i = 0; i < std::min(rows_, cols_); ++i)
      y[static_cast<std::size_t>(i)] =
          checked_add(y[static_cast<std::size_t>(i)], checked_mul(-shift, x[static_cast<std::size_t>(i)]));
  return y;
}

std::vector<double> SparseIntMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y(static_cast<std::size_t>(rows_), 0.0);
  for (int c = 0; c < cols_; ++c)
    for (const auto& [r, v] : columns_[static_cast<std::size_t>(c)])
      y[static_cast<std::size_t>(r)] += static_cast<double>(v) * x[static_cast<std::size_t>(c)];
  return y;
}

namespace {

constexpr std::uint64_t kPrime = 2305843009213693951ULL;  // 2^61 - 1

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kPrime);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a);
    a = mulmod(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t reduce(std::int64_t v) {
  const std::int64_t m = v % static_cast<std::int64_t>(kPrime);
  return static_cast<std::uint64_t>(m < 0 ? m + static_cast<std::int64_t>(kPrime) : m);
}

}  // namespace

std::vector<int> independent_columns(const std::vector<std::int64_t>& column_major, int rows, int cols) {
  // Each accepted column is stored reduced, with its pivot row normalized to 1.
  std::vector<std::vector<std::uint64_t>> basis;
  std::vector<int> pivots, chosen;
  for (int c = 0; c < cols; ++c) {
    std::vector<std::uint64_t> v(static_cast<std::size_t>(rows));
    bool nonzero = false;
    for (int r = 0; r < rows; ++r) {
      v[static_cast<std::size_t>(r)] = reduce(column_major[static_cast<std::size_t>(c) * rows + r]);
      nonzero = nonzero || v[static_cast<std::size_t>(r)] != 0;
    }
    if (!nonzero) continue;
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const std::uint64_t f = v[static_cast<std::size_t>(pivots[b])];
      if (f == 0) continue;
      for (int r = 0; r < rows; ++r) {
        const std::uint64_t t = mulmod(f, basis[b][static_cast<std::size_t>(r)]);
        auto& x = v[static_cast<std::size_t>(r)];
        x = x >= t ? x - t : x + kPrime - t;
      }
    }
    int p = -1;
    for (int r = 0; r < rows && p < 0; ++r)
      if (v[static_cast<std::size_t>(r)] != 0) p = r;
    if (p < 0) continue;
    const std::uint64_t inv = powmod(v[static_cast<std::size_t>(p)], kPrime - 2);
    for (auto& x : v) x = mulmod(x, inv);
    basis.push_back(std::move(v));
    pivots.push_back(p);
    chosen.push_back(c);
  }
  return chosen;
}

}  // namespace beltrami
