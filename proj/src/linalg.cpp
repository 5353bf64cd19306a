#include "exactfit/linalg.hpp"

#include <stdexcept>

namespace exactfit::linalg {

namespace {

int columns_of(const Matrix& a) {
  if (a.empty()) return 0;
  const std::size_t w = a.front().size();
  for (const auto& row : a)
    if (row.size() != w) throw std::invalid_argument("ragged matrix");
  return static_cast<int>(w);
}

}  // namespace

int rank(Matrix a) {
  const int m = static_cast<int>(a.size());
  const int n = columns_of(a);
  int r = 0;
  for (int col = 0; col < n && r < m; ++col) {
    int pivot = -1;
    for (int row = r; row < m; ++row)
      if (a[row][col] != 0) { pivot = row; break; }
    if (pivot < 0) continue;
    std::swap(a[r], a[pivot]);
    for (int row = 0; row < m; ++row) {
      if (row == r || a[row][col] == 0) continue;
      Rat f = a[row][col] / a[r][col];
      for (int j = col; j < n; ++j) a[row][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

std::optional<std::vector<Rat>> solve(Matrix a, std::vector<Rat> y) {
  const int m = static_cast<int>(a.size());
  if (static_cast<int>(y.size()) != m) throw std::invalid_argument("rhs length mismatch");
  const int n = columns_of(a);

  std::vector<int> pivot_col;
  int r = 0;
  for (int col = 0; col < n && r < m; ++col) {
    int pivot = -1;
    for (int row = r; row < m; ++row)
      if (a[row][col] != 0) { pivot = row; break; }
    if (pivot < 0) continue;
    std::swap(a[r], a[pivot]);
    std::swap(y[r], y[pivot]);
    for (int row = 0; row < m; ++row) {
      if (row == r || a[row][col] == 0) continue;
      Rat f = a[row][col] / a[r][col];
      for (int j = col; j < n; ++j) a[row][j] -= f * a[r][j];
      y[row] -= f * y[r];
    }
    pivot_col.push_back(col);
    ++r;
  }
  for (int row = r; row < m; ++row)
    if (y[row] != 0) return std::nullopt;

  std::vector<Rat> x(n, Rat(0));
  for (int i = 0; i < r; ++i) x[pivot_col[i]] = y[i] / a[i][pivot_col[i]];
  return x;
}

}  // namespace exactfit::linalg
