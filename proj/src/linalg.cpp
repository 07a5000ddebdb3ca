#include "supersle/linalg.hpp"

#include <algorithm>

namespace supersle {

std::vector<std::size_t> rref(Matrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size();
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (m[i][c] != 0) {
        sel = i;
        break;
      }
    }
    if (sel == rows) continue;
    std::swap(m[r], m[sel]);
    Rational inv = Rational(1) / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  return pivots;
}

std::size_t rank(Matrix m) { return rref(m).size(); }

std::vector<Vec> nullspace(const Matrix& a, std::size_t cols) {
  Matrix m = a;
  for (auto& row : m) row.resize(cols, Rational(0));
  std::vector<std::size_t> pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t p : pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (std::size_t free_c = 0; free_c < cols; ++free_c) {
    if (is_pivot[free_c]) continue;
    Vec v(cols, Rational(0));
    v[free_c] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      v[pivots[i]] = -m[i][free_c];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vec> solve(Matrix a, Vec b) {
  const std::size_t rows = a.size();
  std::size_t cols = 0;
  for (const auto& row : a) cols = std::max(cols, row.size());
  Matrix aug(rows, Vec(cols + 1, Rational(0)));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) aug[i][j] = a[i][j];
    aug[i][cols] = i < b.size() ? b[i] : Rational(0);
  }
  std::vector<std::size_t> pivots = rref(aug);
  Vec x(cols, Rational(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == cols) return std::nullopt;  // row (0 ... 0 | 1)
    x[pivots[i]] = aug[i][cols];
  }
  return x;
}

bool in_span(const std::vector<Vec>& basis, const Vec& v) {
  Vec r = reduce_mod_span(basis, v);
  return std::all_of(r.begin(), r.end(), [](const Rational& x) { return x == 0; });
}

Vec reduce_mod_span(const std::vector<Vec>& basis, Vec v) {
  if (basis.empty()) return v;
  Matrix m = basis;
  std::size_t cols = v.size();
  for (auto& row : m) cols = std::max(cols, row.size());
  for (auto& row : m) row.resize(cols, Rational(0));
  v.resize(cols, Rational(0));
  std::vector<std::size_t> pivots = rref(m);
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    Rational f = v[pivots[i]];
    if (f == 0) continue;
    for (std::size_t j = 0; j < cols; ++j) v[j] -= f * m[i][j];
  }
  return v;
}

Matrix quotient_projector(const std::vector<Vec>& basis, std::size_t dim) {
  Matrix p(dim, Vec(dim, Rational(0)));
  for (std::size_t j = 0; j < dim; ++j) {
    Vec e(dim, Rational(0));
    e[j] = 1;
    Vec r = reduce_mod_span(basis, std::move(e));
    for (std::size_t i = 0; i < dim; ++i) p[i][j] = r[i];
  }
  return p;
}

}  // namespace supersle
