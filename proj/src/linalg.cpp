#include "schemefactor/linalg.hpp"

namespace sf {

Matrix Matrix::from_rows(const std::vector<Vec>& rs, std::size_t cols) {
  Matrix m(rs.size(), cols);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i].size() != cols) fail(ErrorKind::InvalidArgument, "ragged matrix rows");
    std::copy(rs[i].begin(), rs[i].end(), m.data.begin() + i * cols);
  }
  return m;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Echelon rref(const FieldCtx& k, Matrix m) {
  Echelon out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t piv = r;
    while (piv < m.rows && m.at(piv, c) == 0) ++piv;
    if (piv == m.rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
    const u64 inv = k.inv(m.at(r, c));
    for (std::size_t j = c; j < m.cols; ++j) m.at(r, j) = k.mul(m.at(r, j), inv);
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r) continue;
      const u64 f = m.at(i, c);
      if (f == 0) continue;
      for (std::size_t j = c; j < m.cols; ++j) m.at(i, j) = k.sub(m.at(i, j), k.mul(f, m.at(r, j)));
    }
    out.pivots.push_back(c);
    ++r;
  }
  m.rows = r;
  m.data.resize(r * m.cols);
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const FieldCtx& k, const Matrix& m) { return rref(k, m).rank(); }

std::vector<Vec> kernel(const FieldCtx& k, const Matrix& m) {
  Echelon e = rref(k, m);
  std::vector<bool> is_pivot(m.cols, false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    Vec v(m.cols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < e.rank(); ++i) v[e.pivots[i]] = k.neg(e.reduced.at(i, free));
    basis.push_back(std::move(v));
  }
  if (basis.empty()) return basis;
  auto canon = rref(k, Matrix::from_rows(basis, m.cols));
  std::vector<Vec> out;
  for (std::size_t i = 0; i < canon.rank(); ++i) out.push_back(canon.reduced.row(i));
  return out;
}

std::optional<Vec> solve(const FieldCtx& k, const Matrix& m, const Vec& b) {
  if (b.size() != m.rows) fail(ErrorKind::InvalidArgument, "solve: dimension mismatch");
  Matrix aug(m.rows, m.cols + 1);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols) = b[i];
  }
  Echelon e = rref(k, std::move(aug));
  Vec x(m.cols, 0);
  for (std::size_t i = 0; i < e.rank(); ++i) {
    if (e.pivots[i] == m.cols) return std::nullopt;
    x[e.pivots[i]] = e.reduced.at(i, m.cols);
  }
  return x;
}

Matrix mat_mul(const FieldCtx& k, const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) fail(ErrorKind::InvalidArgument, "mat_mul: dimension mismatch");
  Matrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t t = 0; t < a.cols; ++t) {
      const u64 f = a.at(i, t);
      if (f == 0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) c.at(i, j) = k.add(c.at(i, j), k.mul(f, b.at(t, j)));
    }
  return c;
}

Vec mat_vec(const FieldCtx& k, const Matrix& a, const Vec& v) {
  Vec out(a.rows, 0);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j)
      if (v[j] != 0) out[i] = k.add(out[i], k.mul(a.at(i, j), v[j]));
  return out;
}

Vec reduce_against(const FieldCtx& k, const Echelon& e, Vec v) {
  for (std::size_t i = 0; i < e.rank(); ++i) {
    const u64 f = v[e.pivots[i]];
    if (f == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = k.sub(v[j], k.mul(f, e.reduced.at(i, j)));
  }
  return v;
}

std::vector<Vec> intersect_spaces(const FieldCtx& k, const std::vector<Vec>& a, const std::vector<Vec>& b,
                                  std::size_t dim) {
  if (a.empty() || b.empty()) return {};
  // Zassenhaus: rows (a|a) and (b|0); the rows with zero left half span the intersection
  std::vector<Vec> rows;
  for (const auto& v : a) {
    Vec r(v);
    r.insert(r.end(), v.begin(), v.end());
    rows.push_back(std::move(r));
  }
  for (const auto& v : b) {
    Vec r(v);
    r.resize(2 * dim, 0);
    rows.push_back(std::move(r));
  }
  Echelon e = rref(k, Matrix::from_rows(rows, 2 * dim));
  std::vector<Vec> out;
  for (std::size_t i = 0; i < e.rank(); ++i) {
    if (e.pivots[i] < dim) continue;
    Vec r = e.reduced.row(i);
    out.emplace_back(r.begin() + dim, r.end());
  }
  if (out.empty()) return out;
  Echelon c = rref(k, Matrix::from_rows(out, dim));
  out.clear();
  for (std::size_t i = 0; i < c.rank(); ++i) out.push_back(c.reduced.row(i));
  return out;
}

}  // namespace sf
