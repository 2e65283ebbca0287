#pragma once

// Dense exact linear algebra over a FieldCtx. Vectors are rows of packed
// field elements.

#include <optional>
#include <vector>

#include "schemefactor/gf.hpp"

namespace sf {

using Vec = std::vector<u64>;

struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<u64> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
  u64& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  u64 at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  Vec row(std::size_t i) const { return Vec(data.begin() + i * cols, data.begin() + (i + 1) * cols); }
  static Matrix from_rows(const std::vector<Vec>& rs, std::size_t cols);
  static Matrix identity(std::size_t n);
  friend bool operator==(const Matrix&, const Matrix&) = default;
};

struct Echelon {
  Matrix reduced;                  // nonzero rows only, pivots normalised to 1
  std::vector<std::size_t> pivots; // pivot column of each row
  std::size_t rank() const { return pivots.size(); }
};

/// Reduced row echelon form; the canonical basis of the row space.
Echelon rref(const FieldCtx& k, Matrix m);
std::size_t rank(const FieldCtx& k, const Matrix& m);

/// Basis of {x : M x = 0}, in canonical RREF form.
std::vector<Vec> kernel(const FieldCtx& k, const Matrix& m);

/// Some x with M x = b, or nullopt.
std::optional<Vec> solve(const FieldCtx& k, const Matrix& m, const Vec& b);

Matrix mat_mul(const FieldCtx& k, const Matrix& a, const Matrix& b);
Vec mat_vec(const FieldCtx& k, const Matrix& a, const Vec& v);

/// Intersection of two row spaces, as an RREF basis.
std::vector<Vec> intersect_spaces(const FieldCtx& k, const std::vector<Vec>& a, const std::vector<Vec>& b,
                                  std::size_t dim);

/// Reduce `v` against an echelon basis; zero iff v lies in the span.
Vec reduce_against(const FieldCtx& k, const Echelon& e, Vec v);

}  // namespace sf
