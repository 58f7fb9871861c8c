#pragma once

#include <cstddef>
#include <vector>

#include "sft/algebra.hpp"

namespace sft {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool is_zero() const;
  Matrix operator*(const Matrix& other) const;
  bool operator==(const Matrix& other) const = default;

  static Matrix identity(std::size_t n);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

struct Echelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;
};

Echelon rref(Matrix m);
std::size_t rank(const Matrix& m);
// Columns form a basis of the null space; one vector per free column.
std::vector<std::vector<Rational>> kernel(const Matrix& m);
std::vector<std::vector<Rational>> column_space(const Matrix& m);
// Solves basis * x = v for a square invertible basis (columns); returns x.
std::vector<std::vector<Rational>> inverse_columns(const std::vector<std::vector<Rational>>& columns);

// Splitting V = H + B + C for a square-zero map d on V (as column vectors),
// where B = im d, Z = ker d = H + B, and d is injective on C.
struct HomologySplitting {
  std::vector<std::vector<Rational>> representatives;  // basis of H, as vectors in V
  Matrix projection;                                   // dim H x dim V, kills B and C
};

HomologySplitting homology_splitting(const Matrix& d);

}  // namespace sft
