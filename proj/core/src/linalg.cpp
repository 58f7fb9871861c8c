#include "sft/linalg.hpp"

namespace sft {

bool Matrix::is_zero() const {
  for (const auto& x : data_) {
    if (x != 0) return false;
  }
  return true;
}

Matrix Matrix::operator*(const Matrix& other) const {
  if (cols_ != other.rows_) throw PreconditionError("matrix shape mismatch");
  Matrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
    }
  }
  return out;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Echelon rref(Matrix m) {
  Echelon e;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && m(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(row, j));
    }
    Rational inv = 1 / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      Rational f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    e.pivots.push_back(col);
    ++row;
  }
  e.reduced = std::move(m);
  return e;
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

std::vector<std::vector<Rational>> kernel(const Matrix& m) {
  Echelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<std::vector<Rational>> column_space(const Matrix& m) {
  std::vector<std::vector<Rational>> basis;
  for (auto p : rref(m).pivots) {
    std::vector<Rational> v(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, p);
    basis.push_back(std::move(v));
  }
  return basis;
}

namespace {

Matrix from_columns(const std::vector<std::vector<Rational>>& cols, std::size_t rows) {
  Matrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

// Greedily extends `base` (independent) by vectors from `candidates`.
std::vector<std::vector<Rational>> extend(const std::vector<std::vector<Rational>>& base,
                                          const std::vector<std::vector<Rational>>& candidates,
                                          std::size_t dim) {
  std::vector<std::vector<Rational>> all = base;
  std::vector<std::vector<Rational>> added;
  std::size_t r = rank(from_columns(all, dim));
  for (const auto& c : candidates) {
    all.push_back(c);
    std::size_t r2 = rank(from_columns(all, dim));
    if (r2 > r) {
      added.push_back(c);
      r = r2;
    } else {
      all.pop_back();
    }
  }
  return added;
}

}  // namespace

std::vector<std::vector<Rational>> inverse_columns(const std::vector<std::vector<Rational>>& columns) {
  std::size_t n = columns.size();
  Matrix aug(n, 2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    if (columns[j].size() != n) throw PreconditionError("basis is not square");
    for (std::size_t i = 0; i < n; ++i) aug(i, j) = columns[j][i];
    aug(j, n + j) = 1;
  }
  Echelon e = rref(aug);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw PreconditionError("basis is singular");
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = e.reduced(i, n + j);
  }
  return inv;
}

HomologySplitting homology_splitting(const Matrix& d) {
  if (d.rows() != d.cols()) throw PreconditionError("differential must be square");
  if (!(d * d).is_zero()) throw PreconditionError("differential does not square to zero");
  std::size_t n = d.rows();
  HomologySplitting out;
  auto boundaries = column_space(d);
  auto cycles = kernel(d);
  out.representatives = extend(boundaries, cycles, n);
  std::vector<std::vector<Rational>> standard;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> e(n);
    e[i] = 1;
    standard.push_back(std::move(e));
  }
  std::vector<std::vector<Rational>> zbasis = out.representatives;
  zbasis.insert(zbasis.end(), boundaries.begin(), boundaries.end());
  auto complement = extend(zbasis, standard, n);
  std::vector<std::vector<Rational>> basis = out.representatives;
  basis.insert(basis.end(), boundaries.begin(), boundaries.end());
  basis.insert(basis.end(), complement.begin(), complement.end());
  auto inv = inverse_columns(basis);
  out.projection = Matrix(out.representatives.size(), n);
  for (std::size_t h = 0; h < out.representatives.size(); ++h) {
    for (std::size_t j = 0; j < n; ++j) out.projection(h, j) = inv[h][j];
  }
  return out;
}

}  // namespace sft
