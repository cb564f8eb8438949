#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "devissage/ring.hpp"

namespace devissage {

/// Dense row-major matrix over a Ring.  Entries are kept canonical.
class Matrix {
 public:
  Matrix() = default;
  Matrix(Ring ring, std::size_t rows, std::size_t cols);

  static Matrix zero(const Ring& ring, std::size_t rows, std::size_t cols) { return Matrix(ring, rows, cols); }
  static Matrix identity(const Ring& ring, std::size_t n);
  static Matrix diagonal(const Ring& ring, const std::vector<Scalar>& d);
  static Matrix from_ints(const Ring& ring, std::initializer_list<std::initializer_list<long>> rows);
  static Matrix from_rows(const Ring& ring, const std::vector<std::vector<Scalar>>& rows, std::size_t cols);
  static Matrix column_vector(const Ring& ring, const std::vector<Scalar>& v);

  const Ring& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  const Scalar& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  /// Stores ring.canonical(v).
  void set(std::size_t i, std::size_t j, const Scalar& v);
  /// Raw mutable access; the caller keeps the value canonical.
  Scalar& raw(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator-() const;
  Matrix scaled(const Scalar& s) const;
  Matrix transpose() const;

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  Matrix select_rows(const std::vector<std::size_t>& idx) const;
  Matrix select_cols(const std::vector<std::size_t>& idx) const;
  void paste(std::size_t r0, std::size_t c0, const Matrix& m);
  std::vector<Scalar> column(std::size_t j) const;

  static Matrix hstack(const Matrix& a, const Matrix& b);
  static Matrix vstack(const Matrix& a, const Matrix& b);
  static Matrix block_diag(const Matrix& a, const Matrix& b);

  bool is_zero() const;
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }
  std::size_t nonzeros() const;
  std::string to_string() const;

 private:
  Ring ring_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Scalar> a_;
};

void require_shape(bool ok, const std::string& what);

}  // namespace devissage
