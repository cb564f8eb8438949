#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "devissage/matrix.hpp"

namespace devissage {

/// Sorted (index, value) pairs with nonzero values.
using SparseVec = std::vector<std::pair<std::size_t, Scalar>>;

/// Column echelon factorization of A (m equations, n unknowns) over a PID.
/// Works on the rows of A^T with Euclidean elimination, tracking the
/// unimodular transform U with U A^T = T.  Solving H y = b (H = T^T) is
/// forward substitution; failed divisibility certifies unsolvability.
class EchelonSolver {
 public:
  EchelonSolver(const Ring& ring, std::size_t n_equations, std::size_t n_unknowns,
                const std::vector<SparseVec>& equations);
  explicit EchelonSolver(const Matrix& a);

  std::size_t rank() const { return pivots_.size(); }
  std::optional<std::vector<Scalar>> solve(const std::vector<Scalar>& b) const;
  /// Basis of ker A, as vectors of length n.
  std::vector<SparseVec> kernel() const;
  /// Basis of the column span of A, as vectors of length m.
  std::vector<SparseVec> image() const;

  /// Set after a failed solve: the equation index where divisibility broke.
  struct Certificate {
    std::size_t equation;
    Scalar residual;
    Scalar pivot;
  };
  const std::optional<Certificate>& last_failure() const { return failure_; }

 private:
  void factor();

  Ring ring_;
  std::size_t m_, n_;
  std::vector<SparseVec> t_;
  std::vector<SparseVec> u_;
  std::vector<std::pair<std::size_t, std::size_t>> pivots_;  // (row of T, column)
  std::vector<std::size_t> zero_rows_;
  mutable std::optional<Certificate> failure_;
};

/// Builder for block-linear systems  sum_k L_k X_{u_k} R_k = C  in unknown
/// matrices X_u.  Missing L or R means identity; a transposed term reads L X_u^T R.
class LinearSystem {
 public:
  explicit LinearSystem(Ring ring) : ring_(std::move(ring)) {}

  std::size_t add_unknown(std::size_t rows, std::size_t cols);

  struct Term {
    std::optional<Matrix> left;
    std::size_t unknown;
    std::optional<Matrix> right;
    Scalar coeff = 1;
    bool transposed = false;
  };
  static Term term(std::optional<Matrix> left, std::size_t unknown, std::optional<Matrix> right, Scalar c = 1) {
    return Term{std::move(left), unknown, std::move(right), std::move(c), false};
  }
  static Term transposed_term(std::optional<Matrix> left, std::size_t unknown, std::optional<Matrix> right,
                              Scalar c = 1) {
    return Term{std::move(left), unknown, std::move(right), std::move(c), true};
  }
  void add_equation(const std::vector<Term>& terms, const Matrix& rhs);

  std::size_t unknown_count() const { return shapes_.size(); }
  std::size_t variable_count() const { return n_vars_; }
  std::size_t equation_count() const { return rhs_.size(); }

  std::optional<std::vector<Matrix>> solve() const;
  /// Basis of solutions of the homogeneous system.
  std::vector<std::vector<Matrix>> kernel() const;

 private:
  std::vector<Matrix> unpack(const std::vector<Scalar>& x) const;

  Ring ring_;
  std::vector<std::pair<std::size_t, std::size_t>> shapes_;
  std::vector<std::size_t> offsets_;
  std::size_t n_vars_ = 0;
  std::vector<SparseVec> rows_;
  std::vector<Scalar> rhs_;
};

}  // namespace devissage
