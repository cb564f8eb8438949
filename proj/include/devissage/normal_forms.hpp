#pragma once

#include <optional>
#include <string>
#include <vector>

#include "devissage/linear_solver.hpp"
#include "devissage/matrix.hpp"

namespace devissage {

/// U * M * V = D with explicit inverses of U and V.
struct SmithDecomposition {
  Matrix U, Uinv, D, V, Vinv;
  std::vector<Scalar> invariant_factors;  // nonzero diagonal entries, canonical
  std::size_t rank = 0;
};

SmithDecomposition smith_normal_form(const Matrix& m);

/// coker(M) = free^free_rank + sum R/(f_i), units omitted.
struct CokernelInvariants {
  std::size_t free_rank = 0;
  std::vector<Scalar> factors;
  bool operator==(const CokernelInvariants&) const = default;
  bool is_zero() const { return free_rank == 0 && factors.empty(); }
  std::string to_string() const;
};

CokernelInvariants cokernel_invariants(const Matrix& m);

/// Some X with M X = B, or nothing when B is not in the column span over the ring.
std::optional<Matrix> solve_linear(const Matrix& m, const Matrix& b);
bool in_column_span(const Matrix& m, const Matrix& b);
/// Columns form a basis of ker M (kernels of maps of free modules are free).
Matrix kernel_basis(const Matrix& m);
/// Columns form a basis of the column span of M.
Matrix image_basis(const Matrix& m);

}  // namespace devissage
