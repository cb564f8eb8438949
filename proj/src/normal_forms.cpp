#include "devissage/normal_forms.hpp"

#include <sstream>

namespace devissage {

namespace {

struct SnfWork {
  Ring ring;
  Matrix a, u, uinv, v, vinv;
  std::size_t m, n;

  // row_i -= q row_t
  void row_sub(std::size_t i, std::size_t t, const Scalar& q) {
    for (std::size_t j = 0; j < n; ++j)
      if (a(t, j) != 0) a.raw(i, j) = ring.sub(a(i, j), ring.mul(q, a(t, j)));
    for (std::size_t j = 0; j < m; ++j) {
      if (u(t, j) != 0) u.raw(i, j) = ring.sub(u(i, j), ring.mul(q, u(t, j)));
      if (uinv(j, i) != 0) uinv.raw(j, t) = ring.add(uinv(j, t), ring.mul(q, uinv(j, i)));
    }
  }
  void row_swap(std::size_t i, std::size_t t) {
    if (i == t) return;
    for (std::size_t j = 0; j < n; ++j) std::swap(a.raw(i, j), a.raw(t, j));
    for (std::size_t j = 0; j < m; ++j) {
      std::swap(u.raw(i, j), u.raw(t, j));
      std::swap(uinv.raw(j, i), uinv.raw(j, t));
    }
  }
  void row_scale(std::size_t t, const Scalar& s) {
    Scalar si = ring.inverse(s);
    for (std::size_t j = 0; j < n; ++j) a.raw(t, j) = ring.mul(a(t, j), s);
    for (std::size_t j = 0; j < m; ++j) {
      u.raw(t, j) = ring.mul(u(t, j), s);
      uinv.raw(j, t) = ring.mul(uinv(j, t), si);
    }
  }
  // col_j -= q col_t
  void col_sub(std::size_t j, std::size_t t, const Scalar& q) {
    for (std::size_t i = 0; i < m; ++i)
      if (a(i, t) != 0) a.raw(i, j) = ring.sub(a(i, j), ring.mul(q, a(i, t)));
    for (std::size_t i = 0; i < n; ++i) {
      if (v(i, t) != 0) v.raw(i, j) = ring.sub(v(i, j), ring.mul(q, v(i, t)));
      if (vinv(j, i) != 0) vinv.raw(t, i) = ring.add(vinv(t, i), ring.mul(q, vinv(j, i)));
    }
  }
  void col_swap(std::size_t j, std::size_t t) {
    if (j == t) return;
    for (std::size_t i = 0; i < m; ++i) std::swap(a.raw(i, j), a.raw(i, t));
    for (std::size_t i = 0; i < n; ++i) {
      std::swap(v.raw(i, j), v.raw(i, t));
      std::swap(vinv.raw(j, i), vinv.raw(t, i));
    }
  }
};

}  // namespace

SmithDecomposition smith_normal_form(const Matrix& mat) {
  const Ring& ring = mat.ring();
  SnfWork w{ring, mat, Matrix::identity(ring, mat.rows()), Matrix::identity(ring, mat.rows()),
            Matrix::identity(ring, mat.cols()), Matrix::identity(ring, mat.cols()), mat.rows(), mat.cols()};
  const std::size_t m = w.m, n = w.n;
  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    // minimal norm pivot over the remaining block, ties lexicographic
    bool found = false;
    std::size_t pi = 0, pj = 0;
    mpz_class best;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        if (w.a(i, j) == 0) continue;
        mpz_class nv = ring.norm(w.a(i, j));
        if (!found || nv < best) {
          found = true;
          best = nv;
          pi = i;
          pj = j;
        }
      }
    if (!found) break;
    w.row_swap(pi, t);
    w.col_swap(pj, t);
    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (w.a(i, t) == 0) continue;
        auto [q, r] = ring.divmod(w.a(i, t), w.a(t, t));
        if (q != 0) w.row_sub(i, t, q);
        if (r != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (w.a(t, j) == 0) continue;
        auto [q, r] = ring.divmod(w.a(t, j), w.a(t, t));
        if (q != 0) w.col_sub(j, t, q);
        if (r != 0) clean = false;
      }
      if (!clean) {
        // move the smallest leftover in row/column t onto the diagonal
        std::size_t bi = t, bj = t;
        mpz_class bn = ring.norm(w.a(t, t));
        for (std::size_t i = t + 1; i < m; ++i)
          if (w.a(i, t) != 0 && ring.norm(w.a(i, t)) < bn) {
            bn = ring.norm(w.a(i, t));
            bi = i;
            bj = t;
          }
        for (std::size_t j = t + 1; j < n; ++j)
          if (w.a(t, j) != 0 && ring.norm(w.a(t, j)) < bn) {
            bn = ring.norm(w.a(t, j));
            bi = t;
            bj = j;
          }
        w.row_swap(bi, t);
        w.col_swap(bj, t);
        continue;
      }
      bool fixed = false;
      for (std::size_t i = t + 1; i < m && !fixed; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!ring.divides(w.a(t, t), w.a(i, j))) {
            // row_t += row_i
            w.row_sub(t, i, ring.from_int(-1));
            fixed = true;
            break;
          }
      if (!fixed) break;
    }
    Scalar unit;
    ring.associate(w.a(t, t), &unit);
    if (unit != 1) w.row_scale(t, ring.inverse(unit));
  }
  SmithDecomposition out{w.u, w.uinv, w.a, w.v, w.vinv, {}, 0};
  for (std::size_t i = 0; i < std::min(m, n); ++i)
    if (w.a(i, i) != 0) {
      out.invariant_factors.push_back(w.a(i, i));
      ++out.rank;
    }
  return out;
}

std::string CokernelInvariants::to_string() const {
  std::ostringstream os;
  os << "rank " << free_rank << ", factors (";
  for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "," : "") << factors[i].get_str();
  os << ")";
  return os.str();
}

CokernelInvariants cokernel_invariants(const Matrix& m) {
  SmithDecomposition s = smith_normal_form(m);
  CokernelInvariants inv;
  inv.free_rank = m.rows() - s.rank;
  for (const auto& f : s.invariant_factors)
    if (!m.ring().is_unit(f)) inv.factors.push_back(f);
  return inv;
}

std::optional<Matrix> solve_linear(const Matrix& m, const Matrix& b) {
  require_shape(m.rows() == b.rows(), "solve_linear: rows of M and b differ");
  EchelonSolver s(m);
  Matrix x(m.ring(), m.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto col = s.solve(b.column(j));
    if (!col) return std::nullopt;
    for (std::size_t i = 0; i < m.cols(); ++i) x.raw(i, j) = (*col)[i];
  }
  return x;
}

bool in_column_span(const Matrix& m, const Matrix& b) { return solve_linear(m, b).has_value(); }

Matrix kernel_basis(const Matrix& m) {
  EchelonSolver s(m);
  auto ker = s.kernel();
  Matrix k(m.ring(), m.cols(), ker.size());
  for (std::size_t j = 0; j < ker.size(); ++j)
    for (const auto& [i, v] : ker[j]) k.raw(i, j) = v;
  return k;
}

Matrix image_basis(const Matrix& m) {
  EchelonSolver s(m);
  auto im = s.image();
  Matrix k(m.ring(), m.rows(), im.size());
  for (std::size_t j = 0; j < im.size(); ++j)
    for (const auto& [i, v] : im[j]) k.raw(i, j) = v;
  return k;
}

}  // namespace devissage
