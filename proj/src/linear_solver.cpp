#include "devissage/linear_solver.hpp"

#include <algorithm>
#include <map>

namespace devissage {

namespace {

// a - q*b
SparseVec axpy(const Ring& ring, const SparseVec& a, const Scalar& q, const SparseVec& b) {
  SparseVec out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      Scalar v = ring.neg(ring.mul(q, b[j].second));
      if (v != 0) out.emplace_back(b[j].first, std::move(v));
      ++j;
    } else {
      Scalar v = ring.sub(a[i].second, ring.mul(q, b[j].second));
      if (v != 0) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}


}  // namespace

EchelonSolver::EchelonSolver(const Ring& ring, std::size_t n_equations, std::size_t n_unknowns,
                             const std::vector<SparseVec>& equations)
    : ring_(ring), m_(n_equations), n_(n_unknowns), t_(n_unknowns), u_(n_unknowns) {
  require_shape(equations.size() == n_equations, "equation count");
  for (std::size_t i = 0; i < equations.size(); ++i)
    for (const auto& [j, v] : equations[i]) {
      require_shape(j < n_, "unknown index out of range");
      if (v != 0) t_[j].emplace_back(i, v);
    }
  factor();
}

EchelonSolver::EchelonSolver(const Matrix& a) : ring_(a.ring()), m_(a.rows()), n_(a.cols()), t_(a.cols()), u_(a.cols()) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0) t_[j].emplace_back(i, a(i, j));
  factor();
}

void EchelonSolver::factor() {
  for (std::size_t j = 0; j < n_; ++j) u_[j].emplace_back(j, Scalar(1));
  std::vector<std::vector<std::size_t>> bucket(m_);
  for (std::size_t j = 0; j < n_; ++j) {
    if (t_[j].empty())
      zero_rows_.push_back(j);
    else
      bucket[t_[j].front().first].push_back(j);
  }
  for (std::size_t c = 0; c < m_; ++c) {
    std::vector<std::size_t> cand = std::move(bucket[c]);
    if (cand.empty()) continue;
    while (true) {
      std::size_t best = 0;
      mpz_class best_norm;
      for (std::size_t k = 0; k < cand.size(); ++k) {
        mpz_class nk = ring_.norm(t_[cand[k]].front().second);
        if (k == 0 || nk < best_norm ||
            (nk == best_norm && (t_[cand[k]].size() < t_[cand[best]].size() ||
                                 (t_[cand[k]].size() == t_[cand[best]].size() && cand[k] < cand[best])))) {
          best = k;
          best_norm = nk;
        }
      }
      std::size_t piv = cand[best];
      const Scalar pv = t_[piv].front().second;
      std::vector<std::size_t> keep{piv};
      for (std::size_t k = 0; k < cand.size(); ++k) {
        if (k == best) continue;
        std::size_t row = cand[k];
        Scalar q = ring_.divmod(t_[row].front().second, pv).first;
        if (q != 0) {
          t_[row] = axpy(ring_, t_[row], q, t_[piv]);
          u_[row] = axpy(ring_, u_[row], q, u_[piv]);
        }
        if (t_[row].empty())
          zero_rows_.push_back(row);
        else if (t_[row].front().first != c)
          bucket[t_[row].front().first].push_back(row);
        else
          keep.push_back(row);
      }
      if (keep.size() == 1) {
        pivots_.emplace_back(piv, c);
        break;
      }
      cand = std::move(keep);
    }
  }
  std::sort(zero_rows_.begin(), zero_rows_.end());
}

std::optional<std::vector<Scalar>> EchelonSolver::solve(const std::vector<Scalar>& b) const {
  require_shape(b.size() == m_, "right-hand side length");
  failure_.reset();
  std::vector<Scalar> res(b);
  std::vector<Scalar> x(n_);
  for (const auto& [row, c] : pivots_) {
    if (res[c] == 0) continue;
    const Scalar& pv = t_[row].front().second;
    if (!ring_.divides(pv, res[c])) {
      failure_ = Certificate{c, res[c], pv};
      return std::nullopt;
    }
    Scalar y = ring_.quotient(res[c], pv);
    for (const auto& [i, v] : t_[row]) res[i] = ring_.sub(res[i], ring_.mul(y, v));
    for (const auto& [i, v] : u_[row]) x[i] = ring_.add(x[i], ring_.mul(y, v));
  }
  for (std::size_t i = 0; i < m_; ++i)
    if (res[i] != 0) {
      failure_ = Certificate{i, res[i], Scalar(0)};
      return std::nullopt;
    }
  return x;
}

std::vector<SparseVec> EchelonSolver::kernel() const {
  std::vector<SparseVec> out;
  for (std::size_t r : zero_rows_) out.push_back(u_[r]);
  return out;
}

std::vector<SparseVec> EchelonSolver::image() const {
  std::vector<SparseVec> out;
  for (const auto& [row, c] : pivots_) out.push_back(t_[row]);
  return out;
}

std::size_t LinearSystem::add_unknown(std::size_t rows, std::size_t cols) {
  shapes_.emplace_back(rows, cols);
  offsets_.push_back(n_vars_);
  n_vars_ += rows * cols;
  return shapes_.size() - 1;
}

void LinearSystem::add_equation(const std::vector<Term>& terms, const Matrix& rhs) {
  const std::size_t p = rhs.rows(), q = rhs.cols();
  std::vector<SparseVec> block(p * q);
  for (const auto& t : terms) {
    require_shape(t.unknown < shapes_.size(), "unknown id");
    const auto [rows_x, cols_x] = shapes_[t.unknown];
    const std::size_t a = t.transposed ? cols_x : rows_x, b = t.transposed ? rows_x : cols_x;
    const std::size_t off = offsets_[t.unknown];
    const Scalar c = ring_.canonical(t.coeff);
    if (c == 0) continue;
    require_shape(t.left ? (t.left->rows() == p && t.left->cols() == a) : a == p, "left factor shape");
    require_shape(t.right ? (t.right->rows() == b && t.right->cols() == q) : b == q, "right factor shape");
    // nonzero pattern of L rows and R columns
    std::vector<std::vector<std::pair<std::size_t, Scalar>>> lrow(p), rcol(q);
    for (std::size_t i = 0; i < p; ++i) {
      if (!t.left) {
        lrow[i].emplace_back(i, c);
        continue;
      }
      for (std::size_t s = 0; s < a; ++s)
        if ((*t.left)(i, s) != 0) lrow[i].emplace_back(s, ring_.mul(c, (*t.left)(i, s)));
    }
    for (std::size_t j = 0; j < q; ++j) {
      if (!t.right) {
        rcol[j].emplace_back(j, Scalar(1));
        continue;
      }
      for (std::size_t u = 0; u < b; ++u)
        if ((*t.right)(u, j) != 0) rcol[j].emplace_back(u, (*t.right)(u, j));
    }
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < q; ++j)
        for (const auto& [s, l] : lrow[i])
          for (const auto& [u, r] : rcol[j]) block[i * q + j].emplace_back(t.transposed ? off + u * a + s : off + s * b + u, ring_.mul(l, r));
  }
  for (std::size_t k = 0; k < p * q; ++k) {
    auto& v = block[k];
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    SparseVec merged;
    for (auto& e : v) {
      if (!merged.empty() && merged.back().first == e.first)
        merged.back().second = ring_.add(merged.back().second, e.second);
      else
        merged.push_back(std::move(e));
    }
    std::erase_if(merged, [](const auto& e) { return e.second == 0; });
    rows_.push_back(std::move(merged));
    rhs_.push_back(rhs(k / q, k % q));
  }
}

std::vector<Matrix> LinearSystem::unpack(const std::vector<Scalar>& x) const {
  std::vector<Matrix> out;
  for (std::size_t u = 0; u < shapes_.size(); ++u) {
    Matrix m(ring_, shapes_[u].first, shapes_[u].second);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m.raw(i, j) = x[offsets_[u] + i * m.cols() + j];
    out.push_back(std::move(m));
  }
  return out;
}

std::optional<std::vector<Matrix>> LinearSystem::solve() const {
  EchelonSolver s(ring_, rows_.size(), n_vars_, rows_);
  auto x = s.solve(rhs_);
  if (!x) return std::nullopt;
  return unpack(*x);
}

std::vector<std::vector<Matrix>> LinearSystem::kernel() const {
  EchelonSolver s(ring_, rows_.size(), n_vars_, rows_);
  std::vector<std::vector<Matrix>> out;
  for (const auto& v : s.kernel()) {
    std::vector<Scalar> x(n_vars_);
    for (const auto& [i, val] : v) x[i] = val;
    out.push_back(unpack(x));
  }
  return out;
}

}  // namespace devissage
