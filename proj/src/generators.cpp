#include "devissage/generators.hpp"

#include <vector>

namespace devissage {

Scalar random_unit(const Ring& ring, Rng& rng) {
  switch (ring.kind()) {
    case RingKind::PrimeField: return ring.from_int(ring.prime() > 2 ? rng.range(1, ring.prime() - 1) : 1);
    case RingKind::Rational: {
      long n = rng.range(1, 5) * (rng.chance(1, 2) ? 1 : -1);
      return ring.canonical(mpq_class(n, rng.range(1, 3)));
    }
    case RingKind::IntegersTwoInverted: {
      long e = rng.range(-1, 1);
      mpq_class u = e >= 0 ? mpq_class(1L << e) : mpq_class(1, 2);
      return rng.chance(1, 2) ? u : mpq_class(-u);
    }
    case RingKind::LocalIntegers: {
      long v;
      do v = rng.range(1, 8);
      while (v % ring.prime() == 0);
      return ring.from_int(rng.chance(1, 2) ? v : -v);
    }
  }
  return 1;
}

Scalar random_scalar(const Ring& ring, Rng& rng, long bound) {
  long n = rng.range(-bound, bound);
  if (ring.kind() == RingKind::PrimeField) return ring.from_int(n);
  if (ring.kind() == RingKind::IntegersTwoInverted && rng.chance(1, 4)) return ring.canonical(mpq_class(n, 2));
  return ring.from_int(n);
}

Scalar random_torsion_factor(const Ring& ring, Rng& rng, long bound) {
  if (ring.is_field()) return 1;
  std::vector<long> pool;
  if (ring.kind() == RingKind::IntegersTwoInverted) {
    for (long f : {3L, 5L, 7L, 9L, 15L, 3L, 5L, 21L, 25L, 27L, 45L, 11L, 13L, 35L})
      if (f <= bound) pool.push_back(f);
  } else {
    for (long q = ring.prime(); q <= bound && q <= ring.prime() * ring.prime() * ring.prime(); q *= ring.prime())
      pool.push_back(q);
  }
  if (pool.empty()) pool.push_back(ring.kind() == RingKind::IntegersTwoInverted ? 3 : ring.prime());
  Scalar f = ring.from_int(pool[rng.below(pool.size())]);
  if (ring.kind() == RingKind::LocalIntegers && rng.chance(1, 3)) f = ring.mul(f, random_unit(ring, rng));
  return f;
}

Matrix random_matrix(const Ring& ring, std::size_t rows, std::size_t cols, Rng& rng, long bound, unsigned zero_pct) {
  Matrix m(ring, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (!rng.chance(zero_pct, 100)) m.set(i, j, random_scalar(ring, rng, bound));
  return m;
}

Matrix random_unimodular(const Ring& ring, std::size_t n, Rng& rng, long bound) {
  Matrix u = Matrix::identity(ring, n);
  if (n == 0) return u;
  for (std::size_t k = 0; k < 2 * n; ++k) {
    std::size_t i = rng.below(n), j = rng.below(n);
    if (i == j) continue;
    Scalar c = ring.from_int(rng.range(-bound, bound));
    if (c == 0) continue;
    // row_i += c row_j
    for (std::size_t t = 0; t < n; ++t)
      if (u(j, t) != 0) u.raw(i, t) = ring.add(u(i, t), ring.mul(c, u(j, t)));
  }
  if (n > 1 && rng.chance(1, 2)) {
    std::size_t i = rng.below(n), j = rng.below(n);
    for (std::size_t t = 0; t < n; ++t) std::swap(u.raw(i, t), u.raw(j, t));
  }
  if (rng.chance(1, 3)) {
    std::size_t i = rng.below(n);
    Scalar s = random_unit(ring, rng);
    for (std::size_t t = 0; t < n; ++t) u.raw(i, t) = ring.mul(u(i, t), s);
  }
  return u;
}

Matrix inverse_unimodular(const Matrix& u) {
  auto x = solve_linear(u, Matrix::identity(u.ring(), u.rows()));
  if (!x) throw Error(ErrorKind::NotAUnit, "matrix is not invertible");
  return *x;
}

ModulePresentation random_module(const Ring& ring, Rng& rng, const SizeCaps& caps, bool finite_length) {
  std::size_t max_rank = std::max<std::size_t>(caps.max_rank, 1);
  std::vector<Scalar> diag;
  std::size_t free_rank = 0;
  if (ring.is_field()) {
    free_rank = rng.below(std::min<std::size_t>(max_rank, 4) + 1);
  } else {
    std::size_t k = rng.below(std::min<std::size_t>(max_rank, 3) + 1);
    for (std::size_t i = 0; i < k; ++i) diag.push_back(random_torsion_factor(ring, rng, caps.max_entry));
    if (!finite_length) free_rank = rng.below(2);
  }
  // redundant generators killed by unit relations
  std::size_t extra = rng.below(2);
  for (std::size_t i = 0; i < extra; ++i) diag.push_back(random_unit(ring, rng));
  std::size_t g = diag.size() + free_rank;
  Matrix d(ring, g, diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) d.raw(i, i) = diag[i];
  if (g == 0) return ModulePresentation::zero(ring);
  Matrix p = random_unimodular(ring, g, rng, 1);
  Matrix q = random_unimodular(ring, diag.size(), rng, 1);
  return ModulePresentation::make(ring, g, p * d * q);
}

ModuleMorphism random_morphism(const ModulePresentation& s, const ModulePresentation& t, Rng& rng) {
  const Ring& ring = s.ring;
  Matrix m(ring, t.g(), s.g());
  for (const auto& b : hom_basis(s, t)) {
    Scalar c = ring.from_int(rng.range(-2, 2));
    if (c != 0) m = m + b.scaled(c);
  }
  return ModuleMorphism{s, t, m};
}

Complex random_complex(const Ring& ring, Rng& rng, const SizeCaps& caps, int lo, std::size_t width,
                       bool finite_homology) {
  if (width == 0) return Complex(ring);
  int hi = lo + static_cast<int>(width) - 1;
  std::size_t cap = std::max<std::size_t>(caps.max_rank, 1);
  std::map<int, std::size_t> rank;
  std::map<int, std::vector<std::pair<std::size_t, std::size_t>>> links;  // d_r entries (row, col)
  std::map<int, std::vector<Scalar>> link_vals;
  std::size_t pieces = 1 + rng.below(std::min<std::size_t>(cap, 2 * width + 1));
  for (std::size_t k = 0; k < pieces; ++k) {
    unsigned kind = static_cast<unsigned>(rng.below(3));
    bool isolated_ok = !finite_homology || ring.is_field();
    if (width == 1 || (kind == 2 && isolated_ok)) {
      if (!isolated_ok) continue;
      int r = static_cast<int>(rng.range(lo, hi));
      if (rank[r] >= cap) continue;
      rank[r]++;
      continue;
    }
    int r = static_cast<int>(rng.range(lo + 1, hi));
    if (rank[r] >= cap || rank[r - 1] >= cap) continue;
    Scalar f = (kind == 0 && !ring.is_field()) ? random_torsion_factor(ring, rng, caps.max_entry)
                                               : random_unit(ring, rng);
    links[r].push_back({rank[r - 1], rank[r]});
    link_vals[r].push_back(f);
    rank[r - 1]++;
    rank[r]++;
  }
  std::vector<std::size_t> ranks;
  for (int r = lo; r <= hi; ++r) ranks.push_back(rank[r]);
  std::map<int, Matrix> P, Pinv;
  for (int r = lo; r <= hi; ++r) {
    P[r] = random_unimodular(ring, rank[r], rng, 1);
    Pinv[r] = inverse_unimodular(P[r]);
  }
  std::map<int, Matrix> d;
  for (int r = lo + 1; r <= hi; ++r) {
    Matrix m(ring, rank[r - 1], rank[r]);
    for (std::size_t i = 0; i < links[r].size(); ++i) m.set(links[r][i].first, links[r][i].second, link_vals[r][i]);
    d.emplace(r, P[r - 1] * m * Pinv[r]);
  }
  return Complex::make(ring, lo, ranks, d);
}

std::vector<ChainMap> chain_map_basis(const Complex& s, const Complex& t) {
  const Ring& ring = s.ring();
  if (s.is_zero() || t.is_zero()) return {};
  int a = std::max(s.lo(), t.lo()), b = std::min(s.hi(), t.hi());
  LinearSystem sys(ring);
  std::map<int, std::size_t> id;
  for (int r = a; r <= b; ++r)
    if (s.rank(r) && t.rank(r)) id[r] = sys.add_unknown(t.rank(r), s.rank(r));
  if (id.empty()) return {};
  for (int r = a; r <= b + 1; ++r) {
    // d^t_r f_r - f_{r-1} d^s_r = 0
    std::vector<LinearSystem::Term> terms;
    if (id.count(r) && t.rank(r - 1)) terms.push_back(LinearSystem::term(t.d(r), id[r], std::nullopt));
    if (id.count(r - 1) && s.rank(r)) terms.push_back(LinearSystem::term(std::nullopt, id[r - 1], s.d(r), -1));
    if (terms.empty()) continue;
    sys.add_equation(terms, Matrix::zero(ring, t.rank(r - 1), s.rank(r)));
  }
  std::vector<ChainMap> out;
  for (const auto& sol : sys.kernel()) {
    ChainMap f{s, t, {}};
    for (const auto& [r, k] : id) f.comps.emplace(r, sol[k]);
    out.push_back(std::move(f));
  }
  return out;
}

ChainMap random_chain_map(const Complex& s, const Complex& t, Rng& rng) {
  const Ring& ring = s.ring();
  ChainMap f = ChainMap::zero(s, t);
  for (const auto& b : chain_map_basis(s, t)) {
    Scalar c = ring.from_int(rng.range(-2, 2));
    if (c != 0) f = add(f, scale(b, c));
  }
  return f;
}

ModuleComplex random_module_complex(const Ring& ring, Rng& rng, const SizeCaps& caps, int lo, std::size_t width,
                                    bool finite_length) {
  SizeCaps c = caps;
  c.max_rank = std::min<std::size_t>(caps.max_rank, 3);
  std::vector<ModulePresentation> mods;
  for (std::size_t i = 0; i < width; ++i) mods.push_back(random_module(ring, rng, c, finite_length));
  std::map<int, ModuleMorphism> maps;
  for (std::size_t i = 1; i < width; ++i) {
    int r = lo + static_cast<int>(i);
    const ModulePresentation &src = mods[i], &dst = mods[i - 1];
    auto prev = maps.find(r - 1);
    if (prev == maps.end()) {
      maps.emplace(r, random_morphism(src, dst, rng));
      continue;
    }
    SubquotientWitness k = subquotient(prev->second, SubquotientKind::Kernel);
    ModuleMorphism into = random_morphism(src, k.object, rng);
    maps.emplace(r, ModuleMorphism{src, dst, k.map.matrix * into.matrix});
  }
  return ModuleComplex::make(ring, lo, mods, maps);
}

}  // namespace devissage
