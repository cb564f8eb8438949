#include "devissage/complex.hpp"

#include <algorithm>

#include "devissage/error.hpp"

namespace devissage {

namespace {

bool in_range(const Complex& c, int r) { return !c.is_zero() && r >= c.lo() && r <= c.hi(); }

// Degree span covering both complexes (empty when both are zero).
std::pair<int, int> joint_range(const Complex& a, const Complex& b) {
  if (a.is_zero() && b.is_zero()) return {0, -1};
  if (a.is_zero()) return {b.lo(), b.hi()};
  if (b.is_zero()) return {a.lo(), a.hi()};
  return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

Scalar sign(int n) { return (n % 2 == 0) ? Scalar(1) : Scalar(-1); }

}  // namespace

Complex Complex::make(const Ring& ring, int lo, const std::vector<std::size_t>& ranks,
                      const std::map<int, Matrix>& diffs) {
  Complex c(ring);
  int hi = lo + static_cast<int>(ranks.size()) - 1;
  auto rk = [&](int r) -> std::size_t { return (r < lo || r > hi) ? 0 : ranks[r - lo]; };
  for (const auto& [r, m] : diffs) {
    require_shape(m.rows() == rk(r - 1) && m.cols() == rk(r),
                  "differential in degree " + std::to_string(r) + " has the wrong shape");
    if (!(r > lo && r <= hi) && !m.is_zero())
      throw Error(ErrorKind::ShapeMismatch, "differential outside the support");
  }
  auto dm = [&](int r) {
    auto it = diffs.find(r);
    return it == diffs.end() ? Matrix::zero(ring, rk(r - 1), rk(r)) : it->second;
  };
  for (int r = lo + 2; r <= hi; ++r) {
    if (!(dm(r - 1) * dm(r)).is_zero())
      throw Error(ErrorKind::NotAComplex, "d o d != 0 at degree " + std::to_string(r));
  }
  int a = lo, b = hi;
  while (a <= b && rk(a) == 0) ++a;
  while (b >= a && rk(b) == 0) --b;
  if (a > b) return c;
  c.lo_ = a;
  for (int r = a; r <= b; ++r) c.ranks_.push_back(rk(r));
  for (int r = a + 1; r <= b; ++r) c.diffs_.push_back(dm(r));
  return c;
}

Complex Complex::concentrated(const Ring& ring, int r, std::size_t n) { return make(ring, r, {n}, {}); }

std::size_t Complex::rank(int r) const { return in_range(*this, r) ? ranks_[r - lo_] : 0; }

std::size_t Complex::total_rank() const {
  std::size_t s = 0;
  for (auto n : ranks_) s += n;
  return s;
}

Matrix Complex::d(int r) const {
  if (in_range(*this, r) && in_range(*this, r - 1)) return diffs_[r - lo_ - 1];
  return Matrix::zero(ring_, rank(r - 1), rank(r));
}

std::map<int, Matrix> Complex::differentials() const {
  std::map<int, Matrix> out;
  for (std::size_t i = 0; i < diffs_.size(); ++i) out.emplace(lo_ + 1 + static_cast<int>(i), diffs_[i]);
  return out;
}

bool Complex::operator==(const Complex& o) const {
  return ring_ == o.ring_ && ranks_ == o.ranks_ && (is_zero() || lo_ == o.lo_) && diffs_ == o.diffs_;
}

ChainMap ChainMap::make(const Complex& s, const Complex& t, const std::map<int, Matrix>& comps) {
  ChainMap f{s, t, {}};
  for (const auto& [r, m] : comps) {
    require_shape(m.rows() == t.rank(r) && m.cols() == s.rank(r),
                  "chain map component in degree " + std::to_string(r) + " has the wrong shape");
    if (!m.empty()) f.comps.emplace(r, m);
  }
  if (!is_chain_map(f)) throw Error(ErrorKind::IllFormedMorphism, "components do not commute with d");
  return f;
}

ChainMap ChainMap::identity(const Complex& c) {
  ChainMap f{c, c, {}};
  if (!c.is_zero())
    for (int r = c.lo(); r <= c.hi(); ++r) f.comps.emplace(r, Matrix::identity(c.ring(), c.rank(r)));
  return f;
}

ChainMap ChainMap::zero(const Complex& s, const Complex& t) { return ChainMap{s, t, {}}; }

Matrix ChainMap::at(int r) const {
  auto it = comps.find(r);
  return it == comps.end() ? Matrix::zero(source.ring(), target.rank(r), source.rank(r)) : it->second;
}

Matrix Homotopy::at(const Complex& s, const Complex& t, int r) const {
  auto it = maps.find(r);
  return it == maps.end() ? Matrix::zero(s.ring(), t.rank(r + 1), s.rank(r)) : it->second;
}

bool is_chain_map(const ChainMap& f) {
  auto [a, b] = joint_range(f.source, f.target);
  for (int r = a; r <= b + 1; ++r)
    if (f.target.d(r) * f.at(r) != f.at(r - 1) * f.source.d(r)) return false;
  return true;
}

ChainMap compose(const ChainMap& g, const ChainMap& f) {
  require_shape(g.source == f.target, "compose: intermediate complexes differ");
  ChainMap h{f.source, g.target, {}};
  for (const auto& [r, m] : f.comps) {
    Matrix c = g.at(r) * m;
    if (!c.empty()) h.comps.emplace(r, c);
  }
  return h;
}

ChainMap add(const ChainMap& f, const ChainMap& g) {
  require_shape(f.source == g.source && f.target == g.target, "add: chain maps with different ends");
  ChainMap h{f.source, f.target, f.comps};
  for (const auto& [r, m] : g.comps) h.comps[r] = h.at(r) + m;
  return h;
}

ChainMap scale(const ChainMap& f, const Scalar& s) {
  ChainMap h = f;
  for (auto& [r, m] : h.comps) m = m.scaled(s);
  return h;
}

ChainMap sub(const ChainMap& f, const ChainMap& g) { return add(f, scale(g, -1)); }

bool chain_maps_equal(const ChainMap& f, const ChainMap& g) {
  if (!(f.source == g.source && f.target == g.target)) return false;
  auto [a, b] = joint_range(f.source, f.target);
  for (int r = a; r <= b; ++r)
    if (f.at(r) != g.at(r)) return false;
  return true;
}

bool check_homotopy(const ChainMap& f, const ChainMap& g, const Homotopy& h) {
  const Complex &s = f.source, &t = f.target;
  auto [a, b] = joint_range(s, t);
  for (int r = a; r <= b; ++r) {
    Matrix lhs = f.at(r) - g.at(r);
    Matrix rhs = t.d(r + 1) * h.at(s, t, r) + h.at(s, t, r - 1) * s.d(r);
    if (lhs != rhs) return false;
  }
  return true;
}

std::optional<Homotopy> find_homotopy(const ChainMap& f, const ChainMap& g) {
  require_shape(f.source == g.source && f.target == g.target, "find_homotopy: chain maps with different ends");
  const Complex &s = f.source, &t = f.target;
  const Ring& R = s.ring();
  auto [a, b] = joint_range(s, t);
  LinearSystem sys(R);
  std::map<int, std::size_t> id;
  for (int r = a - 1; r <= b; ++r)
    if (s.rank(r) > 0 && t.rank(r + 1) > 0) id[r] = sys.add_unknown(t.rank(r + 1), s.rank(r));
  for (int r = a; r <= b; ++r) {
    if (s.rank(r) == 0 || t.rank(r) == 0) continue;
    Matrix rhs = f.at(r) - g.at(r);
    std::vector<LinearSystem::Term> terms;
    if (id.count(r)) terms.push_back(LinearSystem::term(t.d(r + 1), id[r], std::nullopt));
    if (id.count(r - 1)) terms.push_back(LinearSystem::term(std::nullopt, id[r - 1], s.d(r)));
    if (terms.empty()) {
      if (!rhs.is_zero()) return std::nullopt;
      continue;
    }
    sys.add_equation(terms, rhs);
  }
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  Homotopy h;
  for (const auto& [r, k] : id) h.maps.emplace(r, (*sol)[k]);
  return h;
}

bool homotopic(const ChainMap& f, const ChainMap& g) { return find_homotopy(f, g).has_value(); }

Complex translate(const Complex& c, int n, bool is_signed) {
  if (c.is_zero()) return c;
  std::map<int, Matrix> d;
  Scalar e = is_signed ? sign(n) : Scalar(1);
  for (const auto& [r, m] : c.differentials()) d.emplace(r + n, e == 1 ? m : m.scaled(e));
  return Complex::make(c.ring(), c.lo() + n, c.ranks(), d);
}

ChainMap translate_map(const ChainMap& f, int n, bool is_signed) {
  ChainMap g{translate(f.source, n, is_signed), translate(f.target, n, is_signed), {}};
  for (const auto& [r, m] : f.comps) g.comps.emplace(r + n, m);
  return g;
}

Complex dual_complex(const Complex& c) {
  if (c.is_zero()) return c;
  std::vector<std::size_t> ranks = c.ranks();
  std::reverse(ranks.begin(), ranks.end());
  std::map<int, Matrix> d;
  for (int s = -c.hi() + 1; s <= -c.lo(); ++s) d.emplace(s, c.d(1 - s).transpose());
  return Complex::make(c.ring(), -c.hi(), ranks, d);
}

ChainMap dual_map(const ChainMap& f) {
  ChainMap g{dual_complex(f.target), dual_complex(f.source), {}};
  for (const auto& [r, m] : f.comps) g.comps.emplace(-r, m.transpose());
  return g;
}

Complex shifted_dual(const Complex& c, int n) { return translate(dual_complex(c), n, false); }

ChainMap shifted_dual_map(const ChainMap& f, int n) { return translate_map(dual_map(f), n, false); }

ChainMap evaluation_map(const Complex& c) {
  ChainMap f = ChainMap::identity(c);
  f.target = dual_complex(dual_complex(c));
  return f;
}

SumData direct_sum(const Complex& a, const Complex& b) {
  const Ring& R = a.ring();
  auto [lo, hi] = joint_range(a, b);
  std::vector<std::size_t> ranks;
  std::map<int, Matrix> d;
  for (int r = lo; r <= hi; ++r) ranks.push_back(a.rank(r) + b.rank(r));
  for (int r = lo + 1; r <= hi; ++r) d.emplace(r, Matrix::block_diag(a.d(r), b.d(r)));
  SumData s;
  s.object = (lo > hi) ? Complex(R) : Complex::make(R, lo, ranks, d);
  s.in1 = ChainMap{a, s.object, {}};
  s.in2 = ChainMap{b, s.object, {}};
  s.pr1 = ChainMap{s.object, a, {}};
  s.pr2 = ChainMap{s.object, b, {}};
  for (int r = lo; r <= hi; ++r) {
    std::size_t na = a.rank(r), nb = b.rank(r);
    Matrix i1 = Matrix::vstack(Matrix::identity(R, na), Matrix::zero(R, nb, na));
    Matrix i2 = Matrix::vstack(Matrix::zero(R, na, nb), Matrix::identity(R, nb));
    if (!i1.empty()) {
      s.in1.comps.emplace(r, i1);
      s.pr1.comps.emplace(r, i1.transpose());
    }
    if (!i2.empty()) {
      s.in2.comps.emplace(r, i2);
      s.pr2.comps.emplace(r, i2.transpose());
    }
  }
  return s;
}

ChainMap direct_sum_map(const ChainMap& f, const ChainMap& g) {
  SumData s = direct_sum(f.source, g.source), t = direct_sum(f.target, g.target);
  ChainMap h{s.object, t.object, {}};
  auto [lo, hi] = joint_range(s.object, t.object);
  for (int r = lo; r <= hi; ++r) {
    Matrix m = Matrix::block_diag(f.at(r), g.at(r));
    if (!m.empty()) h.comps.emplace(r, m);
  }
  return h;
}

Cone cone(const ChainMap& f) {
  const Complex &E = f.source, &F = f.target;
  const Ring& R = E.ring();
  Complex TE = translate(E, 1, true);
  auto [lo, hi] = joint_range(F, TE);
  std::vector<std::size_t> ranks;
  std::map<int, Matrix> d;
  for (int r = lo; r <= hi; ++r) ranks.push_back(F.rank(r) + E.rank(r - 1));
  for (int r = lo + 1; r <= hi; ++r) {
    Matrix top = Matrix::hstack(F.d(r), f.at(r - 1));
    Matrix bot = Matrix::hstack(Matrix::zero(R, E.rank(r - 2), F.rank(r)), -E.d(r - 1));
    d.emplace(r, Matrix::vstack(top, bot));
  }
  Cone c;
  c.object = (lo > hi) ? Complex(R) : Complex::make(R, lo, ranks, d);
  c.inclusion = ChainMap{F, c.object, {}};
  c.projection = ChainMap{c.object, TE, {}};
  for (int r = lo; r <= hi; ++r) {
    std::size_t nf = F.rank(r), ne = E.rank(r - 1);
    Matrix inc = Matrix::vstack(Matrix::identity(R, nf), Matrix::zero(R, ne, nf));
    Matrix pr = Matrix::hstack(Matrix::zero(R, ne, nf), Matrix::identity(R, ne));
    if (!inc.empty()) c.inclusion.comps.emplace(r, inc);
    if (!pr.empty()) c.projection.comps.emplace(r, pr);
  }
  return c;
}

HomologyData homology(const Complex& c, int r) {
  HomologyData h;
  h.degree = r;
  h.cycles = kernel_basis(c.d(r));
  Matrix dn = c.d(r + 1);
  h.boundaries = image_basis(dn);
  auto y = solve_linear(h.cycles, dn);
  if (!y) throw Error(ErrorKind::NotAComplex, "boundaries are not cycles");
  h.module = ModulePresentation::make(c.ring(), h.cycles.cols(), *y);
  h.invariants = h.module.invariants();
  return h;
}

ModuleMorphism homology_map(const ChainMap& f, int r) {
  HomologyData hs = homology(f.source, r), ht = homology(f.target, r);
  auto x = solve_linear(ht.cycles, f.at(r) * hs.cycles);
  if (!x) throw Error(ErrorKind::IllFormedMorphism, "map does not send cycles to cycles");
  return ModuleMorphism::make(hs.module, ht.module, *x);
}

bool is_exact(const Complex& c) {
  if (c.is_zero()) return true;
  for (int r = c.lo(); r <= c.hi(); ++r)
    if (!homology(c, r).invariants.is_zero()) return false;
  return true;
}

bool is_quasi_iso(const ChainMap& f) { return is_exact(cone(f).object); }

bool is_quasi_iso_by_homology(const ChainMap& f) {
  auto [a, b] = joint_range(f.source, f.target);
  for (int r = a; r <= b; ++r)
    if (!is_iso(homology_map(f, r))) return false;
  return true;
}

MinimalModel minimize(const Complex& c) {
  const Ring& R = c.ring();
  if (c.is_zero()) return MinimalModel{c, ChainMap::identity(c), ChainMap::identity(c)};
  int lo = c.lo(), hi = c.hi();
  // Working differentials, and the current basis in original coordinates.
  std::map<int, Matrix> d = c.differentials();
  std::map<int, Matrix> B, Binv;
  for (int r = lo; r <= hi; ++r) {
    B[r] = Matrix::identity(R, c.rank(r));
    Binv[r] = Matrix::identity(R, c.rank(r));
  }
  auto dm = [&](int r) -> Matrix& { return d[r]; };
  for (int r = lo + 1; r <= hi; ++r) {
    SmithDecomposition s = smith_normal_form(dm(r));
    B[r] = B[r] * s.V;
    Binv[r] = s.Vinv * Binv[r];
    B[r - 1] = B[r - 1] * s.Uinv;
    Binv[r - 1] = s.U * Binv[r - 1];
    if (r + 1 <= hi) dm(r + 1) = s.Vinv * dm(r + 1);
    if (r - 1 > lo) dm(r - 1) = dm(r - 1) * s.Uinv;
    dm(r) = s.D;
    std::vector<std::size_t> keep_r, keep_prev;
    std::vector<bool> drop_r(s.D.cols(), false), drop_prev(s.D.rows(), false);
    for (std::size_t i = 0; i < std::min(s.D.rows(), s.D.cols()); ++i)
      if (R.is_unit(s.D(i, i))) drop_r[i] = drop_prev[i] = true;
    for (std::size_t j = 0; j < drop_r.size(); ++j)
      if (!drop_r[j]) keep_r.push_back(j);
    for (std::size_t i = 0; i < drop_prev.size(); ++i)
      if (!drop_prev[i]) keep_prev.push_back(i);
    dm(r) = dm(r).select_rows(keep_prev).select_cols(keep_r);
    if (r + 1 <= hi) dm(r + 1) = dm(r + 1).select_rows(keep_r);
    if (r - 1 > lo) dm(r - 1) = dm(r - 1).select_cols(keep_prev);
    B[r] = B[r].select_cols(keep_r);
    Binv[r] = Binv[r].select_rows(keep_r);
    B[r - 1] = B[r - 1].select_cols(keep_prev);
    Binv[r - 1] = Binv[r - 1].select_rows(keep_prev);
  }
  std::vector<std::size_t> ranks;
  for (int r = lo; r <= hi; ++r) ranks.push_back(B[r].cols());
  Complex m = Complex::make(R, lo, ranks, d);
  MinimalModel out{m, ChainMap{m, c, {}}, ChainMap{c, m, {}}};
  for (int r = lo; r <= hi; ++r) {
    if (!B[r].empty()) {
      out.incl.comps.emplace(r, B[r]);
      out.proj.comps.emplace(r, Binv[r]);
    }
  }
  return out;
}

ModuleComplex ModuleComplex::make(const Ring& ring, int lo, const std::vector<ModulePresentation>& modules,
                                  const std::map<int, ModuleMorphism>& maps) {
  ModuleComplex c{ring, lo, modules, maps};
  for (const auto& [r, m] : maps) {
    require_shape(r > lo && r <= c.hi(), "module complex map outside the support");
    require_shape(m.source.same_presentation(c.at(r)) && m.target.same_presentation(c.at(r - 1)),
                  "module complex map with the wrong ends");
  }
  for (int r = lo + 2; r <= c.hi(); ++r)
    if (!is_zero_morphism(compose(c.map(r - 1), c.map(r))))
      throw Error(ErrorKind::NotAComplex, "composite maps do not vanish at degree " + std::to_string(r));
  return c;
}

ModuleComplex ModuleComplex::from_free(const Complex& c) {
  const Ring& R = c.ring();
  ModuleComplex m{R, c.is_zero() ? 0 : c.lo(), {}, {}};
  if (c.is_zero()) return m;
  for (int r = c.lo(); r <= c.hi(); ++r) m.modules.push_back(ModulePresentation::free(R, c.rank(r)));
  for (int r = c.lo() + 1; r <= c.hi(); ++r) m.maps.emplace(r, ModuleMorphism{m.at(r), m.at(r - 1), c.d(r)});
  return m;
}

ModulePresentation ModuleComplex::at(int r) const {
  if (r < lo || r > hi()) return ModulePresentation::zero(ring);
  return modules[r - lo];
}

ModuleMorphism ModuleComplex::map(int r) const {
  auto it = maps.find(r);
  return it == maps.end() ? ModuleMorphism::zero(at(r), at(r - 1)) : it->second;
}

bool ModuleComplex::is_free() const {
  for (const auto& m : modules)
    if (!m.relations.is_zero()) return false;
  return true;
}

ModuleMorphism ModuleChainMap::at(int r) const {
  auto it = comps.find(r);
  return it == comps.end() ? ModuleMorphism::zero(source.at(r), target.at(r)) : it->second;
}

namespace {

// X with incl * X = b modulo the relations of the ambient module.
Matrix lift_through(const Matrix& incl, const Matrix& relations, const Matrix& b) {
  auto x = solve_linear(Matrix::hstack(incl, relations), b);
  if (!x) throw Error(ErrorKind::IllFormedMorphism, "element does not lie in the submodule");
  return x->block(0, 0, incl.cols(), b.cols());
}

}  // namespace

ModuleHomology module_homology(const ModuleComplex& c, int r) {
  SubquotientWitness k = subquotient(c.map(r), SubquotientKind::Kernel);
  ModuleMorphism in = c.map(r + 1);
  Matrix e = lift_through(k.map.matrix, c.at(r).relations, in.matrix);
  ModulePresentation h = ModulePresentation::make(c.ring, k.object.g(), Matrix::hstack(k.object.relations, e));
  return ModuleHomology{k.object, k.map.matrix, h};
}

ModuleMorphism module_homology_map(const ModuleChainMap& f, int r) {
  ModuleHomology hs = module_homology(f.source, r), ht = module_homology(f.target, r);
  Matrix x = lift_through(ht.cycle_inclusion, f.target.at(r).relations, f.at(r).matrix * hs.cycle_inclusion);
  return ModuleMorphism::make(hs.module, ht.module, x);
}

}  // namespace devissage
