#include "devissage/resolution.hpp"

#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "devissage/error.hpp"

namespace devissage {

namespace {

Matrix solve_or_throw(const Matrix& a, const Matrix& b, ErrorKind kind, const char* what) {
  auto x = solve_linear(a, b);
  if (!x) throw Error(kind, what);
  return *x;
}

Matrix zero_if_empty(const Ring& r, std::size_t rows, std::size_t cols) { return Matrix::zero(r, rows, cols); }

}  // namespace

Resolution resolve_module(const ModulePresentation& m) {
  const Ring& R = m.ring;
  Simplified s = simplify(m);
  std::size_t p0 = s.module.g(), p1 = s.module.relations.cols();
  Complex c = Complex::make(R, 0, {p0, p1}, {{1, s.module.relations}});
  ModuleMorphism aug{ModulePresentation::free(R, p0), m, s.from_min.matrix};
  return Resolution{m, c, aug, s.to_min.matrix};
}

Resolution resolve_presentation(const ModulePresentation& m) {
  const Ring& R = m.ring;
  Matrix rel = image_basis(m.relations);
  Complex c = Complex::make(R, 0, {m.g(), rel.cols()}, {{1, rel}});
  ModuleMorphism aug{ModulePresentation::free(R, m.g()), m, Matrix::identity(R, m.g())};
  return Resolution{m, c, aug, Matrix::identity(R, m.g())};
}

Resolution make_resolution(const ModulePresentation& m, const Complex& c, const Matrix& augmentation) {
  const Ring& R = m.ring;
  if (!c.is_zero() && c.lo() < 0) throw Error(ErrorKind::ShapeMismatch, "resolution in negative degrees");
  require_shape(augmentation.rows() == m.g() && augmentation.cols() == c.rank(0), "augmentation shape");
  if (!c.is_zero())
    for (int r = 1; r <= c.hi(); ++r)
      if (!homology(c, r).invariants.is_zero())
        throw Error(ErrorKind::NotAComplex, "resolution has higher homology");
  ModulePresentation h0 = ModulePresentation::make(R, c.rank(0), c.d(1));
  ModuleMorphism aug = ModuleMorphism::make(h0, m, augmentation);
  Matrix section = inverse_iso(aug).matrix;
  return Resolution{m, c, ModuleMorphism{ModulePresentation::free(R, c.rank(0)), m, augmentation}, section};
}

bool is_resolution(const Resolution& r) {
  try {
    make_resolution(r.module, r.complex, r.augmentation.matrix);
    return true;
  } catch (const Error&) {
    return false;
  }
}

Resolution zeta_object(const ModulePresentation& m) {
  static std::shared_mutex mu;
  static std::unordered_map<std::string, Resolution> cache;
  std::string key = m.ring.descriptor() + "|" + std::to_string(m.g()) + "|" + std::to_string(m.relations.cols()) +
                    "|" + m.relations.to_string();
  {
    std::shared_lock lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  Resolution r = resolve_module(m);
  std::unique_lock lock(mu);
  return cache.try_emplace(key, std::move(r)).first->second;
}

ChainMap zeta_morphism(const ModuleMorphism& g) {
  return lift_morphism(g, zeta_object(g.source), zeta_object(g.target));
}

ChainMap lift_morphism(const ModuleMorphism& g, const Resolution& p, const Resolution& q) {
  if (!g.source.same_presentation(p.module) || !g.target.same_presentation(q.module))
    throw Error(ErrorKind::IncompatibleAugmentations, "resolutions do not match the morphism");
  const Complex &P = p.complex, &Q = q.complex;
  ChainMap f = ChainMap::zero(P, Q);
  if (P.is_zero() || Q.is_zero()) return f;
  Matrix prev = q.section * g.matrix * p.augmentation.matrix;
  if (!prev.empty()) f.comps.emplace(0, prev);
  for (int r = 1; r <= P.hi(); ++r) {
    Matrix rhs = prev * P.d(r);
    prev = solve_or_throw(Q.d(r), rhs, ErrorKind::IllFormedMorphism, "target resolution is not exact");
    if (!prev.empty()) f.comps.emplace(r, prev);
  }
  return f;
}

bool lifts(const ChainMap& f, const ModuleMorphism& g, const Resolution& p, const Resolution& q) {
  Matrix diff = q.augmentation.matrix * f.at(0) - g.matrix * p.augmentation.matrix;
  return in_column_span(g.target.relations, diff);
}

QuasiResolution resolve_quasi(const ModuleComplex& g) {
  const Ring& R = g.ring;
  int lo = g.lo, hi = g.hi();
  std::map<int, Matrix> D, K, h, delta;
  auto gens = [&](int r) { return g.at(r).g(); };
  for (int r = lo; r <= hi; ++r) K[r] = image_basis(g.at(r).relations);
  auto Kr = [&](int r) { return K.count(r) ? K[r] : zero_if_empty(R, gens(r), 0); };
  auto Dr = [&](int r) { return g.map(r).matrix; };
  auto kr = [&](int r) { return Kr(r).cols(); };
  // Kr_{n-2} h_n = -D_{n-1} D_n ;  Kr_{n-1} delta_n = D_n Kr_n
  for (int n = lo + 2; n <= hi; ++n)
    h[n] = solve_or_throw(Kr(n - 2), -(Dr(n - 1) * Dr(n)), ErrorKind::NotAComplex, "composite not in relations");
  for (int n = lo + 1; n <= hi; ++n)
    delta[n] = solve_or_throw(Kr(n - 1), Dr(n) * Kr(n), ErrorKind::IllFormedMorphism, "map does not preserve relations");
  auto hn = [&](int n) { return h.count(n) ? h[n] : zero_if_empty(R, kr(n - 2), gens(n)); };
  auto dn = [&](int n) { return delta.count(n) ? delta[n] : zero_if_empty(R, kr(n - 1), kr(n)); };
  std::vector<std::size_t> ranks;
  std::map<int, Matrix> d;
  for (int n = lo; n <= hi + 1; ++n) ranks.push_back(gens(n) + kr(n - 1));
  for (int n = lo + 1; n <= hi + 1; ++n) {
    Matrix top = Matrix::hstack(Dr(n), Kr(n - 1));
    Matrix bot = Matrix::hstack(hn(n), -dn(n - 1));
    d.emplace(n, Matrix::vstack(top, bot));
  }
  QuasiResolution out;
  out.complex = Complex::make(R, lo, ranks, d);
  out.map.source = ModuleComplex::from_free(out.complex);
  out.map.target = g;
  for (int n = lo; n <= hi; ++n) {
    if (gens(n) == 0 && kr(n - 1) == 0) continue;
    Matrix m = Matrix::hstack(Matrix::identity(R, gens(n)), Matrix::zero(R, gens(n), kr(n - 1)));
    out.map.comps.emplace(n, ModuleMorphism{out.map.source.at(n), g.at(n), m});
  }
  return out;
}

ComplexPullback pullback_complexes(const Resolution& f, const Resolution& g, const ModuleMorphism& map) {
  if (!map.source.same_presentation(f.module) || !map.target.same_presentation(g.module))
    throw Error(ErrorKind::IncompatibleAugmentations, "augmentations do not match the morphism");
  const Ring& R = f.module.ring;
  const Complex &F = f.complex, &G = g.complex;
  std::size_t f0 = F.rank(0), g0 = G.rank(0);
  Matrix A = map.matrix * f.augmentation.matrix;
  Matrix B = g.augmentation.matrix;
  Matrix ker = kernel_basis(Matrix::hstack(Matrix::hstack(A, -B), map.target.relations));
  Matrix J = image_basis(ker.block(0, 0, f0 + g0, ker.cols()));
  int top = std::max(F.is_zero() ? 0 : F.hi(), G.is_zero() ? 0 : G.hi());
  std::vector<std::size_t> ranks{J.cols()};
  std::map<int, Matrix> d;
  for (int i = 1; i <= top; ++i) ranks.push_back(F.rank(i) + G.rank(i));
  if (top >= 1)
    d.emplace(1, solve_or_throw(J, Matrix::block_diag(F.d(1), G.d(1)), ErrorKind::IncompatibleAugmentations,
                                "boundaries do not lie in the pullback"));
  for (int i = 2; i <= top; ++i) d.emplace(i, Matrix::block_diag(F.d(i), G.d(i)));
  ComplexPullback out;
  out.object = Complex::make(R, 0, ranks, d);
  std::map<int, Matrix> t, gm;
  t.emplace(0, J.block(0, 0, f0, J.cols()));
  gm.emplace(0, J.block(f0, 0, g0, J.cols()));
  for (int i = 1; i <= top; ++i) {
    std::size_t a = F.rank(i), b = G.rank(i);
    t.emplace(i, Matrix::hstack(Matrix::identity(R, a), Matrix::zero(R, a, b)));
    gm.emplace(i, Matrix::hstack(Matrix::zero(R, b, a), Matrix::identity(R, b)));
  }
  out.t = ChainMap::make(out.object, F, t);
  out.G = ChainMap::make(out.object, G, gm);
  out.augmentation = f.augmentation.matrix * out.t.at(0);
  return out;
}

RoofNormalization normalize_roof(const ChainMap& tau, const ChainMap& gamma) {
  require_shape(tau.source == gamma.source, "roof legs with different sources");
  if (!is_quasi_iso(tau)) throw Error(ErrorKind::NotQuasiIso, "roof denominator is not a quasi-isomorphism");
  const Complex &L = tau.source, &E = tau.target, &Q = gamma.target;
  const Ring& R = L.ring();
  int lo = 0, hi = -1;
  for (const Complex* c : {&L, &E, &Q}) {
    if (c->is_zero()) continue;
    if (hi < lo) {
      lo = c->lo();
      hi = c->hi();
    } else {
      lo = std::min(lo, c->lo());
      hi = std::max(hi, c->hi());
    }
  }
  LinearSystem sys(R);
  std::map<int, std::size_t> o, H;
  for (int r = lo; r <= hi; ++r) {
    if (E.rank(r) && Q.rank(r)) o[r] = sys.add_unknown(Q.rank(r), E.rank(r));
    if (L.rank(r) && Q.rank(r + 1)) H[r] = sys.add_unknown(Q.rank(r + 1), L.rank(r));
  }
  for (int r = lo; r <= hi + 1; ++r) {
    if (Q.rank(r - 1) && E.rank(r)) {
      std::vector<LinearSystem::Term> terms;
      if (o.count(r)) terms.push_back(LinearSystem::term(Q.d(r), o[r], std::nullopt));
      if (o.count(r - 1)) terms.push_back(LinearSystem::term(std::nullopt, o[r - 1], E.d(r), -1));
      if (!terms.empty()) sys.add_equation(terms, Matrix::zero(R, Q.rank(r - 1), E.rank(r)));
    }
    if (Q.rank(r) && L.rank(r)) {
      std::vector<LinearSystem::Term> terms;
      if (o.count(r)) terms.push_back(LinearSystem::term(std::nullopt, o[r], tau.at(r)));
      if (H.count(r)) terms.push_back(LinearSystem::term(Q.d(r + 1), H[r], std::nullopt, -1));
      if (H.count(r - 1)) terms.push_back(LinearSystem::term(std::nullopt, H[r - 1], L.d(r), -1));
      if (terms.empty()) {
        if (!gamma.at(r).is_zero()) throw Error(ErrorKind::NotQuasiIso, "roof cannot be normalized");
        continue;
      }
      sys.add_equation(terms, gamma.at(r));
    }
  }
  auto sol = sys.solve();
  if (!sol) throw Error(ErrorKind::NotQuasiIso, "roof cannot be normalized");
  RoofNormalization out;
  out.map = ChainMap::zero(E, Q);
  for (const auto& [r, k] : o) out.map.comps.emplace(r, (*sol)[k]);
  for (const auto& [r, k] : H) out.witness.maps.emplace(r, (*sol)[k]);
  return out;
}

ChainMap homotopy_inverse(const ChainMap& s) { return normalize_roof(s, ChainMap::identity(s.source)).map; }

}  // namespace devissage
