#include "devissage/module.hpp"

#include <algorithm>
#include <map>

namespace devissage {

ModulePresentation ModulePresentation::make(const Ring& ring, std::size_t g, const Matrix& relations) {
  require_shape(relations.rows() == g, "relations must have one row per generator");
  require_shape(relations.ring() == ring || relations.empty(), "relations over a different ring");
  Matrix r = relations;
  if (!(relations.ring() == ring)) r = Matrix(ring, relations.rows(), relations.cols());
  return ModulePresentation{ring, g, r};
}

ModulePresentation ModulePresentation::free(const Ring& ring, std::size_t n) {
  return ModulePresentation{ring, n, Matrix(ring, n, 0)};
}

ModulePresentation ModulePresentation::cyclic_sum(const Ring& ring, const std::vector<Scalar>& factors) {
  return make(ring, factors.size(), Matrix::diagonal(ring, factors));
}

ModulePresentation direct_sum(const ModulePresentation& a, const ModulePresentation& b) {
  return ModulePresentation::make(a.ring, a.g() + b.g(), Matrix::block_diag(a.relations, b.relations));
}

bool isomorphic(const ModulePresentation& a, const ModulePresentation& b) {
  return a.ring == b.ring && a.invariants() == b.invariants();
}

Matrix change_ring(const Matrix& m, const Ring& ring) {
  Matrix out(ring, m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.set(i, j, m(i, j));
  return out;
}

ModulePresentation change_ring(const ModulePresentation& m, const Ring& ring) {
  return ModulePresentation::make(ring, m.g(), change_ring(m.relations, ring));
}

bool is_well_defined(const ModulePresentation& s, const ModulePresentation& t, const Matrix& m) {
  if (m.rows() != t.g() || m.cols() != s.g()) return false;
  if (s.relations.cols() == 0) return true;
  return in_column_span(t.relations, m * s.relations);
}

ModuleMorphism ModuleMorphism::make(const ModulePresentation& source, const ModulePresentation& target,
                                    const Matrix& m) {
  require_shape(m.rows() == target.g() && m.cols() == source.g(), "morphism matrix shape");
  if (!is_well_defined(source, target, m))
    throw Error(ErrorKind::IllFormedMorphism, "relations not mapped into target relations");
  return ModuleMorphism{source, target, m};
}

ModuleMorphism ModuleMorphism::identity(const ModulePresentation& m) {
  return ModuleMorphism{m, m, Matrix::identity(m.ring, m.g())};
}

ModuleMorphism ModuleMorphism::zero(const ModulePresentation& s, const ModulePresentation& t) {
  return ModuleMorphism{s, t, Matrix(s.ring, t.g(), s.g())};
}

bool morphism_equal(const ModuleMorphism& f, const ModuleMorphism& g) {
  require_shape(f.matrix.rows() == g.matrix.rows() && f.matrix.cols() == g.matrix.cols(), "morphism shapes");
  Matrix d = f.matrix - g.matrix;
  if (d.is_zero()) return true;
  return in_column_span(f.target.relations, d);
}

bool is_zero_morphism(const ModuleMorphism& f) { return morphism_equal(f, ModuleMorphism::zero(f.source, f.target)); }

ModuleMorphism compose(const ModuleMorphism& g, const ModuleMorphism& f) {
  require_shape(g.source.g() == f.target.g(), "composition through different modules");
  return ModuleMorphism{f.source, g.target, g.matrix * f.matrix};
}

ModuleMorphism add(const ModuleMorphism& f, const ModuleMorphism& g) {
  return ModuleMorphism{f.source, f.target, f.matrix + g.matrix};
}

ModuleMorphism scale(const ModuleMorphism& f, const Scalar& s) {
  return ModuleMorphism{f.source, f.target, f.matrix.scaled(s)};
}

ModuleMorphism inverse_iso(const ModuleMorphism& f) {
  const Ring& r = f.source.ring;
  const auto& M = f.source;
  const auto& N = f.target;
  LinearSystem sys(r);
  std::size_t G = sys.add_unknown(M.g(), N.g());
  std::size_t Y1 = sys.add_unknown(N.relations.cols(), N.g());
  std::size_t Y2 = sys.add_unknown(M.relations.cols(), N.relations.cols());
  sys.add_equation({LinearSystem::term(f.matrix, G, std::nullopt), LinearSystem::term(N.relations, Y1, std::nullopt, -1)},
                   Matrix::identity(r, N.g()));
  sys.add_equation({LinearSystem::term(std::nullopt, G, N.relations),
                    LinearSystem::term(M.relations, Y2, std::nullopt, -1)},
                   Matrix(r, M.g(), N.relations.cols()));
  auto sol = sys.solve();
  if (!sol) throw Error(ErrorKind::NotAnIsomorphism, "no inverse exists");
  ModuleMorphism inv{N, M, (*sol)[G]};
  if (!morphism_equal(compose(inv, f), ModuleMorphism::identity(M)))
    throw Error(ErrorKind::NotAnIsomorphism, "map is not injective");
  return inv;
}

std::vector<Matrix> hom_basis(const ModulePresentation& s, const ModulePresentation& t) {
  const Ring& r = s.ring;
  LinearSystem sys(r);
  std::size_t X = sys.add_unknown(t.g(), s.g());
  std::size_t Y = sys.add_unknown(t.relations.cols(), s.relations.cols());
  sys.add_equation({LinearSystem::term(std::nullopt, X, s.relations), LinearSystem::term(t.relations, Y, std::nullopt, -1)},
                   Matrix(r, t.g(), s.relations.cols()));
  std::vector<Matrix> out;
  for (auto& sol : sys.kernel())
    if (!sol[X].is_zero() && !in_column_span(t.relations, sol[X])) out.push_back(sol[X]);
  return out;
}

namespace {

// Basis of the preimage submodule {x : F x in colspan R_N} of A^{g_M}.
Matrix preimage_basis(const ModuleMorphism& f) {
  const Ring& r = f.source.ring;
  Matrix big = Matrix::hstack(f.matrix, -f.target.relations);
  Matrix k = kernel_basis(big);
  Matrix x = k.block(0, 0, f.source.g(), k.cols());
  if (x.cols() == 0) return Matrix(r, f.source.g(), 0);
  return image_basis(x);
}

}  // namespace

SubquotientWitness subquotient(const ModuleMorphism& f, SubquotientKind kind) {
  if (!is_well_defined(f.source, f.target, f.matrix))
    throw Error(ErrorKind::IllFormedMorphism, "subquotient of an ill-formed morphism");
  const Ring& r = f.source.ring;
  switch (kind) {
    case SubquotientKind::Kernel: {
      Matrix kb = preimage_basis(f);
      Matrix y(r, kb.cols(), 0);
      if (f.source.relations.cols()) {
        auto sol = solve_linear(kb, f.source.relations);
        y = *sol;
      }
      ModulePresentation obj = ModulePresentation::make(r, kb.cols(), y);
      return {kind, obj, ModuleMorphism{obj, f.source, kb}};
    }
    case SubquotientKind::Image: {
      Matrix kb = preimage_basis(f);
      ModulePresentation obj = ModulePresentation::make(r, f.source.g(), kb);
      return {kind, obj, ModuleMorphism{obj, f.target, f.matrix}};
    }
    case SubquotientKind::Cokernel: {
      ModulePresentation obj =
          ModulePresentation::make(r, f.target.g(), Matrix::hstack(f.target.relations, f.matrix));
      return {kind, obj, ModuleMorphism{f.target, obj, Matrix::identity(r, f.target.g())}};
    }
  }
  throw Error(ErrorKind::UnknownKind, "subquotient kind");
}

bool is_mono(const ModuleMorphism& f) { return subquotient(f, SubquotientKind::Kernel).object.is_zero(); }
bool is_epi(const ModuleMorphism& f) { return subquotient(f, SubquotientKind::Cokernel).object.is_zero(); }
bool is_iso(const ModuleMorphism& f) { return is_mono(f) && is_epi(f); }

DirectSum direct_sum_data(const ModulePresentation& a, const ModulePresentation& b) {
  const Ring& r = a.ring;
  ModulePresentation s = direct_sum(a, b);
  Matrix i1(r, s.g(), a.g()), i2(r, s.g(), b.g());
  i1.paste(0, 0, Matrix::identity(r, a.g()));
  i2.paste(a.g(), 0, Matrix::identity(r, b.g()));
  return {s, ModuleMorphism{a, s, i1}, ModuleMorphism{b, s, i2}, ModuleMorphism{s, a, i1.transpose()},
          ModuleMorphism{s, b, i2.transpose()}};
}

Pullback pullback(const ModuleMorphism& f, const ModuleMorphism& g) {
  if (f.target.g() != g.target.g() || !(f.target.relations == g.target.relations))
    throw Error(ErrorKind::TargetMismatch, "pullback of maps with different targets");
  DirectSum ds = direct_sum_data(f.source, g.source);
  ModuleMorphism h{ds.object, f.target, Matrix::hstack(f.matrix, -g.matrix)};
  SubquotientWitness k = subquotient(h, SubquotientKind::Kernel);
  return {k.object, compose(ds.pr1, k.map), compose(ds.pr2, k.map)};
}

HomDual hom_to_omega(const ModulePresentation& m) {
  Matrix k = kernel_basis(m.relations.transpose());
  return {ModulePresentation::free(m.ring, k.cols()), k};
}

ModuleMorphism hom_to_omega_map(const ModuleMorphism& f) {
  HomDual hm = hom_to_omega(f.source), hn = hom_to_omega(f.target);
  Matrix x(f.source.ring, hm.module.g(), hn.module.g());
  if (hn.module.g()) x = *solve_linear(hm.functionals, f.matrix.transpose() * hn.functionals);
  return ModuleMorphism{hn.module, hm.module, x};
}

namespace {

Matrix injective_relations(const ModulePresentation& m) {
  if (m.relations.cols() == 0) return m.relations;
  return image_basis(m.relations);
}

}  // namespace

ModulePresentation ext(const ModulePresentation& m, int i) {
  if (i == 0) return hom_to_omega(m).module;
  if (i == 1) {
    Matrix rp = injective_relations(m);
    return ModulePresentation::make(m.ring, rp.cols(), rp.transpose());
  }
  return ModulePresentation::zero(m.ring);
}

ModuleMorphism ext_map(const ModuleMorphism& f, int i) {
  if (i == 0) return hom_to_omega_map(f);
  ModulePresentation em = ext(f.source, i), en = ext(f.target, i);
  if (i != 1) return ModuleMorphism::zero(en, em);
  Matrix rm = injective_relations(f.source), rn = injective_relations(f.target);
  Matrix y(f.source.ring, rn.cols(), rm.cols());
  if (rm.cols()) y = *solve_linear(rn, f.matrix * rm);
  return ModuleMorphism{en, em, y.transpose()};
}

Simplified simplify(const ModulePresentation& m) {
  const Ring& r = m.ring;
  SmithDecomposition s = smith_normal_form(m.relations);
  std::vector<std::size_t> keep;
  std::vector<Scalar> factors;
  for (std::size_t i = 0; i < m.g(); ++i) {
    Scalar d = (i < m.relations.cols()) ? s.D(i, i) : Scalar(0);
    if (d != 0 && r.is_unit(d)) continue;
    keep.push_back(i);
    if (d != 0) factors.push_back(d);
  }
  Matrix rel(r, keep.size(), factors.size());
  for (std::size_t j = 0; j < factors.size(); ++j) rel.raw(j, j) = factors[j];
  ModulePresentation min = ModulePresentation::make(r, keep.size(), rel);
  Matrix to = s.U.select_rows(keep);
  Matrix from = s.Uinv.select_cols(keep);
  return {min, ModuleMorphism{m, min, to}, ModuleMorphism{min, m, from}};
}

mpz_class module_order(const ModulePresentation& m) {
  CokernelInvariants inv = m.invariants();
  if (inv.free_rank) throw Error(ErrorKind::NotFiniteLength, "module has free rank");
  mpz_class n = 1;
  for (const auto& f : inv.factors) n *= f.get_num();
  return n;
}

std::vector<PrimaryPart> primary_decompose(const ModulePresentation& m) {
  const Ring& r = m.ring;
  if (r.kind() != RingKind::IntegersTwoInverted)
    throw Error(ErrorKind::UnsupportedRing, "primary decomposition is over Z[1/2]");
  Simplified s = simplify(m);
  if (s.module.g() != s.module.relations.cols())
    throw Error(ErrorKind::NotFiniteLength, "module has free rank");
  const std::size_t k = s.module.g();
  std::vector<Scalar> f(k);
  for (std::size_t i = 0; i < k; ++i) f[i] = s.module.relations(i, i);
  std::map<long, std::vector<unsigned long>> exps;  // prime -> exponent per summand
  for (std::size_t i = 0; i < k; ++i) {
    Scalar unit;
    for (const auto& fac : r.valuation_and_unit(f[i], &unit)) {
      auto& v = exps[fac.prime.get_si()];
      v.resize(k, 0);
      v[i] = fac.exponent;
    }
  }
  std::vector<PrimaryPart> out;
  for (auto& [p, ev] : exps) {
    ev.resize(k, 0);
    std::vector<std::size_t> idx;
    std::vector<Scalar> pk;
    for (std::size_t i = 0; i < k; ++i)
      if (ev[i] > 0) {
        idx.push_back(i);
        mpz_class q;
        mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(p), ev[i]);
        pk.push_back(mpq_class(q));
      }
    ModulePresentation global = ModulePresentation::cyclic_sum(r, pk);
    // inclusion: generator j -> e_p * e_idx[j], e_p the CRT idempotent of A/f
    Matrix inc(r, k, idx.size()), proj(r, idx.size(), k);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      std::size_t i = idx[j];
      mpz_class fi = f[i].get_num(), q = pk[j].get_num();
      mpz_class co = fi / q, inv;
      mpz_invert(inv.get_mpz_t(), co.get_mpz_t(), q.get_mpz_t());
      mpz_class e = co * inv;
      mpz_fdiv_r(e.get_mpz_t(), e.get_mpz_t(), fi.get_mpz_t());
      inc.set(i, j, mpq_class(e));
      proj.set(j, i, 1);
    }
    PrimaryPart part{p, change_ring(global, Ring::local(p)), global,
                     ModuleMorphism{global, m, s.from_min.matrix * inc},
                     ModuleMorphism{m, global, proj * s.to_min.matrix}};
    out.push_back(std::move(part));
  }
  return out;
}

}  // namespace devissage
