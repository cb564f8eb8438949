#include "devissage/forms.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "devissage/error.hpp"

namespace devissage {

namespace {

Matrix solve_or_throw(const Matrix& a, const Matrix& b, const char* what) {
  auto x = solve_linear(a, b);
  if (!x) throw Error(ErrorKind::IllFormedMorphism, what);
  return *x;
}

// Field in which Gram matrices live: Q for the PIDs, the ring itself for fields.
Ring value_field(const Ring& r) { return r.is_field() ? r : Ring::rational(); }

Complex change_ring(const Complex& c, const Ring& ring) {
  if (c.is_zero()) return Complex(ring);
  std::map<int, Matrix> d;
  for (const auto& [r, m] : c.differentials()) d.emplace(r, devissage::change_ring(m, ring));
  return Complex::make(ring, c.lo(), c.ranks(), d);
}

// D(zeta M) read as a resolution of M^v.
Resolution dual_resolution(const ModulePresentation& m) {
  const Ring& R = m.ring;
  Resolution p = zeta_object(m);
  ModulePresentation dv = dual_module(m);
  Complex dp = complex_dual(p.complex);
  std::size_t n = dv.g();
  return Resolution{dv, dp, ModuleMorphism{ModulePresentation::free(R, n), dv, Matrix::identity(R, n)},
                    Matrix::identity(R, n)};
}

// Gram matrix on the degree-0 generators of the minimal resolution.
Matrix minimal_gram(const ModuleForm& f) {
  const Ring& R = f.module.ring;
  Ring K = value_field(R);
  Resolution p = zeta_object(f.module);
  Matrix phiP = devissage::change_ring(f.phi.matrix * p.augmentation.matrix, K);
  if (R.is_field()) return phiP.transpose();
  Matrix dT = devissage::change_ring(p.complex.d(1), K).transpose();
  if (dT.rows() != dT.cols()) throw Error(ErrorKind::NotFiniteLength, "form on a module of infinite length");
  // G = phiP^T d^{-1}  <=>  d^T G^T = phiP
  return solve_or_throw(dT, phiP, "singular resolution").transpose();
}

Matrix symmetrized(const Matrix& g) {
  Ring K = g.ring();
  return (g + g.transpose()).scaled(K.inverse(K.from_int(2)));
}

long legendre(const mpz_class& a, long p) {
  mpz_class r = a % p;
  if (r < 0) r += p;
  if (r == 0) return 0;
  mpz_class e;
  mpz_powm_ui(e.get_mpz_t(), r.get_mpz_t(), static_cast<unsigned long>((p - 1) / 2), mpz_class(p).get_mpz_t());
  return e == 1 ? 1 : -1;
}

long least_nonsquare(long p) {
  for (long n = 2; n < p; ++n)
    if (legendre(n, p) == -1) return n;
  return 1;
}

// Legendre symbol of the p-adic unit x (x has valuation 0 at p).
long unit_legendre(const Scalar& x, long p) { return legendre(x.get_num() * x.get_den(), p); }

long p_valuation(const Scalar& x, long p) {
  long v = 0;
  mpz_class n = x.get_num(), d = x.get_den();
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  while (d % p == 0) {
    d /= p;
    --v;
  }
  return v;
}

Scalar field_det(Matrix a) {
  const Ring& K = a.ring();
  std::size_t n = a.rows();
  Scalar det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a(piv, c) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a.raw(piv, j), a.raw(c, j));
      det = K.neg(det);
    }
    det = K.mul(det, a(c, c));
    Scalar inv = K.inverse(a(c, c));
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a(i, c) == 0) continue;
      Scalar f = K.mul(a(i, c), inv);
      for (std::size_t j = c; j < n; ++j) a.set(i, j, K.sub(a(i, j), K.mul(f, a(c, j))));
    }
  }
  return det;
}

std::vector<long> primes_of(const ModulePresentation& m) {
  const Ring& R = m.ring;
  if (R.kind() == RingKind::LocalIntegers) return {R.prime()};
  std::set<long> ps;
  for (const auto& f : m.invariants().factors) {
    Scalar unit;
    for (const auto& fac : R.valuation_and_unit(f, &unit)) ps.insert(fac.prime.get_si());
  }
  return {ps.begin(), ps.end()};
}

}  // namespace

// ------------------------------------------------------------------ duality

std::optional<AObject> in_A(const ModulePresentation& m, std::string* reason) {
  const int d = m.ring.dim();
  AObject a{m, zeta_object(m), {}};
  for (int i = 0; i < d; ++i) {
    CokernelInvariants e = ext(m, i).invariants();
    a.ext_vanishing.emplace_back(i, e);
    if (!e.is_zero()) {
      if (reason) *reason = "Ext^" + std::to_string(i) + " = " + e.to_string() + " is nonzero";
      return std::nullopt;
    }
  }
  return a;
}

ModulePresentation dual_module(const ModulePresentation& m) {
  const int d = m.ring.dim();
  Resolution p = zeta_object(m);
  Complex dp = complex_dual(p.complex);
  return ModulePresentation::make(m.ring, p.complex.rank(d), dp.d(1));
}

ModuleMorphism dual_morphism(const ModuleMorphism& f) {
  const int d = f.source.ring.dim();
  ChainMap lift = lift_morphism(f, zeta_object(f.source), zeta_object(f.target));
  return ModuleMorphism::make(dual_module(f.target), dual_module(f.source), lift.at(d).transpose());
}

DoubleDual double_dual_iso(const ModulePresentation& m) {
  const int d = m.ring.dim();
  ModulePresentation dv = dual_module(m);
  Resolution q = zeta_object(dv);
  ChainMap c = lift_morphism(ModuleMorphism::identity(dv), q, dual_resolution(m));
  Matrix minimal = c.at(d).transpose();
  Matrix mat = minimal * zeta_object(m).section;
  DoubleDual out{ModuleMorphism::make(m, dual_module(dv), mat), std::nullopt};
  if (minimal.rows() == 1 && minimal.cols() == 1) out.unit = minimal(0, 0);
  return out;
}

Complex complex_dual(const Complex& e) { return shifted_dual(e, e.ring().dim()); }

ChainMap complex_dual_map(const ChainMap& f) { return shifted_dual_map(f, f.source.ring().dim()); }

void require_homology_in_A(const Complex& e) {
  if (e.is_zero() || e.ring().dim() == 0) return;
  for (int r = e.lo(); r <= e.hi(); ++r)
    if (homology(e, r).invariants.free_rank > 0)
      throw Error(ErrorKind::HomologyNotInA, "H_" + std::to_string(r) + " has a free summand");
}

HomologyDuality homology_duality(const Complex& e, int r) {
  require_homology_in_A(e);
  const Ring& R = e.ring();
  const int d = R.dim();
  const int k = r - d;
  Complex de = complex_dual(e);
  HomologyData src = homology(de, -k);
  HomologyData hk = homology(e, k);
  Resolution pk = zeta_object(hk.module);
  ModulePresentation target = dual_module(hk.module);
  if (d == 0) {
    Matrix m = (hk.cycles * pk.augmentation.matrix).transpose() * src.cycles;
    return HomologyDuality{r, ModuleMorphism::make(src.module, target, m)};
  }
  // 0 -> B_k -> Z_k -> H_k -> 0 computes Ext^1(H_k); a functional mu on B_k
  // goes to the cocycle mu o d_{k+1} on E_{k+1}.
  const Matrix& y = hk.module.relations;
  Matrix bb = image_basis(y);
  Matrix c = solve_or_throw(bb, y, "boundaries outside their basis");
  ModulePresentation ext_pres = ModulePresentation::make(R, bb.cols(), bb.transpose());
  Matrix x = solve_or_throw(src.cycles, c.transpose(), "cocycle expected");
  ModuleMorphism psi = ModuleMorphism::make(ext_pres, src.module, x);
  Complex q = Complex::make(R, 0, {hk.module.g(), bb.cols()}, {{1, bb}});
  std::size_t z = hk.module.g();
  Resolution qres{hk.module, q, ModuleMorphism{ModulePresentation::free(R, z), hk.module, Matrix::identity(R, z)},
                  Matrix::identity(R, z)};
  ChainMap cmp = lift_morphism(ModuleMorphism::identity(hk.module), pk, qres);
  ModuleMorphism to_dual = ModuleMorphism::make(ext_pres, target, cmp.at(1).transpose());
  return HomologyDuality{r, compose(to_dual, inverse_iso(psi))};
}

ExtBoundaryRecord ext_boundary_check(const Complex& e, int r, int i) {
  require_homology_in_A(e);
  const Ring& R = e.ring();
  const int d = R.dim();
  ExtBoundaryRecord rec;
  rec.r = r;
  rec.i = i;
  ModulePresentation quotient = ModulePresentation::make(R, e.rank(r), e.d(r + 1));
  rec.lhs = ext(quotient, i).invariants();
  if (i >= 1 && i <= d) rec.rhs = ext(homology(e, r + i - d).module, d).invariants();
  rec.agree = rec.lhs == rec.rhs;
  return rec;
}

// ------------------------------------------------------------- module forms

bool is_symmetric(const ModuleForm& f) {
  ModuleMorphism lhs = compose(dual_morphism(f.phi), double_dual_iso(f.module).iso);
  return morphism_equal(lhs, scale(f.phi, f.epsilon));
}

bool is_nondegenerate(const ModuleForm& f) { return is_iso(f.phi); }

bool is_valid_form(const ModuleForm& f) {
  if (!in_A(f.module)) return false;
  if (!f.phi.source.same_presentation(f.module) || !f.phi.target.same_presentation(dual_module(f.module)))
    return false;
  return is_nondegenerate(f) && is_symmetric(f);
}

Matrix gram_matrix(const ModuleForm& f) {
  Ring K = value_field(f.module.ring);
  Matrix s = devissage::change_ring(zeta_object(f.module).section, K);
  return s.transpose() * minimal_gram(f) * s;
}

ModuleForm form_from_gram(const ModulePresentation& m, const Matrix& g, int epsilon) {
  const Ring& R = m.ring;
  Ring K = value_field(R);
  Resolution p = zeta_object(m);
  Matrix aug = devissage::change_ring(p.augmentation.matrix, K);
  Matrix gp = aug.transpose() * devissage::change_ring(g, K) * aug;
  Matrix phiP = R.is_field() ? gp.transpose()
                             : devissage::change_ring(p.complex.d(1), K).transpose() * gp.transpose();
  for (std::size_t i = 0; i < phiP.rows(); ++i)
    for (std::size_t j = 0; j < phiP.cols(); ++j)
      if (!R.contains(phiP(i, j)))
        throw Error(ErrorKind::IllFormedMorphism, "Gram values incompatible with the module orders");
  Matrix phi = devissage::change_ring(phiP, R) * p.section;
  return ModuleForm{m, ModuleMorphism::make(m, dual_module(m), phi), epsilon, false};
}

Scalar form_value(const ModuleForm& f, const Matrix& gram, const std::vector<Scalar>& x,
                  const std::vector<Scalar>& y) {
  Ring K = gram.ring();
  Scalar v = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (y[j] != 0) v = K.add(v, K.mul(K.mul(x[i], gram(i, j)), y[j]));
  }
  (void)f;
  return v;
}

ModuleForm orthogonal_sum(const ModuleForm& a, const ModuleForm& b) {
  require_shape(a.epsilon == b.epsilon, "orthogonal sum of forms with different symmetry");
  DirectSum s = direct_sum_data(a.module, b.module);
  ModulePresentation dv = direct_sum(dual_module(a.module), dual_module(b.module));
  Matrix j = Matrix::vstack(dual_morphism(s.in1).matrix, dual_morphism(s.in2).matrix);
  ModuleMorphism J = ModuleMorphism::make(dual_module(s.object), dv, j);
  ModuleMorphism block = ModuleMorphism::make(s.object, dv, Matrix::block_diag(a.phi.matrix, b.phi.matrix));
  return ModuleForm{s.object, compose(inverse_iso(J), block), a.epsilon, a.standard};
}

ModuleForm transport(const ModuleForm& f, const ModuleMorphism& g) {
  return ModuleForm{g.source, compose(dual_morphism(g), compose(f.phi, g)), f.epsilon, f.standard};
}

long module_length(const ModulePresentation& m) {
  const Ring& R = m.ring;
  CokernelInvariants inv = m.invariants();
  if (R.is_field()) return static_cast<long>(inv.free_rank);
  if (inv.free_rank) return -1;
  long n = 0;
  for (const auto& f : inv.factors) {
    Scalar unit;
    for (const auto& fac : R.valuation_and_unit(f, &unit)) n += static_cast<long>(fac.exponent);
  }
  return n;
}

bool validate_lagrangian(const ModuleForm& f, const ModuleLagrangian& w) {
  try {
    const ModuleMorphism& i = w.inclusion;
    if (!i.target.same_presentation(f.module)) return false;
    ModuleMorphism p = compose(dual_morphism(i), f.phi);
    if (!is_mono(i) || !is_epi(p) || !is_zero_morphism(compose(p, i))) return false;
    long lg = module_length(w.sub), lgv = module_length(dual_module(w.sub)), lm = module_length(f.module);
    return lg >= 0 && lgv >= 0 && lm >= 0 && lg + lgv == lm;
  } catch (const Error&) {
    return false;
  }
}

std::optional<ModuleLagrangian> find_lagrangian(const ModuleForm& f, std::size_t max_elements) {
  const Ring& R = f.module.ring;
  if (R.kind() == RingKind::Rational) return std::nullopt;
  Simplified s = simplify(f.module);
  const std::size_t k = s.module.g();
  std::vector<long> order(k);
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (R.is_field()) {
      order[i] = R.prime();
    } else {
      if (i >= s.module.relations.cols()) return std::nullopt;
      order[i] = s.module.relations(i, i).get_num().get_si();
    }
    total *= static_cast<std::size_t>(order[i]);
    if (total > max_elements) return std::nullopt;
  }
  long lm = module_length(f.module);
  Matrix gram = gram_matrix(f);
  Ring K = gram.ring();
  Matrix from = devissage::change_ring(s.from_min.matrix, K);
  // element index <-> coordinates in the minimal presentation
  auto coords = [&](std::size_t idx) {
    std::vector<long> c(k);
    for (std::size_t i = 0; i < k; ++i) {
      c[i] = static_cast<long>(idx % order[i]);
      idx /= order[i];
    }
    return c;
  };
  auto index = [&](const std::vector<long>& c) {
    std::size_t idx = 0;
    for (std::size_t i = k; i-- > 0;) idx = idx * order[i] + static_cast<std::size_t>(((c[i] % order[i]) + order[i]) % order[i]);
    return idx;
  };
  std::vector<std::vector<Scalar>> vec(total);
  for (std::size_t e = 0; e < total; ++e) {
    auto c = coords(e);
    std::vector<Scalar> v(f.module.g());
    for (std::size_t r = 0; r < f.module.g(); ++r) {
      Scalar acc = 0;
      for (std::size_t i = 0; i < k; ++i) acc += from(r, i) * c[i];
      v[r] = K.canonical(acc);
    }
    vec[e] = v;
  }
  auto zero_value = [&](const Scalar& v) { return R.is_field() ? v == 0 : R.contains(v); };
  auto pair = [&](std::size_t a, std::size_t b) { return zero_value(form_value(f, gram, vec[a], vec[b])); };
  auto add = [&](std::size_t a, std::size_t b) {
    auto ca = coords(a), cb = coords(b);
    for (std::size_t i = 0; i < k; ++i) ca[i] += cb[i];
    return index(ca);
  };
  auto closure = [&](std::vector<std::size_t> gens) {
    std::set<std::size_t> sub{0};
    std::vector<std::size_t> frontier{0};
    while (!frontier.empty()) {
      std::vector<std::size_t> next;
      for (auto x : frontier)
        for (auto g : gens) {
          auto y = add(x, g);
          if (sub.insert(y).second) next.push_back(y);
        }
      frontier = std::move(next);
    }
    return sub;
  };
  std::vector<std::size_t> isotropic;
  for (std::size_t e = 1; e < total; ++e)
    if (pair(e, e)) isotropic.push_back(e);
  // |G|^2 = |M| for a lagrangian of a finite module; for fields compare dimensions.
  std::size_t target = 1;
  {
    std::size_t t = 1;
    while (t * t < total) ++t;
    if (t * t != total) return std::nullopt;
    target = t;
  }
  std::vector<std::size_t> chosen;
  std::function<bool(const std::set<std::size_t>&, std::size_t)> dfs = [&](const std::set<std::size_t>& sub,
                                                                            std::size_t start) -> bool {
    if (sub.size() == target) return true;
    if (sub.size() > target) return false;
    for (std::size_t c = start; c < isotropic.size(); ++c) {
      std::size_t x = isotropic[c];
      if (sub.count(x)) continue;
      bool ok = true;
      for (auto g : chosen)
        if (!pair(x, g)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      chosen.push_back(x);
      auto next = closure(chosen);
      if (target % next.size() == 0 && dfs(next, c + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (!dfs(std::set<std::size_t>{0}, 0)) return std::nullopt;
  Matrix gens(R, f.module.g(), chosen.size());
  for (std::size_t j = 0; j < chosen.size(); ++j)
    for (std::size_t r = 0; r < f.module.g(); ++r) gens.set(r, j, R.canonical(vec[chosen[j]][r]));
  if (chosen.empty()) gens = Matrix(R, f.module.g(), 0);
  SubquotientWitness im =
      subquotient(ModuleMorphism{ModulePresentation::free(R, gens.cols()), f.module, gens}, SubquotientKind::Image);
  ModuleLagrangian w{im.object, im.map};
  (void)lm;
  if (!validate_lagrangian(f, w)) return std::nullopt;
  return w;
}

HyperbolicForm hyperbolic(const ModulePresentation& m, int epsilon) {
  const Ring& R = m.ring;
  ModulePresentation dv = dual_module(m);
  DirectSum h = direct_sum_data(m, dv);
  DoubleDual w = double_dual_iso(m);
  ModulePresentation target = direct_sum(dv, w.iso.target);
  std::size_t a = m.g(), b = dv.g(), c = w.iso.target.g();
  Matrix blk(R, b + c, a + b);
  blk.paste(0, a, Matrix::identity(R, b));
  blk.paste(b, 0, w.iso.matrix.scaled(epsilon));
  ModuleMorphism block = ModuleMorphism::make(h.object, target, blk);
  Matrix j = Matrix::vstack(dual_morphism(h.in1).matrix, dual_morphism(h.in2).matrix);
  ModuleMorphism J = ModuleMorphism::make(dual_module(h.object), target, j);
  ModuleForm f{h.object, compose(inverse_iso(J), block), epsilon, false};
  return HyperbolicForm{f, ModuleLagrangian{m, h.in1}};
}

// --------------------------------------------------------------- invariants

Scalar square_class(const Ring& field, const Scalar& x) {
  if (x == 0) return 0;
  if (field.kind() == RingKind::PrimeField) {
    long p = field.prime();
    return legendre(x.get_num(), p) == 1 ? Scalar(1) : Scalar(least_nonsquare(p));
  }
  mpz_class n = x.get_num() * x.get_den();
  int sign = n < 0 ? -1 : 1;
  n = abs(n);
  mpz_class out = 1;
  for (mpz_class q = 2; q * q <= n; ++q) {
    int e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    if (e % 2) out *= q;
  }
  out *= n;
  return Scalar(out * sign);
}

WittD0 witt_invariants_d0(const Matrix& g) {
  const Ring& K = g.ring();
  std::size_t n = g.rows();
  Scalar det = field_det(g);
  if (n * (n - 1) / 2 % 2 == 1) det = K.neg(det);
  return WittD0{static_cast<int>(n % 2), square_class(K, det)};
}

WittD0 witt_invariants_d0(const ModuleForm& f) { return witt_invariants_d0(symmetrized(minimal_gram(f))); }

FieldIsometry field_isometry_invariants(const Matrix& g) {
  return FieldIsometry{g.rows(), square_class(g.ring(), field_det(g))};
}

bool JordanBlock::operator<(const JordanBlock& o) const {
  return std::tie(prime, scale, rank, unit_class) < std::tie(o.prime, o.scale, o.rank, o.unit_class);
}

std::vector<JordanBlock> jordan_decomposition(const Matrix& gram_q, long p) {
  Ring Q = Ring::rational();
  Matrix g = devissage::change_ring(gram_q, Q);
  std::size_t n = g.rows();
  std::vector<bool> alive(n, true);
  std::map<int, std::pair<std::size_t, int>> blocks;  // scale -> (rank, unit class)
  for (std::size_t step = 0; step < n; ++step) {
    long best = 0;
    bool found = false;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i; j < n; ++j) {
        if (!alive[j] || g(i, j) == 0) continue;
        long v = p_valuation(g(i, j), p);
        // prefer diagonal entries at equal valuation
        if (!found || v < best || (v == best && i == j && bi != bj)) {
          best = v;
          bi = i;
          bj = j;
          found = true;
        }
      }
    }
    if (!found || best >= 0) break;
    if (bi != bj) {
      // e_i <- e_i + e_j makes the diagonal attain the minimal valuation (p odd)
      for (std::size_t k = 0; k < n; ++k) g.set(bi, k, g(bi, k) + g(bj, k));
      for (std::size_t k = 0; k < n; ++k) g.set(k, bi, g(k, bi) + g(k, bj));
    }
    Scalar piv = g(bi, bi);
    for (std::size_t k = 0; k < n; ++k) {
      if (!alive[k] || k == bi || g(k, bi) == 0) continue;
      Scalar f = g(k, bi) / piv;
      for (std::size_t l = 0; l < n; ++l)
        if (alive[l]) g.set(k, l, g(k, l) - f * g(bi, l));
      for (std::size_t l = 0; l < n; ++l)
        if (alive[l] && l != k) g.set(l, k, g(k, l));
    }
    for (std::size_t l = 0; l < n; ++l)
      if (l != bi) {
        g.set(bi, l, 0);
        g.set(l, bi, 0);
      }
    alive[bi] = false;
    long v = p_valuation(piv, p);
    Scalar unit = piv;
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(-v));
    unit *= pk;
    auto& blk = blocks[static_cast<int>(-v)];
    if (blk.first == 0) blk.second = 1;
    blk.first++;
    blk.second *= static_cast<int>(unit_legendre(unit, p));
  }
  std::vector<JordanBlock> out;
  for (const auto& [k, b] : blocks) out.push_back(JordanBlock{p, k, b.first, b.second});
  return out;
}

std::vector<JordanBlock> jordan_invariants(const ModuleForm& f) {
  if (f.module.ring.is_field() || f.epsilon != 1) return {};
  Matrix g = symmetrized(minimal_gram(f));
  std::vector<JordanBlock> out;
  for (long p : primes_of(f.module)) {
    auto part = jordan_decomposition(g, p);
    out.insert(out.end(), part.begin(), part.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

IsometryInvariants isometry_invariants(const ModuleForm& f) {
  IsometryInvariants inv;
  inv.module = f.module.invariants();
  if (f.module.ring.is_field()) {
    Matrix g = minimal_gram(f);
    inv.field = f.epsilon == 1 ? field_isometry_invariants(symmetrized(g)) : FieldIsometry{g.rows(), 1};
  } else {
    inv.jordan = jordan_invariants(f);
  }
  return inv;
}

bool isometric(const ModuleForm& a, const ModuleForm& b) {
  return a.epsilon == b.epsilon && isometry_invariants(a) == isometry_invariants(b);
}

bool WittClass::is_zero() const {
  for (const auto& [p, w] : parts)
    if (!(w.rank_parity == 0 && w.discriminant == 1)) return false;
  return true;
}

WittClass witt_class(const ModuleForm& f) {
  WittClass out;
  const Ring& R = f.module.ring;
  if (f.epsilon != 1) return out;
  auto keep = [&](long p, WittD0 w) {
    if (!(w.rank_parity == 0 && w.discriminant == 1)) out.parts.emplace_back(p, w);
  };
  if (R.is_field()) {
    keep(R.kind() == RingKind::PrimeField ? R.prime() : 0, witt_invariants_d0(f));
    return out;
  }
  std::map<long, std::pair<std::size_t, int>> odd;  // residue forms of odd scales
  for (const auto& b : jordan_invariants(f)) {
    if (b.scale % 2 == 0) continue;
    auto& r = odd[b.prime];
    if (r.first == 0) r.second = 1;
    r.first += b.rank;
    r.second *= b.unit_class;
  }
  for (const auto& [p, r] : odd) {
    long sign = (r.first * (r.first - 1) / 2) % 2 ? legendre(-1, p) : 1;
    long cls = sign * r.second;
    keep(p, WittD0{static_cast<int>(r.first % 2), cls == 1 ? Scalar(1) : Scalar(least_nonsquare(p))});
  }
  return out;
}

// ------------------------------------------------------------ decomposition

std::vector<LocalPart> decompose_form(const ModuleForm& f) {
  const Ring& R = f.module.ring;
  if (R.kind() != RingKind::IntegersTwoInverted)
    throw Error(ErrorKind::UnsupportedRing, "decomposition over closed points is over Z[1/2]");
  if (module_length(f.module) < 0) throw Error(ErrorKind::NotFiniteLength, "module has free rank");
  std::vector<LocalPart> out;
  for (const auto& part : primary_decompose(f.module)) {
    Ring L = Ring::local(part.prime);
    ModuleMorphism phi_g = compose(dual_morphism(part.inclusion), compose(f.phi, part.inclusion));
    ModuleForm global{part.global, phi_g, f.epsilon, f.standard};
    ModulePresentation ml = change_ring(part.global, L);
    Resolution rg = zeta_object(part.global);
    Resolution rg_local{ml, change_ring(rg.complex, L),
                        ModuleMorphism{ModulePresentation::free(L, rg.complex.rank(0)), ml,
                                       change_ring(rg.augmentation.matrix, L)},
                        change_ring(rg.section, L)};
    ChainMap c = lift_morphism(ModuleMorphism::identity(ml), zeta_object(ml), rg_local);
    ModulePresentation dual_g_local = change_ring(dual_module(part.global), L);
    ModuleMorphism cmp = ModuleMorphism::make(dual_g_local, dual_module(ml), c.at(1).transpose());
    ModuleMorphism phi_l = compose(cmp, ModuleMorphism::make(ml, dual_g_local, change_ring(phi_g.matrix, L)));
    out.push_back(LocalPart{part.prime, ModuleForm{ml, phi_l, f.epsilon, f.standard}, part.inclusion, global, cmp});
  }
  return out;
}

DecompositionCheck check_decomposition(const ModuleForm& f, const std::vector<LocalPart>& parts) {
  DecompositionCheck c;
  c.orthogonal = true;
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = 0; j < parts.size(); ++j)
      if (i != j &&
          !is_zero_morphism(compose(dual_morphism(parts[i].inclusion), compose(f.phi, parts[j].inclusion))))
        c.orthogonal = false;
  const Ring& R = f.module.ring;
  if (parts.empty()) {
    c.spans = f.module.is_zero();
  } else {
    ModulePresentation sum = parts[0].global.module;
    Matrix m = parts[0].inclusion.matrix;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      sum = direct_sum(sum, parts[i].global.module);
      m = Matrix::hstack(m, parts[i].inclusion.matrix);
    }
    c.spans = is_iso(ModuleMorphism::make(sum, f.module, m));
  }
  c.duality_commutes = true;
  for (const auto& p : parts)
    if (!is_iso(p.dual_comparison) || !is_valid_form(p.local) || !is_valid_form(p.global))
      c.duality_commutes = false;
  std::vector<JordanBlock> joined;
  for (const auto& p : parts) {
    auto j = jordan_invariants(p.local);
    joined.insert(joined.end(), j.begin(), j.end());
  }
  std::sort(joined.begin(), joined.end());
  c.invariants_match = joined == jordan_invariants(f);
  (void)R;
  return c;
}

// ------------------------------------------------------------- brute oracle

namespace {

using Gram = std::vector<std::vector<long>>;

long md(long a, long p) { return ((a % p) + p) % p; }

long inv_mod(long a, long p) {
  long r = 1, b = md(a, p), e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

long bil(const Gram& g, const std::vector<long>& x, const std::vector<long>& y, long p) {
  long s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) s = md(s + x[i] * g[i][j] % p * y[j], p);
  return s;
}

bool next_vector(std::vector<long>& v, long p) {
  for (auto& c : v) {
    if (++c < p) return true;
    c = 0;
  }
  return false;
}

// Basis of {x : B(x, u_k) = 0 for all k} by elimination mod p.
std::vector<std::vector<long>> orthogonal_complement(const Gram& g, const std::vector<std::vector<long>>& us, long p) {
  std::size_t n = g.size();
  std::vector<std::vector<long>> rows;
  for (const auto& u : us) {
    std::vector<long> r(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r[i] = md(r[i] + g[i][j] * u[j], p);
    rows.push_back(r);
  }
  std::vector<std::size_t> pivcol;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < n && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    long iv = inv_mod(rows[rank][c], p);
    for (auto& x : rows[rank]) x = x * iv % p;
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && rows[r][c]) {
        long f = rows[r][c];
        for (std::size_t k = 0; k < n; ++k) rows[r][k] = md(rows[r][k] - f * rows[rank][k], p);
      }
    pivcol.push_back(c);
    ++rank;
  }
  std::vector<std::vector<long>> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (std::find(pivcol.begin(), pivcol.end(), free) != pivcol.end()) continue;
    std::vector<long> v(n, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < rank; ++r) v[pivcol[r]] = md(-rows[r][free], p);
    basis.push_back(v);
  }
  return basis;
}

Gram restrict(const Gram& g, const std::vector<std::vector<long>>& basis, long p) {
  Gram out(basis.size(), std::vector<long>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) out[i][j] = bil(g, basis[i], basis[j], p);
  return out;
}

Gram anisotropic_kernel(Gram g, long p) {
  while (!g.empty()) {
    std::size_t n = g.size();
    std::vector<long> v(n, 0);
    bool found = false;
    while (next_vector(v, p)) {
      if (bil(g, v, v, p) == 0) {
        found = true;
        break;
      }
    }
    if (!found) return g;
    // partner w with B(v, w) = 1 exists by nondegeneracy
    std::vector<long> w(n, 0), best;
    while (next_vector(w, p))
      if (bil(g, v, w, p) != 0) {
        best = w;
        break;
      }
    if (best.empty()) throw Error(ErrorKind::NotAnIsomorphism, "degenerate form in the brute oracle");
    g = restrict(g, orthogonal_complement(g, {v, best}, p), p);
  }
  return g;
}

bool brute_isometric(const Gram& a, const Gram& b, long p) {
  if (a.size() != b.size()) return false;
  std::size_t n = a.size();
  if (n == 0) return true;
  std::vector<long> t(n * n, 0);
  while (next_vector(t, p)) {
    std::vector<std::vector<long>> cols(n, std::vector<long>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) cols[j][i] = t[i * n + j];
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j)
        if (bil(a, cols[i], cols[j], p) != md(b[i][j], p)) ok = false;
    if (ok) return true;  // T^T A T = B forces T invertible when B is nondegenerate
  }
  return false;
}

Gram diag(const std::vector<long>& d, long p) {
  Gram g(d.size(), std::vector<long>(d.size(), 0));
  for (std::size_t i = 0; i < d.size(); ++i) g[i][i] = md(d[i], p);
  return g;
}

}  // namespace

bool brute_witt_equivalent(long p, const std::vector<long>& a, const std::vector<long>& b) {
  return brute_isometric(anisotropic_kernel(diag(a, p), p), anisotropic_kernel(diag(b, p), p), p);
}

}  // namespace devissage
