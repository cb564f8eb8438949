#include "devissage/witt.hpp"

#include <algorithm>

#include "devissage/generators.hpp"
#include "devissage/linear_solver.hpp"

namespace devissage {

namespace {

Matrix solve_or(const Matrix& a, const Matrix& b, ErrorKind kind, const char* what) {
  auto x = solve_linear(a, b);
  if (!x) throw Error(kind, what);
  return *x;
}

ChainMap with_comps(const Complex& s, const Complex& t, std::map<int, Matrix> comps) {
  ChainMap f{s, t, {}};
  for (auto& [r, m] : comps)
    if (s.rank(r) && t.rank(r) && !m.is_zero()) f.comps.emplace(r, std::move(m));
  return f;
}

// Pullback D(g) phi g.
ChainMap pulled_back(const ChainMap& phi, const ChainMap& g, bool standard) {
  return compose(form_dual_map(g, standard), compose(phi, g));
}

ComplexForm as_unsigned(const ComplexForm& f) {
  return f.standard ? signed_standardize(f, Direction::ToUnsigned) : f;
}

int sign_pow(long e) { return e % 2 == 0 ? 1 : -1; }

}  // namespace

// ---------------------------------------------------------------- basics

Complex form_dual(const Complex& e, bool standard) {
  int d = e.ring().dim();
  return standard ? translate(dual_complex(e), d, true) : complex_dual(e);
}

ChainMap form_dual_map(const ChainMap& f, bool standard) {
  int d = f.source.ring().dim();
  return standard ? translate_map(dual_map(f), d, true) : complex_dual_map(f);
}

std::optional<Homotopy> find_symmetry(const ComplexForm& f) {
  return find_homotopy(form_dual_map(f.phi, f.standard), scale(f.phi, f.epsilon));
}

bool is_symmetric(const ComplexForm& f) {
  if (f.symmetry && check_homotopy(form_dual_map(f.phi, f.standard), scale(f.phi, f.epsilon), *f.symmetry))
    return true;
  return find_symmetry(f).has_value();
}

bool is_valid_form(const ComplexForm& f) {
  try {
    require_homology_in_A(f.object);
    if (f.phi.source != f.object || f.phi.target != form_dual(f.object, f.standard)) return false;
    return is_chain_map(f.phi) && is_quasi_iso(f.phi) && is_symmetric(f);
  } catch (const Error&) {
    return false;
  }
}

ComplexForm zero_complex_form(const Ring& ring, int epsilon) {
  Complex z(ring);
  return ComplexForm{z, ChainMap::zero(z, z), epsilon, false, Homotopy{}};
}

ComplexForm zeta_form(const ModuleForm& f) {
  const Ring& R = f.module.ring;
  Resolution p = zeta_object(f.module);
  if (p.complex.is_zero()) return zero_complex_form(R, f.epsilon);
  ModulePresentation dv = dual_module(f.module);
  std::size_t n = dv.g();
  Resolution q{dv, complex_dual(p.complex),
               ModuleMorphism{ModulePresentation::free(R, n), dv, Matrix::identity(R, n)}, Matrix::identity(R, n)};
  ComplexForm out{p.complex, lift_morphism(f.phi, p, q), f.epsilon, false, std::nullopt};
  out.symmetry = find_symmetry(out);
  if (f.standard) out = signed_standardize(out, Direction::ToStandard);
  return out;
}

ComplexForm transport(const ComplexForm& f, const ChainMap& g) {
  ComplexForm out{g.source, pulled_back(f.phi, g, f.standard), f.epsilon, f.standard, std::nullopt};
  if (f.symmetry) {
    // D(g) H g is a symmetry homotopy for the pullback
    Homotopy h;
    ChainMap dgm = form_dual_map(g, f.standard);
    for (int r = g.source.lo(); r <= g.source.hi(); ++r) {
      Matrix m = dgm.at(r + 1) * f.symmetry->at(f.object, form_dual(f.object, f.standard), r) * g.at(r);
      if (!m.is_zero()) h.maps.emplace(r, m);
    }
    out.symmetry = h;
  }
  return out;
}

ComplexForm orthogonal_sum(const ComplexForm& a, const ComplexForm& b) {
  require_shape(a.epsilon == b.epsilon && a.standard == b.standard, "orthogonal sum across conventions");
  SumData s = direct_sum(a.object, b.object);
  Complex ds = form_dual(s.object, a.standard);
  ChainMap sum = direct_sum_map(a.phi, b.phi);
  require_shape(sum.target == ds, "dual of a sum is the sum of duals");
  ComplexForm out{s.object, ChainMap{s.object, ds, sum.comps}, a.epsilon, a.standard, std::nullopt};
  if (a.symmetry && b.symmetry) {
    Homotopy h;
    for (int r = s.object.lo(); r <= s.object.hi(); ++r) {
      Matrix m = Matrix::block_diag(a.symmetry->at(a.object, a.phi.target, r),
                                    b.symmetry->at(b.object, b.phi.target, r));
      if (!m.is_zero()) h.maps.emplace(r, m);
    }
    out.symmetry = h;
  } else {
    out.symmetry = find_symmetry(out);
  }
  return out;
}

ComplexForm hyperbolic_complex_form(const Complex& x, int epsilon) {
  const Ring& R = x.ring();
  Complex dx = complex_dual(x);
  SumData s = direct_sum(x, dx);
  Complex ds = complex_dual(s.object);
  require_shape(ds == direct_sum(dx, x).object, "dual of X + DX");
  std::map<int, Matrix> comps;
  if (!s.object.is_zero())
    for (int r = s.object.lo(); r <= s.object.hi(); ++r) {
      std::size_t a = x.rank(r), b = dx.rank(r);
      Matrix m(R, b + a, a + b);
      m.paste(0, a, Matrix::identity(R, b));
      m.paste(b, 0, Matrix::identity(R, a).scaled(R.from_int(epsilon)));
      comps.emplace(r, m);
    }
  ComplexForm out{s.object, with_comps(s.object, ds, comps), epsilon, false, Homotopy{}};
  return out;
}

// ------------------------------------------------------------- lagrangians

ComplexLagrangian complex_lagrangian(const ComplexForm& f, const ChainMap& alpha) {
  if (alpha.target != f.object || !is_chain_map(alpha))
    throw Error(ErrorKind::NotALagrangian, "alpha is not a chain map into the form's complex");
  ComplexLagrangian w;
  w.sub = alpha.source;
  w.alpha = alpha;
  ChainMap m = compose(form_dual_map(alpha, f.standard), f.phi);  // E -> D(L)
  ChainMap restricted = compose(m, alpha);
  auto h = find_homotopy(restricted, ChainMap::zero(restricted.source, restricted.target));
  if (!h) throw Error(ErrorKind::NotALagrangian, "the form does not vanish on L up to homotopy");
  w.null_homotopy = *h;
  w.cone = cone(alpha);
  const Complex& v = w.cone.object;
  const Complex& dl = m.target;
  std::map<int, Matrix> s;
  if (!v.is_zero())
    for (int r = v.lo(); r <= v.hi(); ++r) {
      if (!dl.rank(r)) continue;
      s.emplace(r, Matrix::hstack(m.at(r), h->at(w.sub, dl, r - 1)));
    }
  w.s = with_comps(v, dl, s);
  if (!is_chain_map(w.s) || !is_quasi_iso(w.s))
    throw Error(ErrorKind::NotALagrangian, "the cone of alpha is not equivalent to D(L)");
  ChainMap s_inv = homotopy_inverse(w.s);
  w.w = compose(w.cone.projection, s_inv);  // D(L) -> T_s L
  ChainMap dw = form_dual_map(w.w, f.standard);
  ChainMap tw = translate_map(w.w, -1, true);
  if (dw.source != tw.source || dw.target != tw.target)
    throw Error(ErrorKind::NotALagrangian, "triangle duality has mismatched ends");
  for (int sign : {1, -1}) {
    auto hw = find_homotopy(dw, scale(tw, sign));
    if (hw) {
      w.sign = sign;
      w.w_symmetry = *hw;
      return w;
    }
  }
  throw Error(ErrorKind::NotALagrangian, "D(w) is not homotopic to the translate of w");
}

bool validate_complex_lagrangian(const ComplexForm& f, const ComplexLagrangian& w) {
  try {
    if (w.alpha.target != f.object || w.alpha.source != w.sub || !is_chain_map(w.alpha)) return false;
    ChainMap m = compose(form_dual_map(w.alpha, f.standard), f.phi);
    ChainMap restricted = compose(m, w.alpha);
    if (!check_homotopy(restricted, ChainMap::zero(restricted.source, restricted.target), w.null_homotopy))
      return false;
    Cone c = cone(w.alpha);
    if (c.object != w.cone.object || w.s.source != c.object || w.s.target != m.target) return false;
    if (!is_chain_map(w.s) || !is_quasi_iso(w.s)) return false;
    // s restricted to E is D(alpha) phi
    if (!chain_maps_equal(compose(w.s, c.inclusion), m)) return false;
    if (w.sign != 1 && w.sign != -1) return false;
    return check_homotopy(form_dual_map(w.w, f.standard), scale(translate_map(w.w, -1, true), w.sign),
                          w.w_symmetry) &&
           is_chain_map(w.w);
  } catch (const Error&) {
    return false;
  }
}

ComplexLagrangian build_lagrangian_lift(const ModuleForm& f, const ModuleLagrangian& w) {
  if (!validate_lagrangian(f, w)) throw Error(ErrorKind::NotALagrangian, "module sequence is not exact");
  ComplexForm zf = zeta_form(f);
  if (zf.object.is_zero()) {
    ComplexLagrangian t;
    t.sub = zf.object;
    t.alpha = ChainMap::zero(zf.object, zf.object);
    t.cone = cone(t.alpha);
    t.s = ChainMap::zero(t.cone.object, zf.object);
    t.w = ChainMap::zero(zf.object, translate(zf.object, 1, true));
    t.sign = 1;
    return t;
  }
  ChainMap alpha = lift_morphism(w.inclusion, zeta_object(w.sub), zeta_object(f.module));
  return complex_lagrangian(zf, alpha);
}

// -------------------------------------------------------------- truncation

HomologyWindow homology_window(const Complex& e) {
  HomologyWindow w;
  if (e.is_zero()) return w;
  for (int r = e.lo(); r <= e.hi(); ++r)
    if (!homology(e, r).invariants.is_zero()) {
      w.n = w.exact ? std::abs(r) : std::max(w.n, std::abs(r));
      w.exact = false;
    }
  return w;
}

namespace {

// E' with E'_m = Z_m and nothing below; inclusion E' -> E.
ChainMap cut_below(const Complex& e, int m) {
  const Ring& R = e.ring();
  Matrix kz = kernel_basis(e.d(m));
  std::vector<std::size_t> ranks;
  std::map<int, Matrix> d;
  for (int r = m; r <= e.hi(); ++r) ranks.push_back(r == m ? kz.cols() : e.rank(r));
  for (int r = m + 1; r <= e.hi(); ++r)
    d.emplace(r, r == m + 1 ? solve_or(kz, e.d(r), ErrorKind::NotAComplex, "boundaries outside the cycles") : e.d(r));
  Complex cut = Complex::make(R, m, ranks, d);
  std::map<int, Matrix> comps;
  for (int r = m; r <= e.hi(); ++r) comps.emplace(r, r == m ? kz : Matrix::identity(R, e.rank(r)));
  return with_comps(cut, e, comps);
}

// E' with E'_t = (E_t / B_t), presented as K^* for K = ker(d_{t+1}^T), and
// nothing above; the chain section E' -> E.
ChainMap cut_above(const Complex& e, int t) {
  const Ring& R = e.ring();
  Matrix k = kernel_basis(e.d(t + 1).transpose());
  Matrix s = solve_or(k.transpose(), Matrix::identity(R, k.cols()), ErrorKind::NotAComplex,
                      "cokernel of the top differential is not free");
  std::vector<std::size_t> ranks;
  std::map<int, Matrix> d;
  for (int r = e.lo(); r <= t; ++r) ranks.push_back(r == t ? k.cols() : e.rank(r));
  for (int r = e.lo() + 1; r <= t; ++r) d.emplace(r, r == t ? e.d(t) * s : e.d(r));
  Complex cut = Complex::make(R, e.lo(), ranks, d);
  std::map<int, Matrix> comps;
  for (int r = e.lo(); r <= t; ++r) comps.emplace(r, r == t ? s : Matrix::identity(R, e.rank(r)));
  return with_comps(cut, e, comps);
}

}  // namespace

IsometryRecord truncate_form(const ComplexForm& f) {
  const Complex& e = f.object;
  IsometryRecord rec{f, f, ChainMap::identity(e)};
  HomologyWindow w = homology_window(e);
  if (w.exact) {
    rec.after = zero_complex_form(e.ring(), f.epsilon);
    rec.after.standard = f.standard;
    rec.isometry = ChainMap::zero(rec.after.object, e);
    return rec;
  }
  const int d = e.ring().dim();
  ChainMap g = ChainMap::identity(e);
  if (e.lo() < -w.n) g = cut_below(e, -w.n);
  if (g.source.hi() > w.n + d) g = compose(g, cut_above(g.source, w.n + d));
  if (g.source == e) return rec;
  rec.isometry = g;
  rec.after = transport(f, g);
  return rec;
}

IsometryRecord minimize_form(const ComplexForm& f) {
  MinimalModel mm = minimize(f.object);
  IsometryRecord rec{f, f, ChainMap::identity(f.object)};
  if (mm.object == f.object) return rec;
  rec.isometry = mm.incl;
  rec.after = transport(f, mm.incl);
  return rec;
}

bool validate_isometry(const IsometryRecord& r) {
  try {
    const ChainMap& g = r.isometry;
    if (g.source != r.after.object || g.target != r.before.object) return false;
    if (!is_chain_map(g) || !is_quasi_iso(g)) return false;
    if (r.after.epsilon != r.before.epsilon || r.after.standard != r.before.standard) return false;
    return chain_maps_equal(r.after.phi, pulled_back(r.before.phi, g, r.before.standard));
  } catch (const Error&) {
    return false;
  }
}

// ------------------------------------------------------- sublagrangian step

SublagrangianCandidate sublagrangian_candidate(const ComplexForm& f) {
  HomologyWindow w = homology_window(f.object);
  if (w.exact || w.n == 0) throw Error(ErrorKind::WindowAlreadyMinimal, "homology is concentrated in degree 0");
  return sublagrangian_candidate(f, w.n);
}

SublagrangianCandidate sublagrangian_candidate(const ComplexForm& f, int n) {
  const Complex& e = f.object;
  const Ring& R = e.ring();
  SublagrangianCandidate c;
  c.n = n;
  HomologyData h = homology(e, n);
  c.homology = h.module;
  if (h.invariants.is_zero()) {
    c.sub = Complex(R);
    c.nu = ChainMap::zero(c.sub, e);
    return c;
  }
  Resolution p = zeta_object(h.module);
  c.sub = translate(p.complex, n, false);
  std::map<int, Matrix> comps;
  Matrix top = h.cycles * p.augmentation.matrix;
  comps.emplace(n, top);
  for (int k = 1; k <= p.complex.hi(); ++k) {
    // d nu_{n+k} = nu_{n+k-1} d
    Matrix rhs = top * p.complex.d(k);
    top = solve_or(e.d(n + k), rhs, ErrorKind::ReductionStepFailed, "resolution of H_n does not lift");
    comps.emplace(n + k, top);
  }
  c.nu = ChainMap::make(c.sub, e, comps);
  ChainMap restricted = pulled_back(f.phi, c.nu, f.standard);
  auto null = find_homotopy(restricted, ChainMap::zero(restricted.source, restricted.target));
  if (!null) throw ReductionStepFailed(n, 0, 0, 0, "D(nu) phi nu is not null-homotopic");
  c.null_homotopy = *null;
  return c;
}

namespace {

struct PsiSolution {
  ChainMap psi;
  Homotopy symmetry, isometry;
};

// psi : R -> D(R) with (a) D(psi) - eps psi = dH + Hd and
// (b) D(q) psi q - D(pi) phi pi = dH2 + H2 d, all unknowns in one system.
std::optional<PsiSolution> solve_psi(const Complex& rc, const ChainMap& q, const ChainMap& target, int epsilon,
                                     std::size_t* unknowns, std::size_t* equations) {
  const Ring& R = rc.ring();
  const int d = R.dim();
  Complex drc = complex_dual(rc);
  const Complex& pc = q.source;
  Complex dpc = complex_dual(pc);
  LinearSystem sys(R);
  std::map<int, std::size_t> psi, h, h2;
  int lo = std::min({rc.lo(), drc.lo(), pc.lo()}) - 1, hi = std::max({rc.hi(), drc.hi(), pc.hi()}) + 1;
  for (int r = lo; r <= hi; ++r) {
    if (rc.rank(r) && drc.rank(r)) psi[r] = sys.add_unknown(drc.rank(r), rc.rank(r));
    if (rc.rank(r) && drc.rank(r + 1)) h[r] = sys.add_unknown(drc.rank(r + 1), rc.rank(r));
    if (pc.rank(r) && dpc.rank(r + 1)) h2[r] = sys.add_unknown(dpc.rank(r + 1), pc.rank(r));
  }
  using T = LinearSystem;
  Scalar minus = R.from_int(-1);
  for (int r = lo; r <= hi + 1; ++r) {
    // chain condition
    if (drc.rank(r - 1) && rc.rank(r)) {
      std::vector<T::Term> t;
      if (psi.count(r)) t.push_back(T::term(drc.d(r), psi[r], std::nullopt));
      if (psi.count(r - 1)) t.push_back(T::term(std::nullopt, psi[r - 1], rc.d(r), minus));
      if (!t.empty()) sys.add_equation(t, Matrix::zero(R, drc.rank(r - 1), rc.rank(r)));
    }
    // (a)
    if (drc.rank(r) && rc.rank(r)) {
      std::vector<T::Term> t;
      if (psi.count(d - r)) t.push_back(T::transposed_term(std::nullopt, psi[d - r], std::nullopt));
      if (psi.count(r)) t.push_back(T::term(std::nullopt, psi[r], std::nullopt, R.from_int(-epsilon)));
      if (h.count(r)) t.push_back(T::term(drc.d(r + 1), h[r], std::nullopt, minus));
      if (h.count(r - 1)) t.push_back(T::term(std::nullopt, h[r - 1], rc.d(r), minus));
      if (!t.empty()) sys.add_equation(t, Matrix::zero(R, drc.rank(r), rc.rank(r)));
    }
    // (b)
    if (dpc.rank(r) && pc.rank(r)) {
      std::vector<T::Term> t;
      if (psi.count(r)) t.push_back(T::term(q.at(d - r).transpose(), psi[r], q.at(r)));
      if (h2.count(r)) t.push_back(T::term(dpc.d(r + 1), h2[r], std::nullopt, minus));
      if (h2.count(r - 1)) t.push_back(T::term(std::nullopt, h2[r - 1], pc.d(r), minus));
      Matrix rhs = target.at(r);
      if (!t.empty())
        sys.add_equation(t, rhs);
      else if (!rhs.is_zero())
        return std::nullopt;
    }
  }
  *unknowns = sys.variable_count();
  *equations = sys.equation_count();
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  PsiSolution out{ChainMap{rc, drc, {}}, {}, {}};
  for (const auto& [r, k] : psi)
    if (!(*sol)[k].is_zero()) out.psi.comps.emplace(r, (*sol)[k]);
  for (const auto& [r, k] : h)
    if (!(*sol)[k].is_zero()) out.symmetry.maps.emplace(r, (*sol)[k]);
  for (const auto& [r, k] : h2)
    if (!(*sol)[k].is_zero()) out.isometry.maps.emplace(r, (*sol)[k]);
  return out;
}

}  // namespace

ReductionStep reduce_once(const ComplexForm& input, int max_attempts) {
  if (input.standard) throw Error(ErrorKind::ReductionStepFailed, "reduction runs in the unsigned convention");
  const ComplexForm& f = input;
  const Ring& R = f.object.ring();
  ReductionStep step;
  step.candidate = sublagrangian_candidate(f);
  const SublagrangianCandidate& c = step.candidate;
  ChainMap mu = compose(complex_dual_map(c.nu), f.phi);  // E -> D(L)
  Cone cm = cone(mu);
  step.fiber = translate(cm.object, -1, true);
  step.pi = translate_map(cm.projection, -1, true);
  require_shape(step.pi.target == f.object, "fiber projection lands in E");
  const Complex& l = c.sub;
  const Complex& dl = mu.target;
  ChainMap target = pulled_back(f.phi, step.pi, false);
  std::size_t unknowns = 0, equations = 0;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    // mu0 = (c, nu) with d c + c d = -D(nu) phi nu; perturbed by d k - k d on retries
    std::map<int, Matrix> comps;
    Rng rng(static_cast<std::uint64_t>(attempt) * 7919u + 17u);
    std::map<int, Matrix> k;
    if (attempt > 0)
      for (int r = l.lo(); r <= l.hi(); ++r)
        if (dl.rank(r + 2)) k.emplace(r, random_matrix(R, dl.rank(r + 2), l.rank(r), rng, 2));
    auto kat = [&](int r) {
      auto it = k.find(r);
      return it == k.end() ? Matrix::zero(R, dl.rank(r + 2), l.rank(r)) : it->second;
    };
    for (int r = l.lo(); r <= l.hi(); ++r) {
      Matrix cr = c.null_homotopy.at(l, dl, r).scaled(R.from_int(-1));
      if (attempt > 0) cr = cr + dl.d(r + 2) * kat(r) - kat(r - 1) * l.d(r);
      comps.emplace(r, Matrix::vstack(cr, c.nu.at(r)));
    }
    step.mu0 = ChainMap::make(l, step.fiber, comps);
    step.quotient = cone(step.mu0);
    auto sol = solve_psi(step.quotient.object, step.quotient.inclusion, target, f.epsilon, &unknowns, &equations);
    step.attempts = attempt + 1;
    if (!sol || !is_quasi_iso(sol->psi)) continue;
    step.result = ComplexForm{step.quotient.object, sol->psi, f.epsilon, false, sol->symmetry};
    step.isometry_homotopy = sol->isometry;
    return step;
  }
  throw ReductionStepFailed(c.n, step.attempts, unknowns, equations,
                            "no quasi-isomorphic symmetric psi on the reduced cone at n = " + std::to_string(c.n));
}

bool validate_step(const ComplexForm& f, const ReductionStep& s) {
  try {
    const SublagrangianCandidate& c = s.candidate;
    if (c.nu.target != f.object || !is_chain_map(c.nu)) return false;
    ChainMap restricted = pulled_back(f.phi, c.nu, false);
    if (!check_homotopy(restricted, ChainMap::zero(restricted.source, restricted.target), c.null_homotopy))
      return false;
    if (!is_chain_map(s.mu0) || !is_chain_map(s.pi)) return false;
    if (!chain_maps_equal(compose(s.pi, s.mu0), c.nu)) return false;
    const ComplexForm& g = s.result;
    if (g.object != s.quotient.object || g.phi.target != complex_dual(g.object)) return false;
    if (!is_chain_map(g.phi) || !is_quasi_iso(g.phi)) return false;
    if (!g.symmetry || !check_homotopy(complex_dual_map(g.phi), scale(g.phi, g.epsilon), *g.symmetry)) return false;
    const ChainMap& q = s.quotient.inclusion;
    if (!check_homotopy(pulled_back(g.phi, q, false), pulled_back(f.phi, s.pi, false), s.isometry_homotopy))
      return false;
    HomologyWindow w = homology_window(g.object);
    return w.exact || w.n < c.n;
  } catch (const Error&) {
    return false;
  }
}

// ---------------------------------------------------------------- reduction

ModuleForm extract_module_form(const ComplexForm& input) {
  ComplexForm f = as_unsigned(input);
  const Complex& e = f.object;
  const Ring& R = e.ring();
  const int d = R.dim();
  if (e.is_zero()) {
    ModulePresentation z = ModulePresentation::zero(R);
    return ModuleForm{z, ModuleMorphism::zero(z, dual_module(z)), f.epsilon, false};
  }
  HomologyWindow w = homology_window(e);
  if (e.lo() < 0 || e.hi() > d || (!w.exact && w.n != 0))
    throw Error(ErrorKind::WindowAlreadyMinimal, "form is not supported on [0, d] with homology in degree 0");
  HomologyData h = homology(e, 0);
  const ModulePresentation& m = h.module;
  std::size_t g0 = e.rank(0);
  Matrix aug = solve_or(h.cycles, Matrix::identity(R, g0), ErrorKind::NotAComplex, "cycles do not span");
  Resolution res{m, e, ModuleMorphism{ModulePresentation::free(R, g0), m, aug}, h.cycles};
  Resolution p = zeta_object(m);
  ChainMap c = lift_morphism(ModuleMorphism::identity(m), p, res);
  ChainMap dc = complex_dual_map(c);
  ModuleMorphism on_h = homology_map(f.phi, 0);
  ModuleMorphism to_dual = homology_map(dc, 0);
  HomologyData hp = homology(dc.target, 0);
  Matrix phi0 = hp.cycles * to_dual.matrix * on_h.matrix;
  ModuleForm out{m, ModuleMorphism::make(m, dual_module(m), phi0), f.epsilon, false};
  if (input.standard) out = signed_standardize(out, Direction::ToStandard);
  return out;
}

Reduction reduce_support(const ComplexForm& input) {
  Reduction out;
  out.input = input;
  ComplexForm cur = as_unsigned(input);
  for (int guard = 0; guard < 64; ++guard) {
    IsometryRecord t = truncate_form(cur);
    if (t.after.object != cur.object) {
      out.ledger.push_back(LedgerEntry{LedgerEntry::Kind::Truncate, t, std::nullopt});
      cur = t.after;
    }
    IsometryRecord mm = minimize_form(cur);
    if (mm.after.object != cur.object) {
      out.ledger.push_back(LedgerEntry{LedgerEntry::Kind::Minimize, mm, std::nullopt});
      cur = mm.after;
    }
    HomologyWindow w = homology_window(cur.object);
    if (w.exact || w.n == 0) break;
    ReductionStep s = reduce_once(cur);
    out.ledger.push_back(LedgerEntry{LedgerEntry::Kind::Sublagrangian, std::nullopt, s});
    cur = s.result;
  }
  out.reduced = cur;
  out.extracted = extract_module_form(cur);
  if (input.standard) out.extracted = signed_standardize(out.extracted, Direction::ToStandard);
  return out;
}

bool validate_reduction(const Reduction& r) {
  try {
    ComplexForm cur = as_unsigned(r.input);
    for (const auto& e : r.ledger) {
      if (e.kind == LedgerEntry::Kind::Sublagrangian) {
        if (!e.step || !validate_step(cur, *e.step)) return false;
        cur = e.step->result;
      } else {
        if (!e.isometry || !validate_isometry(*e.isometry)) return false;
        if (e.isometry->before.object != cur.object || !chain_maps_equal(e.isometry->before.phi, cur.phi))
          return false;
        cur = e.isometry->after;
      }
    }
    if (cur.object != r.reduced.object || !chain_maps_equal(cur.phi, r.reduced.phi)) return false;
    ModuleForm again = extract_module_form(cur);
    if (r.input.standard) again = signed_standardize(again, Direction::ToStandard);
    return again.module.same_presentation(r.extracted.module) && again.phi.matrix == r.extracted.phi.matrix &&
           is_valid_form(signed_standardize(r.extracted, Direction::ToUnsigned));
  } catch (const Error&) {
    return false;
  }
}

// ------------------------------------------------------------- conventions

int standard_sign(int d) { return sign_pow(static_cast<long>(d) * (d - 1) / 2); }

int standardized_epsilon(int epsilon, int d) { return epsilon * standard_sign(d); }

ModuleForm signed_standardize(const ModuleForm& f, Direction dir) {
  bool to_std = dir == Direction::ToStandard;
  if (f.standard == to_std) return f;
  ModuleForm out = f;
  out.epsilon = standardized_epsilon(f.epsilon, f.module.ring.dim());
  out.standard = to_std;
  return out;
}

ComplexForm signed_standardize(const ComplexForm& f, Direction dir) {
  bool to_std = dir == Direction::ToStandard;
  if (f.standard == to_std) return f;
  const int d = f.object.ring().dim();
  const Ring& R = f.object.ring();
  auto chi = [&](int r) { return R.from_int(sign_pow(static_cast<long>(d) * r)); };
  ComplexForm out;
  out.object = f.object;
  out.epsilon = f.epsilon * sign_pow(d);
  out.standard = to_std;
  Complex target = form_dual(f.object, to_std);
  out.phi = ChainMap{f.object, target, {}};
  for (const auto& [r, m] : f.phi.comps) out.phi.comps.emplace(r, m.scaled(chi(r)));
  if (f.symmetry) {
    Homotopy h;
    for (const auto& [r, m] : f.symmetry->maps) h.maps.emplace(r, m.scaled(chi(r)));
    out.symmetry = h;
  }
  return out;
}

}  // namespace devissage
