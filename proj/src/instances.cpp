#include "devissage/instances.hpp"

#include <algorithm>

#include "devissage/error.hpp"

namespace devissage {

namespace {

// Symmetric (eps = 1) or alternating (eps = -1) Gram matrix with values g_ij / gcd(f_i, f_j).
Matrix draw_gram(const Ring& R, const std::vector<Scalar>& orders, Rng& rng, int epsilon) {
  Ring K = R.is_field() ? R : Ring::rational();
  std::size_t n = orders.size();
  Matrix g(K, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (epsilon == 1) {
      Scalar u = random_unit(R, rng);
      if (rng.chance(1, 4)) u = R.mul(u, R.from_int(rng.range(-3, 3)));
      g.set(i, i, K.canonical(u / orders[i]));
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.chance(1, 2)) continue;
      Scalar c = R.from_int(rng.range(-3, 3));
      Scalar v = K.canonical(c / R.gcd(orders[i], orders[j]));
      g.set(i, j, v);
      g.set(j, i, epsilon == 1 ? v : K.neg(v));
    }
  }
  return g;
}

}  // namespace

ModuleForm random_form_on(const ModulePresentation& m, Rng& rng, int epsilon) {
  const Ring& R = m.ring;
  Simplified s = simplify(m);
  std::vector<Scalar> orders;
  for (std::size_t i = 0; i < s.module.g(); ++i)
    orders.push_back(i < s.module.relations.cols() ? s.module.relations(i, i) : R.from_int(1));
  for (int attempt = 0; attempt < 64; ++attempt) {
    ModuleForm f = form_from_gram(s.module, draw_gram(R, orders, rng, epsilon), epsilon);
    if (!is_nondegenerate(f)) continue;
    return transport(f, s.to_min);
  }
  throw Error(ErrorKind::NotAnIsomorphism, "no nondegenerate form found on the module");
}

ModuleForm random_module_form(const Ring& ring, Rng& rng, const SizeCaps& caps, int epsilon) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    ModulePresentation m = random_module(ring, rng, caps, true);
    try {
      return random_form_on(m, rng, epsilon);
    } catch (const Error&) {
      // odd rank alternating forms do not exist; draw another module
    }
  }
  return form_from_gram(ModulePresentation::zero(ring), Matrix(ring.is_field() ? ring : Ring::rational(), 0, 0),
                        epsilon);
}

HyperbolicForm random_hyperbolic_form(const Ring& ring, Rng& rng, const SizeCaps& caps, int epsilon) {
  SizeCaps c = caps;
  c.max_rank = std::max<std::size_t>(1, caps.max_rank / 2);
  return hyperbolic(random_module(ring, rng, c, true), epsilon);
}

}  // namespace devissage

namespace devissage {

Conjugation random_conjugation(const Complex& e, Rng& rng) {
  const Ring& R = e.ring();
  if (e.is_zero()) return {ChainMap::identity(e), ChainMap::identity(e)};
  std::map<int, Matrix> u, uinv, d;
  for (int r = e.lo(); r <= e.hi(); ++r) {
    u[r] = random_unimodular(R, e.rank(r), rng, 1);
    uinv[r] = inverse_unimodular(u[r]);
  }
  for (int r = e.lo() + 1; r <= e.hi(); ++r) d.emplace(r, uinv[r - 1] * e.d(r) * u[r]);
  Complex c = Complex::make(R, e.lo(), e.ranks(), d);
  return {ChainMap::make(c, e, u), ChainMap::make(e, c, uinv)};
}

namespace {

// Sum of elementary contractible pieces [A -u-> A] in degrees (r, r - 1), r in [lo + 1, hi].
Complex contractible_tail(const Ring& R, Rng& rng, int lo, int hi, std::size_t pieces) {
  std::map<int, std::size_t> rank;
  std::map<int, std::vector<std::pair<std::size_t, std::size_t>>> at;
  std::map<int, std::vector<Scalar>> val;
  for (std::size_t k = 0; k < pieces; ++k) {
    int r = static_cast<int>(rng.range(lo + 1, hi));
    at[r].push_back({rank[r - 1], rank[r]});
    val[r].push_back(random_unit(R, rng));
    rank[r - 1]++;
    rank[r]++;
  }
  std::vector<std::size_t> ranks;
  for (int r = lo; r <= hi; ++r) ranks.push_back(rank[r]);
  std::map<int, Matrix> d;
  for (int r = lo + 1; r <= hi; ++r) {
    Matrix m(R, rank[r - 1], rank[r]);
    for (std::size_t i = 0; i < at[r].size(); ++i) m.set(at[r][i].first, at[r][i].second, val[r][i]);
    d.emplace(r, m);
  }
  return Complex::make(R, lo, ranks, d);
}

}  // namespace

GeneratedComplexForm random_complex_form(const Ring& ring, Rng& rng, const SizeCaps& caps, int epsilon) {
  const int d = ring.dim();
  SizeCaps c = caps;
  c.max_rank = std::max<std::size_t>(1, std::min<std::size_t>(caps.max_rank, 3));
  GeneratedComplexForm out;
  out.seed = random_module_form(ring, rng, c, epsilon);
  ComplexForm f = zeta_form(out.seed);
  // support of the whole instance stays inside [-(d + 1), d + 2]: width 2d + 4
  int lo = -(d + 1), hi = d + 2;
  std::size_t width = std::max<std::size_t>(caps.max_width, 1);
  int max_shift = std::min<int>(2, static_cast<int>((std::min<std::size_t>(width, 2 * d + 4) - d - 1) / 2));
  SizeCaps hc = c;
  hc.max_rank = 2;
  for (int n = 1; n <= max_shift; ++n) {
    if (!rng.chance(1, 2)) continue;
    ModulePresentation nm = random_module(ring, rng, hc, true);
    if (nm.is_zero()) continue;
    Complex x = translate(zeta_object(nm).complex, n, false);
    f = orthogonal_sum(f, hyperbolic_complex_form(x, epsilon));
    out.hyperbolic_shifts.push_back(n);
  }
  out.padding = rng.below(3);
  if (out.padding > 0 && static_cast<std::size_t>(hi - lo + 1) <= width) {
    Complex tail = contractible_tail(ring, rng, lo, hi, out.padding);
    SumData s = direct_sum(f.object, tail);
    f = transport(f, s.pr1);
  } else {
    out.padding = 0;
  }
  Conjugation g = random_conjugation(f.object, rng);
  out.form = transport(f, g.to);
  return out;
}

NeutralComplexForm random_neutral_complex_form(const Ring& ring, Rng& rng, const SizeCaps& caps, int epsilon) {
  SizeCaps c = caps;
  c.max_rank = std::max<std::size_t>(1, std::min<std::size_t>(caps.max_rank, 3));
  int lo = static_cast<int>(rng.range(-1, 1));
  std::size_t max_width = std::clamp<std::size_t>(caps.max_width, 2, 3);
  Complex x;
  for (int tries = 0; tries < 16 && x.is_zero(); ++tries)
    x = random_complex(ring, rng, c, lo, 2 + rng.below(max_width - 1), true);
  ComplexForm h = hyperbolic_complex_form(x, epsilon);
  SumData s = direct_sum(x, complex_dual(x));
  Conjugation g = random_conjugation(h.object, rng);
  ComplexForm f = transport(h, g.to);
  ChainMap alpha = compose(g.from, ChainMap{x, h.object, s.in1.comps});
  return NeutralComplexForm{f, complex_lagrangian(f, alpha)};
}

}  // namespace devissage
