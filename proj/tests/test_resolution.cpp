#include <gtest/gtest.h>

#include <thread>

#include "devissage/error.hpp"
#include "devissage/generators.hpp"
#include "devissage/resolution.hpp"

using namespace devissage;

namespace {

const int kIterations = 40;
const Ring ZH = Ring::z_half();

std::vector<Ring> rings() { return {Ring::z_half(), Ring::local(3), Ring::prime_field(5), Ring::rational()}; }

ModulePresentation cyc(const Ring& r, std::vector<long> f) {
  std::vector<Scalar> s;
  for (long v : f) s.push_back(r.from_int(v));
  return ModulePresentation::cyclic_sum(r, s);
}

SizeCaps small() {
  SizeCaps c;
  c.max_rank = 3;
  c.max_entry = 30;
  return c;
}

// A second lift of g obtained from a different section of the target augmentation.
ChainMap alternative_lift(const ModuleMorphism& g, const Resolution& p, const Resolution& q, Rng& rng) {
  Resolution q2 = q;
  if (q.complex.rank(1) > 0) {
    Matrix shift = random_matrix(q.module.ring, q.complex.rank(1), q.section.cols(), rng, 5);
    q2.section = q.section + q.complex.d(1) * shift;
  }
  return lift_morphism(g, p, q2);
}

}  // namespace

TEST(ResolveModule, Examples) {
  Resolution r = resolve_module(cyc(ZH, {3}));
  EXPECT_EQ(r.complex, Complex::make(ZH, 0, {1, 1}, {{1, Matrix::from_ints(ZH, {{3}})}}));
  Resolution f = resolve_module(ModulePresentation::free(ZH, 1));
  EXPECT_EQ(f.complex, Complex::concentrated(ZH, 0, 1));
  // A/3 + A: ranks (2, 1), the differential kills one generator with 3
  ModulePresentation m = ModulePresentation::make(ZH, 2, Matrix::from_ints(ZH, {{3}, {0}}));
  Resolution s = resolve_module(m);
  EXPECT_EQ(s.complex.rank(0), 2u);
  EXPECT_EQ(s.complex.rank(1), 1u);
  EXPECT_EQ(cokernel_invariants(s.complex.d(1)), m.invariants());
  EXPECT_TRUE(is_resolution(s));
}

TEST(ResolveModule, RandomModulesBothConstructions) {
  Rng rng(21);
  for (const Ring& R : rings()) {
    for (int it = 0; it < kIterations; ++it) {
      ModulePresentation m = random_module(R, rng, small(), false);
      Resolution a = resolve_module(m), b = resolve_presentation(m);
      EXPECT_TRUE(is_resolution(a));
      EXPECT_TRUE(is_resolution(b));
      int len = a.complex.is_zero() ? 0 : a.complex.hi();
      EXPECT_LE(len, R.is_field() ? 0 : 1);
      // minimal: no unit entries in the differential
      Matrix d = a.complex.d(1);
      for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j) EXPECT_FALSE(R.is_unit(d(i, j)));
    }
  }
}

TEST(ResolveQuasi, Examples) {
  ModuleComplex single = ModuleComplex::make(ZH, 0, {cyc(ZH, {3})}, {});
  QuasiResolution q = resolve_quasi(single);
  EXPECT_EQ(q.complex, resolve_module(cyc(ZH, {3})).complex);
  Complex c = Complex::make(ZH, 0, {1, 2}, {{1, Matrix::from_ints(ZH, {{3, 9}})}});
  ModuleComplex freec = ModuleComplex::from_free(c);
  QuasiResolution qf = resolve_quasi(freec);
  EXPECT_EQ(qf.complex, c);
  for (const auto& [r, m] : qf.map.comps) EXPECT_EQ(m.matrix, Matrix::identity(ZH, c.rank(r)));
  ModuleComplex exact = ModuleComplex::make(
      ZH, 0, {cyc(ZH, {3}), cyc(ZH, {9})}, {{1, ModuleMorphism::make(cyc(ZH, {9}), cyc(ZH, {3}), Matrix::from_ints(ZH, {{1}}))}});
  // not exact: kernel 3A/9A survives in degree 1
  QuasiResolution qe = resolve_quasi(exact);
  EXPECT_TRUE(homology(qe.complex, 0).invariants.is_zero());
  EXPECT_EQ(homology(qe.complex, 1).invariants, cyc(ZH, {3}).invariants());
}

TEST(ResolveQuasi, HomologyIsomorphismInEveryDegree) {
  Rng rng(22);
  for (const Ring& R : rings()) {
    for (int it = 0; it < kIterations / 2; ++it) {
      ModuleComplex g = random_module_complex(R, rng, small(), -1, 1 + rng.below(3), false);
      QuasiResolution q = resolve_quasi(g);
      for (const auto& [r, m] : q.map.comps) EXPECT_TRUE(is_epi(m));
      for (int r = g.lo - 1; r <= g.hi() + 1; ++r) EXPECT_TRUE(is_iso(module_homology_map(q.map, r))) << r;
    }
  }
}

TEST(LiftMorphism, Examples) {
  ModulePresentation m = cyc(ZH, {3});
  Resolution p = resolve_module(m);
  ChainMap id = lift_morphism(ModuleMorphism::identity(m), p, p);
  EXPECT_TRUE(chain_maps_equal(id, ChainMap::identity(p.complex)));
  ChainMap z = lift_morphism(ModuleMorphism::zero(m, m), p, p);
  EXPECT_TRUE(homotopic(z, ChainMap::zero(p.complex, p.complex)));
  ChainMap two = lift_morphism(ModuleMorphism::make(m, m, Matrix::from_ints(ZH, {{2}})), p, p);
  EXPECT_EQ(two.at(0), Matrix::from_ints(ZH, {{2}}));
  EXPECT_EQ(two.at(1), Matrix::from_ints(ZH, {{2}}));
}

TEST(LiftMorphism, AugmentationCompatibleAndUnique) {
  Rng rng(23);
  for (const Ring& R : rings()) {
    for (int it = 0; it < kIterations; ++it) {
      ModulePresentation a = random_module(R, rng, small(), false), b = random_module(R, rng, small(), false);
      ModuleMorphism g = random_morphism(a, b, rng);
      Resolution p = resolve_module(a), q = rng.chance(1, 2) ? resolve_module(b) : resolve_presentation(b);
      ChainMap f = lift_morphism(g, p, q);
      EXPECT_TRUE(is_chain_map(f));
      EXPECT_TRUE(lifts(f, g, p, q));
      ChainMap f2 = alternative_lift(g, p, q, rng);
      EXPECT_TRUE(lifts(f2, g, p, q));
      auto h = find_homotopy(f, f2);
      ASSERT_TRUE(h.has_value());
      EXPECT_TRUE(check_homotopy(f, f2, *h));
    }
  }
}

TEST(PullbackComplexes, Examples) {
  ModulePresentation m = cyc(ZH, {3});
  Resolution p = resolve_module(m);
  ComplexPullback same = pullback_complexes(p, p, ModuleMorphism::identity(m));
  EXPECT_TRUE(is_quasi_iso(same.t));
  EXPECT_TRUE(is_quasi_iso(same.G));
  ComplexPullback z = pullback_complexes(p, p, ModuleMorphism::zero(m, m));
  EXPECT_TRUE(is_quasi_iso(z.t));
  EXPECT_FALSE(is_quasi_iso(z.G));
  ModulePresentation n = cyc(ZH, {9});
  ModuleMorphism times3 = ModuleMorphism::make(m, n, Matrix::from_ints(ZH, {{3}}));
  Resolution q = resolve_module(n);
  ComplexPullback g = pullback_complexes(p, q, times3);
  EXPECT_TRUE(is_quasi_iso(g.t));
  // both squares commute on degree 0: map o aug_F o t = aug_G o G mod relations
  Matrix lhs = times3.matrix * p.augmentation.matrix * g.t.at(0);
  Matrix rhs = q.augmentation.matrix * g.G.at(0);
  EXPECT_TRUE(in_column_span(n.relations, lhs - rhs));
  // Gamma_0 is the module pullback: compare with module_cat
  Pullback pb = pullback(ModuleMorphism{ModulePresentation::free(ZH, 1), n, times3.matrix},
                         ModuleMorphism{ModulePresentation::free(ZH, 1), n, Matrix::from_ints(ZH, {{1}})});
  EXPECT_EQ(pb.object.invariants(), ModulePresentation::free(ZH, g.object.rank(0)).invariants());
  EXPECT_THROW(pullback_complexes(q, p, times3), Error);
}

TEST(PullbackComplexes, TwoResolutionsAreQuasiIsomorphic) {
  Rng rng(24);
  for (const Ring& R : rings()) {
    for (int it = 0; it < kIterations / 2; ++it) {
      ModulePresentation m = random_module(R, rng, small(), false);
      ComplexPullback g = pullback_complexes(resolve_module(m), resolve_presentation(m), ModuleMorphism::identity(m));
      EXPECT_TRUE(is_quasi_iso(g.t));
      EXPECT_TRUE(is_quasi_iso(g.G));
    }
  }
}

TEST(NormalizeRoof, Examples) {
  Complex e = Complex::make(ZH, 0, {1, 1}, {{1, Matrix::from_ints(ZH, {{3}})}});
  ChainMap two = scale(ChainMap::identity(e), 2);
  RoofNormalization n = normalize_roof(ChainMap::identity(e), two);
  EXPECT_TRUE(homotopic(n.map, two));
  RoofNormalization id = normalize_roof(two, two);
  EXPECT_TRUE(homotopic(id.map, ChainMap::identity(e)));
  EXPECT_THROW(normalize_roof(ChainMap::zero(e, e), two), Error);
}

TEST(NormalizeRoof, RandomRoofs) {
  Rng rng(25);
  for (const Ring& R : rings()) {
    for (int it = 0; it < kIterations / 2; ++it) {
      Complex e = random_complex(R, rng, small(), 0, 3, false);
      MinimalModel m = minimize(e);
      // L = minimal model with tau its inclusion, or E itself mapping onto the minimal model
      bool flip = rng.chance(1, 2);
      ChainMap tau = flip ? m.proj : m.incl;
      Complex q = random_complex(R, rng, small(), 0, 3, false);
      ChainMap gamma = random_chain_map(tau.source, q, rng);
      RoofNormalization n = normalize_roof(tau, gamma);
      EXPECT_TRUE(is_chain_map(n.map));
      EXPECT_TRUE(check_homotopy(compose(n.map, tau), gamma, n.witness));
      ChainMap inv = homotopy_inverse(tau);
      EXPECT_TRUE(homotopic(compose(tau, inv), ChainMap::identity(tau.target)));
    }
  }
}

TEST(Zeta, FunctorialUpToHomotopy) {
  Rng rng(26);
  for (const Ring& R : rings()) {
    for (int it = 0; it < kIterations / 2; ++it) {
      ModulePresentation a = random_module(R, rng, small(), false), b = random_module(R, rng, small(), false),
                         c = random_module(R, rng, small(), false);
      ModuleMorphism g0 = random_morphism(a, b, rng), g1 = random_morphism(b, c, rng);
      ChainMap lhs = zeta_morphism(compose(g1, g0));
      ChainMap rhs = compose(zeta_morphism(g1), zeta_morphism(g0));
      EXPECT_TRUE(homotopic(lhs, rhs));
      EXPECT_TRUE(homotopic(zeta_morphism(ModuleMorphism::identity(a)), ChainMap::identity(zeta_object(a).complex)));
    }
  }
  // g1 g0 = 0 gives a null-homotopic composite
  ModulePresentation m = cyc(ZH, {9});
  ModuleMorphism times3 = ModuleMorphism::make(m, m, Matrix::from_ints(ZH, {{3}}));
  ChainMap c = compose(zeta_morphism(times3), zeta_morphism(scale(times3, 1)));
  EXPECT_TRUE(homotopic(c, ChainMap::zero(c.source, c.target)));
}

TEST(Zeta, MemoizedAndThreadSafe) {
  ModulePresentation m = cyc(Ring::local(3), {3, 9});
  Resolution first = zeta_object(m);
  std::vector<std::thread> threads;
  std::vector<Complex> seen(8);
  for (int i = 0; i < 8; ++i) threads.emplace_back([&, i] { seen[i] = zeta_object(m).complex; });
  for (auto& t : threads) t.join();
  for (const auto& c : seen) EXPECT_EQ(c, first.complex);
}
