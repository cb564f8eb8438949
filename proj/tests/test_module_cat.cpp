#include <gtest/gtest.h>

#include "devissage/generators.hpp"
#include "devissage/module.hpp"
#include "oracles.hpp"

using namespace devissage;

namespace {

const int kIterations = 60;

const Ring ZH = Ring::z_half();

ModulePresentation cyc(const Ring& r, std::vector<long> f) {
  std::vector<Scalar> s;
  for (long v : f) s.push_back(r.from_int(v));
  return ModulePresentation::cyclic_sum(r, s);
}

CokernelInvariants inv(std::size_t rank, std::vector<long> f) {
  CokernelInvariants c;
  c.free_rank = rank;
  for (long v : f) c.factors.push_back(v);
  return c;
}

std::vector<Ring> rings() { return {Ring::z_half(), Ring::local(3), Ring::prime_field(5)}; }

}  // namespace

TEST(Subquotient, Examples) {
  ModulePresentation a = ModulePresentation::free(ZH, 1);
  ModuleMorphism times3{a, a, Matrix::from_ints(ZH, {{3}})};
  EXPECT_EQ(subquotient(times3, SubquotientKind::Cokernel).object.invariants(), inv(0, {3}));
  auto k = subquotient(ModuleMorphism::identity(cyc(ZH, {3, 9})), SubquotientKind::Kernel);
  EXPECT_TRUE(k.object.is_zero());
  // A -> A/3 canonical epi: kernel is free of rank 1, included as 3 (SNF oracle on [1 | -3])
  ModuleMorphism epi{a, cyc(ZH, {3}), Matrix::from_ints(ZH, {{1}})};
  k = subquotient(epi, SubquotientKind::Kernel);
  EXPECT_EQ(k.object.invariants(), inv(1, {}));
  ASSERT_EQ(k.map.matrix.cols(), 1u);
  EXPECT_EQ(ZH.associate(k.map.matrix(0, 0)), 3);
  EXPECT_THROW(subquotient(ModuleMorphism{cyc(ZH, {3}), a, Matrix::from_ints(ZH, {{1}})}, SubquotientKind::Kernel),
               Error);
}

TEST(Subquotient, ExactnessOnRandomMorphisms) {
  for (const Ring& r : rings()) {
    Rng rng(101);
    for (int it = 0; it < kIterations; ++it) {
      SizeCaps caps{4, 4, 27};
      auto m = random_module(r, rng, caps, false);
      auto n = random_module(r, rng, caps, false);
      auto f = random_morphism(m, n, rng);
      auto ker = subquotient(f, SubquotientKind::Kernel);
      auto im = subquotient(f, SubquotientKind::Image);
      auto cok = subquotient(f, SubquotientKind::Cokernel);
      ASSERT_TRUE(is_well_defined(ker.object, m, ker.map.matrix));
      ASSERT_TRUE(is_zero_morphism(compose(f, ker.map)));
      ASSERT_TRUE(is_mono(ker.map));
      ASSERT_TRUE(is_mono(im.map));
      ASSERT_TRUE(is_zero_morphism(compose(cok.map, f)));
      ASSERT_TRUE(is_epi(cok.map));
      // 0 -> ker -> M -> im -> 0: the projection M -> im is epi with kernel ker
      ModuleMorphism to_im{m, im.object, Matrix::identity(r, m.g())};
      ASSERT_TRUE(is_epi(to_im));
      ASSERT_TRUE(is_zero_morphism(compose(to_im, ker.map)));
      auto kk = subquotient(to_im, SubquotientKind::Kernel);
      ASSERT_EQ(kk.object.invariants(), ker.object.invariants());
      // im -> N -> coker -> 0 exact at N
      auto kc = subquotient(cok.map, SubquotientKind::Kernel);
      ASSERT_EQ(kc.object.invariants(), im.object.invariants());
      if (!r.is_field() && m.invariants().free_rank == 0 && n.invariants().free_rank == 0) {
        ASSERT_EQ(module_order(m), module_order(ker.object) * module_order(im.object));
        ASSERT_EQ(module_order(n), module_order(im.object) * module_order(cok.object));
      }
    }
  }
}

TEST(Pullback, Examples) {
  auto m = cyc(ZH, {3, 9});
  auto pb = pullback(ModuleMorphism::identity(m), ModuleMorphism::identity(m));
  EXPECT_TRUE(isomorphic(pb.object, m));
  EXPECT_TRUE(is_iso(pb.proj1));
  EXPECT_TRUE(is_iso(pb.proj2));
  // A -> A/3 <- A: {(x,y): x = y mod 3}, free of rank 2 (kernel-of-difference oracle)
  ModulePresentation a = ModulePresentation::free(ZH, 1);
  ModuleMorphism epi{a, cyc(ZH, {3}), Matrix::from_ints(ZH, {{1}})};
  pb = pullback(epi, epi);
  EXPECT_EQ(pb.object.g(), 2u);
  EXPECT_EQ(pb.object.invariants(), inv(2, {}));
  EXPECT_TRUE(is_epi(pb.proj1));
  EXPECT_TRUE(is_epi(pb.proj2));
  // 0 -> M <- N: object is ker(g)
  auto n = cyc(ZH, {9});
  ModuleMorphism g{n, cyc(ZH, {3}), Matrix::from_ints(ZH, {{1}})};
  pb = pullback(ModuleMorphism::zero(ModulePresentation::zero(ZH), g.target), g);
  EXPECT_EQ(pb.object.invariants(), subquotient(g, SubquotientKind::Kernel).object.invariants());
  EXPECT_THROW(pullback(epi, ModuleMorphism::identity(a)), Error);
}

TEST(Pullback, UniversalSquareAndEpiStability) {
  for (const Ring& r : rings()) {
    Rng rng(202);
    for (int it = 0; it < kIterations; ++it) {
      SizeCaps caps{3, 4, 27};
      auto p = random_module(r, rng, caps, false);
      auto m = random_module(r, rng, caps, false);
      auto n = random_module(r, rng, caps, false);
      // make f epi by adding the identity of P as a summand of the source
      auto ds = direct_sum_data(m, p);
      ModuleMorphism f{ds.object, p, Matrix::hstack(random_morphism(m, p, rng).matrix, Matrix::identity(r, p.g()))};
      auto g = random_morphism(n, p, rng);
      auto pb = pullback(f, g);
      ASSERT_TRUE(morphism_equal(compose(f, pb.proj1), compose(g, pb.proj2)));
      ASSERT_TRUE(is_epi(f));
      ASSERT_TRUE(is_epi(pb.proj2));
      // competing cone through the kernel of g: (0, k) factors through the pullback
      auto kg = subquotient(g, SubquotientKind::Kernel);
      Matrix target = Matrix::vstack(Matrix(r, ds.object.g(), kg.object.g()), kg.map.matrix);
      Matrix sides = Matrix::vstack(pb.proj1.matrix, pb.proj2.matrix);
      Matrix rel = Matrix::block_diag(ds.object.relations, n.relations);
      ASSERT_TRUE(in_column_span(Matrix::hstack(sides, rel), target));
    }
  }
}

TEST(HomToOmega, Examples) {
  EXPECT_EQ(hom_to_omega(ModulePresentation::free(ZH, 1)).module.g(), 1u);
  EXPECT_EQ(hom_to_omega(cyc(ZH, {3})).module.g(), 0u);
  EXPECT_EQ(hom_to_omega(ModulePresentation::free(ZH, 2)).module.g(), 2u);
}

TEST(HomToOmega, DoubleDualOfFreeIsEvaluation) {
  for (const Ring& r : rings()) {
    Rng rng(303);
    for (int it = 0; it < kIterations; ++it) {
      std::size_t n = rng.below(4);
      auto f = ModulePresentation::free(r, n);
      auto h = hom_to_omega(f);
      auto hh = hom_to_omega(h.module);
      ASSERT_EQ(hh.module.g(), n);
      // evaluation e_i -> (phi -> phi(e_i)) in the bases given by the functionals
      Matrix ev = (h.functionals * hh.functionals).transpose();
      ASSERT_TRUE(is_iso(ModuleMorphism{f, hh.module, ev}));
      auto g = random_morphism(f, f, rng);
      // naturality: Hom(Hom(g)) o ev = ev o g
      auto gg = hom_to_omega_map(hom_to_omega_map(g));
      ASSERT_EQ(gg.matrix * ev, ev * g.matrix);
    }
  }
}

TEST(Ext, Examples) {
  EXPECT_EQ(ext(cyc(ZH, {3}), 1).invariants(), inv(0, {3}));
  EXPECT_TRUE(ext(cyc(ZH, {3}), 0).is_zero());
  auto a = ModulePresentation::free(ZH, 1);
  EXPECT_EQ(ext(a, 0).invariants(), inv(1, {}));
  EXPECT_TRUE(ext(a, 1).is_zero());
  EXPECT_TRUE(ext(a, 2).is_zero());
}

TEST(Ext, LongExactSequenceBookkeeping) {
  for (const Ring& r : {Ring::z_half(), Ring::local(5)}) {
    Rng rng(404);
    for (int it = 0; it < kIterations; ++it) {
      SizeCaps caps{3, 4, 27};
      auto m = random_module(r, rng, caps, true);
      auto n = random_module(r, rng, caps, true);
      auto f = random_morphism(n, m, rng);
      // 0 -> im f -> M -> coker f -> 0
      auto im = subquotient(f, SubquotientKind::Image);
      auto cok = subquotient(f, SubquotientKind::Cokernel);
      ModuleMorphism i{im.object, m, im.map.matrix};
      auto e_cok = ext_map(cok.map, 1);  // Ext(coker) -> Ext(M)
      auto e_i = ext_map(i, 1);          // Ext(M) -> Ext(im)
      ASSERT_TRUE(is_zero_morphism(compose(e_i, e_cok)));
      ASSERT_TRUE(is_mono(e_cok));
      ASSERT_TRUE(is_epi(e_i));
      ASSERT_EQ(module_order(ext(m, 1)), module_order(ext(im.object, 1)) * module_order(ext(cok.object, 1)));
      for (int k : {0, 2}) ASSERT_TRUE(ext(m, k).is_zero());
    }
  }
}

TEST(PrimaryDecompose, Examples) {
  auto parts = primary_decompose(cyc(ZH, {15}));
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0].prime, 3);
  EXPECT_EQ(parts[0].local.invariants(), inv(0, {3}));
  EXPECT_EQ(parts[1].prime, 5);
  EXPECT_EQ(parts[1].local.invariants(), inv(0, {5}));
  EXPECT_EQ(parts[0].local.ring, Ring::local(3));
  parts = primary_decompose(cyc(ZH, {9}));
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0].local.invariants(), inv(0, {9}));
  parts = primary_decompose(cyc(ZH, {3, 5, 9}));
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0].local.invariants(), inv(0, {3, 9}));
  EXPECT_EQ(parts[1].local.invariants(), inv(0, {5}));
  EXPECT_THROW(primary_decompose(ModulePresentation::free(ZH, 1)), Error);
}

TEST(PrimaryDecompose, IdempotentsSplitTheModule) {
  Rng rng(505);
  for (int it = 0; it < kIterations; ++it) {
    auto m = random_module(ZH, rng, SizeCaps{4, 4, 50}, true);
    auto parts = primary_decompose(m);
    Matrix sum(ZH, m.g(), m.g());
    mpz_class order = 1;
    for (const auto& p : parts) {
      ASSERT_TRUE(is_well_defined(p.global, m, p.inclusion.matrix));
      ASSERT_TRUE(is_well_defined(m, p.global, p.projection.matrix));
      ASSERT_TRUE(morphism_equal(compose(p.projection, p.inclusion), ModuleMorphism::identity(p.global)));
      for (const auto& q : parts)
        if (q.prime != p.prime) ASSERT_TRUE(is_zero_morphism(compose(q.projection, p.inclusion)));
      sum = sum + p.inclusion.matrix * p.projection.matrix;
      order *= module_order(p.global);
      for (const auto& f : p.local.invariants().factors) {
        auto fac = oracle::factor_integer(f.get_num().get_si());
        ASSERT_EQ(fac.size(), 1u);
        ASSERT_EQ(fac[0].first, p.prime);
      }
    }
    ASSERT_TRUE(morphism_equal(ModuleMorphism{m, m, sum}, ModuleMorphism::identity(m)));
    ASSERT_EQ(order, module_order(m));
  }
}

TEST(Morphisms, InverseAndSimplify) {
  for (const Ring& r : rings()) {
    Rng rng(606);
    for (int it = 0; it < kIterations; ++it) {
      auto m = random_module(r, rng, SizeCaps{4, 4, 27}, false);
      auto s = simplify(m);
      ASSERT_TRUE(is_well_defined(m, s.module, s.to_min.matrix));
      ASSERT_TRUE(is_well_defined(s.module, m, s.from_min.matrix));
      ASSERT_TRUE(morphism_equal(compose(s.from_min, s.to_min), ModuleMorphism::identity(m)));
      ASSERT_TRUE(morphism_equal(compose(s.to_min, s.from_min), ModuleMorphism::identity(s.module)));
      auto inv_map = inverse_iso(s.to_min);
      ASSERT_TRUE(morphism_equal(inv_map, s.from_min));
      ASSERT_EQ(s.module.invariants(), m.invariants());
    }
  }
  auto z = cyc(ZH, {3});
  EXPECT_THROW(inverse_iso(ModuleMorphism::zero(z, z)), Error);
}
