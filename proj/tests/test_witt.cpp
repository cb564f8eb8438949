#include <gtest/gtest.h>

#include "devissage/instances.hpp"
#include "devissage/witt.hpp"

using namespace devissage;

namespace {

const int kIterations = 20;
const Ring ZH = Ring::z_half();
const Ring Q = Ring::rational();

std::vector<Ring> rings() { return {Ring::z_half(), Ring::local(3), Ring::prime_field(5), Ring::rational()}; }

ModulePresentation cyc(const Ring& r, std::vector<long> f) {
  std::vector<Scalar> s;
  for (long v : f) s.push_back(r.from_int(v));
  return ModulePresentation::cyclic_sum(r, s);
}

ModuleForm unit_form(long n, long a = 1) {
  return form_from_gram(cyc(ZH, {n}), Matrix::from_rows(Q, {{mpq_class(a, n)}}, 1), 1);
}

SizeCaps small() {
  SizeCaps c;
  c.max_rank = 3;
  c.max_entry = 30;
  return c;
}

}  // namespace

TEST(ZetaForm, Examples) {
  ComplexForm z = zeta_form(unit_form(3));
  EXPECT_TRUE(is_valid_form(z));
  EXPECT_EQ(z.object, Complex::make(ZH, 0, {1, 1}, {{1, Matrix::from_ints(ZH, {{3}})}}));
  ASSERT_EQ(z.phi.comps.size(), 2u);
  EXPECT_TRUE(ZH.is_unit(z.phi.at(0)(0, 0)));
  EXPECT_TRUE(ZH.is_unit(z.phi.at(1)(0, 0)));
  EXPECT_TRUE(extract_module_form(z).phi.matrix == unit_form(3).phi.matrix);
  ComplexForm zero = zeta_form(hyperbolic(ModulePresentation::zero(ZH), 1).form);
  EXPECT_TRUE(zero.object.is_zero());
}

TEST(ZetaForm, SymmetricWithSameEpsilon) {
  Rng rng(2);
  for (const Ring& R : rings())
    for (int eps : {1, -1})
      for (int it = 0; it < kIterations / 2; ++it) {
        ModuleForm f = random_module_form(R, rng, small(), eps);
        ComplexForm z = zeta_form(f);
        EXPECT_TRUE(is_valid_form(z)) << R.descriptor() << " eps " << eps;
        ComplexForm wrong = z;
        wrong.epsilon = -eps;
        wrong.symmetry.reset();
        if (!z.object.is_zero() && R.kind() != RingKind::PrimeField) EXPECT_FALSE(is_symmetric(wrong));
        EXPECT_TRUE(isometric(extract_module_form(z), f));
      }
}

TEST(HyperbolicComplex, ValidAndNeutral) {
  Rng rng(3);
  for (const Ring& R : rings())
    for (int it = 0; it < kIterations / 2; ++it) {
      Complex x = random_complex(R, rng, small(), static_cast<int>(rng.range(-1, 1)), 1 + rng.below(3), true);
      for (int eps : {1, -1}) {
        ComplexForm h = hyperbolic_complex_form(x, eps);
        EXPECT_TRUE(is_valid_form(h));
        SumData s = direct_sum(x, complex_dual(x));
        ComplexLagrangian w = complex_lagrangian(h, ChainMap{x, h.object, s.in1.comps});
        EXPECT_TRUE(validate_complex_lagrangian(h, w));
      }
    }
}

TEST(LagrangianLift, HyperbolicOnA3) {
  HyperbolicForm h = hyperbolic(cyc(ZH, {3}), 1);
  ComplexLagrangian w = build_lagrangian_lift(h.form, h.lagrangian);
  EXPECT_TRUE(validate_complex_lagrangian(zeta_form(h.form), w));
  EXPECT_EQ(w.sign, 1);
  HyperbolicForm z = hyperbolic(ModulePresentation::zero(ZH), 1);
  ComplexLagrangian t = build_lagrangian_lift(z.form, z.lagrangian);
  EXPECT_TRUE(t.sub.is_zero());
}

TEST(LagrangianLift, RejectsNonLagrangian) {
  ModuleForm f = unit_form(9);
  ModuleLagrangian all{f.module, ModuleMorphism::identity(f.module)};
  EXPECT_THROW(build_lagrangian_lift(f, all), Error);
  ComplexForm z = zeta_form(unit_form(3));
  EXPECT_THROW(complex_lagrangian(z, ChainMap::identity(z.object)), Error);
}

TEST(LagrangianLift, RandomHyperbolic) {
  Rng rng(5);
  for (const Ring& R : rings())
    for (int eps : {1, -1})
      for (int it = 0; it < kIterations / 2; ++it) {
        HyperbolicForm h = random_hyperbolic_form(R, rng, small(), eps);
        ComplexLagrangian w = build_lagrangian_lift(h.form, h.lagrangian);
        EXPECT_TRUE(validate_complex_lagrangian(zeta_form(h.form), w));
      }
}

TEST(LagrangianLift, FoundModuleLagrangians) {
  // <1/9> has the lagrangian 3A/9, which is not a summand.
  ModuleForm f = unit_form(9);
  auto l = find_lagrangian(f);
  ASSERT_TRUE(l);
  EXPECT_TRUE(validate_complex_lagrangian(zeta_form(f), build_lagrangian_lift(f, *l)));
}

TEST(NeutralForms, WitnessesValidate) {
  Rng rng(7);
  for (const Ring& R : rings())
    for (int it = 0; it < kIterations / 2; ++it) {
      NeutralComplexForm n = random_neutral_complex_form(R, rng, small(), it % 2 ? 1 : -1);
      EXPECT_TRUE(is_valid_form(n.form));
      EXPECT_TRUE(validate_complex_lagrangian(n.form, n.lagrangian));
      // a corrupted witness is rejected
      ComplexLagrangian bad = n.lagrangian;
      bad.sign = 0;
      EXPECT_FALSE(validate_complex_lagrangian(n.form, bad));
    }
}

TEST(Truncate, AlreadyInsideIsUnchanged) {
  ComplexForm z = zeta_form(unit_form(3));
  IsometryRecord t = truncate_form(z);
  EXPECT_EQ(t.after.object, z.object);
  EXPECT_TRUE(chain_maps_equal(t.isometry, ChainMap::identity(z.object)));
  EXPECT_TRUE(validate_isometry(t));
  IsometryRecord e = truncate_form(zero_complex_form(ZH));
  EXPECT_TRUE(e.after.object.is_zero());
}

TEST(Truncate, RemovesPaddingWithinWindow) {
  Rng rng(11);
  for (const Ring& R : rings())
    for (int it = 0; it < kIterations; ++it) {
      GeneratedComplexForm g = random_complex_form(R, rng, small(), 1);
      IsometryRecord t = truncate_form(g.form);
      EXPECT_TRUE(validate_isometry(t));
      HomologyWindow w = homology_window(g.form.object);
      if (w.exact) {
        EXPECT_TRUE(t.after.object.is_zero());
        continue;
      }
      EXPECT_GE(t.after.object.lo(), -w.n);
      EXPECT_LE(t.after.object.hi(), w.n + R.dim());
      EXPECT_TRUE(is_valid_form(t.after));
    }
}

TEST(Truncate, ExactComplexGivesZeroForm) {
  Complex c = Complex::make(ZH, 0, {1, 1}, {{1, Matrix::from_ints(ZH, {{1}})}});
  ComplexForm h = hyperbolic_complex_form(c, 1);
  IsometryRecord t = truncate_form(h);
  EXPECT_TRUE(t.after.object.is_zero());
  EXPECT_TRUE(validate_isometry(t));
}

TEST(Sublagrangian, Examples) {
  EXPECT_THROW(sublagrangian_candidate(zeta_form(unit_form(3))), Error);
  EXPECT_THROW(sublagrangian_candidate(zero_complex_form(ZH)), Error);
  Complex x = translate(zeta_object(cyc(ZH, {3})).complex, 1, false);
  ComplexForm f = orthogonal_sum(zeta_form(unit_form(5)), hyperbolic_complex_form(x, 1));
  SublagrangianCandidate c = sublagrangian_candidate(f);
  EXPECT_EQ(c.n, 1);
  EXPECT_EQ(c.homology.invariants(), cyc(ZH, {3}).invariants());
  EXPECT_EQ(c.sub.lo(), 1);
  EXPECT_EQ(c.sub.hi(), 2);
  // nu lands in the cycles of E_1
  EXPECT_TRUE((f.object.d(1) * c.nu.at(1)).is_zero());
  // H_2 = 0: the candidate there is the zero map
  SublagrangianCandidate z = sublagrangian_candidate(f, 2);
  EXPECT_TRUE(z.sub.is_zero());
}

TEST(ReduceOnce, ShrinksWindow) {
  Complex x = translate(zeta_object(cyc(ZH, {3})).complex, 1, false);
  ComplexForm f = orthogonal_sum(zeta_form(unit_form(5)), hyperbolic_complex_form(x, 1));
  ReductionStep s = reduce_once(f);
  EXPECT_TRUE(validate_step(f, s));
  EXPECT_EQ(homology_window(s.result.object).n, 0);
}

TEST(ReduceSupport, ZetaFormNeedsNoSteps) {
  Reduction r = reduce_support(zeta_form(unit_form(3)));
  EXPECT_TRUE(r.ledger.empty());
  EXPECT_TRUE(validate_reduction(r));
  EXPECT_TRUE(isometric(r.extracted, unit_form(3)));
}

TEST(ReduceSupport, GeneratedFormsRoundTrip) {
  Rng rng(13);
  for (const Ring& R : rings())
    for (int eps : {1, -1})
      for (int it = 0; it < kIterations / 2; ++it) {
        GeneratedComplexForm g = random_complex_form(R, rng, SizeCaps{}, eps);
        ASSERT_TRUE(is_valid_form(g.form));
        Reduction r = reduce_support(g.form);
        EXPECT_TRUE(validate_reduction(r)) << R.descriptor();
        EXPECT_TRUE(isometric(r.extracted, g.seed)) << R.descriptor();
        std::size_t steps = 0;
        for (const auto& e : r.ledger) steps += e.kind == LedgerEntry::Kind::Sublagrangian;
        EXPECT_LE(steps, g.hyperbolic_shifts.empty() ? 0u : static_cast<std::size_t>(2));
      }
}

TEST(ReduceSupport, HyperbolicComplexGivesNeutralModuleForm) {
  Rng rng(17);
  for (int it = 0; it < kIterations; ++it) {
    HyperbolicForm h = random_hyperbolic_form(ZH, rng, small(), 1);
    Conjugation g = random_conjugation(zeta_form(h.form).object, rng);
    ComplexForm f = transport(zeta_form(h.form), g.to);
    Reduction r = reduce_support(f);
    EXPECT_TRUE(validate_reduction(r));
    EXPECT_TRUE(find_lagrangian(r.extracted).has_value());
    EXPECT_TRUE(witt_class(r.extracted).is_zero());
  }
}

TEST(SignedStandardize, ModuleForms) {
  EXPECT_EQ(standard_sign(0), 1);
  EXPECT_EQ(standard_sign(1), 1);
  EXPECT_EQ(standard_sign(2), -1);
  EXPECT_EQ(standardized_epsilon(1, 2), -1);
  EXPECT_EQ(standardized_epsilon(-1, 2), 1);
  ModuleForm f = unit_form(3);
  ModuleForm s = signed_standardize(f, Direction::ToStandard);
  EXPECT_TRUE(s.standard);
  EXPECT_EQ(s.epsilon, 1);
  EXPECT_EQ(s.phi.matrix, f.phi.matrix);
  ModuleForm back = signed_standardize(s, Direction::ToUnsigned);
  EXPECT_FALSE(back.standard);
  EXPECT_EQ(back.epsilon, f.epsilon);
}

TEST(SignedStandardize, ComplexRoundTrip) {
  Rng rng(19);
  for (const Ring& R : rings())
    for (int it = 0; it < kIterations / 2; ++it) {
      GeneratedComplexForm g = random_complex_form(R, rng, small(), it % 2 ? 1 : -1);
      ComplexForm s = signed_standardize(g.form, Direction::ToStandard);
      EXPECT_TRUE(s.standard);
      EXPECT_EQ(s.epsilon, g.form.epsilon * (R.dim() % 2 ? -1 : 1));
      EXPECT_TRUE(is_valid_form(s));
      ComplexForm back = signed_standardize(s, Direction::ToUnsigned);
      EXPECT_TRUE(chain_maps_equal(back.phi, g.form.phi));
      EXPECT_EQ(back.epsilon, g.form.epsilon);
      // reduction in the standard convention extracts the same module form
      Reduction r = reduce_support(s);
      EXPECT_TRUE(validate_reduction(r));
      EXPECT_TRUE(isometric(signed_standardize(r.extracted, Direction::ToUnsigned), g.seed));
    }
}
