#include <gtest/gtest.h>

#include <random>

#include "devissage/ring.hpp"
#include "oracles.hpp"

using namespace devissage;

namespace {

const int kIterations = 500;

std::vector<Ring> all_rings() {
  return {Ring::rational(), Ring::prime_field(5), Ring::prime_field(7), Ring::z_half(), Ring::local(3)};
}

Scalar random_element(const Ring& r, std::mt19937_64& rng) {
  long n = static_cast<long>(rng() % 61) - 30;
  switch (r.kind()) {
    case RingKind::Rational: return mpq_class(n, static_cast<long>(rng() % 7) + 1);
    case RingKind::PrimeField: return r.from_int(n);
    case RingKind::IntegersTwoInverted: return mpq_class(n, 1L << (rng() % 3));
    case RingKind::LocalIntegers: {
      long den = static_cast<long>(rng() % 9) + 1;
      if (den % r.prime() == 0) ++den;
      return mpq_class(n, den);
    }
  }
  return 0;
}

}  // namespace

TEST(RingMake, DimensionAndRejection) {
  EXPECT_EQ(Ring::prime_field(5).dim(), 0);
  EXPECT_EQ(Ring::z_half().dim(), 1);
  EXPECT_EQ(Ring::local(3).dim(), 1);
  EXPECT_EQ(Ring::rational().dim(), 0);
  try {
    Ring::prime_field(2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedRing);
  }
  EXPECT_THROW(Ring::local(2), Error);
  EXPECT_THROW(Ring::prime_field(9), Error);
  EXPECT_THROW(Ring::parse("zz"), Error);
}

TEST(RingMake, DescriptorRoundTrip) {
  for (const auto& r : all_rings()) EXPECT_EQ(Ring::parse(r.descriptor()), r);
  EXPECT_EQ(Ring::parse("fp:7"), Ring::prime_field(7));
  EXPECT_EQ(Ring::parse("zloc:5"), Ring::local(5));
}

TEST(RingUnits, Examples) {
  EXPECT_TRUE(Ring::z_half().is_unit(2));
  EXPECT_FALSE(Ring::z_half().is_unit(3));
  EXPECT_TRUE(Ring::prime_field(5).is_unit(3));
  EXPECT_FALSE(Ring::local(3).is_unit(6));
  EXPECT_TRUE(Ring::local(3).is_unit(mpq_class(5, 7)));
}

TEST(RingValuation, Examples) {
  Scalar u;
  auto f = Ring::local(3).valuation_and_unit(9, &u);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].exponent, 2u);
  EXPECT_EQ(u, 1);
  f = Ring::local(3).valuation_and_unit(5, &u);
  EXPECT_EQ(f[0].exponent, 0u);
  EXPECT_EQ(u, 5);
  EXPECT_THROW(Ring::local(3).valuation_and_unit(0, &u), Error);
}

TEST(RingValuation, ZHalfAgainstFactorizationOracle) {
  const Ring r = Ring::z_half();
  Scalar u;
  auto f = r.valuation_and_unit(12, &u);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].prime, 3);
  EXPECT_EQ(f[0].exponent, 1u);
  EXPECT_EQ(u, 4);
  for (long n = 1; n < 400; ++n) {
    auto expect = oracle::factor_integer(n);
    std::erase_if(expect, [](const auto& pe) { return pe.first == 2; });
    auto got = r.valuation_and_unit(mpq_class(n), &u);
    ASSERT_EQ(got.size(), expect.size()) << n;
    mpq_class prod = u;
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].prime, expect[i].first);
      EXPECT_EQ(got[i].exponent, static_cast<unsigned long>(expect[i].second));
      for (unsigned long e = 0; e < got[i].exponent; ++e) prod *= got[i].prime;
    }
    EXPECT_TRUE(r.is_unit(u));
    EXPECT_EQ(prod, n);
  }
}

TEST(RingElements, CanonicalForms) {
  EXPECT_EQ(Ring::prime_field(5).parse_element("-1"), 4);
  EXPECT_EQ(Ring::prime_field(5).parse_element("1/2"), 3);
  EXPECT_EQ(Ring::z_half().parse_element("6/4"), mpq_class(3, 2));
  EXPECT_THROW(Ring::z_half().parse_element("1/3"), Error);
  EXPECT_THROW(Ring::local(3).parse_element("1/3"), Error);
  EXPECT_EQ(Ring::local(3).to_string(Ring::local(3).parse_element("2/4")), "1/2");
  EXPECT_THROW(Ring::rational().parse_element("x"), Error);
}

TEST(RingProperties, Axioms) {
  std::mt19937_64 rng(11);
  for (const auto& r : all_rings()) {
    for (int it = 0; it < kIterations; ++it) {
      Scalar a = r.canonical(random_element(r, rng));
      Scalar b = r.canonical(random_element(r, rng));
      Scalar c = r.canonical(random_element(r, rng));
      EXPECT_EQ(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c)));
      EXPECT_EQ(r.add(r.add(a, b), c), r.add(a, r.add(b, c)));
      EXPECT_EQ(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
      EXPECT_EQ(r.mul(a, 1), a);
      EXPECT_EQ(r.add(a, r.neg(a)), 0);
      EXPECT_TRUE(r.contains(r.mul(a, b)));
      EXPECT_EQ(r.canonical(r.canonical(a)), r.canonical(a));
      if (r.is_unit(a) && r.is_unit(b)) EXPECT_TRUE(r.is_unit(r.mul(a, b)));
      if (r.is_unit(a)) EXPECT_EQ(r.mul(a, r.inverse(a)), 1);
    }
  }
}

TEST(RingProperties, EuclideanDivision) {
  std::mt19937_64 rng(12);
  for (const auto& r : all_rings()) {
    for (int it = 0; it < kIterations; ++it) {
      Scalar a = r.canonical(random_element(r, rng));
      Scalar b = r.canonical(random_element(r, rng));
      if (b == 0) continue;
      auto [q, rem] = r.divmod(a, b);
      EXPECT_EQ(r.add(r.mul(q, b), rem), a);
      if (rem != 0) EXPECT_LT(r.norm(rem), r.norm(b));
      EXPECT_EQ(rem == 0, r.divides(b, a));
      Scalar unit;
      Scalar g = r.associate(a, &unit);
      if (a != 0) {
        EXPECT_TRUE(r.is_unit(unit));
        EXPECT_EQ(r.mul(unit, g), a);
        EXPECT_EQ(r.associate(g), g);
      }
      Scalar d = r.gcd(a, b);
      EXPECT_TRUE(r.divides(d, a));
      EXPECT_TRUE(r.divides(d, b));
    }
  }
}
