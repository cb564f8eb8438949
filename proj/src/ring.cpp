#include "devissage/ring.hpp"

#include <charconv>
#include <cstdlib>

namespace devissage {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnsupportedRing: return "UnsupportedRing";
    case ErrorKind::ZeroElement: return "ZeroElement";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NotAComplex: return "NotAComplex";
    case ErrorKind::IllFormedMorphism: return "IllFormedMorphism";
    case ErrorKind::TargetMismatch: return "TargetMismatch";
    case ErrorKind::NotFiniteLength: return "NotFiniteLength";
    case ErrorKind::NotQuasiIso: return "NotQuasiIso";
    case ErrorKind::NotAnIsomorphism: return "NotAnIsomorphism";
    case ErrorKind::HomologyNotInA: return "HomologyNotInA";
    case ErrorKind::IncompatibleAugmentations: return "IncompatibleAugmentations";
    case ErrorKind::NotALagrangian: return "NotALagrangian";
    case ErrorKind::WindowAlreadyMinimal: return "WindowAlreadyMinimal";
    case ErrorKind::ReductionStepFailed: return "ReductionStepFailed";
    case ErrorKind::UnknownKind: return "UnknownKind";
  }
  return "Error";
}

bool is_odd_prime(long p) {
  if (p < 3 || p % 2 == 0) return false;
  for (long q = 3; q * q <= p; q += 2)
    if (p % q == 0) return false;
  return true;
}

unsigned long mpz_valuation(const mpz_class& n, const mpz_class& p) {
  if (n == 0) return 0;
  mpz_class m = abs(n);
  unsigned long v = 0;
  while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
    ++v;
  }
  return v;
}

mpz_class odd_part(const mpz_class& n, long* two_exponent) {
  if (n == 0) {
    if (two_exponent) *two_exponent = 0;
    return 0;
  }
  unsigned long s = mpz_scan1(n.get_mpz_t(), 0);
  mpz_class r;
  mpz_tdiv_q_2exp(r.get_mpz_t(), n.get_mpz_t(), s);
  if (two_exponent) *two_exponent = static_cast<long>(s);
  return r;
}

namespace {

// 2^e as a rational, e may be negative.
mpq_class pow2(long e) {
  mpz_class m = 1;
  mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? mpq_class(mpz_class(1), m) : mpq_class(m);
}

// Signed 2-adic exponent and odd part of a nonzero element of Z[1/2].
void split_two(const mpq_class& x, long* s, mpz_class* odd) {
  long t = 0;
  *odd = odd_part(x.get_num(), &t);
  long u = 0;
  odd_part(x.get_den(), &u);
  *s = t - u;
}

}  // namespace

Ring::Ring(RingKind kind, long p) : kind_(kind), p_(0) {
  if (kind == RingKind::PrimeField || kind == RingKind::LocalIntegers) {
    if (!is_odd_prime(p))
      throw Error(ErrorKind::UnsupportedRing, "p = " + std::to_string(p) + " is not an odd prime");
    p_ = p;
  }
}

Ring Ring::parse(std::string_view desc) {
  auto parse_p = [&](std::string_view rest) -> long {
    long p = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), p);
    if (ec != std::errc() || ptr != rest.data() + rest.size())
      throw Error(ErrorKind::UnsupportedRing, "bad prime in descriptor '" + std::string(desc) + "'");
    return p;
  };
  if (desc == "q") return rational();
  if (desc == "z-half") return z_half();
  if (desc.rfind("fp:", 0) == 0) return prime_field(parse_p(desc.substr(3)));
  if (desc.rfind("zloc:", 0) == 0) return local(parse_p(desc.substr(5)));
  throw Error(ErrorKind::UnsupportedRing, "unknown ring descriptor '" + std::string(desc) + "'");
}

std::string Ring::descriptor() const {
  switch (kind_) {
    case RingKind::Rational: return "q";
    case RingKind::PrimeField: return "fp:" + std::to_string(p_);
    case RingKind::IntegersTwoInverted: return "z-half";
    case RingKind::LocalIntegers: return "zloc:" + std::to_string(p_);
  }
  return "?";
}

bool Ring::contains(const mpq_class& x) const {
  switch (kind_) {
    case RingKind::Rational: return true;
    case RingKind::PrimeField:
      return x.get_den() == 1 && x.get_num() >= 0 && x.get_num() < p_;
    case RingKind::IntegersTwoInverted:
      return mpz_popcount(x.get_den().get_mpz_t()) == 1;
    case RingKind::LocalIntegers:
      return !mpz_divisible_ui_p(x.get_den().get_mpz_t(), static_cast<unsigned long>(p_));
  }
  return false;
}

Scalar Ring::canonical(const mpq_class& in) const {
  mpq_class x = in;
  x.canonicalize();
  switch (kind_) {
    case RingKind::Rational: return x;
    case RingKind::PrimeField: {
      mpz_class p = p_;
      mpz_class den = x.get_den();
      mpz_class inv;
      if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0)
        throw Error(ErrorKind::NotAUnit, "denominator divisible by " + std::to_string(p_));
      mpz_class v = x.get_num() * inv;
      mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
      return mpq_class(v);
    }
    case RingKind::IntegersTwoInverted:
    case RingKind::LocalIntegers:
      if (!contains(x)) throw Error(ErrorKind::NotAUnit, "denominator not invertible in " + descriptor());
      return x;
  }
  return x;
}

Scalar Ring::parse_element(std::string_view s) const {
  mpq_class v;
  std::string str(s);
  if (str.empty() || mpq_set_str(v.get_mpq_t(), str.c_str(), 10) != 0 || v.get_den() == 0)
    throw Error(ErrorKind::ParseError, "bad element '" + str + "'");
  v.canonicalize();
  return canonical(v);
}

std::string Ring::to_string(const Scalar& x) const { return x.get_str(); }

Scalar Ring::add(const Scalar& a, const Scalar& b) const {
  if (kind_ == RingKind::PrimeField) {
    mpz_class v = a.get_num() + b.get_num();
    if (v >= p_) v -= p_;
    return mpq_class(v);
  }
  return a + b;
}

Scalar Ring::sub(const Scalar& a, const Scalar& b) const {
  if (kind_ == RingKind::PrimeField) {
    mpz_class v = a.get_num() - b.get_num();
    if (v < 0) v += p_;
    return mpq_class(v);
  }
  return a - b;
}

Scalar Ring::mul(const Scalar& a, const Scalar& b) const {
  if (kind_ == RingKind::PrimeField) {
    mpz_class v = a.get_num() * b.get_num();
    mpz_fdiv_r_ui(v.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(p_));
    return mpq_class(v);
  }
  return a * b;
}

Scalar Ring::neg(const Scalar& a) const {
  if (kind_ == RingKind::PrimeField) return a == 0 ? a : mpq_class(p_ - a.get_num());
  return -a;
}

bool Ring::is_unit(const Scalar& x) const {
  if (x == 0) return false;
  switch (kind_) {
    case RingKind::Rational:
    case RingKind::PrimeField: return true;
    case RingKind::IntegersTwoInverted: return abs(odd_part(x.get_num())) == 1;
    case RingKind::LocalIntegers:
      return !mpz_divisible_ui_p(x.get_num().get_mpz_t(), static_cast<unsigned long>(p_));
  }
  return false;
}

Scalar Ring::inverse(const Scalar& x) const {
  if (!is_unit(x)) throw Error(ErrorKind::NotAUnit, x.get_str() + " is not a unit in " + descriptor());
  mpq_class r = 1 / x;
  return canonical(r);
}

bool Ring::divides(const Scalar& a, const Scalar& b) const {
  if (b == 0) return true;
  if (a == 0) return false;
  switch (kind_) {
    case RingKind::Rational:
    case RingKind::PrimeField: return true;
    case RingKind::IntegersTwoInverted: {
      mpz_class oa = abs(odd_part(a.get_num()));
      return mpz_divisible_p(b.get_num().get_mpz_t(), oa.get_mpz_t()) != 0;
    }
    case RingKind::LocalIntegers: return valuation(a) <= valuation(b);
  }
  return false;
}

Scalar Ring::quotient(const Scalar& b, const Scalar& a) const {
  if (a == 0) throw Error(ErrorKind::ZeroElement, "division by zero");
  if (kind_ == RingKind::PrimeField) return mul(b, inverse(a));
  mpq_class r = b / a;
  return canonical(r);
}

mpz_class Ring::norm(const Scalar& x) const {
  if (x == 0) return -1;
  switch (kind_) {
    case RingKind::Rational:
    case RingKind::PrimeField: return 0;
    case RingKind::IntegersTwoInverted: return abs(odd_part(x.get_num())) - 1;
    case RingKind::LocalIntegers: return mpz_class(valuation(x));
  }
  return 0;
}

std::pair<Scalar, Scalar> Ring::divmod(const Scalar& a, const Scalar& b) const {
  if (b == 0) throw Error(ErrorKind::ZeroElement, "divmod by zero");
  if (a == 0) return {Scalar(0), Scalar(0)};
  if (divides(b, a)) return {quotient(a, b), Scalar(0)};
  switch (kind_) {
    case RingKind::IntegersTwoInverted: {
      long s, t;
      mpz_class A, B;
      split_two(a, &s, &A);
      split_two(b, &t, &B);
      // A = qB + r0 with |r0| <= |B|/2
      mpz_class q, r0;
      mpz_fdiv_qr(q.get_mpz_t(), r0.get_mpz_t(), A.get_mpz_t(), B.get_mpz_t());
      if (2 * abs(r0) > abs(B)) {
        r0 -= B;
        q += 1;
      }
      return {mpq_class(q) * pow2(s - t), mpq_class(r0) * pow2(s)};
    }
    case RingKind::LocalIntegers: return {Scalar(0), a};
    default: return {quotient(a, b), Scalar(0)};
  }
}

Scalar Ring::associate(const Scalar& x, Scalar* unit) const {
  if (x == 0) {
    if (unit) *unit = 1;
    return 0;
  }
  Scalar gen;
  switch (kind_) {
    case RingKind::Rational:
    case RingKind::PrimeField: gen = 1; break;
    case RingKind::IntegersTwoInverted: gen = mpq_class(abs(odd_part(x.get_num()))); break;
    case RingKind::LocalIntegers: {
      mpz_class pk;
      mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p_), valuation(x));
      gen = mpq_class(pk);
      break;
    }
  }
  if (unit) *unit = quotient(x, gen);
  return gen;
}

Scalar Ring::gcd(const Scalar& a, const Scalar& b) const {
  Scalar x = a, y = b;
  while (y != 0) {
    Scalar r = divmod(x, y).second;
    x = y;
    y = r;
  }
  return associate(x);
}

unsigned long Ring::valuation(const Scalar& x) const {
  if (kind_ != RingKind::LocalIntegers || x == 0) return 0;
  return mpz_valuation(x.get_num(), mpz_class(p_));
}

std::vector<Factor> Ring::valuation_and_unit(const Scalar& x, Scalar* unit) const {
  if (x == 0) throw Error(ErrorKind::ZeroElement, "valuation of zero");
  std::vector<Factor> out;
  switch (kind_) {
    case RingKind::LocalIntegers: {
      unsigned long v = valuation(x);
      out.push_back({mpz_class(p_), v});
      if (unit) {
        mpz_class pk;
        mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p_), v);
        *unit = x / mpq_class(pk);
      }
      return out;
    }
    case RingKind::IntegersTwoInverted: {
      mpz_class n = abs(odd_part(x.get_num()));
      mpz_class rest = n;
      for (mpz_class q = 3; q * q <= rest; q += 2) {
        unsigned long e = 0;
        while (mpz_divisible_p(rest.get_mpz_t(), q.get_mpz_t())) {
          rest /= q;
          ++e;
        }
        if (e) out.push_back({q, e});
      }
      if (rest > 1) out.push_back({rest, 1});
      if (unit) *unit = x / mpq_class(n);
      return out;
    }
    default:
      if (unit) *unit = x;
      return out;
  }
}

}  // namespace devissage
