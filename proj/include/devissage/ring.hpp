#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "devissage/error.hpp"

namespace devissage {

/// Elements of every supported ring are stored as reduced rationals.  The
/// subrings of Q (Z[1/2], Z_(p)) need no reduction after add/mul; F_p keeps
/// integer residues in [0, p).
using Scalar = mpq_class;

enum class RingKind { Rational, PrimeField, IntegersTwoInverted, LocalIntegers };

struct Factor {
  mpz_class prime;
  unsigned long exponent;
  bool operator==(const Factor&) const = default;
};

class Ring {
 public:
  Ring() : Ring(RingKind::Rational, 0) {}
  Ring(RingKind kind, long p);

  static Ring rational() { return Ring(RingKind::Rational, 0); }
  static Ring prime_field(long p) { return Ring(RingKind::PrimeField, p); }
  static Ring z_half() { return Ring(RingKind::IntegersTwoInverted, 0); }
  static Ring local(long p) { return Ring(RingKind::LocalIntegers, p); }
  /// Accepts "q", "fp:<p>", "z-half", "zloc:<p>".
  static Ring parse(std::string_view desc);

  std::string descriptor() const;
  RingKind kind() const { return kind_; }
  long prime() const { return p_; }
  int dim() const { return is_field() ? 0 : 1; }
  bool is_field() const { return kind_ == RingKind::Rational || kind_ == RingKind::PrimeField; }

  bool operator==(const Ring& o) const { return kind_ == o.kind_ && p_ == o.p_; }
  bool operator!=(const Ring& o) const { return !(*this == o); }

  bool contains(const mpq_class& x) const;
  /// Maps an element of the ambient rational representation into the ring.
  /// Throws NotAUnit when x has a denominator not invertible in the ring.
  Scalar canonical(const mpq_class& x) const;
  Scalar from_int(long v) const { return canonical(mpq_class(v)); }
  Scalar parse_element(std::string_view s) const;
  std::string to_string(const Scalar& x) const;

  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;

  bool is_unit(const Scalar& x) const;
  Scalar inverse(const Scalar& x) const;
  /// True iff a | b.
  bool divides(const Scalar& a, const Scalar& b) const;
  /// b / a, assuming a | b.
  Scalar quotient(const Scalar& b, const Scalar& a) const;

  /// Euclidean size: 0 for units, larger is "less divisible".  Zero gets -1.
  mpz_class norm(const Scalar& x) const;
  /// a = q*b + r with norm(r) < norm(b) or r = 0.
  std::pair<Scalar, Scalar> divmod(const Scalar& a, const Scalar& b) const;
  /// Canonical generator of the ideal (x): positive odd integer for Z[1/2],
  /// p^k for Z_(p), 1 for fields, 0 for zero.  Sets *unit with x = unit * gen.
  Scalar associate(const Scalar& x, Scalar* unit = nullptr) const;
  Scalar gcd(const Scalar& a, const Scalar& b) const;

  /// p-adic valuation for Z_(p); only meaningful for the local kind.
  unsigned long valuation(const Scalar& x) const;
  /// x = unit * prod(prime^exp).  Z_(p): at most one factor p.  Z[1/2]: odd primes by trial division.
  std::vector<Factor> valuation_and_unit(const Scalar& x, Scalar* unit) const;

 private:
  RingKind kind_;
  long p_;
};

/// v_p of a nonzero integer.
unsigned long mpz_valuation(const mpz_class& n, const mpz_class& p);
/// Odd part of a nonzero integer (sign kept).
mpz_class odd_part(const mpz_class& n, long* two_exponent = nullptr);
bool is_odd_prime(long p);

}  // namespace devissage
