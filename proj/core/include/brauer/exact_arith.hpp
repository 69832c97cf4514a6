#pragma once

// Exact rational and quadratic-field arithmetic with p-adic valuations and
// quadratic residue symbols. Nothing in here touches floating point.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace brauer {

using BigInt = mpz_class;
// mpq_class keeps gcd(num, den) = 1 and den > 0 as long as it is built
// through make_rational / parse_rational (or arithmetic on canonical values).
using Rational = mpq_class;

Rational make_rational(const BigInt& num, const BigInt& den);
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& x);
std::string to_string(const BigInt& x);

// ---------------------------------------------------------------------------
// Small-integer number theory.

bool is_prime(std::int64_t n);
std::vector<std::int64_t> primes_up_to(std::int64_t bound);
std::int64_t next_prime(std::int64_t n);
std::int64_t ipow(std::int64_t base, int exp);
std::int64_t mod(std::int64_t a, std::int64_t m);
std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m);
std::int64_t powmod(std::int64_t base, std::int64_t exp, std::int64_t m);
std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t lcm64(std::int64_t a, std::int64_t b);

// Multiplicative order of a in (Z/m)^x; requires gcd(a, m) = 1.
std::int64_t multiplicative_order(std::int64_t a, std::int64_t m);

struct PrimePower {
  std::int64_t p;
  int k;
};
std::vector<PrimePower> factor(std::int64_t n);
// Prime factors of |n| by trial division; n != 0.
std::vector<BigInt> prime_factors(BigInt n);

// d with x = d * y^2, d squarefree (sign kept). x != 0.
BigInt squarefree_part(const BigInt& x);
bool is_squarefree(const BigInt& x);

// ---------------------------------------------------------------------------
// Valuations.

class Valuation {
 public:
  constexpr Valuation() = default;
  constexpr explicit Valuation(long v) : value_(v), infinite_(false) {}
  static constexpr Valuation infinity() {
    Valuation v;
    v.infinite_ = true;
    return v;
  }

  bool is_infinite() const { return infinite_; }
  long value() const;

  friend bool operator==(const Valuation&, const Valuation&) = default;
  friend bool operator<(const Valuation& a, const Valuation& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend Valuation operator+(const Valuation& a, const Valuation& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return Valuation(a.value_ + b.value_);
  }
  friend std::ostream& operator<<(std::ostream& os, const Valuation& v);

 private:
  long value_ = 0;
  bool infinite_ = false;
};

Valuation val_p(const BigInt& x, std::int64_t p);
Valuation val_p(const Rational& x, std::int64_t p);

// x = p^v * u with u a p-adic unit; returns u (x != 0).
Rational unit_part(const Rational& x, std::int64_t p);
// Reduction of a p-adic unit rational modulo m = p^k.
std::int64_t reduce_unit(const Rational& u, std::int64_t m);

// ---------------------------------------------------------------------------
// Q(sqrt d).

// Element a + b*sqrt(d). d = 0 denotes Q itself (then b = 0).
class QuadElem {
 public:
  QuadElem() = default;
  QuadElem(Rational a);
  QuadElem(BigInt d, Rational a, Rational b);

  static QuadElem rational(const Rational& a) { return QuadElem(a); }

  const BigInt& field_disc() const { return d_; }
  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_rational() const { return b_ == 0; }
  Rational to_rational() const;  // throws FieldMismatch when b != 0

  QuadElem conj() const;
  Rational norm() const;
  Rational trace() const;
  QuadElem inverse() const;

  friend QuadElem operator+(const QuadElem& x, const QuadElem& y);
  friend QuadElem operator-(const QuadElem& x, const QuadElem& y);
  friend QuadElem operator*(const QuadElem& x, const QuadElem& y);
  friend QuadElem operator/(const QuadElem& x, const QuadElem& y);
  QuadElem operator-() const;
  friend bool operator==(const QuadElem& x, const QuadElem& y);

  std::string to_string() const;

 private:
  BigInt d_ = 0;
  Rational a_ = 0;
  Rational b_ = 0;
};

std::ostream& operator<<(std::ostream& os, const QuadElem& x);

// A prime ideal of Q(sqrt d) (or the prime p itself when d = 0).
//   e = 1, f = 1 : split prime (d != 0) or the prime of Q (d = 0).
//                  For split primes `split_root` is the p-adic square root
//                  of d that sqrt(d) maps to, given mod p (odd p) or
//                  mod 4 (p = 2).
//   e = 1, f = 2 : inert prime.
//   e = 2, f = 1 : ramified prime.
struct PrimeIdealData {
  std::int64_t p = 2;
  int e = 1;
  int f = 1;
  BigInt field_disc = 0;
  std::optional<std::int64_t> split_root;

  friend bool operator==(const PrimeIdealData&, const PrimeIdealData&) = default;
};

// Throws InvalidPlace when the splitting data does not match d and p.
void validate_ideal(const PrimeIdealData& ideal);

// Valuation normalized so that a uniformizer at the ideal has valuation 1.
Valuation val_quad(const QuadElem& x, const PrimeIdealData& ideal);

// A p-adic square root of d modulo p^precision (d a p-adic square unit).
BigInt padic_sqrt(const BigInt& d, std::int64_t p, int precision, std::int64_t root_hint);

// ---------------------------------------------------------------------------
// Residue symbols.

// (a/p) for odd prime p: +1, -1, or 0 when p | a. p = 2 -> UnsupportedPrime.
int legendre(const BigInt& a, std::int64_t p);

// F_q = F_p[x]/(modulus) with q = p^f. Elements are coefficient vectors
// (constant term first) of length f.
class ResidueField {
 public:
  using Elem = std::vector<std::int64_t>;

  // Built-in model: f = 1, or f = 2 with modulus x^2 - n for the least
  // quadratic non-residue n mod p.
  static ResidueField standard(std::int64_t p, int f);
  // Explicit model; `modulus` is monic of degree f (constant term first,
  // leading 1 included) and must be irreducible over F_p.
  ResidueField(std::int64_t p, std::vector<std::int64_t> modulus);

  std::int64_t characteristic() const { return p_; }
  int degree() const { return static_cast<int>(modulus_.size()) - 1; }
  BigInt cardinality() const;
  const std::vector<std::int64_t>& modulus() const { return modulus_; }

  Elem from_integer(std::int64_t a) const;
  Elem reduce(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem pow(const Elem& a, const BigInt& e) const;
  bool is_zero(const Elem& a) const;
  bool is_one(const Elem& a) const;

  friend bool operator==(const ResidueField&, const ResidueField&) = default;

 private:
  std::int64_t p_;
  std::vector<std::int64_t> modulus_;
};

// +1 iff a is a nonzero square of F_q, -1 for a non-square, 0 for a = 0;
// computed as a^((q-1)/2). Even q -> UnsupportedPrime.
int residue_symbol_fq(const ResidueField::Elem& a, const ResidueField& field);

}  // namespace brauer
