#pragma once

// Quadratic Hilbert symbols.
//
// At a place v of residue characteristic p odd, with a = pi^v(a) a' and
// b = pi^v(b) b' for a fixed uniformizer pi,
//
//   (a, b)_v = (-1)^(v(a) v(b) (Nv-1)/2) * (b'/v)^v(a) * (a'/v)^v(b)
//
// where (./v) is the quadratic residue symbol of the residue field F_Nv.
// Over Q_2 the classical closed form in eps(u) = (u-1)/2 and
// omega(u) = (u^2-1)/8 is used.

#include <cstdint>
#include <optional>
#include <string>

#include "brauer/exact_arith.hpp"

namespace brauer {

// Which uniformizer pi_v the decomposition a = pi_v^v(a) a' refers to.
// Unramified places use pi_v = p. Ramified quadratic places use
// pi_v = sqrt(p * unit), so that pi_v^2 = p * unit.
struct UniformizerChoice {
  enum class Kind { RationalPrime, SqrtOfPUnit };
  Kind kind = Kind::RationalPrime;
  Rational unit = 1;

  std::string tag(std::int64_t p) const;
  friend bool operator==(const UniformizerChoice&, const UniformizerChoice&) = default;
};

struct SymbolPlace {
  std::int64_t p = 2;  // 0 encodes the real place
  int e_v = 1;
  int f_v = 1;
  std::optional<ResidueField> residue_model;
  UniformizerChoice uniformizer;

  static SymbolPlace real() { return SymbolPlace{0, 1, 1, std::nullopt, {}}; }
  static SymbolPlace over_qp(std::int64_t p) { return SymbolPlace{p, 1, 1, std::nullopt, {}}; }

  bool is_real() const { return p == 0; }
  int local_degree() const { return e_v * f_v; }
  BigInt residue_cardinality() const;
  // The supplied model, or the built-in one for f_v <= 2.
  ResidueField residue_field() const;
};

// A nonzero element of F_v^x as (valuation, residue of the unit part).
struct LocalElem {
  long valuation = 0;
  ResidueField::Elem unit_residue;
};

// Decomposes a nonzero rational relative to the place's uniformizer.
LocalElem local_from_rational(const Rational& a, const SymbolPlace& place);

// The odd-residue-characteristic symbol from valuations and unit residues.
// p = 2 -> UnsupportedPrime (use symbol_two); real place -> WrongCase.
int symbol_odd(const LocalElem& a, const LocalElem& b, const SymbolPlace& place);
int symbol_odd(const Rational& a, const Rational& b, const SymbolPlace& place);

// (a, b) over Q_2.
int symbol_two(const Rational& a, const Rational& b);

// (a, b) over R: -1 iff both negative.
int symbol_real(const Rational& a, const Rational& b);

// (a, b)_p over Q_p for p = 0 (real), 2 or odd.
int hilbert_symbol(const Rational& a, const Rational& b, std::int64_t p);

// (a, b)_v for rational a, b at a place v of a field F with [F_v:Q_p] = e_v f_v.
// Odd p goes through the residue-symbol formula on F_v; over 2 the symbol
// of rational arguments is (a, b)_2^[F_v:Q_2].
int hilbert_symbol_at(const Rational& a, const Rational& b, const SymbolPlace& place);

// Whether x != 0 is a square in Q_p (p = 0: in R).
bool is_padic_square(const Rational& x, std::int64_t p);

// Class of Q_p(sqrt d) for d not a p-adic square.
enum class QuadraticExtensionType { Unramified, Ramified };
QuadraticExtensionType extension_type(const Rational& d, std::int64_t p);
// Valuation of the discriminant of Q_p(sqrt d): 0, 1 (odd p) or 0, 2, 3 (p = 2).
int discriminant_valuation(const Rational& d, std::int64_t p);

// +1 iff x is a norm from Q_p(sqrt d) (equivalently (x, d)_p = 1).
// NotQuadratic when d is a p-adic square.
int norm_symbol(const Rational& x, const Rational& d, std::int64_t p);
// Same over F_v with KF_v = F_v(sqrt d), rational arguments.
int norm_symbol_at(const Rational& x, const Rational& d, const SymbolPlace& place);

// Whether p is a norm from the ramified quadratic extension K|Q_p, i.e. (p, K|Q_p).
enum class PiNormCase { PIsNorm, PIsNotNorm };

// Residue symbol of the unit part of pi^2 for p = 3 mod 4 with KF_v|F_v
// ramified: equals (-1/v) = (-1/p)^(f_v) in both norm cases.
// p = 1 mod 4 -> WrongCase.
int residue_unit_of_pi_squared(std::int64_t p, int f_v, PiNormCase norm_case);

// Product of (a, b)_v over v = infinity, 2 and every odd prime dividing ab is +1.
bool product_formula_check(const Rational& a, const Rational& b);

}  // namespace brauer
