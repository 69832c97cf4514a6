#include "brauer/hilbert.hpp"

#include <set>

#include "brauer/errors.hpp"

namespace brauer {

std::string UniformizerChoice::tag(std::int64_t p) const {
  if (kind == Kind::RationalPrime) return "pi_v = " + std::to_string(p);
  if (unit == 1) return "pi_v = sqrt(" + std::to_string(p) + ")";
  return "pi_v = sqrt(" + std::to_string(p) + "*" + to_string(unit) + ")";
}

BigInt SymbolPlace::residue_cardinality() const {
  BigInt q;
  mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(f_v));
  return q;
}

ResidueField SymbolPlace::residue_field() const {
  if (residue_model) {
    if (residue_model->characteristic() != p || residue_model->degree() != f_v)
      throw Error(ErrorCode::InvalidPlace, "residue model does not match the place");
    return *residue_model;
  }
  return ResidueField::standard(p, f_v);
}

LocalElem local_from_rational(const Rational& a, const SymbolPlace& place) {
  if (a == 0) throw Error(ErrorCode::InvalidArgument, "local symbol of zero");
  if (place.is_real()) throw Error(ErrorCode::WrongCase, "no residue field at the real place");
  const std::int64_t p = place.p;
  const long alpha = val_p(a, p).value();
  Rational unit = unit_part(a, p);
  LocalElem out;
  if (place.e_v == 1) {
    if (place.uniformizer.kind != UniformizerChoice::Kind::RationalPrime)
      throw Error(ErrorCode::InvalidPlace, "sqrt uniformizer at an unramified place");
    out.valuation = alpha;
  } else if (place.e_v == 2) {
    if (place.uniformizer.kind != UniformizerChoice::Kind::SqrtOfPUnit)
      throw Error(ErrorCode::InvalidPlace, "ramified place needs a sqrt(p*unit) uniformizer");
    const Rational& w = place.uniformizer.unit;
    if (w == 0 || val_p(w, p).value() != 0)
      throw Error(ErrorCode::InvalidPlace, "uniformizer unit must be a p-adic unit");
    // p = pi^2 / w, so p^alpha u = pi^(2 alpha) * u * w^(-alpha).
    Rational wpow = 1;
    for (long i = 0; i < (alpha < 0 ? -alpha : alpha); ++i) wpow *= w;
    unit = alpha >= 0 ? Rational(unit / wpow) : Rational(unit * wpow);
    unit.canonicalize();
    out.valuation = 2 * alpha;
  } else {
    throw Error(ErrorCode::Unsupported, "ramification index > 2");
  }
  ResidueField field = place.residue_field();
  out.unit_residue = field.from_integer(reduce_unit(unit, p));
  return out;
}

int symbol_odd(const LocalElem& a, const LocalElem& b, const SymbolPlace& place) {
  if (place.is_real()) throw Error(ErrorCode::WrongCase, "real place: use symbol_real");
  if (place.p == 2) throw Error(ErrorCode::UnsupportedPrime, "p = 2: use symbol_two");
  ResidueField field = place.residue_field();
  const int ra = residue_symbol_fq(a.unit_residue, field);
  const int rb = residue_symbol_fq(b.unit_residue, field);
  if (ra == 0 || rb == 0) throw Error(ErrorCode::InvalidArgument, "unit part reduces to zero");
  const BigInt half = (place.residue_cardinality() - 1) / 2;
  const bool sign_odd = (a.valuation % 2 != 0) && (b.valuation % 2 != 0) && mpz_odd_p(half.get_mpz_t());
  int result = sign_odd ? -1 : 1;
  if (a.valuation % 2 != 0) result *= rb;
  if (b.valuation % 2 != 0) result *= ra;
  return result;
}

int symbol_odd(const Rational& a, const Rational& b, const SymbolPlace& place) {
  return symbol_odd(local_from_rational(a, place), local_from_rational(b, place), place);
}

namespace {

// u mod 8 for a 2-adic unit u.
std::int64_t mod8(const Rational& u) { return reduce_unit(u, 8); }

}  // namespace

int symbol_two(const Rational& a, const Rational& b) {
  if (a == 0 || b == 0) throw Error(ErrorCode::InvalidArgument, "Hilbert symbol of zero");
  const long alpha = val_p(a, 2).value();
  const long beta = val_p(b, 2).value();
  const std::int64_t u = mod8(unit_part(a, 2));
  const std::int64_t w = mod8(unit_part(b, 2));
  auto eps = [](std::int64_t x) { return ((x % 4) - 1) / 2; };
  auto omega = [](std::int64_t x) { return (x == 3 || x == 5) ? 1 : 0; };
  const long exponent = eps(u) * eps(w) + (alpha % 2 != 0 ? omega(w) : 0) + (beta % 2 != 0 ? omega(u) : 0);
  return exponent % 2 == 0 ? 1 : -1;
}

int symbol_real(const Rational& a, const Rational& b) {
  if (a == 0 || b == 0) throw Error(ErrorCode::InvalidArgument, "Hilbert symbol of zero");
  return (a < 0 && b < 0) ? -1 : 1;
}

int hilbert_symbol(const Rational& a, const Rational& b, std::int64_t p) {
  if (p == 0) return symbol_real(a, b);
  if (p == 2) return symbol_two(a, b);
  if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
  return symbol_odd(a, b, SymbolPlace::over_qp(p));
}

int hilbert_symbol_at(const Rational& a, const Rational& b, const SymbolPlace& place) {
  if (place.is_real()) return symbol_real(a, b);
  if (place.p != 2) return symbol_odd(a, b, place);
  const int s = symbol_two(a, b);
  return place.local_degree() % 2 == 0 ? 1 : s;
}

bool is_padic_square(const Rational& x, std::int64_t p) {
  if (x == 0) throw Error(ErrorCode::InvalidArgument, "square test of zero");
  if (p == 0) return x > 0;
  if (val_p(x, p).value() % 2 != 0) return false;
  Rational u = unit_part(x, p);
  if (p == 2) return mod8(u) == 1;
  return legendre(BigInt(reduce_unit(u, p)), p) == 1;
}

QuadraticExtensionType extension_type(const Rational& d, std::int64_t p) {
  if (is_padic_square(d, p)) throw Error(ErrorCode::NotQuadratic, to_string(d) + " is a square in Q_" + std::to_string(p));
  if (val_p(d, p).value() % 2 != 0) return QuadraticExtensionType::Ramified;
  if (p != 2) return QuadraticExtensionType::Unramified;
  return mod8(unit_part(d, 2)) % 4 == 1 ? QuadraticExtensionType::Unramified : QuadraticExtensionType::Ramified;
}

int discriminant_valuation(const Rational& d, std::int64_t p) {
  if (extension_type(d, p) == QuadraticExtensionType::Unramified) return 0;
  if (p != 2) return 1;
  return val_p(d, 2).value() % 2 != 0 ? 3 : 2;
}

int norm_symbol(const Rational& x, const Rational& d, std::int64_t p) {
  if (is_padic_square(d, p))
    throw Error(ErrorCode::NotQuadratic, to_string(d) + " is a square in Q_" + std::to_string(p));
  return hilbert_symbol(x, d, p);
}

int norm_symbol_at(const Rational& x, const Rational& d, const SymbolPlace& place) {
  if (place.local_degree() == 1 && is_padic_square(d, place.p))
    throw Error(ErrorCode::NotQuadratic, to_string(d) + " is a square in F_v");
  return hilbert_symbol_at(x, d, place);
}

int residue_unit_of_pi_squared(std::int64_t p, int f_v, PiNormCase) {
  if (p == 2 || p == 0) throw Error(ErrorCode::WrongCase, "needs an odd prime");
  if (p % 4 != 3) throw Error(ErrorCode::WrongCase, "KF_v|F_v ramified only occurs for p = 3 mod 4");
  // (-1/v) = (-1/p)^(f_v) and (-1/p) = -1.
  return f_v % 2 == 0 ? 1 : -1;
}

bool product_formula_check(const Rational& a, const Rational& b) {
  std::set<BigInt> primes{2};
  for (const Rational* x : {&a, &b}) {
    for (const BigInt* part : {&x->get_num(), &x->get_den()})
      if (abs(*part) > 1)
        for (const auto& q : prime_factors(*part)) primes.insert(q);
  }
  int product = symbol_real(a, b);
  for (const auto& q : primes) product *= hilbert_symbol(a, b, q.get_si());
  return product == 1;
}

}  // namespace brauer
