#include "brauer/exact_arith.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "brauer/errors.hpp"

namespace brauer {

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  auto is_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    return std::all_of(t.begin() + static_cast<long>(i), t.end(),
                       [](unsigned char c) { return std::isdigit(c); });
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (num.size() > 1 && num[0] == '+') num.erase(0, 1);
  if (!is_int(num) || !is_int(den) || den[0] == '-')
    throw Error(ErrorCode::ParseError, "not a rational: '" + std::string(text) + "'");
  BigInt n(num), d(den);
  if (d == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
  return make_rational(n, d);
}

std::string to_string(const BigInt& x) { return x.get_str(); }

std::string to_string(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

// ---------------------------------------------------------------------------

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  if (n < (std::int64_t{1} << 40)) {
    for (std::int64_t i = 5; i * i <= n; i += 6)
      if (n % i == 0 || n % (i + 2) == 0) return false;
    return true;
  }
  BigInt z(std::to_string(n));
  return mpz_probab_prime_p(z.get_mpz_t(), 40) != 0;
}

std::vector<std::int64_t> primes_up_to(std::int64_t bound) {
  std::vector<std::int64_t> out;
  if (bound < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
  for (std::int64_t i = 2; i <= bound; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    out.push_back(i);
    for (std::int64_t j = i * i; j <= bound; j += i) composite[static_cast<std::size_t>(j)] = true;
  }
  return out;
}

std::int64_t next_prime(std::int64_t n) {
  std::int64_t q = std::max<std::int64_t>(2, n + 1);
  while (!is_prime(q)) ++q;
  return q;
}

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<__int128>(mod(a, m)) * mod(b, m)) % m);
}

std::int64_t powmod(std::int64_t base, std::int64_t exp, std::int64_t m) {
  if (m == 1) return 0;
  std::int64_t result = 1;
  base = mod(base, m);
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return a / gcd64(a, b) * b; }

std::vector<PrimePower> factor(std::int64_t n) {
  std::vector<PrimePower> out;
  if (n < 0) n = -n;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    out.push_back({p, k});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

std::int64_t multiplicative_order(std::int64_t a, std::int64_t m) {
  if (m == 1) return 1;
  if (gcd64(a, m) != 1) throw Error(ErrorCode::NotCoprime, "order of non-unit");
  std::int64_t phi = 1;
  for (auto [p, k] : factor(m)) phi *= (p - 1) * ipow(p, k - 1);
  std::int64_t order = phi;
  for (auto [q, k] : factor(phi)) {
    (void)k;
    while (order % q == 0 && powmod(a, order / q, m) == 1) order /= q;
  }
  return order;
}

std::vector<BigInt> prime_factors(BigInt n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "prime_factors(0)");
  if (n < 0) n = -n;
  std::vector<BigInt> out;
  for (BigInt p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

BigInt squarefree_part(const BigInt& x) {
  if (x == 0) throw Error(ErrorCode::InvalidArgument, "squarefree_part(0)");
  BigInt n = abs(x);
  BigInt result = 1;
  for (const BigInt& p : prime_factors(n)) {
    int k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    if (k % 2 == 1) result *= p;
  }
  return x < 0 ? BigInt(-result) : result;
}

bool is_squarefree(const BigInt& x) { return x != 0 && squarefree_part(x) == x; }

// ---------------------------------------------------------------------------

long Valuation::value() const {
  if (infinite_) throw Error(ErrorCode::ZeroCoefficient, "valuation of zero is infinite");
  return value_;
}

std::ostream& operator<<(std::ostream& os, const Valuation& v) {
  if (v.is_infinite()) return os << "inf";
  return os << v.value();
}

Valuation val_p(const BigInt& x, std::int64_t p) {
  if (x == 0) return Valuation::infinity();
  BigInt n = x;
  BigInt pp(std::to_string(p));
  long v = 0;
  while (mpz_divisible_p(n.get_mpz_t(), pp.get_mpz_t())) {
    mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t());
    ++v;
  }
  return Valuation(v);
}

Valuation val_p(const Rational& x, std::int64_t p) {
  if (x == 0) return Valuation::infinity();
  return Valuation(val_p(x.get_num(), p).value() - val_p(x.get_den(), p).value());
}

Rational unit_part(const Rational& x, std::int64_t p) {
  long v = val_p(x, p).value();
  BigInt pv;
  mpz_ui_pow_ui(pv.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(v < 0 ? -v : v));
  Rational r = v >= 0 ? Rational(x / pv) : Rational(x * pv);
  r.canonicalize();
  return r;
}

std::int64_t reduce_unit(const Rational& u, std::int64_t m) {
  BigInt mm(std::to_string(m));
  BigInt num = u.get_num() % mm;
  BigInt den = u.get_den() % mm;
  if (num < 0) num += mm;
  if (den < 0) den += mm;
  BigInt inv;
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mm.get_mpz_t()) == 0)
    throw Error(ErrorCode::NotCoprime, "denominator not invertible modulo " + std::to_string(m));
  BigInt r = (num * inv) % mm;
  return r.get_si();
}

// ---------------------------------------------------------------------------

QuadElem::QuadElem(Rational a) : d_(0), a_(std::move(a)), b_(0) {}

QuadElem::QuadElem(BigInt d, Rational a, Rational b) : d_(std::move(d)), a_(std::move(a)), b_(std::move(b)) {
  if (d_ == 0) {
    if (b_ != 0) throw Error(ErrorCode::FieldMismatch, "sqrt coordinate on Q");
    return;
  }
  if (d_ == 1 || !is_squarefree(d_))
    throw Error(ErrorCode::InvalidArgument, "field discriminant must be squarefree and != 1");
}

namespace {

BigInt common_field(const QuadElem& x, const QuadElem& y) {
  if (x.field_disc() == y.field_disc()) return x.field_disc();
  if (x.field_disc() == 0 && x.is_rational()) return y.field_disc();
  if (y.field_disc() == 0 && y.is_rational()) return x.field_disc();
  if (x.is_rational() && y.is_rational()) return 0;
  throw Error(ErrorCode::FieldMismatch, "elements of Q(sqrt " + x.field_disc().get_str() + ") and Q(sqrt " +
                                            y.field_disc().get_str() + ")");
}

}  // namespace

Rational QuadElem::to_rational() const {
  if (b_ != 0) throw Error(ErrorCode::FieldMismatch, to_string() + " is not rational");
  return a_;
}

QuadElem QuadElem::conj() const { return d_ == 0 ? *this : QuadElem(d_, a_, -b_); }

Rational QuadElem::norm() const {
  Rational n = a_ * a_ - Rational(d_) * b_ * b_;
  n.canonicalize();
  return n;
}

Rational QuadElem::trace() const { return 2 * a_; }

QuadElem QuadElem::inverse() const {
  if (is_zero()) throw Error(ErrorCode::InvalidArgument, "inverse of zero");
  Rational n = norm();
  if (d_ == 0) return QuadElem(Rational(1 / a_));
  return QuadElem(d_, Rational(a_ / n), Rational(-b_ / n));
}

QuadElem operator+(const QuadElem& x, const QuadElem& y) {
  BigInt d = common_field(x, y);
  if (d == 0) return QuadElem(Rational(x.a_ + y.a_));
  return QuadElem(d, x.a_ + y.a_, x.b_ + y.b_);
}

QuadElem QuadElem::operator-() const { return d_ == 0 ? QuadElem(Rational(-a_)) : QuadElem(d_, -a_, -b_); }

QuadElem operator-(const QuadElem& x, const QuadElem& y) { return x + (-y); }

QuadElem operator*(const QuadElem& x, const QuadElem& y) {
  BigInt d = common_field(x, y);
  if (d == 0) return QuadElem(Rational(x.a_ * y.a_));
  return QuadElem(d, x.a_ * y.a_ + Rational(d) * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_);
}

QuadElem operator/(const QuadElem& x, const QuadElem& y) { return x * y.inverse(); }

bool operator==(const QuadElem& x, const QuadElem& y) {
  if (x.a_ != y.a_ || x.b_ != y.b_) return false;
  return x.d_ == y.d_ || x.b_ == 0;
}

std::string QuadElem::to_string() const {
  if (b_ == 0) return brauer::to_string(a_);
  std::ostringstream os;
  std::string root = "sqrt(" + d_.get_str() + ")";
  if (a_ != 0) os << brauer::to_string(a_) << (b_ > 0 ? " + " : " - ");
  else if (b_ < 0) os << "-";
  Rational mag = abs(b_);
  if (mag != 1) os << brauer::to_string(mag) << "*";
  os << root;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const QuadElem& x) { return os << x.to_string(); }

// ---------------------------------------------------------------------------

void validate_ideal(const PrimeIdealData& ideal) {
  const auto& d = ideal.field_disc;
  const std::int64_t p = ideal.p;
  if (!is_prime(p)) throw Error(ErrorCode::InvalidPlace, "not a prime: " + std::to_string(p));
  if (ideal.e < 1 || ideal.f < 1) throw Error(ErrorCode::InvalidPlace, "e and f must be >= 1");
  if (d == 0) {
    if (ideal.e != 1 || ideal.f != 1) throw Error(ErrorCode::InvalidPlace, "a prime of Q has e = f = 1");
    return;
  }
  if (ideal.e * ideal.f > 2) throw Error(ErrorCode::InvalidPlace, "e*f > 2 in a quadratic field");
  // Decomposition type of p in Q(sqrt d).
  int kind;  // 0 split, 1 inert, 2 ramified
  if (p == 2) {
    BigInt r8 = d % 8;
    if (r8 < 0) r8 += 8;
    const long r = r8.get_si();
    if (r % 4 == 2 || r % 4 == 3) kind = 2;
    else kind = (r == 1) ? 0 : 1;
  } else {
    int l = legendre(d, p);
    kind = l == 0 ? 2 : (l == 1 ? 0 : 1);
  }
  const int expected_e = kind == 2 ? 2 : 1;
  const int expected_f = kind == 1 ? 2 : 1;
  if (ideal.e != expected_e || ideal.f != expected_f)
    throw Error(ErrorCode::InvalidPlace, "p = " + std::to_string(p) + " has e = " + std::to_string(expected_e) +
                                             ", f = " + std::to_string(expected_f) + " in Q(sqrt " + d.get_str() +
                                             ")");
  if (kind == 0) {
    if (!ideal.split_root) throw Error(ErrorCode::InvalidPlace, "split prime needs split_root");
    const std::int64_t m = p == 2 ? 4 : p;
    const std::int64_t r = mod(*ideal.split_root, m);
    if (p == 2 ? (r % 2 == 0) : (mulmod(r, r, p) != reduce_unit(Rational(d), p)))
      throw Error(ErrorCode::InvalidPlace, "split_root is not a square root of d");
  }
}

BigInt padic_sqrt(const BigInt& d, std::int64_t p, int precision, std::int64_t root_hint) {
  BigInt P(std::to_string(p));
  if (p == 2) {
    BigInt dm = d % 8;
    if (dm < 0) dm += 8;
    if (dm != 1) throw Error(ErrorCode::NotQuadratic, "d is not a 2-adic unit square");
    BigInt r = mod(root_hint, 4) == 3 ? 3 : 1;
    BigInt pow2 = 8;  // r^2 = d mod pow2
    for (int m = 3; m <= precision + 1; ++m) {
      BigInt next = pow2 * 2;
      BigInt diff = r * r - d;
      if (diff % next != 0) r += pow2 / 2;
      pow2 = next;
    }
    BigInt modulus;
    mpz_ui_pow_ui(modulus.get_mpz_t(), 2, static_cast<unsigned long>(precision));
    BigInt out = r % modulus;
    if (out < 0) out += modulus;
    return out;
  }
  BigInt r = mod(root_hint, p);
  BigInt dd = d % P;
  if (dd < 0) dd += P;
  if ((r * r - dd) % P != 0) throw Error(ErrorCode::NotQuadratic, "root hint is not a square root mod p");
  BigInt pk = P;
  for (int k = 1; k < precision; ++k) {
    BigInt next = pk * P;
    BigInt diff = d - r * r;  // divisible by pk
    BigInt q = diff / pk;
    q %= P;
    if (q < 0) q += P;
    BigInt inv, two_r = (2 * r) % P;
    mpz_invert(inv.get_mpz_t(), two_r.get_mpz_t(), P.get_mpz_t());
    BigInt t = (q * inv) % P;
    r = (r + t * pk) % next;
    pk = next;
  }
  if (r < 0) r += pk;
  return r;
}

Valuation val_quad(const QuadElem& x, const PrimeIdealData& ideal) {
  validate_ideal(ideal);
  if (x.is_zero()) return Valuation::infinity();
  if (ideal.field_disc == 0 || x.is_rational()) {
    if (x.is_rational()) return Valuation(ideal.e * val_p(x.a(), ideal.p).value());
    throw Error(ErrorCode::FieldMismatch, "element outside Q at a prime of Q");
  }
  if (x.field_disc() != ideal.field_disc)
    throw Error(ErrorCode::FieldMismatch, "element of Q(sqrt " + x.field_disc().get_str() +
                                              ") at a prime of Q(sqrt " + ideal.field_disc.get_str() + ")");
  const long vn = val_p(x.norm(), ideal.p).value();
  if (ideal.f == 2) return Valuation(vn / 2);
  if (ideal.e == 2) return Valuation(vn);
  // Split: embed into Q_p through the chosen square root.
  BigInt den = lcm(x.a().get_den(), x.b().get_den());
  BigInt A = x.a().get_num() * (den / x.a().get_den());
  BigInt B = x.b().get_num() * (den / x.b().get_den());
  const long shift = val_p(den, ideal.p).value();
  const long vn_int = val_p(Rational(A * A - ideal.field_disc * B * B), ideal.p).value();
  const int precision = static_cast<int>(vn_int) + 2;
  BigInt r = padic_sqrt(ideal.field_disc, ideal.p, precision, *ideal.split_root);
  BigInt image = A + B * r;
  BigInt modulus;
  mpz_ui_pow_ui(modulus.get_mpz_t(), static_cast<unsigned long>(ideal.p), static_cast<unsigned long>(precision));
  image %= modulus;
  if (image == 0) throw Error(ErrorCode::InvalidArgument, "p-adic precision exhausted");
  return Valuation(val_p(image, ideal.p).value() - shift);
}

// ---------------------------------------------------------------------------

int legendre(const BigInt& a, std::int64_t p) {
  if (p == 2) throw Error(ErrorCode::UnsupportedPrime, "legendre symbol at p = 2");
  if (p < 2 || !is_prime(p)) throw Error(ErrorCode::InvalidArgument, "legendre needs an odd prime");
  BigInt P(std::to_string(p));
  BigInt r = a % P;
  if (r < 0) r += P;
  return mpz_legendre(r.get_mpz_t(), P.get_mpz_t());
}

namespace {

bool poly_divides(const std::vector<std::int64_t>& divisor, std::vector<std::int64_t> dividend, std::int64_t p) {
  // divisor monic.
  const std::size_t dd = divisor.size() - 1;
  for (std::size_t i = dividend.size(); i-- > dd;) {
    std::int64_t c = mod(dividend[i], p);
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dd; ++j) dividend[i - dd + j] = mod(dividend[i - dd + j] - c * divisor[j], p);
  }
  for (std::size_t i = 0; i < dd && i < dividend.size(); ++i)
    if (mod(dividend[i], p) != 0) return false;
  return true;
}

bool is_irreducible(const std::vector<std::int64_t>& g, std::int64_t p) {
  const int deg = static_cast<int>(g.size()) - 1;
  for (int k = 1; 2 * k <= deg; ++k) {
    // Enumerate every monic polynomial of degree k.
    std::int64_t count = ipow(p, k);
    for (std::int64_t idx = 0; idx < count; ++idx) {
      std::vector<std::int64_t> h(static_cast<std::size_t>(k) + 1, 0);
      std::int64_t t = idx;
      for (int i = 0; i < k; ++i) {
        h[static_cast<std::size_t>(i)] = t % p;
        t /= p;
      }
      h[static_cast<std::size_t>(k)] = 1;
      if (poly_divides(h, g, p)) return false;
    }
  }
  return true;
}

}  // namespace

ResidueField ResidueField::standard(std::int64_t p, int f) {
  if (f == 1) return ResidueField(p, {0, 1});
  if (f == 2) {
    if (p == 2) return ResidueField(2, {1, 1, 1});
    std::int64_t n = 2;
    while (legendre(n, p) != -1) ++n;
    return ResidueField(p, {mod(-n, p), 0, 1});
  }
  throw Error(ErrorCode::Unsupported, "no built-in residue field model for f = " + std::to_string(f));
}

ResidueField::ResidueField(std::int64_t p, std::vector<std::int64_t> modulus) : p_(p), modulus_(std::move(modulus)) {
  if (!is_prime(p_)) throw Error(ErrorCode::InvalidArgument, "residue characteristic must be prime");
  if (modulus_.size() < 2 || mod(modulus_.back(), p_) != 1)
    throw Error(ErrorCode::InvalidArgument, "residue field modulus must be monic of degree >= 1");
  for (auto& c : modulus_) c = mod(c, p_);
  if (!is_irreducible(modulus_, p_)) throw Error(ErrorCode::InvalidArgument, "residue field modulus is reducible");
}

BigInt ResidueField::cardinality() const {
  BigInt q;
  mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(p_), static_cast<unsigned long>(degree()));
  return q;
}

ResidueField::Elem ResidueField::from_integer(std::int64_t a) const {
  Elem e(static_cast<std::size_t>(degree()), 0);
  e[0] = mod(a, p_);
  return e;
}

ResidueField::Elem ResidueField::reduce(const Elem& a) const {
  std::vector<std::int64_t> r(a.begin(), a.end());
  for (auto& c : r) c = mod(c, p_);
  const std::size_t deg = static_cast<std::size_t>(degree());
  for (std::size_t i = r.size(); i-- > deg;) {
    std::int64_t c = r[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= deg; ++j) r[i - deg + j] = mod(r[i - deg + j] - mulmod(c, modulus_[j], p_), p_);
  }
  r.resize(deg, 0);
  return r;
}

ResidueField::Elem ResidueField::mul(const Elem& a, const Elem& b) const {
  std::vector<std::int64_t> prod(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = mod(prod[i + j] + mulmod(a[i], b[j], p_), p_);
  return reduce(prod);
}

ResidueField::Elem ResidueField::pow(const Elem& a, const BigInt& e) const {
  Elem result = from_integer(1);
  Elem base = reduce(a);
  BigInt n = e;
  while (n > 0) {
    if (mpz_odd_p(n.get_mpz_t())) result = mul(result, base);
    base = mul(base, base);
    n /= 2;
  }
  return result;
}

bool ResidueField::is_zero(const Elem& a) const {
  auto r = reduce(a);
  return std::all_of(r.begin(), r.end(), [](std::int64_t c) { return c == 0; });
}

bool ResidueField::is_one(const Elem& a) const { return reduce(a) == from_integer(1); }

int residue_symbol_fq(const ResidueField::Elem& a, const ResidueField& field) {
  if (field.characteristic() == 2) throw Error(ErrorCode::UnsupportedPrime, "residue symbol in characteristic 2");
  if (field.is_zero(a)) return 0;
  BigInt e = (field.cardinality() - 1) / 2;
  auto r = field.pow(a, e);
  if (field.is_one(r)) return 1;
  if (r == field.from_integer(-1)) return -1;
  throw Error(ErrorCode::InvalidArgument, "residue field model is not a field");
}

}  // namespace brauer
