#pragma once

// Brute-force reference implementations used to check the library. Nothing
// here calls into the code under test except for plain data types.

#include <cstdint>
#include <filesystem>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "brauer/exact_arith.hpp"

namespace oracle {

inline std::int64_t pmod(std::int64_t a, std::int64_t m) {
  a %= m;
  return a < 0 ? a + m : a;
}

inline bool naive_is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Legendre symbol by listing the squares mod p.
inline int legendre(std::int64_t a, std::int64_t p) {
  a = pmod(a, p);
  if (a == 0) return 0;
  for (std::int64_t x = 1; x < p; ++x)
    if (x * x % p == a) return 1;
  return -1;
}

// Integer representative of a nonzero rational in the same square class,
// with every even power of p removed (so v_p is 0 or 1).
inline std::int64_t square_class_rep(const brauer::Rational& q, std::int64_t p) {
  brauer::BigInt n = q.get_num() * q.get_den();
  brauer::BigInt pp = p * p;
  while (n % pp == 0) n /= pp;
  return n.get_si();
}

inline const std::vector<char>& square_table(std::int64_t m) {
  static std::map<std::int64_t, std::vector<char>> cache;
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  std::vector<char> t(static_cast<std::size_t>(m), 0);
  for (std::int64_t z = 0; z < m; ++z) t[static_cast<std::size_t>(z * z % m)] = 1;
  return cache.emplace(m, std::move(t)).first->second;
}

// Does z^2 = a x^2 + b y^2 have a solution mod m = p^3 (odd p) or 2^6 with
// (x, y, z) not all divisible by p? For a, b with v_p <= 1 this is the same
// as solvability over Q_p, i.e. (a, b)_p = +1.
inline bool conic_solvable(const brauer::Rational& a, const brauer::Rational& b, std::int64_t p) {
  const std::int64_t A0 = square_class_rep(a, p);
  const std::int64_t B0 = square_class_rep(b, p);
  const std::int64_t m = p == 2 ? 64 : p * p * p;
  const std::int64_t A = pmod(A0, m), B = pmod(B0, m);
  const std::vector<char>& is_square = square_table(m);
  // x a unit: scale so x = 1.
  for (std::int64_t y = 0; y < m; ++y)
    if (is_square[static_cast<std::size_t>((A + B * (y * y % m)) % m)]) return true;
  // x divisible by p, y a unit: scale so y = 1.
  for (std::int64_t x = 0; x < m; x += p)
    if (is_square[static_cast<std::size_t>((A * (x * x % m) + B) % m)]) return true;
  // x, y both divisible by p forces p | z: not primitive.
  return false;
}

inline int hilbert_by_conic(const brauer::Rational& a, const brauer::Rational& b, std::int64_t p) {
  if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
  return conic_solvable(a, b, p) ? 1 : -1;
}

// Is the unit x a square in F_q, q = p^2, modelled as F_p[t]/(t^2 - n)?
// Enumerates every element of F_q.
inline bool is_square_fp2(std::int64_t c0, std::int64_t c1, std::int64_t p, std::int64_t n) {
  for (std::int64_t u = 0; u < p; ++u)
    for (std::int64_t w = 0; w < p; ++w) {
      // (u + w t)^2 = u^2 + n w^2 + 2 u w t
      if (pmod(u * u + n * w * w, p) == pmod(c0, p) && pmod(2 * u * w, p) == pmod(c1, p)) return true;
    }
  return false;
}

// Multiplicative order of a mod m by repeated multiplication.
inline std::int64_t order_mod(std::int64_t a, std::int64_t m) {
  if (m == 1) return 1;
  std::int64_t x = pmod(a, m), k = 1;
  while (x != 1 % m) {
    x = x * pmod(a, m) % m;
    ++k;
    if (k > m) return 0;
  }
  return k;
}

inline std::filesystem::path fixture_dir() {
#ifdef BRAUER_FIXTURE_DIR
  return BRAUER_FIXTURE_DIR;
#else
  return "fixtures";
#endif
}

}  // namespace oracle
