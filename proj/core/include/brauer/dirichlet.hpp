#pragma once

// Dirichlet characters stored by their images on the canonical generators
// of (Z/M)^x. Values are exact roots of unity e(num/order).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace brauer {

// exp(2*pi*i * num/order), kept reduced with 0 <= num < order.
class RootOfUnity {
 public:
  RootOfUnity() = default;
  RootOfUnity(std::int64_t num, std::int64_t order);

  static RootOfUnity one() { return {}; }
  static RootOfUnity minus_one() { return {1, 2}; }

  std::int64_t num() const { return num_; }
  std::int64_t order() const { return order_; }
  bool is_one() const { return num_ == 0; }
  // +1 / -1 for values of order <= 2; throws otherwise.
  int sign() const;

  RootOfUnity inverse() const { return {-num_, order_}; }
  RootOfUnity pow(std::int64_t e) const;
  friend RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b);
  friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;

  std::string to_string() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t order_ = 1;
};

// One cyclic factor of (Z/M)^x: the generator (a residue mod M that is 1
// at every other prime), its order, and the image of the character.
struct CharacterComponent {
  std::int64_t p;           // prime of the factor
  int k;                    // exponent: the factor lives in (Z/p^k)^x
  std::int64_t local_gen;   // generator as a residue mod p^k (-1 or 5 at 2^k)
  std::int64_t global_gen;  // CRT lift mod M
  std::int64_t gen_order;
  RootOfUnity image;

  friend bool operator==(const CharacterComponent&, const CharacterComponent&) = default;
};

struct CanonicalGenerator {
  std::int64_t p;
  int k;
  std::int64_t local_gen;
  std::int64_t global_gen;
  std::int64_t order;
};

// Canonical generators of (Z/M)^x: per odd prime power the least positive
// integer that is a primitive root mod p^max(k,2); at 4 the class of -1;
// at 2^k, k >= 3, the pair (-1, 5).
std::vector<CanonicalGenerator> canonical_generators(std::int64_t modulus);

class DirichletCharacter {
 public:
  // Trivial character mod M.
  explicit DirichletCharacter(std::int64_t modulus = 1);

  static DirichletCharacter trivial(std::int64_t modulus) { return DirichletCharacter(modulus); }
  // Conrey label M.n (LMFDB numbering); the label is kept as metadata.
  static DirichletCharacter from_conrey(std::int64_t modulus, std::int64_t index);
  // Images on canonical_generators(modulus), in order.
  static DirichletCharacter from_images(std::int64_t modulus, const std::vector<RootOfUnity>& images);

  std::int64_t modulus() const { return modulus_; }
  const std::vector<CharacterComponent>& components() const { return components_; }
  std::vector<RootOfUnity> images() const;
  std::optional<std::int64_t> conrey_index() const { return conrey_; }

  // NotCoprime when gcd(a, M) != 1.
  RootOfUnity evaluate(std::int64_t a) const;
  std::int64_t conductor() const;
  std::int64_t order() const;
  bool is_trivial() const;
  bool is_ramified_at(std::int64_t p) const { return conductor() % p == 0; }
  RootOfUnity parity() const { return evaluate(-1); }

  // The character mod conductor() inducing this one.
  DirichletCharacter primitive() const;
  // Same character viewed modulo a multiple of its conductor.
  DirichletCharacter lift(std::int64_t new_modulus) const;

  friend DirichletCharacter operator*(const DirichletCharacter& a, const DirichletCharacter& b);
  // Equal as functions on integers coprime to both moduli, i.e. same primitive character.
  bool same_primitive(const DirichletCharacter& other) const;
  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.modulus_ == b.modulus_ && a.components_ == b.components_;
  }

  std::string label() const;

 private:
  std::int64_t modulus_ = 1;
  std::vector<CharacterComponent> components_;
  std::optional<std::int64_t> conrey_;
};

// chi = eps_p * eps' with eps_p of p-power modulus and eps' of modulus prime to p.
std::pair<DirichletCharacter, DirichletCharacter> p_decompose(const DirichletCharacter& chi, std::int64_t p);

// Restriction of chi, viewed as an idele class character, to Q_p^x:
//   chi([p^m u]) = chi'(p)^m * chi_p(u)^(-1),  u a p-adic unit given mod p^(C_p).
RootOfUnity idelic_local(const DirichletCharacter& chi, std::int64_t p, std::int64_t m, std::int64_t u);

// Discrete logarithm of a to base g in (Z/m)^x (brute force; m is small).
std::int64_t discrete_log(std::int64_t a, std::int64_t g, std::int64_t m, std::int64_t order);

}  // namespace brauer
