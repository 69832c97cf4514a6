#include "brauer/dirichlet.hpp"

#include <map>
#include <sstream>

#include "brauer/errors.hpp"
#include "brauer/exact_arith.hpp"

namespace brauer {

RootOfUnity::RootOfUnity(std::int64_t num, std::int64_t order) {
  if (order <= 0) throw Error(ErrorCode::InvalidArgument, "root of unity needs a positive order");
  num = mod(num, order);
  std::int64_t g = gcd64(num, order);
  if (num == 0) g = order;
  num_ = num / g;
  order_ = order / g;
}

int RootOfUnity::sign() const {
  if (order_ == 1) return 1;
  if (order_ == 2) return -1;
  throw Error(ErrorCode::FieldMismatch, "root of unity " + to_string() + " is not +-1");
}

RootOfUnity RootOfUnity::pow(std::int64_t e) const {
  return {static_cast<std::int64_t>((static_cast<__int128>(num_) * mod(e, order_)) % order_), order_};
}

RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b) {
  std::int64_t order = lcm64(a.order_, b.order_);
  return {a.num_ * (order / a.order_) + b.num_ * (order / b.order_), order};
}

std::string RootOfUnity::to_string() const {
  if (order_ == 1) return "1";
  if (order_ == 2) return "-1";
  return "e(" + std::to_string(num_) + "/" + std::to_string(order_) + ")";
}

// ---------------------------------------------------------------------------

namespace {

std::int64_t crt_lift(std::int64_t local, std::int64_t pk, std::int64_t modulus) {
  // x = local mod pk, x = 1 mod modulus/pk.
  std::int64_t rest = modulus / pk;
  for (std::int64_t x = mod(local, pk); x < modulus; x += pk)
    if (mod(x, rest) == mod(1, rest)) return rest == 1 ? mod(local, pk) : x;
  throw Error(ErrorCode::InvalidArgument, "CRT lift failed");
}

std::int64_t least_primitive_root(std::int64_t p, int k) {
  const std::int64_t m = ipow(p, k < 2 ? 2 : k);
  const std::int64_t phi = (p - 1) * (m / p);
  for (std::int64_t g = 2; g < m; ++g)
    if (gcd64(g, p) == 1 && multiplicative_order(g, m) == phi) return g;
  throw Error(ErrorCode::InvalidArgument, "no primitive root");
}

}  // namespace

std::int64_t discrete_log(std::int64_t a, std::int64_t g, std::int64_t m, std::int64_t order) {
  a = mod(a, m);
  std::int64_t x = 1 % m;
  for (std::int64_t e = 0; e < order; ++e) {
    if (x == a) return e;
    x = mulmod(x, g, m);
  }
  throw Error(ErrorCode::InvalidArgument, "element outside the cyclic subgroup");
}

std::vector<CanonicalGenerator> canonical_generators(std::int64_t modulus) {
  if (modulus < 1) throw Error(ErrorCode::InvalidArgument, "modulus must be positive");
  std::vector<CanonicalGenerator> gens;
  for (auto [p, k] : factor(modulus)) {
    const std::int64_t pk = ipow(p, k);
    if (p == 2) {
      if (k == 1) continue;
      gens.push_back({2, k, pk - 1, crt_lift(pk - 1, pk, modulus), 2});
      if (k >= 3) gens.push_back({2, k, 5, crt_lift(5, pk, modulus), pk / 4});
      continue;
    }
    const std::int64_t g = least_primitive_root(p, k);
    gens.push_back({p, k, g % pk, crt_lift(g, pk, modulus), (p - 1) * (pk / p)});
  }
  return gens;
}

DirichletCharacter::DirichletCharacter(std::int64_t modulus) : modulus_(modulus) {
  for (const auto& g : canonical_generators(modulus))
    components_.push_back({g.p, g.k, g.local_gen, g.global_gen, g.order, RootOfUnity::one()});
}

DirichletCharacter DirichletCharacter::from_images(std::int64_t modulus, const std::vector<RootOfUnity>& images) {
  DirichletCharacter chi(modulus);
  if (images.size() != chi.components_.size())
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(chi.components_.size()) +
                                                " generator images for modulus " + std::to_string(modulus));
  for (std::size_t i = 0; i < images.size(); ++i) {
    auto& c = chi.components_[i];
    if (c.gen_order % images[i].order() != 0)
      throw Error(ErrorCode::InvalidArgument, "image " + images[i].to_string() + " has order not dividing " +
                                                  std::to_string(c.gen_order));
    c.image = images[i];
  }
  return chi;
}

DirichletCharacter DirichletCharacter::from_conrey(std::int64_t modulus, std::int64_t index) {
  if (gcd64(index, modulus) != 1) throw Error(ErrorCode::NotCoprime, "Conrey index must be coprime to the modulus");
  DirichletCharacter chi(modulus);
  for (auto& c : chi.components_) {
    const std::int64_t pk = ipow(c.p, c.k);
    const std::int64_t n = mod(index, pk);
    if (c.p != 2) {
      // chi_n(g) = e(log_g(n) / phi(p^k)).
      c.image = RootOfUnity(discrete_log(n, c.local_gen, pk, c.gen_order), c.gen_order);
    } else if (c.local_gen == pk - 1) {
      // Sign part: chi_n(-1) = -1 iff n = 3 mod 4.
      c.image = (n % 4 == 3) ? RootOfUnity::minus_one() : RootOfUnity::one();
    } else {
      // n = +-5^a mod 2^k; chi_n(5) = e(a / 2^(k-2)).
      std::int64_t npos = (n % 4 == 3) ? mod(-n, pk) : n;
      c.image = RootOfUnity(discrete_log(npos, 5, pk, c.gen_order), c.gen_order);
    }
  }
  chi.conrey_ = mod(index, modulus);
  return chi;
}

std::vector<RootOfUnity> DirichletCharacter::images() const {
  std::vector<RootOfUnity> out;
  for (const auto& c : components_) out.push_back(c.image);
  return out;
}

RootOfUnity DirichletCharacter::evaluate(std::int64_t a) const {
  if (gcd64(a, modulus_) != 1)
    throw Error(ErrorCode::NotCoprime, "chi(" + std::to_string(a) + ") with modulus " + std::to_string(modulus_));
  RootOfUnity value;
  for (const auto& c : components_) {
    const std::int64_t pk = ipow(c.p, c.k);
    std::int64_t x = mod(a, pk);
    if (c.p == 2) {
      if (c.local_gen == pk - 1) {
        if (x % 4 == 3) value = value * c.image;
        continue;
      }
      if (x % 4 == 3) x = mod(-x, pk);
    }
    value = value * c.image.pow(discrete_log(x, c.local_gen, pk, c.gen_order));
  }
  return value;
}

std::int64_t DirichletCharacter::conductor() const {
  std::map<std::int64_t, int> exponent;
  for (const auto& c : components_) {
    if (c.image.is_one()) continue;
    int e;
    if (c.p == 2) {
      if (c.local_gen != ipow(2, c.k) - 1) {
        // image of 5 of order 2^j gives conductor 2^(j+2).
        int j = 0;
        for (std::int64_t o = c.image.order(); o > 1; o /= 2) ++j;
        e = j + 2;
      } else {
        e = 2;
      }
    } else {
      // Trivial on 1 + p^e Z iff image^(phi(p^e)) = 1.
      e = c.k;
      for (int t = 1; t <= c.k; ++t) {
        if (c.image.pow((c.p - 1) * ipow(c.p, t - 1)).is_one()) {
          e = t;
          break;
        }
      }
    }
    exponent[c.p] = std::max(exponent[c.p], e);
  }
  std::int64_t cond = 1;
  for (auto [p, e] : exponent) cond *= ipow(p, e);
  return cond;
}

std::int64_t DirichletCharacter::order() const {
  std::int64_t o = 1;
  for (const auto& c : components_) o = lcm64(o, c.image.order());
  return o;
}

bool DirichletCharacter::is_trivial() const {
  for (const auto& c : components_)
    if (!c.image.is_one()) return false;
  return true;
}

DirichletCharacter DirichletCharacter::lift(std::int64_t new_modulus) const {
  if (new_modulus < 1 || new_modulus % conductor() != 0)
    throw Error(ErrorCode::InvalidArgument, "modulus " + std::to_string(new_modulus) +
                                                " is not a multiple of the conductor " + std::to_string(conductor()));
  DirichletCharacter out(new_modulus);
  for (auto& c : out.components_) {
    // Any representative of the generator class mod new_modulus that is
    // coprime to our modulus gives the same value, since cond | new_modulus.
    std::int64_t x = c.global_gen;
    while (gcd64(x, modulus_) != 1) x += new_modulus;
    c.image = evaluate(x);
  }
  return out;
}

DirichletCharacter DirichletCharacter::primitive() const { return lift(conductor()); }

bool DirichletCharacter::same_primitive(const DirichletCharacter& other) const {
  return primitive() == other.primitive();
}

DirichletCharacter operator*(const DirichletCharacter& a, const DirichletCharacter& b) {
  const std::int64_t m = lcm64(a.modulus_, b.modulus_);
  DirichletCharacter out(m);
  for (auto& c : out.components_) {
    std::int64_t x = c.global_gen;
    // global_gen is coprime to m, hence to both factors' moduli.
    c.image = a.evaluate(x) * b.evaluate(x);
  }
  return out;
}

std::string DirichletCharacter::label() const {
  std::ostringstream os;
  os << modulus_ << ".";
  if (conrey_) {
    os << *conrey_;
  } else {
    os << "[";
    for (std::size_t i = 0; i < components_.size(); ++i)
      os << (i ? "," : "") << components_[i].image.num() << "/" << components_[i].image.order();
    os << "]";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

std::pair<DirichletCharacter, DirichletCharacter> p_decompose(const DirichletCharacter& chi, std::int64_t p) {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, "p_decompose needs a prime");
  std::int64_t pk = 1;
  std::int64_t rest = chi.modulus();
  while (rest % p == 0) {
    rest /= p;
    pk *= p;
  }
  std::vector<RootOfUnity> p_images, rest_images;
  for (const auto& c : chi.components()) (c.p == p ? p_images : rest_images).push_back(c.image);
  return {DirichletCharacter::from_images(pk, p_images), DirichletCharacter::from_images(rest, rest_images)};
}

RootOfUnity idelic_local(const DirichletCharacter& chi, std::int64_t p, std::int64_t m, std::int64_t u) {
  auto [eps_p, eps_prime] = p_decompose(chi, p);
  if (mod(u, p) == 0) throw Error(ErrorCode::NotCoprime, "u must be a p-adic unit");
  return eps_prime.evaluate(p).pow(m) * eps_p.evaluate(u).inverse();
}

}  // namespace brauer
