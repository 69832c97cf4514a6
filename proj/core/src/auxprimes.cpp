#include "brauer/auxprimes.hpp"

#include "brauer/errors.hpp"

namespace brauer {

std::string to_string(AuxKind kind) {
  switch (kind) {
    case AuxKind::PPrime: return "p'";
    case AuxKind::PDoublePrime: return "p''";
    case AuxKind::PTriplePrime: return "p'''";
    case AuxKind::PDagger: return "p_dagger";
  }
  return "?";
}

namespace {

std::int64_t effective_bound(const NewformData& f, const AuxPrimeRequest& req) {
  if (req.search_bound < 0) throw Error(ErrorCode::InvalidArgument, "negative search bound");
  if (req.search_bound > f.coeff_bound)
    throw Error(ErrorCode::InvalidArgument, "search bound " + std::to_string(req.search_bound) +
                                                " exceeds the coefficient bound " + std::to_string(f.coeff_bound));
  return req.search_bound == 0 ? f.coeff_bound : req.search_bound;
}

bool dagger_ok(const NewformData& f, std::int64_t q) {
  for (const auto& t : f.inner_twists) {
    if (gcd64(q, t.chi.modulus()) != 1) return false;
    if (t.chi.evaluate(q) != (t.ramified ? RootOfUnity::minus_one() : RootOfUnity::one())) return false;
  }
  return true;
}

void check_request(const NewformData& f, const AuxPrimeRequest& req) {
  switch (req.kind) {
    case AuxKind::PPrime:
      break;
    case AuxKind::PDoublePrime:
      if (req.p == 2) throw Error(ErrorCode::WrongCase, "p'' is defined for odd p only");
      break;
    case AuxKind::PTriplePrime:
      if (req.p != 2) throw Error(ErrorCode::WrongCase, "p''' is defined for p = 2 only");
      if (req.N_p < 2)
        throw Error(ErrorCode::NoSolution, "(Z/2^" + std::to_string(req.N_p) + ")^x has no element of order 2");
      break;
    case AuxKind::PDagger: {
      // Solvable iff some class mod M = lcm of the twist moduli works.
      std::int64_t M = 1;
      for (const auto& t : f.inner_twists) M = lcm64(M, t.chi.modulus());
      bool found = false;
      for (std::int64_t x = 1; x <= M && !found; ++x)
        if (gcd64(x, M) == 1 && dagger_ok(f, x)) found = true;
      if (!found)
        throw Error(ErrorCode::NoSolution, "no class mod " + std::to_string(M) + " meets the inner-twist sign conditions");
      break;
    }
  }
}

}  // namespace

bool satisfies_congruences(const NewformData& f, const AuxPrimeRequest& req, std::int64_t q) {
  const std::int64_t ppow = ipow(req.p, req.N_p);
  switch (req.kind) {
    case AuxKind::PPrime:
      return mod(q, ppow) == mod(1, ppow) && mod(q, req.N_prime) == mod(req.p, req.N_prime);
    case AuxKind::PDoublePrime:
      return mod(q, req.N_prime) == mod(1, req.N_prime) && gcd64(q, req.p) == 1 &&
             multiplicative_order(q, ppow) == req.p - 1;
    case AuxKind::PTriplePrime:
      return mod(q, req.N_prime) == mod(1, req.N_prime) && q % 2 == 1 && multiplicative_order(q, ppow) == 2;
    case AuxKind::PDagger:
      return dagger_ok(f, q);
  }
  return false;
}

std::vector<std::int64_t> qualifying_primes(const NewformData& f, const AuxPrimeRequest& req, std::size_t count) {
  check_request(f, req);
  const std::int64_t bound = effective_bound(f, req);
  std::vector<std::int64_t> out;
  for (std::int64_t q : primes_up_to(bound)) {
    if (out.size() >= count) break;
    if (f.level % q == 0) continue;
    if (!satisfies_congruences(f, req, q)) continue;
    if (f.coefficient(q).is_zero()) continue;
    out.push_back(q);
  }
  return out;
}

std::int64_t nth_qualifying(const NewformData& f, const AuxPrimeRequest& req, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  auto primes = qualifying_primes(f, req, n);
  if (primes.size() < n)
    throw Error(ErrorCode::SearchExhausted, "only " + std::to_string(primes.size()) + " " + to_string(req.kind) +
                                                " candidates up to bound " + std::to_string(effective_bound(f, req)));
  const std::int64_t q = primes[n - 1];
  // Post hoc re-check of the defining conditions.
  if (!is_prime(q) || gcd64(q, f.level) != 1 || !satisfies_congruences(f, req, q) || f.coefficient(q).is_zero())
    throw Error(ErrorCode::ConsistencyViolation, to_string(req.kind) + " = " + std::to_string(q) + " failed re-validation");
  return q;
}

std::int64_t find_p_prime(const NewformData& f, const PrimeLocalData& local, std::int64_t bound) {
  return nth_qualifying(f, AuxPrimeRequest::from_local(AuxKind::PPrime, local, bound), 1);
}

std::int64_t find_p_dprime(const NewformData& f, const PrimeLocalData& local, std::int64_t bound) {
  return nth_qualifying(f, AuxPrimeRequest::from_local(AuxKind::PDoublePrime, local, bound), 1);
}

std::int64_t find_p_tprime(const NewformData& f, const PrimeLocalData& local, std::int64_t bound) {
  return nth_qualifying(f, AuxPrimeRequest::from_local(AuxKind::PTriplePrime, local, bound), 1);
}

std::int64_t find_p_dagger(const NewformData& f, std::int64_t bound) {
  AuxPrimeRequest req{AuxKind::PDagger, 2, 0, 1, bound};
  return nth_qualifying(f, req, 1);
}

}  // namespace brauer
