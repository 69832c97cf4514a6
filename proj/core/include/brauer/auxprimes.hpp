#pragma once

// Sieves for the auxiliary primes p', p'', p''', p-dagger. Each is the
// smallest prime q <= bound coprime to N with a_q != 0 satisfying:
//   p'      q = 1 mod p^N_p, q = p mod N'
//   p''     q = 1 mod N', q of order p - 1 in (Z/p^N_p)^x     (p odd)
//   p'''    q = 1 mod N', q of order 2 in (Z/2^N_2)^x         (p = 2)
//   dagger  chi(q) = -1 for every ramified inner twist chi, +1 otherwise

#include <cstdint>
#include <string>
#include <vector>

#include "brauer/newform.hpp"

namespace brauer {

enum class AuxKind { PPrime, PDoublePrime, PTriplePrime, PDagger };
std::string to_string(AuxKind kind);

struct AuxPrimeRequest {
  AuxKind kind = AuxKind::PPrime;
  std::int64_t p = 2;
  int N_p = 0;
  std::int64_t N_prime = 1;
  std::int64_t search_bound = 0;  // 0: use the form's coefficient bound

  static AuxPrimeRequest from_local(AuxKind kind, const PrimeLocalData& local, std::int64_t bound = 0) {
    return {kind, local.p, local.N_p, local.N_prime, bound};
  }
};

// The congruence conditions alone (no coefficient test, no gcd with N).
bool satisfies_congruences(const NewformData& f, const AuxPrimeRequest& req, std::int64_t q);

// Up to `count` qualifying primes in increasing order (fewer if the bound
// runs out). Validates the request (WrongCase / NoSolution / InvalidArgument).
std::vector<std::int64_t> qualifying_primes(const NewformData& f, const AuxPrimeRequest& req, std::size_t count);

// The n-th qualifying prime, n >= 1. SearchExhausted when fewer exist below the bound.
std::int64_t nth_qualifying(const NewformData& f, const AuxPrimeRequest& req, std::size_t n);

std::int64_t find_p_prime(const NewformData& f, const PrimeLocalData& local, std::int64_t bound = 0);
std::int64_t find_p_dprime(const NewformData& f, const PrimeLocalData& local, std::int64_t bound = 0);
std::int64_t find_p_tprime(const NewformData& f, const PrimeLocalData& local, std::int64_t bound = 0);
std::int64_t find_p_dagger(const NewformData& f, std::int64_t bound = 0);

}  // namespace brauer
