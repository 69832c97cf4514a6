#pragma once

// Newform data model: level, weight, nebentypus, Hecke field, a finite
// table of coefficients, inner twists, and the field F.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "brauer/dirichlet.hpp"
#include "brauer/exact_arith.hpp"

namespace brauer {

// Q (degree 1) or Q(sqrt d) with d squarefree (degree 2). Higher degrees
// are representable so that ingestion can keep them, but the engine
// rejects them.
struct NumberFieldDescriptor {
  int degree = 1;
  BigInt disc = 1;  // squarefree d for degree 2; ignored for degree 1

  bool is_rational() const { return degree == 1; }
  // Field tag used by QuadElem: 0 for Q.
  BigInt quad_d() const { return degree == 1 ? BigInt(0) : disc; }

  friend bool operator==(const NumberFieldDescriptor&, const NumberFieldDescriptor&) = default;
};

struct InnerTwist {
  std::string automorphism;  // "id" or "conj"
  DirichletCharacter chi;
  bool ramified = false;

  friend bool operator==(const InnerTwist&, const InnerTwist&) = default;
};

struct NewformData {
  std::string label;
  std::int64_t level = 1;
  int weight = 2;
  DirichletCharacter nebentypus;
  NumberFieldDescriptor hecke_field;
  std::map<std::int64_t, QuadElem> coefficients;
  std::int64_t coeff_bound = 0;
  std::vector<InnerTwist> inner_twists;
  NumberFieldDescriptor F;
  bool is_cm = false;
  std::map<std::int64_t, bool> is_p_minimal;

  // a_n; InsufficientData beyond the stored range or for a missing n.
  const QuadElem& coefficient(std::int64_t n) const;
  bool has_coefficient(std::int64_t n) const { return coefficients.count(n) != 0; }

  // Checks the structural invariants; throws ParseError / CMNotSupported.
  void validate() const;

  friend bool operator==(const NewformData&, const NewformData&) = default;
};

struct PrimeLocalData {
  std::int64_t p = 2;
  int N_p = 0;
  std::int64_t N_prime = 1;
  int C_p = 0;
  std::optional<QuadElem> a_p;  // absent when p exceeds the stored range
};

struct Place {
  std::int64_t p = 2;
  int e_v = 1;
  int f_v = 1;
  PrimeIdealData ideal;

  int local_degree() const { return e_v * f_v; }
};

PrimeLocalData local_decompose(const NewformData& f, std::int64_t p);

// C_p < N_p, N_p >= 2 and a_p = 0. InsufficientData when a_p is unknown.
bool is_supercuspidal(const PrimeLocalData& local);

// Primes p | N at which f is supercuspidal.
std::vector<std::int64_t> supercuspidal_primes(const NewformData& f);

std::vector<Place> places_above(const NumberFieldDescriptor& F, std::int64_t p);
inline std::vector<Place> places_above(const NewformData& f, std::int64_t p) { return places_above(f.F, p); }

// The value of a root of unity as an element of Q(sqrt d) (d = 0 for Q).
// FieldMismatch when it does not lie in that field.
QuadElem root_of_unity_in(const RootOfUnity& z, const BigInt& d);

// JSON (de)serialization of the fixture schema. ParseError carries the
// JSON path of the offending field.
NewformData newform_from_json(const nlohmann::json& j);
nlohmann::json newform_to_json(const NewformData& f);
DirichletCharacter character_from_json(const nlohmann::json& j, const std::string& path);
nlohmann::json character_to_json(const DirichletCharacter& chi);

NewformData load_fixture(const std::filesystem::path& path);
// Atomic: writes a temporary file next to `path` and renames it.
void save_fixture(const NewformData& f, const std::filesystem::path& path);

}  // namespace brauer
