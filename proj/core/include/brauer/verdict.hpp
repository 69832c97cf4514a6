#pragma once

// Local ramification of the endomorphism algebra X_v at a place v above a
// supercuspidal prime p: companion adjoint slope m_v, error terms, and the
// theorem dispatch.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "brauer/hilbert.hpp"
#include "brauer/newform.hpp"

namespace brauer {

enum class DescriptorKind { DihedralUnramified, DihedralRamified, Exceptional };
std::string to_string(DescriptorKind kind);
DescriptorKind descriptor_kind_from_string(const std::string& s);

// Local Langlands data at p that the q-expansion does not determine.
struct InertialDescriptor {
  std::int64_t p = 2;
  DescriptorKind kind = DescriptorKind::DihedralUnramified;
  std::optional<BigInt> K_disc;  // K = Q_p(sqrt K_disc), dihedral only
  int a_chi = 0;
  std::optional<long> l;
  std::optional<int> r;
  std::optional<int> s;
  bool level_zero = false;
  std::optional<BigInt> D_Kprime;     // exceptional only
  std::optional<int> D_minus_one;     // D(-1) = +-1, needed for even weight
};

InertialDescriptor descriptor_from_json(const nlohmann::json& j);
nlohmann::json descriptor_to_json(const InertialDescriptor& d);

// Elements of F_v^x entering the error terms, stated for the declared
// uniformizer. All optional; absent values make the verdict Undetermined.
struct ErrorTermData {
  std::optional<Rational> t, t1, t2, c, d0, pi_squared;
  std::optional<std::string> uniformizer;  // declaration the inputs refer to; echoed in the trace
};

ErrorTermData error_terms_from_json(const nlohmann::json& j);
nlohmann::json error_terms_to_json(const ErrorTermData& e);

enum class VerdictStatus { Ramified, MatrixAlgebra, Undetermined };
std::string to_string(VerdictStatus s);

enum class TheoremTag { Thm3_2, Thm3_4, Thm3_5, Cor3_6, Thm3_7, Cor3_8, Cor6_9 };
std::string to_string(TheoremTag t);
TheoremTag theorem_from_string(const std::string& s);

struct TraceRecord {
  std::string step;
  std::string value;
  std::string provenance;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct Verdict {
  Place place;
  VerdictStatus status = VerdictStatus::Undetermined;
  std::optional<long> m_v;
  int parity_m = 0;
  std::optional<int> parity_error;
  TheoremTag theorem = TheoremTag::Thm3_2;
  std::map<std::string, std::int64_t> aux_primes;
  std::vector<TraceRecord> trace;
  std::vector<std::string> missing_inputs;
  std::string residual;  // symbolic expression still to evaluate (Undetermined only)

  void note(std::string step, std::string value, std::string provenance) {
    trace.push_back({std::move(step), std::move(value), std::move(provenance)});
  }
  // Sets status from the parities; Undetermined when parity_error is unknown.
  void settle();

  nlohmann::json to_json() const;
  static Verdict from_json(const nlohmann::json& j);
};

// How K sits relative to F_v.
enum class KRelation { Contained, UnramifiedExtension, RamifiedExtension };
std::string to_string(KRelation r);
KRelation k_relation(const NumberFieldDescriptor& F, const Place& place, const BigInt& K_disc);

// The Hilbert-symbol view of a place of F (uniformizer sqrt(d_F) at ramified places).
SymbolPlace symbol_place(const NumberFieldDescriptor& F, const Place& place);

// Conductor formula at p = 2 for a dihedral descriptor.
bool conductor_consistency(const InertialDescriptor& desc, int N_2);
// Same, throwing ConsistencyViolation with both sides of the failed relation.
void check_conductor(const InertialDescriptor& desc, int N_2);

// Hypothesis (H): false iff l is an odd multiple of (p+1)/2.
bool is_good(std::int64_t p, long l);
// Cases where (H) holds automatically.
std::optional<bool> is_good_shortcut(std::int64_t p, int C_p);

// a_{p'}^2 eps(p')^{-1} as an element of F (FieldMismatch otherwise).
QuadElem adjoint_value(const NewformData& f, std::int64_t q);
// m_v = f_v * w(a_{p'}^2 eps(p')^{-1}) with w normalized at v.
long companion_slope(const NewformData& f, const Place& place, std::int64_t p_prime);

struct ErrorTerm {
  std::optional<int> parity;  // unknown when inputs are missing
  std::vector<TraceRecord> trace;
  std::vector<std::string> missing_inputs;
  std::string expression;     // symbolic form of the term
};

// (x, KF_v|F_v) for rational x, K = Q_p(sqrt K_disc).
int lemma_equiv_symbol(const Rational& x, const BigInt& K_disc, const NumberFieldDescriptor& F, const Place& place);

struct OddRamifiedTerm {
  int n_v = 0;          // parity of (pi^2, a_{p''}^2)_v = (a_{p''}^2, KF_v|F_v)
  int class_parity = 0;  // parity of ((-1)^k a_{p''}^2 eps(p'')^{-1}, KF_v|F_v)
  std::vector<TraceRecord> trace;
};

// p = 3 mod 4 ramified with KF_v|F_v ramified. When err.pi_squared is
// given, (pi^2, a_{p''}^2)_v is also evaluated directly and must agree.
OddRamifiedTerm error_term_odd_ramified(const NewformData& f, const Place& place, const InertialDescriptor& desc,
                                        std::int64_t p_dprime, const ErrorTermData& err = {});

// (t, c)_v for a bad level-zero unramified odd prime.
ErrorTerm error_term_odd_bad(const NumberFieldDescriptor& F, const Place& place, const ErrorTermData& err);

// r_v at p = 2 for a dihedral descriptor (n_v, n_v' or n_v'' by the K/F_v relation and s).
// p_dagger / p_tprime are only consulted when the selected formula uses them.
ErrorTerm error_term_p2_dihedral(const NewformData& f, const Place& place, const InertialDescriptor& desc,
                                 const ErrorTermData& err, std::optional<std::int64_t> p_dagger,
                                 std::optional<std::int64_t> p_tprime);

// zeta_{2^(r-1)} and (zeta_{2^s} + zeta_{2^s}^{-1})^2 as rationals (Unsupported outside Q).
Rational zeta_two_power(int r);
Rational trace_square(int s);

Verdict exceptional_verdict(const NewformData& f, const Place& place, const InertialDescriptor& desc);

Verdict decide(const NewformData& f, std::int64_t p, const Place& place, const InertialDescriptor& desc,
               const ErrorTermData& err = {}, std::int64_t bound = 0);

}  // namespace brauer
