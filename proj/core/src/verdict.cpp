#include "brauer/verdict.hpp"

#include <sstream>

#include "brauer/auxprimes.hpp"
#include "brauer/errors.hpp"

namespace brauer {

using nlohmann::json;

std::string to_string(DescriptorKind kind) {
  switch (kind) {
    case DescriptorKind::DihedralUnramified: return "dihedral_unramified";
    case DescriptorKind::DihedralRamified: return "dihedral_ramified";
    case DescriptorKind::Exceptional: return "exceptional";
  }
  return "?";
}

DescriptorKind descriptor_kind_from_string(const std::string& s) {
  if (s == "dihedral_unramified") return DescriptorKind::DihedralUnramified;
  if (s == "dihedral_ramified") return DescriptorKind::DihedralRamified;
  if (s == "exceptional") return DescriptorKind::Exceptional;
  throw Error(ErrorCode::ParseError, "kind: unknown descriptor kind '" + s + "'");
}

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Ramified: return "Ramified";
    case VerdictStatus::MatrixAlgebra: return "MatrixAlgebra";
    case VerdictStatus::Undetermined: return "Undetermined";
  }
  return "?";
}

namespace {

VerdictStatus status_from_string(const std::string& s) {
  if (s == "Ramified") return VerdictStatus::Ramified;
  if (s == "MatrixAlgebra") return VerdictStatus::MatrixAlgebra;
  if (s == "Undetermined") return VerdictStatus::Undetermined;
  throw Error(ErrorCode::ParseError, "status: unknown value '" + s + "'");
}

}  // namespace

std::string to_string(TheoremTag t) {
  switch (t) {
    case TheoremTag::Thm3_2: return "Thm3.2";
    case TheoremTag::Thm3_4: return "Thm3.4";
    case TheoremTag::Thm3_5: return "Thm3.5";
    case TheoremTag::Cor3_6: return "Cor3.6";
    case TheoremTag::Thm3_7: return "Thm3.7";
    case TheoremTag::Cor3_8: return "Cor3.8";
    case TheoremTag::Cor6_9: return "Cor6.9";
  }
  return "?";
}

TheoremTag theorem_from_string(const std::string& s) {
  for (auto t : {TheoremTag::Thm3_2, TheoremTag::Thm3_4, TheoremTag::Thm3_5, TheoremTag::Cor3_6, TheoremTag::Thm3_7,
                 TheoremTag::Cor3_8, TheoremTag::Cor6_9})
    if (to_string(t) == s) return t;
  throw Error(ErrorCode::ParseError, "theorem: unknown tag '" + s + "'");
}

std::string to_string(KRelation r) {
  switch (r) {
    case KRelation::Contained: return "K in F_v";
    case KRelation::UnramifiedExtension: return "KF_v|F_v unramified quadratic";
    case KRelation::RamifiedExtension: return "KF_v|F_v ramified quadratic";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// JSON for the sidecar inputs.

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ParseError, path + ": " + what);
}

BigInt json_bigint(const json& v, const std::string& path) {
  if (v.is_number_integer()) return BigInt(std::to_string(v.get<std::int64_t>()));
  if (v.is_string()) {
    try {
      return BigInt(v.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  bad(path, "expected an integer");
}

Rational json_rational(const json& v, const std::string& path) {
  if (v.is_number_integer()) return Rational(BigInt(std::to_string(v.get<std::int64_t>())));
  if (!v.is_string()) bad(path, "expected a rational");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const Error& e) {
    bad(path, e.what());
  }
}

template <class T>
std::optional<T> opt_int(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!j[key].is_number_integer()) bad(std::string("$.") + key, "expected an integer");
  return j[key].get<T>();
}

}  // namespace

InertialDescriptor descriptor_from_json(const json& j) {
  if (!j.is_object()) bad("$", "expected an object");
  InertialDescriptor d;
  if (!j.contains("p") || !j["p"].is_number_integer()) bad("$.p", "missing or not an integer");
  d.p = j["p"].get<std::int64_t>();
  if (!j.contains("kind") || !j["kind"].is_string()) bad("$.kind", "missing or not a string");
  d.kind = descriptor_kind_from_string(j["kind"].get<std::string>());
  if (j.contains("K_disc") && !j["K_disc"].is_null()) d.K_disc = json_bigint(j["K_disc"], "$.K_disc");
  d.a_chi = opt_int<int>(j, "a_chi").value_or(0);
  d.l = opt_int<long>(j, "l");
  d.r = opt_int<int>(j, "r");
  d.s = opt_int<int>(j, "s");
  if (j.contains("level_zero")) {
    if (!j["level_zero"].is_boolean()) bad("$.level_zero", "expected a boolean");
    d.level_zero = j["level_zero"].get<bool>();
  }
  if (j.contains("D_Kprime") && !j["D_Kprime"].is_null()) d.D_Kprime = json_bigint(j["D_Kprime"], "$.D_Kprime");
  d.D_minus_one = opt_int<int>(j, "D_minus_one");
  if (d.D_minus_one && *d.D_minus_one != 1 && *d.D_minus_one != -1) bad("$.D_minus_one", "must be 1 or -1");
  return d;
}

json descriptor_to_json(const InertialDescriptor& d) {
  json j{{"p", d.p}, {"kind", to_string(d.kind)}, {"a_chi", d.a_chi}, {"level_zero", d.level_zero}};
  if (d.K_disc) j["K_disc"] = d.K_disc->get_si();
  if (d.l) j["l"] = *d.l;
  if (d.r) j["r"] = *d.r;
  if (d.s) j["s"] = *d.s;
  if (d.D_Kprime) j["D_Kprime"] = d.D_Kprime->get_si();
  if (d.D_minus_one) j["D_minus_one"] = *d.D_minus_one;
  return j;
}

ErrorTermData error_terms_from_json(const json& j) {
  if (!j.is_object()) bad("$", "expected an object");
  ErrorTermData e;
  auto get = [&](const char* key, std::optional<Rational>& out) {
    if (!j.contains(key) || j[key].is_null()) return;
    out = json_rational(j[key], std::string("$.") + key);
    if (*out == 0) bad(std::string("$.") + key, "must be nonzero");
  };
  get("t", e.t);
  get("t1", e.t1);
  get("t2", e.t2);
  get("c", e.c);
  get("d0", e.d0);
  get("pi_squared", e.pi_squared);
  if (j.contains("uniformizer")) {
    if (!j["uniformizer"].is_string()) bad("$.uniformizer", "expected a string");
    e.uniformizer = j["uniformizer"].get<std::string>();
  }
  return e;
}

json error_terms_to_json(const ErrorTermData& e) {
  json j = json::object();
  auto put = [&](const char* key, const std::optional<Rational>& v) {
    if (v) j[key] = to_string(*v);
  };
  put("t", e.t);
  put("t1", e.t1);
  put("t2", e.t2);
  put("c", e.c);
  put("d0", e.d0);
  put("pi_squared", e.pi_squared);
  if (e.uniformizer) j["uniformizer"] = *e.uniformizer;
  return j;
}

// ---------------------------------------------------------------------------
// Verdict.

void Verdict::settle() {
  if (!parity_error) {
    status = VerdictStatus::Undetermined;
    return;
  }
  status = (parity_m + *parity_error) % 2 == 1 ? VerdictStatus::Ramified : VerdictStatus::MatrixAlgebra;
  residual.clear();
}

json Verdict::to_json() const {
  json place_j{{"p", place.p}, {"e_v", place.e_v}, {"f_v", place.f_v}, {"field_disc", place.ideal.field_disc.get_si()}};
  if (place.ideal.split_root) place_j["split_root"] = *place.ideal.split_root;
  json tr = json::array();
  for (const auto& r : trace) tr.push_back({{"step", r.step}, {"value", r.value}, {"provenance", r.provenance}});
  json j{{"place", place_j},
         {"status", to_string(status)},
         {"m_v", m_v ? json(*m_v) : json(nullptr)},
         {"parity_m", parity_m},
         {"error_parity", parity_error ? json(*parity_error) : json(nullptr)},
         {"theorem", to_string(theorem)},
         {"aux_primes", aux_primes},
         {"trace", tr},
         {"missing_inputs", missing_inputs}};
  if (!residual.empty()) j["residual"] = residual;
  return j;
}

Verdict Verdict::from_json(const json& j) {
  try {
    Verdict v;
    const json& pl = j.at("place");
    v.place.p = pl.at("p").get<std::int64_t>();
    v.place.e_v = pl.at("e_v").get<int>();
    v.place.f_v = pl.at("f_v").get<int>();
    v.place.ideal = PrimeIdealData{v.place.p, v.place.e_v, v.place.f_v, BigInt(pl.value("field_disc", 0L)),
                                   std::nullopt};
    if (pl.contains("split_root")) v.place.ideal.split_root = pl["split_root"].get<std::int64_t>();
    v.status = status_from_string(j.at("status").get<std::string>());
    if (!j.at("m_v").is_null()) v.m_v = j["m_v"].get<long>();
    v.parity_m = j.at("parity_m").get<int>();
    if (!j.at("error_parity").is_null()) v.parity_error = j["error_parity"].get<int>();
    v.theorem = theorem_from_string(j.at("theorem").get<std::string>());
    v.aux_primes = j.at("aux_primes").get<std::map<std::string, std::int64_t>>();
    for (const auto& r : j.at("trace"))
      v.trace.push_back({r.at("step").get<std::string>(), r.at("value").get<std::string>(),
                         r.at("provenance").get<std::string>()});
    v.missing_inputs = j.at("missing_inputs").get<std::vector<std::string>>();
    v.residual = j.value("residual", std::string());
    return v;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("verdict: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Local field bookkeeping.

KRelation k_relation(const NumberFieldDescriptor& F, const Place& place, const BigInt& K_disc) {
  const std::int64_t p = place.p;
  const Rational d(K_disc);
  const bool K_unramified = extension_type(d, p) == QuadraticExtensionType::Unramified;
  if (place.local_degree() == 1)
    return K_unramified ? KRelation::UnramifiedExtension : KRelation::RamifiedExtension;
  if (F.degree != 2) throw Error(ErrorCode::Unsupported, "local degree > 2");
  // F_v = Q_p(sqrt d_F).
  const Rational product = d * Rational(F.disc);
  if (is_padic_square(product, p)) return KRelation::Contained;
  // KF_v|F_v is unramified iff the biquadratic KF_v has an unramified quadratic subfield.
  if (K_unramified || extension_type(product, p) == QuadraticExtensionType::Unramified)
    return KRelation::UnramifiedExtension;
  return KRelation::RamifiedExtension;
}

SymbolPlace symbol_place(const NumberFieldDescriptor& F, const Place& place) {
  SymbolPlace sp{place.p, place.e_v, place.f_v, std::nullopt, {}};
  if (place.e_v == 2) {
    sp.uniformizer.kind = UniformizerChoice::Kind::SqrtOfPUnit;
    if (F.disc % place.p == 0) sp.uniformizer.unit = Rational(F.disc) / place.p;
  }
  return sp;
}

void check_conductor(const InertialDescriptor& desc, int N_2) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::ConsistencyViolation, msg); };
  if (desc.p != 2) throw Error(ErrorCode::WrongCase, "conductor formula is for p = 2");
  if (desc.kind == DescriptorKind::Exceptional) {
    // No conductor relation is stated for the exceptional case.
    if (!desc.D_Kprime) fail("exceptional descriptor without D_K'");
    return;
  }
  if (!desc.K_disc) fail("dihedral descriptor without K_disc");
  const Rational d(*desc.K_disc);
  if (is_padic_square(d, 2)) fail("K_disc = " + desc.K_disc->get_str() + " is a square in Q_2");
  if (desc.a_chi < 0) fail("a(chi) < 0");
  const auto type = extension_type(d, 2);
  const int dv = discriminant_valuation(d, 2);
  const bool unram = desc.kind == DescriptorKind::DihedralUnramified;
  if (unram != (type == QuadraticExtensionType::Unramified))
    fail(std::string("descriptor says K ") + (unram ? "unramified" : "ramified") + " but Q_2(sqrt " +
         desc.K_disc->get_str() + ") has discriminant valuation " + std::to_string(dv));
  if (unram && N_2 % 2 != 0) fail("K unramified forces N_2 even, got N_2 = " + std::to_string(N_2));
  const int expected = unram ? 2 * desc.a_chi : dv + desc.a_chi;
  if (N_2 != expected)
    fail("N_2 = " + std::to_string(N_2) + " but v_2(disc K) + f(K|Q_2) a(chi) = " + std::to_string(expected));
  if (N_2 == 2 && !(unram && desc.a_chi == 1)) fail("N_2 = 2 forces K unramified with a(chi) = 1");
  if (desc.r && desc.s && !(*desc.r < *desc.s))
    fail("r = " + std::to_string(*desc.r) + " must be < s = " + std::to_string(*desc.s));
}

bool conductor_consistency(const InertialDescriptor& desc, int N_2) {
  try {
    check_conductor(desc, N_2);
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConsistencyViolation) return false;
    throw;
  }
}

bool is_good(std::int64_t p, long l) {
  const long h = static_cast<long>((p + 1) / 2);
  if (l <= 0 || l % h != 0) return true;
  return (l / h) % 2 == 0;
}

std::optional<bool> is_good_shortcut(std::int64_t p, int C_p) {
  if ((p % 4 == 1 && C_p == 0) || (p % 4 == 3 && C_p == 1)) return true;
  return std::nullopt;
}

QuadElem adjoint_value(const NewformData& f, std::int64_t q) {
  const QuadElem& a = f.coefficient(q);
  const QuadElem eps = root_of_unity_in(f.nebentypus.evaluate(q), f.hecke_field.quad_d());
  QuadElem x = a * a / eps;
  if (f.F.is_rational()) {
    if (!x.is_rational())
      throw Error(ErrorCode::FieldMismatch, "a_q^2 eps(q)^-1 = " + x.to_string() + " is not in F = Q");
    return QuadElem(x.to_rational());
  }
  if (!x.is_rational() && x.field_disc() != f.F.disc)
    throw Error(ErrorCode::FieldMismatch, x.to_string() + " is not in F");
  return x;
}

long companion_slope(const NewformData& f, const Place& place, std::int64_t p_prime) {
  const QuadElem x = adjoint_value(f, p_prime);
  if (x.is_zero()) throw Error(ErrorCode::ZeroCoefficient, "a_" + std::to_string(p_prime) + " = 0");
  long w;
  if (f.F.is_rational()) {
    w = val_p(x.to_rational(), place.p).value();
  } else {
    QuadElem y = x.is_rational() ? QuadElem(f.F.disc, x.a(), 0) : x;
    w = val_quad(y, place.ideal).value();
  }
  return place.f_v * w;
}

int lemma_equiv_symbol(const Rational& x, const BigInt& K_disc, const NumberFieldDescriptor& F, const Place& place) {
  return norm_symbol_at(x, Rational(K_disc), symbol_place(F, place));
}

namespace {

int parity_of(int sign) { return sign == -1 ? 1 : 0; }

std::string sym_text(const Rational& a, const Rational& b) { return "(" + to_string(a) + ", " + to_string(b) + ")_v"; }

Rational rational_in_F(const NewformData& f, const QuadElem& x, const std::string& what) {
  if (!x.is_rational())
    throw Error(ErrorCode::Unsupported, what + " = " + x.to_string() + " is not rational; only rational values are evaluated");
  (void)f;
  return x.to_rational();
}

}  // namespace

OddRamifiedTerm error_term_odd_ramified(const NewformData& f, const Place& place, const InertialDescriptor& desc,
                                        std::int64_t p_dprime, const ErrorTermData& err) {
  const std::int64_t p = place.p;
  if (p == 2 || p % 4 != 3) throw Error(ErrorCode::WrongCase, "needs p = 3 mod 4");
  if (!desc.K_disc) throw Error(ErrorCode::InvalidArgument, "K_disc required");
  if (k_relation(f.F, place, *desc.K_disc) != KRelation::RamifiedExtension)
    throw Error(ErrorCode::WrongCase, "KF_v|F_v is not ramified quadratic");
  OddRamifiedTerm out;
  const QuadElem a = f.coefficient(p_dprime);
  const QuadElem a2 = a * a;
  if (!a2.is_rational() && (f.F.is_rational() || a2.field_disc() != f.F.disc))
    throw Error(ErrorCode::FieldMismatch, "a_p''^2 = " + a2.to_string() + " is not in F_v");
  const Rational a2r = rational_in_F(f, a2, "a_p''^2");
  const Rational arg = rational_in_F(f, adjoint_value(f, p_dprime), "a_p''^2 eps(p'')^-1") * (f.weight % 2 == 0 ? 1 : -1);

  const int nv = lemma_equiv_symbol(a2r, *desc.K_disc, f.F, place);
  out.n_v = parity_of(nv);
  out.trace.push_back({"n_v", "(pi^2, a_p''^2)_v = (" + to_string(a2r) + ", KF_v|F_v) = " + std::to_string(nv),
                       "hilbert.norm_symbol_at"});
  const int cls = lemma_equiv_symbol(arg, *desc.K_disc, f.F, place);
  out.class_parity = parity_of(cls);
  out.trace.push_back({"class", "((-1)^k a_p''^2 eps(p'')^-1, KF_v|F_v) = (" + to_string(arg) + ", KF_v|F_v) = " +
                                    std::to_string(cls),
                       "hilbert.norm_symbol_at"});
  if (err.pi_squared) {
    const SymbolPlace sp = symbol_place(f.F, place);
    if (place.local_degree() == 1 && !is_padic_square(*err.pi_squared / Rational(*desc.K_disc), p))
      throw Error(ErrorCode::InvalidArgument, "pi^2 = " + to_string(*err.pi_squared) + " does not generate K");
    const int raw = hilbert_symbol_at(*err.pi_squared, a2r, sp);
    out.trace.push_back({"n_v (raw)", sym_text(*err.pi_squared, a2r) + " = " + std::to_string(raw), "hilbert.hilbert_symbol_at"});
    if (raw != nv)
      throw Error(ErrorCode::ConsistencyViolation, "raw symbol " + std::to_string(raw) + " disagrees with norm form " +
                                                       std::to_string(nv));
  }
  return out;
}

ErrorTerm error_term_odd_bad(const NumberFieldDescriptor& F, const Place& place, const ErrorTermData& err) {
  ErrorTerm out;
  out.expression = "(t, c)_v";
  if (!err.t) out.missing_inputs.push_back("t");
  if (!err.c) out.missing_inputs.push_back("c");
  if (!out.missing_inputs.empty()) return out;
  const int s = hilbert_symbol_at(*err.t, *err.c, symbol_place(F, place));
  out.parity = parity_of(s);
  out.trace.push_back({"n_v", sym_text(*err.t, *err.c) + " = " + std::to_string(s), "hilbert.hilbert_symbol_at"});
  return out;
}

Rational zeta_two_power(int r) {
  if (r < 0) throw Error(ErrorCode::InvalidArgument, "r must be >= 0");
  if (r <= 1) return 1;
  if (r == 2) return -1;
  throw Error(ErrorCode::Unsupported, "zeta_{2^" + std::to_string(r - 1) + "} is not rational");
}

Rational trace_square(int s) {
  if (s < 0) throw Error(ErrorCode::InvalidArgument, "s must be >= 0");
  if (s <= 1) return 4;
  // T_s^2 = 2 + T_{s-1}, T_2 = 0.
  if (s == 2) return 0;
  if (s == 3) return 2;
  throw Error(ErrorCode::Unsupported, "(zeta_{2^" + std::to_string(s) + "} + zeta^-1)^2 is not rational");
}

namespace {

bool is_rational_square(const Rational& x) {
  if (x <= 0) return false;
  return mpz_perfect_square_p(x.get_num().get_mpz_t()) && mpz_perfect_square_p(x.get_den().get_mpz_t());
}

}  // namespace

ErrorTerm error_term_p2_dihedral(const NewformData& f, const Place& place, const InertialDescriptor& desc,
                                 const ErrorTermData& err, std::optional<std::int64_t> p_dagger,
                                 std::optional<std::int64_t> p_tprime) {
  if (place.p != 2 || desc.kind == DescriptorKind::Exceptional)
    throw Error(ErrorCode::WrongCase, "needs p = 2 and a dihedral descriptor");
  ErrorTerm out;
  if (!desc.K_disc) out.missing_inputs.push_back("K_disc");
  if (!desc.s) out.missing_inputs.push_back("s");
  if (!out.missing_inputs.empty()) {
    out.expression = "r_v";
    return out;
  }
  const SymbolPlace sp = symbol_place(f.F, place);
  const KRelation rel = k_relation(f.F, place, *desc.K_disc);
  const int s = *desc.s;
  int sign = 1;
  auto symbol = [&](const std::string& name, const Rational& x, const Rational& y) {
    const int v = hilbert_symbol_at(x, y, sp);
    out.trace.push_back({name, sym_text(x, y) + " = " + std::to_string(v), "hilbert.hilbert_symbol_at"});
    sign *= v;
  };
  std::vector<std::string> factors;
  if (s != 2) {
    if (!desc.r) {
      out.missing_inputs.push_back("r");
      factors.push_back("(t1, zeta_{2^(r-1)})_v");
    } else {
      const Rational zeta = zeta_two_power(*desc.r);
      factors.push_back("(t1, " + to_string(zeta) + ")_v");
      if (zeta == 1) out.trace.push_back({"(t1, zeta)_v", "1 since zeta_{2^(r-1)} = 1", "r <= 1"});
      else if (err.t1) symbol("(t1, zeta)_v", *err.t1, zeta);
      else out.missing_inputs.push_back("t1");
    }
    const Rational T2 = trace_square(s);
    factors.push_back("(t2, " + to_string(T2) + ")_v");
    if (is_rational_square(T2)) out.trace.push_back({"(t2, T_s^2)_v", "1 since T_s^2 = " + to_string(T2) + " is a square", "s <= 1"});
    else if (err.t2) symbol("(t2, T_s^2)_v", *err.t2, T2);
    else out.missing_inputs.push_back("t2");
  } else {
    factors.push_back("(t2, a_p_dagger^2)_v");
    if (!p_dagger) {
      out.missing_inputs.push_back("p_dagger");
    } else {
      const QuadElem a = f.coefficient(*p_dagger);
      const QuadElem a2 = a * a;
      if (!a2.is_rational()) throw Error(ErrorCode::FieldMismatch, "a_p_dagger^2 = " + a2.to_string() + " is not in F_v");
      if (err.t2) symbol("(t2, a_p_dagger^2)_v", *err.t2, a2.to_rational());
      else out.missing_inputs.push_back("t2");
    }
  }
  std::string name = "n_v";
  if (rel == KRelation::RamifiedExtension) {
    name = s == 2 ? "n_v''" : "n_v'";
    factors.push_back("(pi^2, d0)_v");
    std::optional<Rational> pi2 = err.pi_squared;
    if (!pi2 && val_p(Rational(*desc.K_disc), 2).value() % 2 != 0) {
      pi2 = Rational(*desc.K_disc);
      out.trace.push_back({"pi^2", to_string(*pi2) + " (pi = sqrt(K_disc))", "default uniformizer"});
    }
    std::optional<Rational> d0 = err.d0;
    const Rational kd(*desc.K_disc);
    const bool excluded = is_padic_square(kd / 2, 2) || is_padic_square(kd / -6, 2);
    if (!d0 && f.F.is_rational() && !excluded) {
      if (!p_tprime) {
        out.missing_inputs.push_back("p'''");
      } else {
        const QuadElem a = f.coefficient(*p_tprime);
        const QuadElem a2 = a * a;
        if (!a2.is_rational()) throw Error(ErrorCode::FieldMismatch, "a_p'''^2 = " + a2.to_string() + " is not rational");
        d0 = a2.to_rational();
        out.trace.push_back({"d0", to_string(*d0) + " = a_" + std::to_string(*p_tprime) + "^2", "F = Q, K not Q_2(sqrt 2), Q_2(sqrt -6)"});
      }
    }
    if (!pi2) out.missing_inputs.push_back("pi_squared");
    if (!d0 && !(f.F.is_rational() && !excluded)) out.missing_inputs.push_back("d0");
    if (pi2 && d0) symbol("(pi^2, d0)_v", *pi2, *d0);
  }
  std::string expr;
  for (std::size_t i = 0; i < factors.size(); ++i) expr += (i ? " * " : "") + factors[i];
  out.expression = "(-1)^" + name + " = " + expr;
  if (out.missing_inputs.empty()) out.parity = parity_of(sign);
  return out;
}

Verdict exceptional_verdict(const NewformData& f, const Place& place, const InertialDescriptor& desc) {
  if (place.p != 2 || desc.kind != DescriptorKind::Exceptional)
    throw Error(ErrorCode::WrongCase, "exceptional verdict needs p = 2 and an exceptional descriptor");
  Verdict v;
  v.place = place;
  v.theorem = f.weight % 2 == 1 ? TheoremTag::Cor3_8 : TheoremTag::Thm3_7;
  v.parity_m = 0;
  std::optional<int> D;
  if (f.weight % 2 == 1) {
    D = f.nebentypus.parity().sign();
    v.note("D(-1)", "eps(-1) = " + std::to_string(*D), "odd weight");
  } else if (desc.D_minus_one) {
    D = *desc.D_minus_one;
    v.note("D(-1)", std::to_string(*D), "descriptor");
  } else {
    v.missing_inputs.push_back("D(-1)");
  }
  if (!desc.D_Kprime) v.missing_inputs.push_back("D_Kprime");
  const int deg = place.local_degree();
  if (!v.missing_inputs.empty()) {
    v.residual = "D(-1)^" + std::to_string(deg) + " * (2, D_K')_v";
    v.settle();
    return v;
  }
  const int s2 = hilbert_symbol_at(2, Rational(*desc.D_Kprime), symbol_place(f.F, place));
  v.note("(2, D_K')_v", sym_text(2, Rational(*desc.D_Kprime)) + " = " + std::to_string(s2), "hilbert.hilbert_symbol_at");
  const int sign = (deg % 2 == 1 ? *D : 1) * s2;
  v.note("sign", "D(-1)^" + std::to_string(deg) + " * (2, D_K')_v = " + std::to_string(sign), to_string(v.theorem));
  v.parity_error = parity_of(sign);
  v.settle();
  return v;
}

// ---------------------------------------------------------------------------

namespace {

std::int64_t least_nonresidue(std::int64_t p) {
  for (std::int64_t n = 2;; ++n)
    if (legendre(BigInt(n), p) == -1) return n;
}

void slope(Verdict& v, const NewformData& f, const PrimeLocalData& local, const Place& place, std::int64_t bound) {
  const std::int64_t q = find_p_prime(f, local, bound);
  v.aux_primes["p'"] = q;
  v.note("p'", std::to_string(q), "auxprimes.find_p_prime");
  v.note("a_p'", f.coefficient(q).to_string(), "fixture");
  v.note("a_p'^2 eps(p')^-1", adjoint_value(f, q).to_string(), "exact arithmetic in E");
  const long m = companion_slope(f, place, q);
  v.m_v = m;
  v.parity_m = static_cast<int>(((m % 2) + 2) % 2);
  v.note("m_v", std::to_string(m), "f_v * w(a_p'^2 eps(p')^-1)");
}

void absorb(Verdict& v, const ErrorTerm& term, const std::string& prefix) {
  for (const auto& r : term.trace) v.trace.push_back(r);
  v.parity_error = term.parity;
  for (const auto& m : term.missing_inputs) v.missing_inputs.push_back(m);
  if (!term.parity) v.residual = prefix + "; " + term.expression;
}

}  // namespace

Verdict decide(const NewformData& f, std::int64_t p, const Place& place, const InertialDescriptor& desc,
               const ErrorTermData& err, std::int64_t bound) {
  if (place.p != p) throw Error(ErrorCode::InvalidPlace, "place does not lie above " + std::to_string(p));
  if (desc.p != p) throw Error(ErrorCode::InvalidArgument, "descriptor is for p = " + std::to_string(desc.p));
  if (f.F.degree > 2) throw Error(ErrorCode::Unsupported, "F of degree > 2");
  const PrimeLocalData local = local_decompose(f, p);
  if (!is_supercuspidal(local)) throw Error(ErrorCode::WrongCase, std::to_string(p) + " is not supercuspidal for " + f.label);

  Verdict v;
  v.place = place;
  v.note("infinity", f.weight % 2 == 0 ? "k even: X totally indefinite" : "k odd", "weight parity (metadata)");
  v.note("local", "N_p = " + std::to_string(local.N_p) + ", N' = " + std::to_string(local.N_prime) +
                      ", C_p = " + std::to_string(local.C_p),
         "newform.local_decompose");
  v.note("place", "e_v = " + std::to_string(place.e_v) + ", f_v = " + std::to_string(place.f_v), "newform.places_above");
  if (err.uniformizer) v.note("uniformizer", *err.uniformizer, "error-term input");

  if (desc.kind == DescriptorKind::Exceptional) {
    if (p != 2) throw Error(ErrorCode::WrongCase, "exceptional descriptors occur only at p = 2");
    Verdict e = exceptional_verdict(f, place, desc);
    e.trace.insert(e.trace.begin(), v.trace.begin(), v.trace.end());
    return e;
  }

  if (p == 2) {
    const int N_2 = local.N_p;
    if (desc.K_disc) {
      check_conductor(desc, N_2);
      v.note("conductor", "N_2 = " + std::to_string(N_2) + " consistent with K and a(chi)", "verdict.conductor_consistency");
    } else {
      v.note("conductor", "K_disc absent, conductor formula not checked", "descriptor");
    }
    slope(v, f, local, place, bound);
    if (N_2 == 2) {
      v.theorem = TheoremTag::Cor3_6;
      v.parity_error = 0;
      v.note("r_v", "0", "N_2 = 2");
      v.settle();
      return v;
    }
    v.theorem = TheoremTag::Thm3_5;
    std::optional<std::int64_t> dagger, tprime;
    if (desc.K_disc && desc.s) {
      const KRelation rel = k_relation(f.F, place, *desc.K_disc);
      v.note("K vs F_v", to_string(rel), "verdict.k_relation");
      if (*desc.s == 2) {
        dagger = find_p_dagger(f, bound);
        v.aux_primes["p_dagger"] = *dagger;
        v.note("p_dagger", std::to_string(*dagger), "auxprimes.find_p_dagger");
      }
      if (rel == KRelation::RamifiedExtension && !err.d0 && f.F.is_rational()) {
        tprime = find_p_tprime(f, local, bound);
        v.aux_primes["p'''"] = *tprime;
        v.note("p'''", std::to_string(*tprime), "auxprimes.find_p_tprime");
      }
    }
    ErrorTerm term = error_term_p2_dihedral(f, place, desc, err, dagger, tprime);
    absorb(v, term, "m_v + r_v with m_v = " + std::to_string(*v.m_v));
    v.settle();
    return v;
  }

  // Odd p.
  std::optional<BigInt> K = desc.K_disc;
  if (!K && desc.kind == DescriptorKind::DihedralUnramified) K = BigInt(least_nonresidue(p));
  if (!K) {
    v.theorem = TheoremTag::Thm3_2;
    v.missing_inputs.push_back("K_disc");
    slope(v, f, local, place, bound);
    v.residual = "depends on K: m_v = " + std::to_string(*v.m_v) + " (plus n_v if KF_v|F_v is ramified)";
    v.settle();
    return v;
  }
  const KRelation rel = k_relation(f.F, place, *K);
  v.note("K vs F_v", to_string(rel), "verdict.k_relation");

  if (desc.kind == DescriptorKind::DihedralUnramified) {
    std::optional<bool> good = true;
    if (desc.level_zero) {
      good = is_good_shortcut(p, local.C_p);
      if (good) v.note("(H)", "holds", "C_p shortcut");
      else if (desc.l) {
        good = is_good(p, *desc.l);
        v.note("(H)", *good ? "holds" : "fails (bad prime)", "l = " + std::to_string(*desc.l));
      }
    } else {
      v.note("(H)", "not needed", "positive level");
    }
    if (good && *good && rel == KRelation::Contained) {
      v.theorem = TheoremTag::Cor6_9;
      v.parity_error = 0;
      v.note("shortcut", "K in F_v: matrix algebra", "Cor6.9");
      v.settle();
      return v;
    }
    slope(v, f, local, place, bound);
    if (!good) {
      v.theorem = TheoremTag::Thm3_2;
      v.missing_inputs.push_back("l");
      v.residual = "m_v = " + std::to_string(*v.m_v) + " if (H) holds, else m_v + n_v with (-1)^n_v = (t, c)_v";
      v.settle();
      return v;
    }
    if (*good) {
      v.theorem = TheoremTag::Thm3_2;
      v.parity_error = 0;
      v.settle();
      return v;
    }
    v.theorem = TheoremTag::Thm3_4;
    absorb(v, error_term_odd_bad(f.F, place, err), "m_v + n_v with m_v = " + std::to_string(*v.m_v));
    v.settle();
    return v;
  }

  // Ramified dihedral.
  if (rel == KRelation::RamifiedExtension && p % 4 == 1)
    throw Error(ErrorCode::ConsistencyViolation, "KF_v|F_v ramified quadratic with p = 1 mod 4");
  if (rel == KRelation::Contained && p % 4 == 3) {
    v.theorem = TheoremTag::Cor6_9;
    v.parity_error = 0;
    v.note("shortcut", "K in F_v: matrix algebra", "Cor6.9");
    v.settle();
    return v;
  }
  slope(v, f, local, place, bound);
  if (rel != KRelation::RamifiedExtension) {
    v.theorem = TheoremTag::Thm3_2;
    v.parity_error = 0;
    v.settle();
    return v;
  }
  v.theorem = TheoremTag::Thm3_4;
  if (place.f_v % 2 == 0) {
    v.parity_error = 0;
    v.note("n_v", "0 since f_v is even", "Remark 6.11");
    v.settle();
    return v;
  }
  const std::int64_t q = find_p_dprime(f, local, bound);
  v.aux_primes["p''"] = q;
  v.note("p''", std::to_string(q), "auxprimes.find_p_dprime");
  OddRamifiedTerm term = error_term_odd_ramified(f, place, desc, q, err);
  for (const auto& r : term.trace) v.trace.push_back(r);
  v.parity_error = term.n_v;
  if ((v.parity_m + term.n_v) % 2 != term.class_parity)
    throw Error(ErrorCode::ConsistencyViolation, "m_v + n_v parity disagrees with the norm-symbol class");
  v.note("cross-check", "m_v + n_v agrees with the norm-symbol class", "verdict.error_term_odd_ramified");
  v.settle();
  return v;
}

}  // namespace brauer
