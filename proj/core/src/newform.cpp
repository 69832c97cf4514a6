#include "brauer/newform.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "brauer/errors.hpp"

namespace brauer {

using nlohmann::json;

const QuadElem& NewformData::coefficient(std::int64_t n) const {
  auto it = coefficients.find(n);
  if (it == coefficients.end())
    throw Error(ErrorCode::InsufficientData, "a_" + std::to_string(n) + " not stored for " + label +
                                                 " (coefficient bound " + std::to_string(coeff_bound) + ")");
  return it->second;
}

void NewformData::validate() const {
  if (is_cm) throw Error(ErrorCode::CMNotSupported, label + " has CM");
  if (level < 1) throw Error(ErrorCode::ParseError, "level: must be positive");
  if (weight < 2) throw Error(ErrorCode::ParseError, "weight: must be >= 2");
  if (nebentypus.modulus() != level) throw Error(ErrorCode::ParseError, "char.modulus: must equal the level");
  if (hecke_field.degree != 1 && hecke_field.degree != 2)
    throw Error(ErrorCode::ParseError, "hecke_field.degree: only degree 1 or 2 is supported");
  if (coefficients.empty()) throw Error(ErrorCode::ParseError, "an: empty coefficient list");
  auto one = coefficients.find(1);
  if (one == coefficients.end() || !(one->second == QuadElem(Rational(1))))
    throw Error(ErrorCode::ParseError, "an[n=1]: a_1 must be 1");
  for (std::int64_t q : primes_up_to(coeff_bound))
    if (!coefficients.count(q))
      throw Error(ErrorCode::ParseError, "an: a_" + std::to_string(q) + " missing below coeff_bound");
  for (const auto& [n, a] : coefficients) {
    if (n < 1 || n > coeff_bound)
      throw Error(ErrorCode::ParseError, "an[n=" + std::to_string(n) + "]: outside 1..coeff_bound");
    if (!a.is_rational() && a.field_disc() != hecke_field.quad_d())
      throw Error(ErrorCode::ParseError, "an[n=" + std::to_string(n) + "]: not in the Hecke field");
  }
  for (std::size_t i = 0; i < inner_twists.size(); ++i) {
    // The modulus must divide a power of N.
    std::int64_t m = inner_twists[i].chi.modulus();
    for (auto [q, k] : factor(m)) {
      (void)k;
      if (level % q != 0)
        throw Error(ErrorCode::ParseError,
                    "inner_twists[" + std::to_string(i) + "].char.modulus: prime " + std::to_string(q) + " does not divide N");
    }
  }
}

PrimeLocalData local_decompose(const NewformData& f, std::int64_t p) {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
  PrimeLocalData out;
  out.p = p;
  std::int64_t rest = f.level;
  while (rest % p == 0) {
    rest /= p;
    ++out.N_p;
  }
  out.N_prime = rest;
  auto [eps_p, eps_rest] = p_decompose(f.nebentypus, p);
  (void)eps_rest;
  for (std::int64_t c = eps_p.conductor(); c > 1; c /= p) ++out.C_p;
  if (f.has_coefficient(p)) out.a_p = f.coefficient(p);
  return out;
}

bool is_supercuspidal(const PrimeLocalData& local) {
  if (local.N_p < 2 || local.C_p >= local.N_p) return false;
  if (!local.a_p) throw Error(ErrorCode::InsufficientData, "a_" + std::to_string(local.p) + " is not stored");
  return local.a_p->is_zero();
}

std::vector<std::int64_t> supercuspidal_primes(const NewformData& f) {
  std::vector<std::int64_t> out;
  for (auto [p, k] : factor(f.level)) {
    (void)k;
    if (is_supercuspidal(local_decompose(f, p))) out.push_back(p);
  }
  return out;
}

std::vector<Place> places_above(const NumberFieldDescriptor& F, std::int64_t p) {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
  if (F.degree == 1) return {Place{p, 1, 1, PrimeIdealData{p, 1, 1, 0, std::nullopt}}};
  if (F.degree != 2) throw Error(ErrorCode::Unsupported, "places of fields of degree > 2 must be supplied explicitly");
  const BigInt& d = F.disc;
  auto make = [&](int e, int f, std::optional<std::int64_t> root) {
    PrimeIdealData ideal{p, e, f, d, root};
    validate_ideal(ideal);
    return Place{p, e, f, ideal};
  };
  if (p == 2) {
    BigInt r8 = d % 8;
    if (r8 < 0) r8 += 8;
    const long r = r8.get_si();
    if (r == 1) return {make(1, 1, 1), make(1, 1, 3)};
    if (r == 5) return {make(1, 2, std::nullopt)};
    return {make(2, 1, std::nullopt)};
  }
  const int l = legendre(d, p);
  if (l == 0) return {make(2, 1, std::nullopt)};
  if (l == -1) return {make(1, 2, std::nullopt)};
  BigInt dm = d % p;
  if (dm < 0) dm += p;
  std::int64_t root = 0;
  for (std::int64_t x = 1; x < p; ++x)
    if (mulmod(x, x, p) == dm.get_si()) {
      root = x;
      break;
    }
  return {make(1, 1, root), make(1, 1, p - root)};
}

QuadElem root_of_unity_in(const RootOfUnity& z, const BigInt& d) {
  const std::int64_t n = z.order();
  if (n == 1) return QuadElem(Rational(1));
  if (n == 2) return QuadElem(Rational(-1));
  if (n == 4 && d == -1) return QuadElem(d, 0, z.num() == 1 ? 1 : -1);
  if ((n == 3 || n == 6) && d == -3) {
    // zeta_6 = (1 + sqrt(-3)) / 2.
    const QuadElem zeta6(d, Rational(1, 2), Rational(1, 2));
    QuadElem out(d, 1, 0);
    for (std::int64_t i = 0; i < z.num() * (6 / n); ++i) out = out * zeta6;
    return out;
  }
  throw Error(ErrorCode::FieldMismatch,
              "root of unity " + z.to_string() + " is not in Q(sqrt(" + d.get_str() + "))");
}

// ---------------------------------------------------------------------------
// JSON.

namespace {

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ParseError, path + ": " + what);
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) parse_fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) parse_fail(path + "." + key, "missing");
  return *it;
}

std::int64_t int_field(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number_integer()) parse_fail(path + "." + key, "expected an integer");
  return v.get<std::int64_t>();
}

bool bool_field(const json& j, const std::string& key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_boolean()) parse_fail(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

Rational rational_value(const json& v, const std::string& path) {
  if (v.is_number_integer()) return Rational(BigInt(std::to_string(v.get<std::int64_t>())));
  if (!v.is_string()) parse_fail(path, "expected a rational string");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const Error& e) {
    parse_fail(path, e.what());
  }
}

NumberFieldDescriptor field_descriptor(const json& j, const std::string& path) {
  NumberFieldDescriptor out;
  out.degree = static_cast<int>(int_field(j, "degree", path));
  const json& disc = field(j, "disc", path);
  if (disc.is_number_integer()) out.disc = BigInt(std::to_string(disc.get<std::int64_t>()));
  else if (disc.is_string()) out.disc = BigInt(disc.get<std::string>());
  else parse_fail(path + ".disc", "expected an integer");
  if (out.degree < 1) parse_fail(path + ".degree", "must be positive");
  if (out.degree == 2 && (out.disc == 1 || out.disc == 0 || !is_squarefree(out.disc)))
    parse_fail(path + ".disc", "must be a squarefree integer != 0, 1");
  return out;
}

json field_to_json(const NumberFieldDescriptor& F) {
  return {{"degree", F.degree}, {"disc", F.degree == 1 ? 1 : F.disc.get_si()}};
}

}  // namespace

DirichletCharacter character_from_json(const json& j, const std::string& path) {
  const std::int64_t modulus = int_field(j, "modulus", path);
  if (modulus < 1) parse_fail(path + ".modulus", "must be positive");
  try {
    if (j.contains("conrey")) return DirichletCharacter::from_conrey(modulus, int_field(j, "conrey", path));
    const json& vals = field(j, "values_on_gens", path);
    if (!vals.is_array()) parse_fail(path + ".values_on_gens", "expected an array");
    std::vector<RootOfUnity> images;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const json& v = vals[i];
      const std::string vp = path + ".values_on_gens[" + std::to_string(i) + "]";
      if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
        parse_fail(vp, "expected [num, order]");
      images.emplace_back(v[0].get<std::int64_t>(), v[1].get<std::int64_t>());
    }
    return DirichletCharacter::from_images(modulus, images);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    parse_fail(path, e.what());
  }
}

json character_to_json(const DirichletCharacter& chi) {
  json out{{"modulus", chi.modulus()}};
  if (chi.conrey_index()) {
    out["conrey"] = *chi.conrey_index();
  } else {
    json vals = json::array();
    for (const auto& z : chi.images()) vals.push_back({z.num(), z.order()});
    out["values_on_gens"] = vals;
  }
  return out;
}

NewformData newform_from_json(const json& j) {
  NewformData f;
  const std::string root = "$";
  const json& label = field(j, "label", root);
  if (!label.is_string()) parse_fail("$.label", "expected a string");
  f.label = label.get<std::string>();
  f.level = int_field(j, "level", root);
  f.weight = static_cast<int>(int_field(j, "weight", root));
  f.nebentypus = character_from_json(field(j, "char", root), "$.char");
  f.hecke_field = field_descriptor(field(j, "hecke_field", root), "$.hecke_field");
  f.coeff_bound = int_field(j, "coeff_bound", root);
  f.F = field_descriptor(field(j, "F", root), "$.F");
  f.is_cm = bool_field(j, "is_cm", root);

  const json& an = field(j, "an", root);
  if (!an.is_array()) parse_fail("$.an", "expected an array");
  if (an.empty()) parse_fail("$.an", "empty coefficient list");
  const BigInt d = f.hecke_field.quad_d();
  for (std::size_t i = 0; i < an.size(); ++i) {
    const std::string path = "$.an[" + std::to_string(i) + "]";
    const std::int64_t n = int_field(an[i], "n", path);
    const json& a = field(an[i], "a", path);
    if (!a.is_array() || a.empty() || a.size() > 2) parse_fail(path + ".a", "expected 1 or 2 rationals");
    Rational c0 = rational_value(a[0], path + ".a[0]");
    Rational c1 = a.size() == 2 ? rational_value(a[1], path + ".a[1]") : Rational(0);
    if (d == 0 && c1 != 0) parse_fail(path + ".a[1]", "sqrt coordinate over a rational Hecke field");
    if (!f.coefficients.emplace(n, d == 0 ? QuadElem(c0) : QuadElem(d, c0, c1)).second)
      parse_fail(path + ".n", "duplicate n = " + std::to_string(n));
  }

  const json& twists = field(j, "inner_twists", root);
  if (!twists.is_array()) parse_fail("$.inner_twists", "expected an array");
  for (std::size_t i = 0; i < twists.size(); ++i) {
    const std::string path = "$.inner_twists[" + std::to_string(i) + "]";
    const json& a = field(twists[i], "auto", path);
    if (!a.is_string() || (a != "id" && a != "conj")) parse_fail(path + ".auto", "expected \"id\" or \"conj\"");
    f.inner_twists.push_back({a.get<std::string>(), character_from_json(field(twists[i], "char", path), path + ".char"),
                              bool_field(twists[i], "ramified", path)});
  }

  const json& minimal = field(j, "is_p_minimal", root);
  if (!minimal.is_object()) parse_fail("$.is_p_minimal", "expected an object");
  for (const auto& [key, value] : minimal.items()) {
    std::int64_t p = 0;
    try {
      p = std::stoll(key);
    } catch (const std::exception&) {
      parse_fail("$.is_p_minimal." + key, "key must be a prime");
    }
    if (!value.is_boolean()) parse_fail("$.is_p_minimal." + key, "expected a boolean");
    f.is_p_minimal[p] = value.get<bool>();
  }
  f.validate();
  return f;
}

json newform_to_json(const NewformData& f) {
  json an = json::array();
  for (const auto& [n, a] : f.coefficients) {
    json coords = json::array({to_string(a.a())});
    if (f.hecke_field.degree == 2) coords.push_back(to_string(a.b()));
    an.push_back({{"n", n}, {"a", coords}});
  }
  json twists = json::array();
  for (const auto& t : f.inner_twists)
    twists.push_back({{"auto", t.automorphism}, {"char", character_to_json(t.chi)}, {"ramified", t.ramified}});
  json minimal = json::object();
  for (const auto& [p, v] : f.is_p_minimal) minimal[std::to_string(p)] = v;
  return {{"label", f.label},
          {"level", f.level},
          {"weight", f.weight},
          {"char", character_to_json(f.nebentypus)},
          {"hecke_field", field_to_json(f.hecke_field)},
          {"an", an},
          {"coeff_bound", f.coeff_bound},
          {"inner_twists", twists},
          {"F", field_to_json(f.F)},
          {"is_cm", f.is_cm},
          {"is_p_minimal", minimal}};
}

NewformData load_fixture(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open fixture " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return newform_from_json(j);
}

void save_fixture(const NewformData& f, const std::filesystem::path& path) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::WriteError, "cannot write " + tmp.string());
    out << newform_to_json(f).dump(1) << "\n";
    if (!out) throw Error(ErrorCode::WriteError, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::WriteError, "rename to " + path.string() + ": " + ec.message());
}

}  // namespace brauer
