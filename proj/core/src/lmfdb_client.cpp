#include "brauer/lmfdb_client.hpp"

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include "httplib.h"

#include "brauer/errors.hpp"

namespace brauer {

using nlohmann::json;

ClientOptions ClientOptions::from_env() {
  ClientOptions o;
  if (const char* dir = std::getenv("BRAUER_CACHE_DIR"); dir && *dir) o.cache_dir = dir;
  if (const char* off = std::getenv("BRAUER_OFFLINE"); off && std::string(off) == "1") o.offline = true;
  if (const char* url = std::getenv("BRAUER_LMFDB_URL"); url && *url) o.base_url = url;
  return o;
}

json CacheEntry::to_json() const {
  return {{"label", label}, {"fetched_at", fetched_at}, {"schema_version", schema_version}, {"payload", payload}};
}

CacheEntry CacheEntry::from_json(const json& j) {
  try {
    CacheEntry e;
    e.label = j.at("label").get<std::string>();
    e.fetched_at = j.at("fetched_at").get<std::int64_t>();
    e.schema_version = j.at("schema_version").get<int>();
    e.payload = j.at("payload");
    return e;
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::SchemaError, std::string("cache entry: ") + ex.what());
  }
}

// ---------------------------------------------------------------------------
// Payload conversion.

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

BigInt as_bigint(const json& v, const std::string& path) {
  if (v.is_number_integer()) return BigInt(std::to_string(v.get<std::int64_t>()));
  if (v.is_string()) {
    try {
      return BigInt(v.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  schema(path + ": expected an integer");
}

const json& at(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) schema("missing field '" + key + "'");
  return j[key];
}

// Hecke field basis elements b_i = (sum_j num[i][j] x^j) / den[i] with x a
// root of field_poly, written in the (1, sqrt d) basis.
struct FieldModel {
  BigInt d = 0;                 // 0 for Q
  std::vector<QuadElem> basis;  // empty -> power basis of degree 1
};

FieldModel field_model(const json& nf, const json& hecke) {
  const json& poly = at(nf, "field_poly");
  if (!poly.is_array() || poly.size() < 2) schema("field_poly: expected a coefficient list");
  const std::size_t degree = poly.size() - 1;
  if (degree > 2) throw Error(ErrorCode::Unsupported, "Hecke field of degree " + std::to_string(degree));
  FieldModel m;
  QuadElem x;
  if (degree == 1) {
    // a1 x + a0
    x = QuadElem(make_rational(-as_bigint(poly[0], "field_poly[0]"), as_bigint(poly[1], "field_poly[1]")));
  } else {
    const BigInt c0 = as_bigint(poly[0], "field_poly[0]");
    const BigInt c1 = as_bigint(poly[1], "field_poly[1]");
    if (as_bigint(poly[2], "field_poly[2]") != 1) schema("field_poly: not monic");
    const BigInt D = c1 * c1 - 4 * c0;
    if (D == 0) schema("field_poly: not irreducible");
    m.d = squarefree_part(D);
    BigInt s2 = D / m.d, s;
    mpz_sqrt(s.get_mpz_t(), s2.get_mpz_t());
    if (s * s != s2 || m.d == 1) schema("field_poly: not irreducible");
    x = QuadElem(m.d, make_rational(-c1, 2), make_rational(s, 2));
  }
  std::vector<QuadElem> powers{m.d == 0 ? QuadElem(Rational(1)) : QuadElem(m.d, 1, 0), x};
  if (hecke.contains("hecke_ring_numerators") && !hecke["hecke_ring_numerators"].is_null()) {
    const json& nums = hecke["hecke_ring_numerators"];
    const json& dens = at(hecke, "hecke_ring_denominators");
    if (!nums.is_array() || !dens.is_array() || nums.size() != dens.size() || nums.size() != degree)
      schema("hecke_ring_numerators/denominators: shape mismatch");
    for (std::size_t i = 0; i < nums.size(); ++i) {
      QuadElem b = powers[0] * QuadElem(Rational(0));
      for (std::size_t jx = 0; jx < nums[i].size() && jx < powers.size(); ++jx)
        b = b + powers[jx] * QuadElem(Rational(as_bigint(nums[i][jx], "hecke_ring_numerators")));
      b = b * QuadElem(make_rational(1, as_bigint(dens[i], "hecke_ring_denominators")));
      m.basis.push_back(b);
    }
  } else {
    m.basis.assign(powers.begin(), powers.begin() + static_cast<long>(degree));
  }
  return m;
}

std::map<std::int64_t, QuadElem> parse_an(const json& hecke, const FieldModel& m) {
  const json& an = at(hecke, "an");
  if (!an.is_array() || an.empty()) schema("an: expected a non-empty list");
  const std::int64_t cyc = hecke.value("hecke_ring_cyclotomic_generator", 0);
  std::map<std::int64_t, QuadElem> out;
  const QuadElem zero = m.d == 0 ? QuadElem(Rational(0)) : QuadElem(m.d, 0, 0);
  for (std::size_t i = 0; i < an.size(); ++i) {
    const std::string path = "an[" + std::to_string(i) + "]";
    QuadElem value = zero;
    if (cyc > 0) {
      // Sparse cyclotomic form: [[c, e], ...] meaning sum c * zeta_cyc^e.
      for (const auto& term : an[i]) {
        if (!term.is_array() || term.size() != 2) schema(path + ": expected [coefficient, exponent] pairs");
        const QuadElem z = root_of_unity_in(RootOfUnity(term[1].get<std::int64_t>(), cyc), m.d);
        value = value + z * QuadElem(Rational(as_bigint(term[0], path)));
      }
    } else {
      if (!an[i].is_array() || an[i].size() != m.basis.size()) schema(path + ": wrong number of coordinates");
      for (std::size_t k = 0; k < m.basis.size(); ++k)
        value = value + m.basis[k] * QuadElem(Rational(as_bigint(an[i][k], path)));
    }
    out.emplace(static_cast<std::int64_t>(i + 1), value);
  }
  return out;
}

std::optional<QuadElem> value_in(const RootOfUnity& z, const BigInt& d) {
  try {
    return root_of_unity_in(z, d);
  } catch (const Error&) {
    return std::nullopt;
  }
}

bool hecke_relation_holds(const std::map<std::int64_t, QuadElem>& an, const DirichletCharacter& eps, int k,
                          std::int64_t N, const BigInt& d) {
  bool checked = false;
  for (const auto& [p, ap] : an) {
    if (!is_prime(p) || N % p == 0) continue;
    auto it = an.find(p * p);
    if (it == an.end()) break;
    auto e = value_in(eps.evaluate(p), d);
    if (!e) return false;
    BigInt pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k - 1));
    if (!(it->second == ap * ap - *e * QuadElem(Rational(pk)))) return false;
    checked = true;
  }
  return checked;
}

std::int64_t conrey_of(const DirichletCharacter& chi) {
  const std::int64_t m = chi.modulus();
  for (std::int64_t n = 1; n <= m; ++n)
    if (gcd64(n, m) == 1 && DirichletCharacter::from_conrey(m, n) == chi) return n;
  throw Error(ErrorCode::SchemaError, "no Conrey index for " + chi.label());
}

std::vector<InnerTwist> derive_inner_twists(const std::map<std::int64_t, QuadElem>& an, std::int64_t N,
                                            const BigInt& d, std::int64_t bound) {
  std::vector<InnerTwist> out;
  std::vector<std::string> autos{"id"};
  if (d != 0) autos.push_back("conj");
  for (const auto& tag : autos) {
    std::vector<DirichletCharacter> found;
    for (std::int64_t n = 1; n <= N; ++n) {
      if (gcd64(n, N) != 1) continue;
      const DirichletCharacter chi = DirichletCharacter::from_conrey(N, n);
      bool ok = true;
      for (const auto& [p, ap] : an) {
        if (p > bound) break;
        if (!is_prime(p) || N % p == 0 || ap.is_zero()) continue;
        auto c = value_in(chi.evaluate(p), d);
        const QuadElem lhs = tag == "id" ? ap : ap.conj();
        if (!c || !(lhs == ap * *c)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      const DirichletCharacter prim = chi.primitive();
      bool dup = false;
      for (const auto& g : found) dup = dup || g == prim;
      if (dup) continue;
      found.push_back(prim);
      out.push_back({tag, DirichletCharacter::from_conrey(prim.modulus(), conrey_of(prim)), prim.conductor() > 1});
    }
  }
  return out;
}

json single_record(const std::string& body, const std::string& what) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    schema(what + ": " + e.what());
  }
  if (!j.contains("data") || !j["data"].is_array()) schema(what + ": no data array");
  if (j["data"].empty()) throw Error(ErrorCode::NotFound, what + ": no record");
  return j["data"][0];
}

}  // namespace

NewformData newform_from_lmfdb(const json& nf, const json& hecke, std::int64_t twist_check_bound) {
  NewformData f;
  f.label = at(nf, "label").get<std::string>();
  f.level = at(nf, "level").get<std::int64_t>();
  f.weight = at(nf, "weight").get<int>();
  f.is_cm = nf.value("is_cm", false);
  if (f.is_cm) throw Error(ErrorCode::CMNotSupported, f.label + " has CM");

  const FieldModel model = field_model(nf, hecke);
  f.hecke_field = model.d == 0 ? NumberFieldDescriptor{1, 1} : NumberFieldDescriptor{2, model.d};
  f.coefficients = parse_an(hecke, model);
  f.coeff_bound = static_cast<std::int64_t>(f.coefficients.size());

  // The orbit lists every Conrey index; keep the one matching our embedding.
  const json& conrey = at(nf, "conrey_indexes");
  if (!conrey.is_array() || conrey.empty()) schema("conrey_indexes: expected a non-empty list");
  std::optional<DirichletCharacter> eps;
  for (const auto& n : conrey) {
    DirichletCharacter chi = DirichletCharacter::from_conrey(f.level, n.get<std::int64_t>());
    if (hecke_relation_holds(f.coefficients, chi, f.weight, f.level, model.d)) {
      eps = chi;
      break;
    }
  }
  if (!eps) schema("no character in the orbit satisfies the Hecke relation a_{p^2} = a_p^2 - eps(p) p^(k-1)");
  f.nebentypus = *eps;

  f.inner_twists = derive_inner_twists(f.coefficients, f.level, model.d, twist_check_bound);
  bool has_conj = false;
  for (const auto& t : f.inner_twists) has_conj = has_conj || t.automorphism == "conj";
  f.F = (model.d == 0 || has_conj) ? NumberFieldDescriptor{1, 1} : f.hecke_field;
  f.validate();
  return f;
}

// ---------------------------------------------------------------------------

LmfdbClient::LmfdbClient(ClientOptions options) : options_(std::move(options)) {}

std::filesystem::path LmfdbClient::cache_path(const std::string& label) const {
  return options_.cache_dir / (label + ".json");
}

std::optional<CacheEntry> LmfdbClient::read_cache(const std::string& label) const {
  std::ifstream in(cache_path(label));
  if (!in) return std::nullopt;
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, cache_path(label).string() + ": " + e.what());
  }
  CacheEntry e = CacheEntry::from_json(j);
  if (e.label != label) throw Error(ErrorCode::SchemaError, "cache entry label " + e.label + " != " + label);
  return e;
}

void LmfdbClient::write_cache(const CacheEntry& entry) {
  std::lock_guard lock(write_mutex_);
  std::error_code ec;
  std::filesystem::create_directories(options_.cache_dir, ec);
  const auto path = cache_path(entry.label);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::WriteError, "cannot write " + tmp);
    out << entry.to_json().dump() << "\n";
    if (!out) throw Error(ErrorCode::WriteError, "short write to " + tmp);
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::WriteError, "rename to " + path.string() + ": " + ec.message());
}

std::string LmfdbClient::get(const std::string& path_and_query) {
  if (options_.offline) throw Error(ErrorCode::CacheMiss, "offline mode and no cache entry");
  std::string last_error;
  auto backoff = options_.initial_backoff;
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    {
      std::lock_guard lock(rate_mutex_);
      const auto now = std::chrono::steady_clock::now();
      const auto ready = last_request_ + options_.min_request_interval;
      if (requests_ > 0 && now < ready) std::this_thread::sleep_for(ready - now);
      last_request_ = std::chrono::steady_clock::now();
      ++requests_;
    }
    httplib::Client cli(options_.base_url);
    cli.set_connection_timeout(options_.timeout);
    cli.set_read_timeout(options_.timeout);
    cli.set_follow_location(true);
    auto res = cli.Get(path_and_query);
    if (res) {
      if (res->status == 200) return res->body;
      if (res->status == 404) throw Error(ErrorCode::NotFound, path_and_query);
      last_error = "HTTP " + std::to_string(res->status);
      if (res->status < 500 && res->status != 429) break;
    } else {
      last_error = httplib::to_string(res.error());
    }
    if (attempt < options_.max_attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  throw Error(ErrorCode::FetchError, options_.base_url + path_and_query + ": " + last_error);
}

NewformData LmfdbClient::fetch_uncached(const std::string& label) {
  static const std::regex pattern(R"(^\d+\.\d+\.[a-z]+\.[a-z]+$)");
  if (!std::regex_match(label, pattern)) throw Error(ErrorCode::NotFound, "malformed newform label '" + label + "'");
  const std::string nf_body = get("/api/mf_newforms/?label=" + label + "&_format=json");
  const std::string hecke_body = get("/api/mf_hecke_nf/?label=" + label + "&_format=json");
  NewformData f = newform_from_lmfdb(single_record(nf_body, "mf_newforms"), single_record(hecke_body, "mf_hecke_nf"),
                                     options_.twist_check_bound);
  CacheEntry entry;
  entry.label = label;
  entry.fetched_at = std::chrono::duration_cast<std::chrono::seconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
  entry.payload = {{"mf_newforms", nf_body}, {"mf_hecke_nf", hecke_body}};
  write_cache(entry);
  return f;
}

NewformData LmfdbClient::fetch_newform(const std::string& label) {
  if (auto cached = read_cache(label)) {
    if (cached->schema_version != kCacheSchemaVersion)
      throw Error(ErrorCode::SchemaError, "cache schema version " + std::to_string(cached->schema_version));
    const json& p = cached->payload;
    if (!p.contains("mf_newforms") || !p.contains("mf_hecke_nf")) throw Error(ErrorCode::SchemaError, "cache payload");
    return newform_from_lmfdb(single_record(p["mf_newforms"].get<std::string>(), "mf_newforms"),
                              single_record(p["mf_hecke_nf"].get<std::string>(), "mf_hecke_nf"),
                              options_.twist_check_bound);
  }
  std::shared_future<NewformData> flight;
  bool owner = false;
  std::promise<NewformData> promise;
  {
    std::lock_guard lock(flight_mutex_);
    auto it = in_flight_.find(label);
    if (it != in_flight_.end()) {
      flight = it->second;
    } else {
      flight = promise.get_future().share();
      in_flight_.emplace(label, flight);
      owner = true;
    }
  }
  if (owner) {
    try {
      promise.set_value(fetch_uncached(label));
    } catch (...) {
      promise.set_exception(std::current_exception());
    }
    std::lock_guard lock(flight_mutex_);
    in_flight_.erase(label);
  }
  return flight.get();
}

CoefficientTable LmfdbClient::fetch_coefficients(const std::string& label, std::int64_t up_to) {
  if (up_to < 1) throw Error(ErrorCode::InvalidArgument, "up_to must be >= 1");
  const NewformData f = fetch_newform(label);
  CoefficientTable table;
  for (const auto& [n, a] : f.coefficients) {
    if (n > up_to) break;
    table.an.emplace(n, a);
  }
  table.bound = std::min(up_to, f.coeff_bound);
  return table;
}

void LmfdbClient::export_fixture(const std::string& label, const std::filesystem::path& path) {
  if (!read_cache(label)) throw Error(ErrorCode::CacheMiss, "no cache entry for " + label);
  save_fixture(fetch_newform(label), path);
}

}  // namespace brauer
