#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "brauer/auxprimes.hpp"
#include "brauer/errors.hpp"
#include "brauer/hilbert.hpp"
#include "brauer/lmfdb_client.hpp"
#include "brauer/newform.hpp"
#include "brauer/verdict.hpp"

namespace brauer::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::string fixture_dir;
  std::string cache_dir;
  bool json = false;
  std::int64_t bound = 0;
};

// Accepts a path, a name inside the fixture directory, or a name with the
// ".json" suffix omitted. "20.3.fixture" names fixtures/20.3.json.
fs::path resolve(const std::string& arg, const Globals& g) {
  std::vector<fs::path> candidates{arg};
  const fs::path dir = g.fixture_dir;
  candidates.push_back(dir / arg);
  candidates.push_back(dir / (arg + ".json"));
  const std::string suffix = ".fixture";
  if (arg.size() > suffix.size() && arg.compare(arg.size() - suffix.size(), suffix.size(), suffix) == 0) {
    const std::string stem = arg.substr(0, arg.size() - suffix.size());
    candidates.push_back(fs::path(stem + ".json"));
    candidates.push_back(dir / (stem + ".json"));
  }
  for (const auto& c : candidates)
    if (fs::is_regular_file(c)) return c;
  throw Error(ErrorCode::InvalidArgument, "no such file: " + arg + " (searched " + dir.string() + ")");
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

std::string signed_text(int s) { return s == 1 ? "1" : "-1"; }

AuxKind parse_kind(const std::string& s) {
  if (s == "pprime" || s == "p'") return AuxKind::PPrime;
  if (s == "pdprime" || s == "p''") return AuxKind::PDoublePrime;
  if (s == "ptprime" || s == "p'''") return AuxKind::PTriplePrime;
  if (s == "pdagger" || s == "dagger") return AuxKind::PDagger;
  throw Error(ErrorCode::InvalidArgument, "unknown auxiliary prime kind '" + s + "'");
}

Place pick_place(const NewformData& f, std::int64_t p, std::size_t index) {
  auto places = places_above(f, p);
  if (index >= places.size())
    throw Error(ErrorCode::InvalidPlace, "only " + std::to_string(places.size()) + " place(s) above " + std::to_string(p));
  return places[index];
}

int cmd_fetch(const std::string& label, const std::string& out_path, const Globals& g, std::ostream& out) {
  ClientOptions opts = ClientOptions::from_env();
  if (!g.cache_dir.empty()) opts.cache_dir = g.cache_dir;
  LmfdbClient client(opts);
  NewformData f = client.fetch_newform(label);
  if (!out_path.empty()) client.export_fixture(label, out_path);
  if (g.json) {
    out << newform_to_json(f).dump() << "\n";
  } else {
    out << f.label << ": level " << f.level << ", weight " << f.weight << ", char " << f.nebentypus.label()
        << ", coefficients up to " << f.coeff_bound << "\n";
    if (!out_path.empty()) out << "wrote " << out_path << "\n";
  }
  return kOk;
}

int cmd_classify(const std::string& fixture, const Globals& g, std::ostream& out) {
  const NewformData f = load_fixture(resolve(fixture, g));
  json primes = json::array();
  json sc = json::array();
  for (auto [p, k] : factor(f.level)) {
    (void)k;
    const PrimeLocalData local = local_decompose(f, p);
    json entry{{"p", p}, {"N_p", local.N_p}, {"N_prime", local.N_prime}, {"C_p", local.C_p}};
    entry["a_p"] = local.a_p ? json(local.a_p->to_string()) : json(nullptr);
    entry["supercuspidal"] = local.a_p ? json(is_supercuspidal(local)) : json(nullptr);
    if (entry["supercuspidal"] == true) sc.push_back(p);
    primes.push_back(entry);
  }
  if (g.json) {
    out << json{{"label", f.label}, {"level", f.level}, {"weight", f.weight}, {"char", f.nebentypus.label()},
                {"hecke_field", {{"degree", f.hecke_field.degree}, {"disc", f.hecke_field.disc.get_si()}}},
                {"primes", primes}, {"supercuspidal", sc}}
               .dump()
        << "\n";
    return kOk;
  }
  out << f.label << ": level " << f.level << ", weight " << f.weight << ", char " << f.nebentypus.label() << "\n";
  for (const auto& e : primes) {
    out << "  p = " << e["p"].get<std::int64_t>() << ": N_p = " << e["N_p"].get<int>()
        << ", N' = " << e["N_prime"].get<std::int64_t>() << ", C_p = " << e["C_p"].get<int>() << ", a_p = "
        << (e["a_p"].is_null() ? std::string("?") : e["a_p"].get<std::string>()) << ", "
        << (e["supercuspidal"].is_null()          ? "unknown"
            : e["supercuspidal"].get<bool>() ? "supercuspidal"
                                             : "not supercuspidal")
        << "\n";
  }
  out << "supercuspidal primes:";
  for (const auto& p : sc) out << " " << p.get<std::int64_t>();
  out << "\n";
  return kOk;
}

int cmd_aux(const std::string& fixture, std::int64_t p, const std::string& kind_text, std::size_t count,
            const Globals& g, std::ostream& out) {
  const NewformData f = load_fixture(resolve(fixture, g));
  const AuxKind kind = parse_kind(kind_text);
  const PrimeLocalData local = local_decompose(f, p);
  const AuxPrimeRequest req = AuxPrimeRequest::from_local(kind, local, g.bound);
  std::vector<std::int64_t> primes;
  for (std::size_t n = 1; n <= count; ++n) primes.push_back(nth_qualifying(f, req, n));
  if (g.json) {
    out << json{{"label", f.label}, {"p", p}, {"kind", to_string(kind)}, {"primes", primes}}.dump() << "\n";
  } else {
    out << to_string(kind) << " =";
    for (auto q : primes) out << " " << q;
    out << "\n";
  }
  return kOk;
}

int cmd_slope(const std::string& fixture, std::int64_t p, std::size_t place_index, const Globals& g, std::ostream& out) {
  const NewformData f = load_fixture(resolve(fixture, g));
  const PrimeLocalData local = local_decompose(f, p);
  const std::int64_t q = find_p_prime(f, local, g.bound);
  const Place place = pick_place(f, p, place_index);
  const long m = companion_slope(f, place, q);
  if (g.json) {
    out << json{{"label", f.label}, {"p", p}, {"p_prime", q}, {"a_p_prime", f.coefficient(q).to_string()},
                {"adjoint_value", adjoint_value(f, q).to_string()}, {"m_v", m}}
               .dump()
        << "\n";
  } else {
    out << "p' = " << q << ", a_p' = " << f.coefficient(q).to_string() << ", m_v = " << m << "\n";
  }
  return kOk;
}

int cmd_symbol(const std::string& a_text, const std::string& b_text, const std::string& p_text, const Globals& g,
               std::ostream& out) {
  const Rational a = parse_rational(a_text);
  const Rational b = parse_rational(b_text);
  std::int64_t p = 0;
  if (p_text != "inf" && p_text != "oo" && p_text != "0") {
    try {
      p = std::stoll(p_text);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "--p expects a prime or 'inf'");
    }
  }
  const int s = hilbert_symbol(a, b, p);
  if (g.json) out << json{{"a", to_string(a)}, {"b", to_string(b)}, {"p", p_text}, {"symbol", s}}.dump() << "\n";
  else out << signed_text(s) << "\n";
  return kOk;
}

int cmd_verdict(const std::string& fixture, std::int64_t p, const std::string& desc_file, const std::string& err_file,
                std::size_t place_index, const Globals& g, std::ostream& out) {
  const NewformData f = load_fixture(resolve(fixture, g));
  const InertialDescriptor desc = descriptor_from_json(read_json(resolve(desc_file, g)));
  ErrorTermData err;
  if (!err_file.empty()) err = error_terms_from_json(read_json(resolve(err_file, g)));
  const Place place = pick_place(f, p, place_index);
  const Verdict v = decide(f, p, place, desc, err, g.bound);
  if (g.json) {
    out << v.to_json().dump() << "\n";
  } else {
    out << to_string(v.status) << " (Thm: " << to_string(v.theorem);
    if (v.m_v) out << ", m_v=" << *v.m_v;
    const bool has_error_term = v.theorem == TheoremTag::Thm3_4 || v.theorem == TheoremTag::Thm3_5 ||
                                v.theorem == TheoremTag::Thm3_7 || v.theorem == TheoremTag::Cor3_8;
    if (v.parity_error && has_error_term) out << ", error parity=" << *v.parity_error;
    out << ")\n";
    if (v.status == VerdictStatus::Undetermined) {
      out << "missing inputs:";
      for (const auto& m : v.missing_inputs) out << " " << m;
      out << "\nresidual: " << v.residual << "\n";
    }
  }
  return v.status == VerdictStatus::Undetermined ? kUndetermined : kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local ramification of endomorphism algebras of non-CM newforms", "brauer"};
  app.require_subcommand(1, 1);
  Globals g;
  const char* env_dir = std::getenv("BRAUER_FIXTURE_DIR");
  g.fixture_dir = env_dir && *env_dir ? env_dir : "fixtures";
  app.add_option("--fixture-dir", g.fixture_dir, "Directory searched for fixture and sidecar files");
  app.add_option("--cache-dir", g.cache_dir, "LMFDB cache directory (overrides BRAUER_CACHE_DIR)");
  app.add_flag("--json", g.json, "Machine-readable output on stdout");
  app.add_option("--bound", g.bound, "Search bound for auxiliary primes (default: coefficient bound)")
      ->check(CLI::NonNegativeNumber);

  std::string label, out_path, fixture, kind = "pprime", desc_file, err_file, a_text, b_text, p_text;
  std::int64_t p = 2;
  std::size_t count = 1, place_index = 0;

  auto* fetch = app.add_subcommand("fetch", "Fetch a newform from the LMFDB into the cache");
  fetch->add_option("label", label, "LMFDB newform label")->required();
  fetch->add_option("--out", out_path, "Also write a fixture file");

  auto* classify = app.add_subcommand("classify", "Local data and supercuspidal primes of a fixture");
  classify->add_option("fixture", fixture)->required();

  auto* aux = app.add_subcommand("aux", "Auxiliary primes");
  aux->add_option("fixture", fixture)->required();
  aux->add_option("--p", p, "Supercuspidal prime")->required();
  aux->add_option("--kind", kind, "pprime | pdprime | ptprime | pdagger")
      ->check(CLI::IsMember({"pprime", "pdprime", "ptprime", "pdagger"}));
  aux->add_option("--count", count, "Number of qualifying primes to list")->check(CLI::PositiveNumber);

  auto* slope = app.add_subcommand("slope", "Companion adjoint slope m_v");
  slope->add_option("fixture", fixture)->required();
  slope->add_option("--p", p)->required();
  slope->add_option("--place", place_index, "Index of the place above p");

  auto* symbol = app.add_subcommand("symbol", "Hilbert symbol (a, b)_p over Q_p");
  symbol->add_option("a", a_text)->required();
  symbol->add_option("b", b_text)->required();
  symbol->add_option("--p", p_text, "Prime, or 'inf' for the real place")->required();

  auto* verdict = app.add_subcommand("verdict", "Ramification verdict at a place above p");
  verdict->add_option("fixture", fixture)->required();
  verdict->add_option("--p", p)->required();
  verdict->add_option("--desc", desc_file, "Inertial descriptor file")->required();
  verdict->add_option("--err", err_file, "Error-term input file");
  verdict->add_option("--place", place_index, "Index of the place above p");

  for (auto* sub : {fetch, classify, aux, slope, symbol, verdict}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (*fetch) return cmd_fetch(label, out_path, g, out);
    if (*classify) return cmd_classify(fixture, g, out);
    if (*aux) return cmd_aux(fixture, p, kind, count, g, out);
    if (*slope) return cmd_slope(fixture, p, place_index, g, out);
    if (*symbol) return cmd_symbol(a_text, b_text, p_text, g, out);
    if (*verdict) return cmd_verdict(fixture, p, desc_file, err_file, place_index, g, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  return kUsage;
}

}  // namespace brauer::cli
