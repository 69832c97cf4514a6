// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "brauer/auxprimes.hpp"
#include "brauer/errors.hpp"
#include "brauer/hilbert.hpp"
#include "brauer/verdict.hpp"
#include "cli.hpp"
#include "json.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace brauer;
using nlohmann::json;

namespace {

// Wall-clock limits.
constexpr double kExampleLimitSeconds = 1.0;
constexpr double kHilbertLimitSeconds = 30.0;

struct Outcome {
  std::vector<std::string> failures;
  std::string summary;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

NewformData load(const std::string& label) { return load_fixture(oracle::fixture_dir() / (label + ".json")); }

InertialDescriptor load_desc(const std::string& label) {
  std::ifstream in(oracle::fixture_dir() / (label + ".desc.json"));
  return descriptor_from_json(json::parse(in));
}

std::string cli(std::vector<std::string> args, int* code = nullptr) {
  args.insert(args.begin(), {"--fixture-dir", oracle::fixture_dir().string()});
  std::ostringstream out, err;
  const int c = brauer::cli::run(args, out, err);
  if (code) *code = c;
  return out.str();
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
  return s;
}

void example_dihedral(Outcome& o, const std::string& label, std::int64_t expected_p_prime) {
  const NewformData f = load(label);
  const std::string aux = trim(cli({"aux", label, "--p", "2"}));
  o.expect(aux == "p' = " + std::to_string(expected_p_prime), "aux printed '" + aux + "'");
  const json slope = json::parse(cli({"--json", "slope", label, "--p", "2"}));
  o.expect(slope["m_v"] == 1, "slope m_v = " + slope["m_v"].dump());
  int code = -1;
  const std::string verdict = trim(cli({"verdict", label, "--p", "2", "--desc", label + ".desc"}, &code));
  o.expect(verdict == "Ramified (Thm: Cor3.6, m_v=1)", "verdict printed '" + verdict + "'");
  o.expect(code == 0, "verdict exit code " + std::to_string(code));
  const Verdict v = decide(f, 2, places_above(f, 2).front(), load_desc(label));
  o.expect(v.status == VerdictStatus::Ramified && v.theorem == TheoremTag::Cor3_6 && v.m_v == 1, "decide disagrees");
  o.summary = "p'=" + std::to_string(expected_p_prime) + ", a_p'=" + f.coefficient(expected_p_prime).to_string() +
              ", m_v=1, " + verdict;
}

void criterion1(Outcome& o) {
  const NewformData f = load("20.3");
  o.expect(f.hecke_field == NumberFieldDescriptor{2, BigInt(-1)}, "E is not Q(i)");
  o.expect(f.weight == 3 && f.level == 20, "not the weight-3 level-20 form");
  o.expect(f.coefficient(17) == QuadElem(-1, 1, -1), "a_17 != 1 - i");
  example_dihedral(o, "20.3", 17);
}

void criterion2(Outcome& o) {
  const NewformData f = load("36.5");
  o.expect(f.hecke_field == NumberFieldDescriptor{2, BigInt(-2)}, "E is not Q(sqrt -2)");
  o.expect(f.weight == 5 && f.level == 36, "not the weight-5 level-36 form");
  const QuadElem a = f.coefficient(29);
  o.expect((a * a) == QuadElem(Rational(-421362)), "a_29^2 = " + (a * a).to_string());
  example_dihedral(o, "36.5", 29);
  o.summary += ", a_29^2=" + (a * a).to_string();
}

void criterion3(Outcome& o) {
  const NewformData f = load("24.3");
  const InertialDescriptor desc = load_desc("24.3");
  o.expect(f.weight == 3 && f.level == 24, "not the weight-3 level-24 form");
  o.expect(desc.kind == DescriptorKind::Exceptional && desc.D_Kprime == BigInt(64), "descriptor is not exceptional/64");
  const int eps = f.nebentypus.parity().sign();
  o.expect(eps == -1, "eps(-1) = " + std::to_string(eps));
  const int s = hilbert_symbol(2, 64, 2);
  o.expect(s == 1, "(2, 64)_2 = " + std::to_string(s));
  const Verdict v = decide(f, 2, places_above(f, 2).front(), desc);
  bool traced = false;
  for (const auto& r : v.trace) traced = traced || (r.step == "(2, D_K')_v" && r.value.find("= 1") != std::string::npos);
  o.expect(traced, "(2, D_K')_v not computed in the trace");
  o.expect(v.status == VerdictStatus::Ramified && v.theorem == TheoremTag::Cor3_8 && v.parity_error == 1,
           "verdict " + to_string(v.status) + " via " + to_string(v.theorem));
  const std::string text = trim(cli({"verdict", "24.3", "--p", "2", "--desc", "24.3.desc"}));
  o.expect(text.rfind("Ramified (Thm: Cor3.8", 0) == 0, "verdict printed '" + text + "'");
  o.summary = "eps(-1)=-1, (2,64)_2=+1, sign=-1, " + text;
}

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> num(-5000, 5000), den(1, 500);
  std::int64_t n = 0;
  while (n == 0) n = num(rng);
  return make_rational(n, den(rng));
}

void criterion4(Outcome& o) {
  std::vector<std::int64_t> places{0};
  for (std::int64_t p = 2; p <= 50; ++p)
    if (oracle::naive_is_prime(p)) places.push_back(p);
  std::mt19937_64 rng(20240601);
  long checks = 0, bad = 0;
  auto tally = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok && ++bad <= 5) o.failures.push_back(what);
  };
  for (int i = 0; i < 1000; ++i) {
    const Rational a = random_rational(rng), b = random_rational(rng), c = random_rational(rng);
    for (std::int64_t p : places) {
      const int ab = hilbert_symbol(a, b, p);
      const std::string at = " at p=" + std::to_string(p) + " for " + to_string(a) + ", " + to_string(b);
      tally(ab == hilbert_symbol(b, a, p), "symmetry" + at);
      tally(hilbert_symbol(a * c, b, p) == ab * hilbert_symbol(c, b, p), "bilinearity" + at);
      tally(hilbert_symbol(a, -a, p) == 1, "(a, -a)" + at);
    }
  }
  long oracle_pairs = 0;
  for (std::int64_t p : places) {
    if (p == 0) continue;
    for (std::int64_t a = -30; a <= 30; ++a)
      for (std::int64_t b = -30; b <= 30; ++b) {
        if (a == 0 || b == 0) continue;
        ++oracle_pairs;
        tally(hilbert_symbol(a, b, p) == oracle::hilbert_by_conic(a, b, p),
              "conic oracle at p=" + std::to_string(p) + " for " + std::to_string(a) + ", " + std::to_string(b));
      }
  }
  for (int i = 0; i < 1000; ++i) {
    const Rational a = random_rational(rng), b = random_rational(rng);
    int prod = 1;
    std::vector<std::int64_t> ps{0, 2};
    for (const auto& q : prime_factors(a.get_num() * a.get_den() * b.get_num() * b.get_den()))
      if (q != 2) ps.push_back(q.get_si());
    for (std::int64_t p : ps) prod *= hilbert_symbol(a, b, p);
    tally(prod == 1, "product formula for " + to_string(a) + ", " + to_string(b));
    tally(product_formula_check(a, b), "product_formula_check for " + to_string(a) + ", " + to_string(b));
  }
  o.summary = std::to_string(checks) + " checks (" + std::to_string(oracle_pairs) + " oracle pairs), " +
              std::to_string(bad) + " failures";
}

void criterion5(Outcome& o) {
  struct Case {
    const char* label;
    std::int64_t N, residue;
  };
  long validated = 0;
  for (const Case& c : {Case{"20.3", 20, 17}, Case{"36.5", 36, 29}}) {
    const NewformData f = load(c.label);
    o.expect(f.level == c.N, std::string(c.label) + " level");
    const PrimeLocalData local = local_decompose(f, 2);
    const auto qs = qualifying_primes(f, AuxPrimeRequest::from_local(AuxKind::PPrime, local), 1000);
    o.expect(!qs.empty() && qs.front() == c.residue, std::string(c.label) + ": first p' is not " + std::to_string(c.residue));
    std::int64_t pp = 1;
    for (int i = 0; i < local.N_p; ++i) pp *= 2;
    for (auto q : qs) {
      ++validated;
      const std::string at = std::string(c.label) + ": p'=" + std::to_string(q);
      o.expect(q % c.N == c.residue, at + " not " + std::to_string(c.residue) + " mod " + std::to_string(c.N));
      o.expect(oracle::naive_is_prime(q), at + " not prime");
      o.expect(std::gcd(q, c.N) == 1, at + " divides N");
      o.expect(q % pp == 1 && q % local.N_prime == 2 % local.N_prime, at + " fails the defining congruences");
      o.expect(!f.coefficient(q).is_zero(), at + " has a_q = 0");
    }
  }
  o.summary = std::to_string(validated) + " primes re-validated (17 mod 20, 29 mod 36)";
}

void criterion6(Outcome& o) {
  std::string detail;
  for (const auto* label : {"20.3", "36.5", "24.3"}) {
    const NewformData f = load(label);
    const PrimeLocalData local = local_decompose(f, 2);
    const Place place = places_above(f, 2).front();
    const auto qs = qualifying_primes(f, AuxPrimeRequest::from_local(AuxKind::PPrime, local), 3);
    o.expect(qs.size() == 3, std::string(label) + ": fewer than three p' below the bound");
    std::vector<long> parities;
    detail += std::string(detail.empty() ? "" : "; ") + label + ":";
    for (auto q : qs) {
      const long m = companion_slope(f, place, q);
      parities.push_back(((m % 2) + 2) % 2);
      detail += " m(" + std::to_string(q) + ")=" + std::to_string(m);
    }
    for (auto par : parities) o.expect(par == parities.front(), std::string(label) + ": parity differs across p'");
  }
  o.summary = detail;
}

InertialDescriptor dihedral_at(std::int64_t p, DescriptorKind kind, std::int64_t K, int a_chi) {
  InertialDescriptor d;
  d.p = p;
  d.kind = kind;
  d.K_disc = BigInt(K);
  d.a_chi = a_chi;
  return d;
}

void criterion7(Outcome& o) {
  int fixtures = 0;
  for (const auto* label : {"20.3", "36.5", "24.3"}) {
    const int N2 = local_decompose(load(label), 2).N_p;
    o.expect(conductor_consistency(load_desc(label), N2), std::string(label) + " descriptor rejected");
    ++fixtures;
  }
  const auto R = DescriptorKind::DihedralRamified;
  struct Perturbed {
    std::string what;
    InertialDescriptor desc;
    int N2;
  };
  const InertialDescriptor base_u = load_desc("20.3");  // K = Q_2(sqrt 5), a(chi) = 1, N_2 = 2
  const InertialDescriptor base_r = dihedral_at(2, R, -1, 1);  // v_2(disc) = 2, a(chi) = 1, N_2 = 3
  o.expect(conductor_consistency(base_r, 3), "ramified baseline rejected");
  auto with = [](InertialDescriptor d, const std::function<void(InertialDescriptor&)>& fn) {
    fn(d);
    return d;
  };
  const std::vector<Perturbed> cases{
      {"a(chi)=0, K unramified", with(base_u, [](auto& d) { d.a_chi = 0; }), 2},
      {"a(chi)=2, K unramified", with(base_u, [](auto& d) { d.a_chi = 2; }), 2},
      {"a(chi)=3, K unramified", with(base_u, [](auto& d) { d.a_chi = 3; }), 2},
      {"a(chi)=-1", with(base_u, [](auto& d) { d.a_chi = -1; }), 2},
      {"K=-1 marked unramified", with(base_u, [](auto& d) { d.K_disc = BigInt(-1); }), 2},
      {"K=2 marked unramified", with(base_u, [](auto& d) { d.K_disc = BigInt(2); }), 2},
      {"K=-6 marked unramified", with(base_u, [](auto& d) { d.K_disc = BigInt(-6); }), 2},
      {"K=3 marked unramified", with(base_u, [](auto& d) { d.K_disc = BigInt(3); }), 2},
      {"K=5 marked ramified", with(base_u, [](auto& d) { d.kind = DescriptorKind::DihedralRamified; }), 2},
      {"N_2=3 with K unramified", base_u, 3},
      {"N_2=5 with K unramified", with(base_u, [](auto& d) { d.a_chi = 2; }), 5},
      {"N_2=4 with a(chi)=1", base_u, 4},
      {"a(chi)=2, K ramified", with(base_r, [](auto& d) { d.a_chi = 2; }), 3},
      {"a(chi)=0, K ramified", with(base_r, [](auto& d) { d.a_chi = 0; }), 3},
      {"K=2: disc valuation 3", with(base_r, [](auto& d) { d.K_disc = BigInt(2); }), 3},
      {"K=6: disc valuation 3", with(base_r, [](auto& d) { d.K_disc = BigInt(6); }), 3},
      {"K=-3 marked ramified", with(base_r, [](auto& d) { d.K_disc = BigInt(-3); }), 3},
      {"K=17 is a square", with(base_r, [](auto& d) { d.K_disc = BigInt(17); }), 3},
      {"N_2=2 with K ramified", base_r, 2},
      {"r >= s", with(base_r, [](auto& d) { d.r = 3; d.s = 2; }), 3},
  };
  int rejected = 0;
  for (const auto& c : cases) {
    const bool ok = conductor_consistency(c.desc, c.N2);
    if (!ok) ++rejected;
    o.expect(!ok, "perturbation accepted: " + c.what);
  }
  o.summary = std::to_string(fixtures) + " fixture descriptors accepted, " + std::to_string(rejected) + "/" +
              std::to_string(cases.size()) + " perturbations rejected";
}

// Level p^2, trivial character, a_p = 0, over F. The bound reaches p' = 12697 for p = 23.
NewformData odd_form(std::int64_t p, const NumberFieldDescriptor& F) {
  auto f = synthetic::form(p * p, 2, DirichletCharacter(p * p), {{p, synthetic::rat(0)}}, 13000);
  f.F = F;
  return f;
}

void criterion8(Outcome& o) {
  int ramified_cases = 0, contained_cases = 0;
  // K = Q_p(sqrt -p) ramified over F_v, with p inert in F = Q(sqrt d)
  for (std::int64_t p : {3, 7, 11, 19, 23}) {
    int used = 0;
    for (std::int64_t d = 2; d < 60 && used < 3; ++d) {
      if (!is_squarefree(BigInt(d)) || oracle::legendre(d, p) != -1) continue;
      ++used;
      const NumberFieldDescriptor F{2, BigInt(d)};
      const Place place = places_above(F, p)[0];
      const InertialDescriptor desc = dihedral_at(p, DescriptorKind::DihedralRamified, -p, 1);
      const std::string at = "p=" + std::to_string(p) + ", d=" + std::to_string(d);
      if (place.f_v != 2 || k_relation(F, place, *desc.K_disc) != KRelation::RamifiedExtension) {
        o.failures.push_back(at + ": setup is not odd-ramified with f_v even");
        continue;
      }
      const Verdict v = decide(odd_form(p, F), p, place, desc);
      ++ramified_cases;
      o.expect(v.parity_error == 0, at + ": error parity not 0");
      o.expect(v.theorem == TheoremTag::Thm3_4, at + ": theorem " + to_string(v.theorem));
    }
  }
  // K = the unramified quadratic extension of Q_p, contained in F_v = Q_p(sqrt n)
  for (std::int64_t p : {3, 5, 7, 11, 13}) {
    std::int64_t n = 2;
    while (!is_squarefree(BigInt(n)) || oracle::legendre(n, p) != -1) ++n;
    const NumberFieldDescriptor F{2, BigInt(n)};
    const Place place = places_above(F, p)[0];
    const InertialDescriptor desc = dihedral_at(p, DescriptorKind::DihedralUnramified, n, 0);
    const std::string at = "p=" + std::to_string(p) + ", F=Q(sqrt " + std::to_string(n) + ")";
    if (place.f_v != 2 || k_relation(F, place, *desc.K_disc) != KRelation::Contained) {
      o.failures.push_back(at + ": setup does not have K inside F_v");
      continue;
    }
    const Verdict v = decide(odd_form(p, F), p, place, desc);
    ++contained_cases;
    o.expect(v.status == VerdictStatus::MatrixAlgebra, at + ": status " + to_string(v.status));
    o.expect(v.theorem == TheoremTag::Cor6_9, at + ": theorem " + to_string(v.theorem));
  }
  o.summary = std::to_string(ramified_cases) + " odd-ramified f_v-even cases with error parity 0, " +
              std::to_string(contained_cases) + " K-in-F_v cases giving MatrixAlgebra";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0: no time limit
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "example 1 (level 20, weight 3)", kExampleLimitSeconds, criterion1},
      {2, "example 2 (level 36, weight 5)", kExampleLimitSeconds, criterion2},
      {3, "example 3 (level 24, exceptional)", kExampleLimitSeconds, criterion3},
      {4, "Hilbert symbol property suite", kHilbertLimitSeconds, criterion4},
      {5, "auxiliary-prime sieve", 0, criterion5},
      {6, "slope well-definedness", 0, criterion6},
      {7, "conductor consistency", 0, criterion7},
      {8, "shortcut coherence", 0, criterion8},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs >= c.limit_seconds)
      o.failures.push_back("took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit_seconds) + " s");
    const bool pass = o.failures.empty();
    if (!pass) ++failed;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(3);
    line << "CRITERION " << c.id << " " << (pass ? "PASS" : "FAIL") << " " << c.name << " [" << secs << " s";
    if (c.limit_seconds > 0) line << " < " << c.limit_seconds << " s";
    line << "] " << o.summary;
    std::cout << line.str() << "\n";
    for (const auto& f : o.failures) std::cout << "    " << f << "\n";
  }
  std::cout << (failed == 0 ? "ALL CRITERIA PASS" : std::to_string(failed) + " CRITERIA FAILED") << "\n";
  return failed == 0 ? 0 : 1;
}
