#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <numeric>

#include "brauer/errors.hpp"
#include "brauer/newform.hpp"
#include "support/oracles.hpp"

using namespace brauer;
using nlohmann::json;

namespace {

NewformData load(const std::string& label) { return load_fixture(oracle::fixture_dir() / (label + ".json")); }

json raw(const std::string& label) {
  std::ifstream in(oracle::fixture_dir() / (label + ".json"));
  return json::parse(in);
}

QuadElem eps(const NewformData& f, std::int64_t n) {
  return root_of_unity_in(f.nebentypus.evaluate(n), f.hecke_field.quad_d());
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("example coefficients") {
  auto f20 = load("20.3");
  CHECK(f20.coefficient(17) == QuadElem(-1, 1, -1));
  CHECK(f20.hecke_field.disc == -1);
  CHECK(f20.F.is_rational());
  auto f36 = load("36.5");
  CHECK((f36.coefficient(29) * f36.coefficient(29)).to_rational() == Rational(-421362));
  CHECK(f36.coefficient(1) == QuadElem(Rational(1)));
  CHECK_THROWS_AS(f36.coefficient(5000), Error);
}

TEST_CASE("Hecke relations hold in the fixtures") {
  for (const auto* label : {"20.3", "36.5", "24.3"}) {
    auto f = load(label);
    CAPTURE(label);
    const std::int64_t B = f.coeff_bound;
    // multiplicativity
    for (std::int64_t m = 2; m * m <= B; ++m)
      for (std::int64_t n = m + 1; m * n <= B; ++n)
        if (std::gcd(m, n) == 1) CHECK(f.coefficient(m * n) == f.coefficient(m) * f.coefficient(n));
    // prime squares
    for (std::int64_t p : primes_up_to(31)) {
      const QuadElem ap = f.coefficient(p);
      if (f.level % p == 0) {
        CHECK(f.coefficient(p * p) == ap * ap);
      } else {
        const QuadElem pk = QuadElem(Rational(ipow(p, f.weight - 1)));
        CHECK(f.coefficient(p * p) == ap * ap - eps(f, p) * pk);
      }
    }
  }
}

TEST_CASE("inner twist relations") {
  for (const auto* label : {"20.3", "36.5", "24.3"}) {
    auto f = load(label);
    CAPTURE(label);
    for (const auto& tw : f.inner_twists) {
      for (std::int64_t p : primes_up_to(200)) {
        if (f.level % p == 0 || tw.chi.modulus() % p == 0) continue;
        const QuadElem ap = f.coefficient(p);
        const QuadElem image = tw.automorphism == "conj" ? ap.conj() : ap;
        CHECK(image == ap * root_of_unity_in(tw.chi.evaluate(p), f.hecke_field.quad_d()));
      }
      CHECK(tw.ramified == (tw.chi.conductor() > 1));
    }
  }
}

TEST_CASE("local data and supercuspidal primes") {
  auto f20 = load("20.3");
  auto l2 = local_decompose(f20, 2);
  CHECK(l2.N_p == 2);
  CHECK(l2.N_prime == 5);
  CHECK(l2.C_p == 0);
  CHECK(is_supercuspidal(l2));
  auto f36 = load("36.5");
  CHECK(supercuspidal_primes(f36) == std::vector<std::int64_t>{2, 3});
  auto l36 = local_decompose(f36, 2);
  CHECK(l36.N_p == 2);
  CHECK(l36.N_prime == 9);
  auto f24 = load("24.3");
  auto l24 = local_decompose(f24, 2);
  CHECK(l24.N_p == 3);
  CHECK(is_supercuspidal(l24));
  PrimeLocalData unknown{7, 2, 1, 0, std::nullopt};
  CHECK_THROWS_AS(is_supercuspidal(unknown), Error);
  CHECK_FALSE(is_supercuspidal(PrimeLocalData{7, 1, 1, 0, QuadElem(Rational(0))}));
}

TEST_CASE("places above p") {
  NumberFieldDescriptor Q;
  auto q2 = places_above(Q, 2);
  REQUIRE(q2.size() == 1);
  CHECK(q2[0].local_degree() == 1);
  for (std::int64_t d : {-1, 2, -2, 3, 5, -3, 6, 7, -7, 13, 17}) {
    NumberFieldDescriptor F{2, BigInt(d)};
    for (std::int64_t p : {2, 3, 5, 7, 11, 13}) {
      auto places = places_above(F, p);
      int sum = 0;
      for (const auto& v : places) {
        sum += v.e_v * v.f_v;
        validate_ideal(v.ideal);
      }
      CHECK(sum == 2);
    }
  }
  NumberFieldDescriptor Qi{2, BigInt(-1)};
  CHECK(places_above(Qi, 2)[0].e_v == 2);
  CHECK(places_above(Qi, 3)[0].f_v == 2);
  CHECK(places_above(Qi, 5).size() == 2);
  NumberFieldDescriptor Qm7{2, BigInt(-7)};
  auto split2 = places_above(Qm7, 2);
  REQUIRE(split2.size() == 2);
  CHECK(split2[0].ideal.split_root != split2[1].ideal.split_root);
}

TEST_CASE("roots of unity in quadratic fields") {
  CHECK(root_of_unity_in(RootOfUnity(1, 4), BigInt(-1)) == QuadElem(-1, 0, 1));
  CHECK(root_of_unity_in(RootOfUnity::minus_one(), BigInt(0)) == QuadElem(Rational(-1)));
  CHECK(root_of_unity_in(RootOfUnity(1, 6), BigInt(-3)) == QuadElem(-3, Rational(1, 2), Rational(1, 2)));
  auto z3 = root_of_unity_in(RootOfUnity(1, 3), BigInt(-3));
  CHECK(z3 * z3 * z3 == QuadElem(Rational(1)));
  CHECK_THROWS_AS(root_of_unity_in(RootOfUnity(1, 4), BigInt(-2)), Error);
  CHECK_THROWS_AS(root_of_unity_in(RootOfUnity(1, 8), BigInt(-1)), Error);
}

TEST_CASE("fixture JSON round trip") {
  for (const auto* label : {"20.3", "36.5", "24.3"}) {
    auto f = load(label);
    CHECK(newform_from_json(newform_to_json(f)) == f);
    auto tmp = std::filesystem::temp_directory_path() / ("brauer_rt_" + std::string(label) + ".json");
    save_fixture(f, tmp);
    CHECK(load_fixture(tmp) == f);
    std::filesystem::remove(tmp);
  }
}

TEST_CASE("malformed fixtures report the JSON path") {
  auto j = raw("20.3");
  j["an"][3]["a"][1] = "x";
  try {
    newform_from_json(j);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("$.an[3].a[1]") != std::string::npos);
  }
  auto no_level = raw("20.3");
  no_level.erase("level");
  CHECK(code_of([&] { newform_from_json(no_level); }) == ErrorCode::ParseError);
  auto bad_a1 = raw("20.3");
  bad_a1["an"][0]["a"] = {"2", "0"};
  CHECK(code_of([&] { newform_from_json(bad_a1); }) == ErrorCode::ParseError);
  auto cm = raw("20.3");
  cm["is_cm"] = true;
  CHECK(code_of([&] { newform_from_json(cm); }) == ErrorCode::CMNotSupported);
  auto hole = raw("20.3");
  hole["an"].erase(hole["an"].begin() + 16);  // a_17
  CHECK(code_of([&] { newform_from_json(hole); }) == ErrorCode::ParseError);
  CHECK(code_of([&] { load_fixture(oracle::fixture_dir() / "does-not-exist.json"); }) == ErrorCode::ParseError);
}

TEST_CASE("characters from JSON") {
  auto a = character_from_json(json{{"modulus", 20}, {"conrey", 13}}, "$.char");
  auto b = character_from_json(character_to_json(a), "$.char");
  CHECK(a == b);
  CHECK(code_of([] { character_from_json(json{{"modulus", 20}}, "$.char"); }) == ErrorCode::ParseError);
}
