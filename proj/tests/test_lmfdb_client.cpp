#include "doctest.h"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <thread>

#include "httplib.h"

#include "brauer/errors.hpp"
#include "brauer/lmfdb_client.hpp"
#include "support/oracles.hpp"

using namespace brauer;
using nlohmann::json;

namespace {

constexpr const char* kLabel = "20.3.d.a";

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::InvalidArgument;
}

// The level-20 fixture restated in the API's shape: x^2 + 1 with power basis.
json newform_record() {
  return {{"label", kLabel},   {"level", 20},         {"weight", 3},
          {"is_cm", false},    {"field_poly", {1, 0, 1}}, {"conrey_indexes", {17, 13}}};
}

json hecke_record(bool cyclotomic = false) {
  const NewformData f = load_fixture(oracle::fixture_dir() / "20.3.json");
  json an = json::array();
  for (const auto& [n, a] : f.coefficients) {
    const long re = a.a().get_num().get_si(), im = a.b().get_num().get_si();
    if (cyclotomic) {
      json terms = json::array();
      if (re != 0) terms.push_back({re, 0});
      if (im != 0) terms.push_back({im, 1});
      an.push_back(terms);
    } else {
      an.push_back({re, im});
    }
  }
  json r = {{"label", kLabel}, {"an", an}};
  if (cyclotomic) r["hecke_ring_cyclotomic_generator"] = 4;
  else r["hecke_ring_numerators"] = {{1, 0}, {0, 1}}, r["hecke_ring_denominators"] = {1, 1};
  return r;
}

struct MockLmfdb {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::atomic<int> hits{0};
  std::atomic<int> fail_status{0};
  std::atomic<int> delay_ms{0};

  MockLmfdb() {
    auto handler = [this](const json& record) {
      return [this, record](const httplib::Request& req, httplib::Response& res) {
        ++hits;
        if (delay_ms) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms.load()));
        if (fail_status) {
          res.status = fail_status;
          return;
        }
        const std::string label = req.get_param_value("label");
        if (label == "404.1.a.a") {
          res.status = 404;
          return;
        }
        json body = {{"data", json::array()}};
        if (label == kLabel) body["data"].push_back(record);
        res.set_content(body.dump(), "application/json");
      };
    };
    server.Get("/api/mf_newforms/", handler(newform_record()));
    server.Get("/api/mf_hecke_nf/", handler(hecke_record()));
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~MockLmfdb() {
    server.stop();
    thread.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port); }
};

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static std::atomic<int> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("brauer_cache_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

ClientOptions options_for(const MockLmfdb& mock, const TempDir& dir) {
  ClientOptions o;
  o.base_url = mock.url();
  o.cache_dir = dir.path;
  o.min_request_interval = std::chrono::milliseconds(0);
  o.initial_backoff = std::chrono::milliseconds(1);
  o.timeout = std::chrono::seconds(5);
  return o;
}

}  // namespace

TEST_CASE("ingesting API records") {
  const NewformData fixture = load_fixture(oracle::fixture_dir() / "20.3.json");
  for (bool cyclotomic : {false, true}) {
    const NewformData f = newform_from_lmfdb(newform_record(), hecke_record(cyclotomic));
    CAPTURE(cyclotomic);
    CHECK(f.coefficients == fixture.coefficients);
    CHECK(f.coefficient(17) == QuadElem(-1, 1, -1));
    CHECK(f.nebentypus == DirichletCharacter::from_conrey(20, 13));
    CHECK(f.hecke_field == NumberFieldDescriptor{2, BigInt(-1)});
    CHECK(f.F.is_rational());
    CHECK(f.inner_twists == fixture.inner_twists);
  }
  json cubic = newform_record();
  cubic["field_poly"] = {1, 0, 0, 1};
  CHECK(code_of([&] { newform_from_lmfdb(cubic, hecke_record()); }) == ErrorCode::Unsupported);
  json broken = hecke_record();
  broken["an"][4] = {1};
  CHECK(code_of([&] { newform_from_lmfdb(newform_record(), broken); }) == ErrorCode::SchemaError);
  json no_level = newform_record();
  no_level.erase("level");
  CHECK(code_of([&] { newform_from_lmfdb(no_level, hecke_record()); }) == ErrorCode::SchemaError);
  json cm = newform_record();
  cm["is_cm"] = true;
  CHECK(code_of([&] { newform_from_lmfdb(cm, hecke_record()); }) == ErrorCode::CMNotSupported);
}

TEST_CASE("fetch, cache, offline") {
  MockLmfdb mock;
  TempDir dir;
  LmfdbClient client(options_for(mock, dir));
  const NewformData f = client.fetch_newform(kLabel);
  CHECK(f.coefficient(17) == QuadElem(-1, 1, -1));
  CHECK(mock.hits == 2);
  CHECK(std::filesystem::exists(client.cache_path(kLabel)));
  CHECK(client.read_cache(kLabel)->schema_version == kCacheSchemaVersion);

  // served from the cache
  CHECK(client.fetch_newform(kLabel) == f);
  CHECK(mock.hits == 2);

  auto offline_opts = options_for(mock, dir);
  offline_opts.offline = true;
  LmfdbClient offline(offline_opts);
  CHECK(offline.fetch_newform(kLabel) == f);
  CHECK(offline.network_requests() == 0);
  CHECK(code_of([&] { offline.fetch_newform("36.5.a.a"); }) == ErrorCode::CacheMiss);

  auto table = offline.fetch_coefficients(kLabel, 20);
  CHECK(table.an.size() == 20);
  CHECK(table.an.at(17) == QuadElem(-1, 1, -1));
  auto one = offline.fetch_coefficients(kLabel, 1);
  CHECK(one.an.size() == 1);
  CHECK(one.an.at(1) == QuadElem(Rational(1)));
  CHECK(offline.fetch_coefficients(kLabel, 5000).bound == f.coeff_bound);
}

TEST_CASE("errors from the service") {
  MockLmfdb mock;
  TempDir dir;
  LmfdbClient client(options_for(mock, dir));
  CHECK(code_of([&] { client.fetch_newform("xyz"); }) == ErrorCode::NotFound);
  CHECK(mock.hits == 0);
  CHECK(code_of([&] { client.fetch_newform("404.1.a.a"); }) == ErrorCode::NotFound);
  CHECK(code_of([&] { client.fetch_newform("1.12.a.a"); }) == ErrorCode::NotFound);  // empty data
  mock.hits = 0;
  mock.fail_status = 500;
  CHECK(code_of([&] { client.fetch_newform(kLabel); }) == ErrorCode::FetchError);
  CHECK(mock.hits == 3);
  mock.hits = 0;
  mock.fail_status = 403;
  CHECK(code_of([&] { client.fetch_newform(kLabel); }) == ErrorCode::FetchError);
  CHECK(mock.hits == 1);
  CHECK_FALSE(std::filesystem::exists(client.cache_path(kLabel)));
  // nothing listening
  auto opts = options_for(mock, dir);
  opts.base_url = "http://127.0.0.1:1";
  opts.max_attempts = 2;
  LmfdbClient dead(opts);
  CHECK(code_of([&] { dead.fetch_newform(kLabel); }) == ErrorCode::FetchError);
}

TEST_CASE("single flight") {
  MockLmfdb mock;
  mock.delay_ms = 150;
  TempDir dir;
  LmfdbClient client(options_for(mock, dir));
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int i = 0; i < 6; ++i)
    threads.emplace_back([&] {
      if (client.fetch_newform(kLabel).coefficient(17) == QuadElem(-1, 1, -1)) ++ok;
    });
  for (auto& t : threads) t.join();
  CHECK(ok == 6);
  CHECK(mock.hits == 2);
}

TEST_CASE("rate limit spaces requests") {
  MockLmfdb mock;
  TempDir dir;
  auto opts = options_for(mock, dir);
  opts.min_request_interval = std::chrono::milliseconds(120);
  LmfdbClient client(opts);
  const auto start = std::chrono::steady_clock::now();
  client.fetch_newform(kLabel);
  CHECK(std::chrono::steady_clock::now() - start >= std::chrono::milliseconds(120));
}

TEST_CASE("export fixture") {
  MockLmfdb mock;
  TempDir dir;
  LmfdbClient client(options_for(mock, dir));
  const auto out = dir.path / "out" / "20.3.json";
  std::filesystem::create_directories(out.parent_path());
  CHECK(code_of([&] { client.export_fixture(kLabel, out); }) == ErrorCode::CacheMiss);
  const NewformData f = client.fetch_newform(kLabel);
  client.export_fixture(kLabel, out);
  CHECK(load_fixture(out) == f);
  // overwrite in place
  { std::ofstream(out) << "garbage"; }
  client.export_fixture(kLabel, out);
  CHECK(load_fixture(out) == f);
  for (const auto& e : std::filesystem::directory_iterator(out.parent_path()))
    CHECK(e.path().extension() != ".tmp");
}

TEST_CASE("options from the environment") {
  ::setenv("BRAUER_CACHE_DIR", "/tmp/somewhere", 1);
  ::setenv("BRAUER_OFFLINE", "1", 1);
  ::setenv("BRAUER_LMFDB_URL", "http://localhost:9", 1);
  auto o = ClientOptions::from_env();
  CHECK(o.cache_dir == "/tmp/somewhere");
  CHECK(o.offline);
  CHECK(o.base_url == "http://localhost:9");
  ::unsetenv("BRAUER_CACHE_DIR");
  ::unsetenv("BRAUER_OFFLINE");
  ::unsetenv("BRAUER_LMFDB_URL");
  auto d = ClientOptions::from_env();
  CHECK_FALSE(d.offline);
  CHECK(d.cache_dir == "cache");
}
