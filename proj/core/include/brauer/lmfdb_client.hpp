#pragma once

// LMFDB API client with an on-disk cache (<cache_dir>/<label>.json).
//
// Environment:
//   BRAUER_CACHE_DIR   cache root (default ./cache)
//   BRAUER_OFFLINE     "1" disables the network; cache misses fail with CacheMiss
//   BRAUER_LMFDB_URL   API base URL (default https://www.lmfdb.org)

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "json.hpp"

#include "brauer/newform.hpp"

namespace brauer {

struct ClientOptions {
  std::string base_url = "https://www.lmfdb.org";
  std::filesystem::path cache_dir = "cache";
  bool offline = false;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{250};
  // Minimum spacing between two requests to the host.
  std::chrono::milliseconds min_request_interval{1000};
  std::chrono::seconds timeout{30};
  // Coefficients whose inner-twist relation is checked at ingestion.
  std::int64_t twist_check_bound = 200;

  static ClientOptions from_env();
};

inline constexpr int kCacheSchemaVersion = 1;

struct CacheEntry {
  std::string label;
  std::int64_t fetched_at = 0;  // unix seconds
  nlohmann::json payload;       // {"mf_newforms": "<raw body>", "mf_hecke_nf": "<raw body>"}
  int schema_version = kCacheSchemaVersion;

  nlohmann::json to_json() const;
  static CacheEntry from_json(const nlohmann::json& j);
};

struct CoefficientTable {
  std::map<std::int64_t, QuadElem> an;
  std::int64_t bound = 0;  // largest n that was available
};

// Converts the two API records into fixture data. SchemaError on anything
// that does not fit; Unsupported for Hecke fields of degree > 2.
NewformData newform_from_lmfdb(const nlohmann::json& newform_record, const nlohmann::json& hecke_record,
                               std::int64_t twist_check_bound = 200);

class LmfdbClient {
 public:
  explicit LmfdbClient(ClientOptions options = ClientOptions::from_env());

  NewformData fetch_newform(const std::string& label);
  CoefficientTable fetch_coefficients(const std::string& label, std::int64_t up_to);
  // Writes the fixture for a cached label; CacheMiss when absent.
  void export_fixture(const std::string& label, const std::filesystem::path& path);

  std::optional<CacheEntry> read_cache(const std::string& label) const;
  std::filesystem::path cache_path(const std::string& label) const;
  std::size_t network_requests() const { return requests_; }
  const ClientOptions& options() const { return options_; }

 private:
  NewformData fetch_uncached(const std::string& label);
  std::string get(const std::string& path_and_query);
  void write_cache(const CacheEntry& entry);

  ClientOptions options_;
  std::mutex flight_mutex_;
  std::map<std::string, std::shared_future<NewformData>> in_flight_;
  std::mutex write_mutex_;
  std::mutex rate_mutex_;
  std::chrono::steady_clock::time_point last_request_{};
  std::size_t requests_ = 0;
};

}  // namespace brauer
