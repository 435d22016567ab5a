#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ergolab/lab/config.hpp"
#include "ergolab/lab/csv.hpp"

namespace ergolab::lab {

inline constexpr const char* kToolVersion = "0.1.0";

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view data) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << v;
  return s.str();
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Side record of a run. Only the timestamps and worker count vary between identical runs;
/// the CSV itself carries no run-specific data.
struct RunManifest {
  std::string config_hash;
  std::string tool_version = kToolVersion;
  std::uint64_t seed = 0;
  std::string kind;
  std::size_t workers = 1;
  std::string started_at;
  std::string finished_at;
  std::string csv_hash;
  std::size_t rows = 0;
  std::size_t violations = 0;
  json provenance = json::object();
  json summary = json::object();
  std::vector<std::string> warnings;

  static RunManifest begin(const ExperimentConfig& c, std::size_t workers) {
    RunManifest m;
    m.config_hash = hex64(fnv1a(c.canonical()));
    m.seed = c.seed;
    m.kind = kind_name(c.kind);
    m.workers = workers;
    m.started_at = utc_timestamp();
    return m;
  }

  void finish(const CsvTable& table, json prov, json summ, std::vector<std::string> warns,
              std::size_t viol) {
    std::ostringstream text;
    write_csv(table, text);
    csv_hash = hex64(fnv1a(text.str()));
    rows = table.rows.size();
    violations = viol;
    provenance = std::move(prov);
    summary = std::move(summ);
    warnings = std::move(warns);
    finished_at = utc_timestamp();
  }

  json to_json() const {
    return {{"config_hash", config_hash}, {"tool_version", tool_version}, {"seed", seed},
            {"kind", kind},               {"workers", workers},           {"started_at", started_at},
            {"finished_at", finished_at}, {"csv_hash", csv_hash},         {"rows", rows},
            {"violations", violations},   {"provenance", provenance},     {"summary", summary},
            {"warnings", warnings}};
  }
};

}  // namespace ergolab::lab
