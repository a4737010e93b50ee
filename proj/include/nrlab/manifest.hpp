#pragma once

// Run manifest: enough metadata to reproduce a report. Reports carry their
// manifest alongside the data; equal manifests imply byte-identical data.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <string>

namespace nrlab {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 0xCBF29CE484222325ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001B3ull;
    }
    return hash;
}

inline std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct RunManifest {
    std::string command;
    std::string config_digest;  // fnv1a-64 of the resolved config, hex
    std::uint64_t base_seed = 0;
    std::string tool_version = kToolVersion;
    std::string started_at;
    std::string finished_at;
};

inline RunManifest make_manifest(const std::string& command, const std::string& resolved_config,
                                 std::uint64_t base_seed) {
    RunManifest m;
    m.command = command;
    m.config_digest = hex64(fnv1a64(resolved_config));
    m.base_seed = base_seed;
    m.started_at = utc_timestamp();
    return m;
}

}  // namespace nrlab
