#ifndef DWIG_MANIFEST_HPP
#define DWIG_MANIFEST_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace dwig {

/// Provenance record written next to every produced log.
struct RunManifest {
    std::string tool_version;
    std::string scenario_path;
    std::string scenario_hash; ///< fnv1a-64 of the scenario file bytes, hex
    std::uint64_t seed = 0;
    std::string started_at;    ///< UTC, ISO 8601
    std::vector<std::string> outputs;
};

/// FNV-1a 64-bit hash of a file's bytes.
std::uint64_t fnv1a64_file(const std::string& path);
std::string to_hex(std::uint64_t v);

std::string current_utc_timestamp();

/// Writes `manifest.json` into dir atomically (temp file + rename).
void write_manifest(const std::string& dir, const RunManifest& manifest);

} // namespace dwig

#endif
