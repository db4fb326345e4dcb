#include "dwig/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "dwig/errors.hpp"

namespace dwig {

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open for hashing: " + path);
    }
    std::uint64_t h = 1469598103934665603ull;
    char buf[4096];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (!in) break;
    }
    return h;
}

std::string to_hex(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string current_utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const std::string& dir, const RunManifest& m) {
    nlohmann::json j;
    j["tool_version"] = m.tool_version;
    j["scenario_path"] = m.scenario_path;
    j["scenario_hash_fnv1a64"] = m.scenario_hash;
    j["seed"] = m.seed;
    j["started_at"] = m.started_at;
    j["outputs"] = m.outputs;

    namespace fs = std::filesystem;
    const fs::path final_path = fs::path(dir) / "manifest.json";
    const fs::path tmp_path = fs::path(dir) / "manifest.json.tmp";
    {
        std::ofstream out(tmp_path);
        if (!out) {
            throw ConfigError("cannot open for writing: " + tmp_path.string());
        }
        out << j.dump(2) << "\n";
    }
    fs::rename(tmp_path, final_path);
}

} // namespace dwig
