#include "hwlab/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include <json.hpp>

namespace hwlab {

std::string utc_now_string() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["version"] = m.version;
    j["jobs"] = m.jobs;
    nlohmann::ordered_json cfg;
    for (const auto& [section, kv] : m.resolved_config.sections()) {
        nlohmann::ordered_json sec;
        for (const auto& [key, val] : kv) sec[key] = val;
        cfg[section] = sec;
    }
    j["config"] = cfg;
    j["outputs"] = m.outputs;
    j["started_at_utc"] = m.started_at_utc;
    j["elapsed_seconds"] = m.elapsed_seconds;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_manifest: cannot open " + path.string());
    os << j.dump(2) << "\n";
}

}  // namespace hwlab
