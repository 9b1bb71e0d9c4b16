#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hwlab/config.hpp"

namespace hwlab {

inline constexpr const char* kVersion = "hwlab 0.1.0";

// Everything needed to reproduce a run: the command, the fully resolved
// configuration, and the produced artifact paths.  Wall-clock fields are
// metadata only; the data artifacts themselves are bit-reproducible.
struct RunManifest {
    std::string command;
    std::string version = kVersion;
    Config resolved_config;
    std::vector<std::string> outputs;
    std::string started_at_utc;
    double elapsed_seconds = 0.0;
    int jobs = 1;
};

void write_manifest(const RunManifest& m, const std::filesystem::path& path);

std::string utc_now_string();

}  // namespace hwlab
