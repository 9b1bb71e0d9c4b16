#pragma once

#include <filesystem>

#include "hwlab/config.hpp"
#include "hwlab/manifest.hpp"

namespace hwlab {

// Exit codes shared by the CLI and the in-process runners.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitInvariant = 4;

struct RunOptions {
    std::filesystem::path out_root = "hwlab_out";
    int jobs = 1;
    bool quiet = false;
};

// Command bodies, callable in-process (the CLI is a thin wrapper).  Each
// writes its artifacts plus a manifest under out_root/<command>/ and returns
// an exit code.
int run_groundstate(const Config& config, const RunOptions& opts);
int run_scan(const Config& config, const RunOptions& opts);
int run_evolve(const Config& config, const RunOptions& opts);
int run_stability(const Config& config, const RunOptions& opts);
int run_check(const Config& config, const RunOptions& opts);

}  // namespace hwlab
