#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hwlab/dynamics.hpp"
#include "hwlab/mass_scan.hpp"
#include "hwlab/stability.hpp"

namespace hwlab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Human-readable key-value configuration with [section] headers, '#' or ';'
// comments, and key = value lines.  Keys are validated against the schema in
// config.cpp; an unknown or malformed entry raises ConfigError naming it.
class Config {
  public:
    static Config parse(const std::string& text);
    static Config load(const std::filesystem::path& path);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key,
                                 const std::vector<double>& fallback) const;

    void set(const std::string& section, const std::string& key, const std::string& value);
    std::string serialize() const;
    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

    void validate_schema() const;  // throws ConfigError naming the offending key

  private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

// Builders resolve a full parameter set from the config, applying documented
// defaults for every missing key.
ModelParams model_from(const Config& c);
SolveConfig solve_from(const Config& c);
ScanConfig scan_config_from(const Config& c);
EvolveConfig evolve_from(const Config& c);
StabilityConfig stability_from(const Config& c);

}  // namespace hwlab
