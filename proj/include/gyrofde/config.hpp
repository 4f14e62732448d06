// Run configuration: JSON document with unit-tagged strings, overridable from
// the command line. Every quantity is converted to canonical units here.
//
//   {
//     "N": "0.005 deg_per_sqrt_h",
//     "drifts": [{"K": "0.01 deg_per_h_3_2", "Tc": "1 h"}],
//     "turn_on": true,
//     "v": "900 km_per_h", "duration": "10 h", "R": "6371 km", "dt": "1 s",
//     "seed": 42
//   }
#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gyrofde/analytic_error.hpp"
#include "gyrofde/gyro_model.hpp"

namespace gyrofde {

/// Configuration error tagged with the offending field path, e.g. `drifts[0].Tc`.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}

    [[nodiscard]] const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct RunConfig {
    GyroErrorModel model;
    FlightProfile flight;
    std::uint64_t seed = 42;
};

/// Command-line overrides; each set field replaces the file value.
struct ConfigOverrides {
    std::optional<std::string> N;
    std::optional<std::vector<std::string>> drifts;  ///< "<K quantity>,<Tc quantity>"
    std::optional<bool> turn_on;
    std::optional<std::string> v;
    std::optional<std::string> duration;
    std::optional<std::string> R;
    std::optional<std::string> dt;
    std::optional<std::uint64_t> seed;
};

/// Parses and validates; `doc` may be null when everything comes from flags.
RunConfig parse_config(const nlohmann::json& doc, const ConfigOverrides& overrides = {});

/// Reads `path` as JSON, then calls parse_config.
RunConfig load_config(const std::string& path, const ConfigOverrides& overrides = {});

}  // namespace gyrofde
