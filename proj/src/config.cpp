#include "gyrofde/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "gyrofde/units.hpp"

namespace gyrofde {
namespace {

using units::Dimension;

double parse_field(const std::string& path, const std::string& text, Dimension dim) {
    try {
        return units::parse_canonical(text, dim);
    } catch (const units::UnitError& e) {
        throw ConfigError(path, e.what());
    }
}

double parse_field(const std::string& path, const nlohmann::json& node, Dimension dim) {
    if (!node.is_string()) {
        throw ConfigError(path, "expected a string like \"<number> <unit>\"");
    }
    return parse_field(path, node.get<std::string>(), dim);
}

DriftSpec parse_drift_flag(const std::string& path, const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw ConfigError(path, "expected \"<K> <unit>,<Tc> <unit>\", got \"" + text + "\"");
    }
    return {parse_field(path + ".K", text.substr(0, comma), Dimension::rate_random_walk),
            parse_field(path + ".Tc", text.substr(comma + 1), Dimension::time)};
}

void check_positive(const std::string& path, double value, bool allow_zero) {
    if (!std::isfinite(value)) throw ConfigError(path, "must be finite");
    if (allow_zero ? value < 0.0 : value <= 0.0) {
        throw ConfigError(path, allow_zero ? "must be >= 0" : "must be > 0");
    }
}

}  // namespace

RunConfig parse_config(const nlohmann::json& doc, const ConfigOverrides& ov) {
    RunConfig cfg;
    bool have_noise = false;

    if (!doc.is_null()) {
        if (!doc.is_object()) throw ConfigError("<root>", "config must be a JSON object");
        static const std::set<std::string> known{"N", "drifts", "turn_on", "v",
                                                 "duration", "R", "dt", "seed"};
        for (const auto& [key, _] : doc.items()) {
            if (!known.contains(key)) throw ConfigError(key, "unknown field");
        }
        if (doc.contains("N")) {
            cfg.model.noise.N = parse_field("N", doc["N"], Dimension::angle_random_walk);
            have_noise = true;
        }
        if (doc.contains("drifts")) {
            const auto& list = doc["drifts"];
            if (!list.is_array()) throw ConfigError("drifts", "expected an array");
            for (std::size_t i = 0; i < list.size(); ++i) {
                const std::string path = "drifts[" + std::to_string(i) + "]";
                const auto& item = list[i];
                if (!item.is_object()) throw ConfigError(path, "expected an object");
                for (const auto& [key, _] : item.items()) {
                    if (key != "K" && key != "Tc") throw ConfigError(path + "." + key, "unknown field");
                }
                if (!item.contains("K")) throw ConfigError(path + ".K", "missing required field");
                if (!item.contains("Tc")) throw ConfigError(path + ".Tc", "missing required field");
                cfg.model.drifts.push_back(
                    {parse_field(path + ".K", item["K"], Dimension::rate_random_walk),
                     parse_field(path + ".Tc", item["Tc"], Dimension::time)});
            }
        }
        if (doc.contains("turn_on")) {
            if (!doc["turn_on"].is_boolean()) throw ConfigError("turn_on", "expected a boolean");
            cfg.model.turn_on = doc["turn_on"].get<bool>();
        }
        if (doc.contains("v")) cfg.flight.v = parse_field("v", doc["v"], Dimension::speed);
        if (doc.contains("duration")) {
            cfg.flight.duration = parse_field("duration", doc["duration"], Dimension::time);
        }
        if (doc.contains("R")) cfg.flight.R = parse_field("R", doc["R"], Dimension::length);
        if (doc.contains("dt")) cfg.flight.dt = parse_field("dt", doc["dt"], Dimension::time);
        if (doc.contains("seed")) {
            if (!doc["seed"].is_number_unsigned()) {
                throw ConfigError("seed", "expected a non-negative integer");
            }
            cfg.seed = doc["seed"].get<std::uint64_t>();
        }
    }

    if (ov.N) {
        cfg.model.noise.N = parse_field("N", *ov.N, Dimension::angle_random_walk);
        have_noise = true;
    }
    if (ov.drifts) {
        cfg.model.drifts.clear();
        for (std::size_t i = 0; i < ov.drifts->size(); ++i) {
            cfg.model.drifts.push_back(
                parse_drift_flag("drifts[" + std::to_string(i) + "]", (*ov.drifts)[i]));
        }
    }
    if (ov.turn_on) cfg.model.turn_on = *ov.turn_on;
    if (ov.v) cfg.flight.v = parse_field("v", *ov.v, Dimension::speed);
    if (ov.duration) cfg.flight.duration = parse_field("duration", *ov.duration, Dimension::time);
    if (ov.R) cfg.flight.R = parse_field("R", *ov.R, Dimension::length);
    if (ov.dt) cfg.flight.dt = parse_field("dt", *ov.dt, Dimension::time);
    if (ov.seed) cfg.seed = *ov.seed;

    if (!have_noise) throw ConfigError("N", "missing required field");
    check_positive("N", cfg.model.noise.N, true);
    for (std::size_t i = 0; i < cfg.model.drifts.size(); ++i) {
        const std::string path = "drifts[" + std::to_string(i) + "]";
        check_positive(path + ".K", cfg.model.drifts[i].K, true);
        check_positive(path + ".Tc", cfg.model.drifts[i].Tc, false);
    }
    check_positive("v", cfg.flight.v, true);
    check_positive("duration", cfg.flight.duration, false);
    check_positive("R", cfg.flight.R, false);
    check_positive("dt", cfg.flight.dt, false);
    if (cfg.flight.dt > cfg.flight.duration) throw ConfigError("dt", "must not exceed duration");
    return cfg;
}

RunConfig load_config(const std::string& path, const ConfigOverrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open config file '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc, overrides);
}

}  // namespace gyrofde
