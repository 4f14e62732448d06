// JSON reports emitted by the command-line tool.
#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "gyrofde/allan.hpp"
#include "gyrofde/montecarlo.hpp"
#include "gyrofde/tradestudy.hpp"

namespace gyrofde {

/// Keys: tau_min_s, sigma_min_deg_per_h, tau_max_s, sigma_max_deg_per_h,
/// K_deg_per_h32, Tc_h. Missing landmarks and drift are written as null.
nlohmann::json landmarks_json(const std::optional<AllanExtremum>& minimum,
                              const std::optional<AllanExtremum>& maximum,
                              const std::optional<DriftSpec>& drift);

nlohmann::json comparison_json(const ComparisonReport& report, const EnsembleStats& stats);

/// Keys: pass, fde95_nmi, margin_nmi, target_nmi, t_h, terms (km^2 per axis
/// and term), notes.
nlohmann::json compliance_json(const RequirementCheck& check, const RequirementTarget& target,
                               const GyroErrorModel& m);

/// Note attached when the model is the standard navigation-grade reference
/// gyro (N = 0.005 deg/sqrt(h), K = 0.01 deg/h^(3/2), Tc = 1 h) flown for
/// 10 h at 900 km/h.
std::optional<std::string> reference_gyro_note(const GyroErrorModel& m,
                                               const RequirementTarget& target, double fde95_km);

}  // namespace gyrofde
