#include "gyrofde/report.hpp"

#include <cmath>
#include <cstdio>

#include "gyrofde/units.hpp"

namespace gyrofde {
namespace {

nlohmann::json axis_json(const AxisComparison& axis) {
    return {{"times_h", axis.times},
            {"analytic_km", axis.analytic},
            {"deviation", axis.deviation},
            {"coverage", axis.coverage},
            {"pooled_deviation", axis.pooled_deviation}};
}

nlohmann::json terms_json(const TermTriple& t) {
    return {{"noise_km2", t.noise}, {"drift_km2", t.drift}, {"turnon_km2", t.turnon}};
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::abs(b); }

}  // namespace

nlohmann::json landmarks_json(const std::optional<AllanExtremum>& minimum,
                              const std::optional<AllanExtremum>& maximum,
                              const std::optional<DriftSpec>& drift) {
    nlohmann::json j;
    j["tau_min_s"] = minimum ? nlohmann::json(units::to_seconds(minimum->tau)) : nullptr;
    j["sigma_min_deg_per_h"] = minimum ? nlohmann::json(units::to_deg(minimum->sigma)) : nullptr;
    j["tau_max_s"] = maximum ? nlohmann::json(units::to_seconds(maximum->tau)) : nullptr;
    j["sigma_max_deg_per_h"] = maximum ? nlohmann::json(units::to_deg(maximum->sigma)) : nullptr;
    j["K_deg_per_h32"] = drift ? nlohmann::json(units::to_deg(drift->K)) : nullptr;
    j["Tc_h"] = drift ? nlohmann::json(drift->Tc) : nullptr;
    return j;
}

nlohmann::json comparison_json(const ComparisonReport& report, const EnsembleStats& stats) {
    return {{"n_flights", stats.n_flights},
            {"n_groups", stats.n_groups},
            {"master_seed", stats.master_seed},
            {"band_level", report.level},
            {"band", {report.band_lower, report.band_upper}},
            {"atrk", axis_json(report.atrk)},
            {"xtrk", axis_json(report.xtrk)}};
}

nlohmann::json compliance_json(const RequirementCheck& check, const RequirementTarget& target,
                               const GyroErrorModel& m) {
    nlohmann::json notes = nlohmann::json::array();
    if (auto note = reference_gyro_note(m, target, check.fde95)) notes.push_back(*note);
    return {{"pass", check.pass},
            {"fde95_nmi", units::to_nmi(check.fde95)},
            {"margin_nmi", units::to_nmi(check.margin)},
            {"target_nmi", units::to_nmi(target.fde95)},
            {"t_h", target.time()},
            {"sigma_atrk_km", check.budget.sigma_atrk},
            {"sigma_xtrk_km", check.budget.sigma_xtrk},
            {"sigma_fde_km", check.budget.sigma_fde},
            {"terms", {{"atrk", terms_json(check.budget.atrk)}, {"xtrk", terms_json(check.budget.xtrk)}}},
            {"notes", notes}};
}

std::optional<std::string> reference_gyro_note(const GyroErrorModel& m,
                                               const RequirementTarget& target, double fde95_km) {
    if (m.drifts.size() != 1 || !m.turn_on) return std::nullopt;
    const auto& d = m.drifts.front();
    const bool reference = close(m.noise.N, units::deg_per_sqrt_h(0.005)) &&
                           close(d.K, units::deg_per_h_3_2(0.01)) && close(d.Tc, 1.0) &&
                           close(target.flight.v, 900.0) && close(target.time(), 10.0);
    if (!reference) return std::nullopt;
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "reference navigation-grade gyro: the 95%% FDE is commonly quoted as just "
                  "under 10 nmi for this point; the closed-form value computed here is %.2f nmi "
                  "(N read as deg/sqrt(h))",
                  units::to_nmi(fde95_km));
    return std::string(buf);
}

}  // namespace gyrofde
