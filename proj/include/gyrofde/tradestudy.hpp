// Requirement checks and noise/drift trade studies built on the closed-form
// FDE. Nothing here is random; every call is deterministic.
#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "gyrofde/analytic_error.hpp"
#include "gyrofde/gyro_model.hpp"
#include "gyrofde/units.hpp"

namespace gyrofde {

/// RNP-10: 95% fix displacement below 10 nmi.
inline constexpr double kRnp10Km = 10.0 * units::kKmPerNmi;

struct RequirementTarget {
    double fde95 = kRnp10Km;  ///< km
    FlightProfile flight;
    std::optional<double> evaluate_at;  ///< h; flight end when unset

    [[nodiscard]] double time() const { return evaluate_at.value_or(flight.duration); }
};

void validate(const RequirementTarget& r);

struct RequirementCheck {
    bool pass = false;
    double fde95 = 0.0;   ///< 2 sigma_FDE, km
    double margin = 0.0;  ///< target - fde95, km
    ErrorBudget budget;
};

RequirementCheck check_requirement(const GyroErrorModel& m, const RequirementTarget& r);

/// 2 sigma_FDE of a single-drift model with turn-on included.
double fde95_single(double N, double K, double Tc, const RequirementTarget& r);

/// K that puts 2 sigma_FDE exactly on the target, or nullopt when the noise
/// alone already exceeds it. Bisection to 1e-4 relative.
std::optional<double> solve_K(double N, double Tc, const RequirementTarget& r);

struct TcSolution {
    std::optional<double> Tc;   ///< smallest crossing; nullopt when none in range
    bool multi_crossing = false;
};

inline constexpr double kTcSearchLo = 1e-3;  ///< h

/// Tc in [1e-3 h, 10 x duration] with 2 sigma_FDE on the target. The bracket
/// is pre-scanned at 50 log-spaced points rather than assuming monotonicity.
TcSolution solve_Tc(double N, double K, const RequirementTarget& r);

struct LogRange {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;

    [[nodiscard]] std::vector<double> values() const;
};

struct FdeGrid {
    std::vector<double> N;      ///< rad/sqrt(h)
    std::vector<double> K;      ///< rad/h^(3/2)
    std::vector<double> fde95;  ///< row-major [N][K], km

    [[nodiscard]] double at(std::size_t i, std::size_t j) const { return fde95[i * K.size() + j]; }
};

FdeGrid fde_grid(const LogRange& N_range, const LogRange& K_range, double Tc,
                 const RequirementTarget& r);

struct ContourPoint {
    double axis = 0.0;          ///< N (rad/sqrt(h)) or Tc (h), depending on the sweep
    std::optional<double> K;    ///< rad/h^(3/2); empty when infeasible
    double margin = 0.0;        ///< target minus the drift-free 2 sigma_FDE, km
    double Tc = 0.0;            ///< h
};

struct ContourResult {
    enum class Axis { noise, time_constant };
    Axis axis = Axis::noise;
    std::vector<ContourPoint> points;

    /// K sqrt(Tc/2) at point i: the steady-state drift in rad/h.
    [[nodiscard]] std::optional<double> equivalent_bias(std::size_t i) const;
};

/// Required K along an N sweep at fixed Tc (one FDE contour line).
ContourResult contour_over_noise(const LogRange& N_range, double Tc, const RequirementTarget& r);

/// Required K along a Tc sweep at fixed N.
ContourResult contour_over_tc(double N, const LogRange& Tc_range, const RequirementTarget& r);

/// `N_deg_sqrth,K_deg_h32,fde95_nmi`
void write_grid_csv(std::ostream& os, const FdeGrid& grid);

/// `N_deg_sqrth,K_deg_h32,feasible` for noise sweeps, `Tc_h,K_deg_h32,feasible`
/// for Tc sweeps. Infeasible rows leave K empty.
void write_contour_csv(std::ostream& os, const ContourResult& contour);

}  // namespace gyrofde
