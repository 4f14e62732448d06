// Closed-form along-track (ATRK), cross-track (XTRK) and fix displacement
// (FDE) error statistics of a gyro-only dead-reckoning aircraft.
//
// Each axis variance is split into three terms:
//   noise   - white rate noise,
//   drift   - Markov drift impulses occurring during the flight,
//   turnon  - the drift state already present when the gyro is switched on.
// Multiple drift processes are independent, so their terms add.
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "gyrofde/gyro_model.hpp"

namespace gyrofde {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kDefaultSpeedKmh = 900.0;
inline constexpr double kDefaultDurationH = 10.0;
inline constexpr double kDefaultDtH = 1.0 / 3600.0;

struct FlightProfile {
    double v = kDefaultSpeedKmh;          ///< ground speed, km/h
    double duration = kDefaultDurationH;  ///< h
    double R = kEarthRadiusKm;            ///< sphere radius, km
    double dt = kDefaultDtH;              ///< simulation step, h
};

void validate(const FlightProfile& p);

/// Variance contributions on one axis, km^2.
struct TermTriple {
    double noise = 0.0;
    double drift = 0.0;
    double turnon = 0.0;

    [[nodiscard]] double total() const { return noise + drift + turnon; }
};

struct ErrorBudget {
    double t = 0.0;
    TermTriple atrk;
    TermTriple xtrk;
    double sigma_atrk = 0.0;  ///< km
    double sigma_xtrk = 0.0;  ///< km
    double sigma_fde = 0.0;   ///< km

    /// 95% figure, taken as 2 sigma_FDE.
    [[nodiscard]] double fde95() const { return 2.0 * sigma_fde; }
};

enum class Axis { atrk, xtrk };

TermTriple atrk_variance(const GyroErrorModel& m, double R, double t);
TermTriple xtrk_variance(const GyroErrorModel& m, double v, double t);

ErrorBudget fde_sigma(const GyroErrorModel& m, const FlightProfile& p, double t);

/// Turn-on variance over in-flight drift variance on one axis (single drift).
double turnon_fraction(const GyroErrorModel& m, const FlightProfile& p, double t, Axis axis);

/// Budget CSV: t_h,sigma_atrk_km,sigma_xtrk_km,sigma_fde_km,fde95_nmi followed by
/// the six per-term variances in km^2.
void write_budget_csv_header(std::ostream& os);
void write_budget_csv_row(std::ostream& os, const ErrorBudget& b);

}  // namespace gyrofde
