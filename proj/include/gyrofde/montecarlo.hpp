// Monte-Carlo flights with gyro rate errors and ensemble statistics.
//
// Each flight has two independent gyro axes: pitch drives the along-track
// error through the subtended arc, yaw drives the cross-track error through
// the linearized heading kinematics dy = v * dtheta * dt.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gyrofde/analytic_error.hpp"
#include "gyrofde/gyro_model.hpp"

namespace gyrofde {

inline constexpr std::uint64_t kPitchAxis = 0;
inline constexpr std::uint64_t kYawAxis = 1;

struct FlightKey {
    std::uint64_t seed = 0;
    std::uint64_t group = 0;
    std::uint64_t flight = 0;
};

struct FlightSample {
    std::vector<double> times;     ///< h
    std::vector<double> atrk_err;  ///< km
    std::vector<double> xtrk_err;  ///< km
    FlightKey key;
};

struct EnsembleOptions {
    std::size_t n_flights = 100;
    std::size_t n_groups = 10;
    std::uint64_t master_seed = 42;
    double record_step = 0.1;  ///< h between recorded epochs, rounded to a multiple of dt
    unsigned workers = 0;      ///< 0 picks default_worker_count()
};

struct EnsembleStats {
    std::vector<double> times;                  ///< h
    std::vector<std::vector<double>> std_atrk;  ///< [group][time], km
    std::vector<std::vector<double>> std_xtrk;  ///< [group][time], km
    std::vector<double> pooled_std_atrk;        ///< over every flight, km
    std::vector<double> pooled_std_xtrk;
    std::size_t n_flights = 0;
    std::size_t n_groups = 0;
    std::uint64_t master_seed = 0;
    GyroErrorModel model;
    FlightProfile profile;
};

struct AxisComparison {
    std::vector<double> times;                   ///< h, only epochs with analytic sigma > 0
    std::vector<double> analytic;                ///< km
    std::vector<std::vector<double>> deviation;  ///< [group][time], std/analytic - 1
    std::vector<double> coverage;                ///< fraction of groups inside the band per time
    std::vector<double> pooled_deviation;        ///< pooled std/analytic - 1
};

struct ComparisonReport {
    double level = 0.95;
    double band_lower = 0.0;  ///< band on std/analytic for one group
    double band_upper = 0.0;
    AxisComparison atrk;
    AxisComparison xtrk;
};

/// Worker count from GYROFDE_WORKERS, else hardware concurrency (at least 1).
unsigned default_worker_count();

FlightSample simulate_flight(const GyroErrorModel& m, const FlightProfile& p, const FlightKey& key);

/// Runs n_groups x n_flights flights; flight (g, i) draws from streams keyed by
/// (master_seed, g, i). Bit-identical for any worker count.
EnsembleStats run_ensemble(const GyroErrorModel& m, const FlightProfile& p,
                           const EnsembleOptions& opts);

/// Two-sided chi-square band for the sample standard deviation of n Gaussian
/// draws, as multiples of the true sigma.
std::pair<double, double> sample_std_band(std::size_t n, double level);

ComparisonReport compare_to_analytic(const EnsembleStats& stats, const GyroErrorModel& m,
                                     const FlightProfile& p, double level = 0.95);

/// Fraction of groups whose std lies inside the band at the epoch closest to t.
double coverage_at(const AxisComparison& axis, double t);

/// CSV with header `t_h,group,std_atrk_km,std_xtrk_km`.
void write_ensemble_csv(std::ostream& os, const EnsembleStats& stats);

}  // namespace gyrofde
