// Statistical gyroscope error model: white rate noise plus any number of
// first-order Markov drift processes. All quantities are canonical
// (rad, h): N in rad/sqrt(h), K in rad/h^(3/2), Tc and dt in h, rates in rad/h.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "gyrofde/rng.hpp"

namespace gyrofde {

class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct NoiseSpec {
    double N = 0.0;  ///< angle random walk, rad/sqrt(h)
};

struct DriftSpec {
    double K = 0.0;   ///< rate random walk amplitude, rad/h^(3/2)
    double Tc = 1.0;  ///< correlation time, h
};

struct GyroErrorModel {
    NoiseSpec noise;
    std::vector<DriftSpec> drifts;
    /// Start each drift process from its stationary distribution instead of zero.
    bool turn_on = true;
};

/// Zero-rotation rate error record.
struct RateTrace {
    double dt = 0.0;              ///< sample spacing, h
    std::vector<double> samples;  ///< rate error, rad/h
    double duration = 0.0;        ///< record length, h
};

void validate(const NoiseSpec& n);
void validate(const DriftSpec& d);
void validate(const GyroErrorModel& m);

/// Standard deviation of a drift process in steady state, K*sqrt(Tc/2).
double drift_stationary_std(const DriftSpec& d);

/// Initial drift state: a stationary draw when `turn_on` is set, else 0.
double init_drift_state(const DriftSpec& d, bool turn_on, RandomStream& rng);

/// Exact one-step Markov update: state*exp(-dt/Tc) + w_K*sqrt(dt), w_K ~ N(0, K^2).
double step_drift(double state, const DriftSpec& d, double dt, RandomStream& rng);

/// White rate noise sample: w_N/sqrt(dt), w_N ~ N(0, N^2).
double noise_sample(const NoiseSpec& n, double dt, RandomStream& rng);

/// Number of steps covering `duration` at spacing `dt`.
std::size_t step_count(double duration, double dt);

/**
 * Rate error generator for a single gyro axis.
 *
 * Each process (noise first, then drifts in list order) owns a stream keyed
 * by (seed, group, flight, axis, process index). Sample k is the noise draw
 * plus the current drift states; the drift states are advanced afterwards,
 * so the first sample carries the turn-on offset.
 */
class GyroChannel {
public:
    GyroChannel(const GyroErrorModel& model, std::uint64_t seed, std::uint64_t group,
                std::uint64_t flight, std::uint64_t axis);

    double next(double dt);

private:
    const GyroErrorModel* model_;
    RandomStream noise_rng_;
    std::vector<RandomStream> drift_rngs_;
    std::vector<double> states_;
};

RateTrace synthesize_rate_trace(const GyroErrorModel& m, double duration, double dt,
                                std::uint64_t seed);

/// CSV with header `t_h,rate_deg_per_h`, 17 significant digits.
void write_rate_trace_csv(std::ostream& os, const RateTrace& trace);

/// Reads the format written by write_rate_trace_csv. Sample spacing must be uniform.
RateTrace read_rate_trace_csv(std::istream& is);

}  // namespace gyrofde
