// Allan variance of gyro rate error: closed form for the noise + Markov drift
// model, a fully-overlapping estimator for recorded traces, and drift
// identification from the location of the Allan deviation maximum.
#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "gyrofde/gyro_model.hpp"

namespace gyrofde {

struct AllanPoint {
    double tau = 0.0;    ///< h
    double sigma = 0.0;  ///< rad/h
};

struct AllanCurve {
    enum class Source { analytic, empirical };
    std::vector<AllanPoint> points;
    Source source = Source::analytic;
};

struct AllanExtremum {
    double tau = 0.0;
    double sigma = 0.0;
};

struct AllanLandmarks {
    std::optional<AllanExtremum> minimum;
    std::optional<AllanExtremum> maximum;

    // Closed-form approximations: tau_min ~ sqrt(3) N/K, sigma_min ~ 1.074 sqrt(NK),
    // tau_max ~ 1.89 Tc, sigma_max ~ 0.437 K sqrt(Tc). Advisory only; the
    // numerically located extrema above are authoritative.
    AllanExtremum approx_minimum;
    AllanExtremum approx_maximum;
};

struct ConfidenceBand {
    double lower = 0.0;
    double upper = 0.0;
};

inline constexpr double kTauMaxPerTc = 1.89;
inline constexpr double kSigmaMaxPerKSqrtTc = 0.437;
inline constexpr double kSigmaMinPerSqrtNK = 1.074;

double allan_variance_analytic(const GyroErrorModel& m, double tau);

AllanCurve allan_curve_analytic(const GyroErrorModel& m, const std::vector<double>& taus);

/// Fully-overlapping Allan variance (stride dt). Every tau must be a multiple
/// of trace.dt with 2 tau <= trace.duration.
AllanCurve allan_variance_empirical(const RateTrace& trace, const std::vector<double>& taus);

/// `per_decade` log-spaced values between lo and hi inclusive.
std::vector<double> log_grid(double lo, double hi, int per_decade);

/// Log grid snapped to integer multiples of dt, duplicates removed.
std::vector<double> tau_grid(double dt, double lo, double hi, int per_decade = 10);

/// Default estimator grid: 2 dt to duration/5, ten points per decade.
std::vector<double> default_tau_grid(double dt, double duration);

/// Two-sided chi-square band for the Allan deviation at `tau`, using
/// floor(duration/tau) - 1 degrees of freedom (independent tau windows).
ConfidenceBand allan_confidence_band(double sigma, double tau, double duration,
                                     double level = 0.99);

/// Extrema of the closed-form Allan deviation for a single-drift model.
AllanLandmarks allan_landmarks_analytic(const GyroErrorModel& m);

/// Maximum of the Allan deviation of a single drift process with no white
/// noise. Scales exactly as (Tc, K sqrt(Tc)).
AllanExtremum drift_term_maximum(const DriftSpec& d);

/// Inverts the maximum landmarks: Tc = tau_max/1.89, K = sigma_max/(0.437 sqrt(Tc)).
DriftSpec identify_from_max(double tau_max, double sigma_max);

/// Largest interior local maximum of a sampled curve, refined by a parabola
/// through the neighbouring points in log-log space.
std::optional<AllanExtremum> curve_maximum(const AllanCurve& curve);

/// CSV with header `tau_s,sigma_deg_per_h`.
void write_allan_csv(std::ostream& os, const AllanCurve& curve);
AllanCurve read_allan_csv(std::istream& is);

}  // namespace gyrofde
