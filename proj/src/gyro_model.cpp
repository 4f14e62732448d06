#include "gyrofde/gyro_model.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gyrofde/units.hpp"

namespace gyrofde {

void validate(const NoiseSpec& n) {
    if (!(n.N >= 0.0) || !std::isfinite(n.N)) throw ModelError("noise N must be finite and >= 0");
}

void validate(const DriftSpec& d) {
    if (!(d.K >= 0.0) || !std::isfinite(d.K)) throw ModelError("drift K must be finite and >= 0");
    if (!(d.Tc > 0.0) || !std::isfinite(d.Tc)) throw ModelError("drift Tc must be finite and > 0");
}

void validate(const GyroErrorModel& m) {
    validate(m.noise);
    for (const auto& d : m.drifts) validate(d);
}

double drift_stationary_std(const DriftSpec& d) { return d.K * std::sqrt(d.Tc / 2.0); }

double init_drift_state(const DriftSpec& d, bool turn_on, RandomStream& rng) {
    if (!turn_on) return 0.0;
    return drift_stationary_std(d) * rng.gaussian();
}

double step_drift(double state, const DriftSpec& d, double dt, RandomStream& rng) {
    return state * std::exp(-dt / d.Tc) + d.K * rng.gaussian() * std::sqrt(dt);
}

double noise_sample(const NoiseSpec& n, double dt, RandomStream& rng) {
    return n.N * rng.gaussian() / std::sqrt(dt);
}

std::size_t step_count(double duration, double dt) {
    return static_cast<std::size_t>(std::llround(duration / dt));
}

GyroChannel::GyroChannel(const GyroErrorModel& model, std::uint64_t seed, std::uint64_t group,
                         std::uint64_t flight, std::uint64_t axis)
    : model_(&model), noise_rng_(seed, {group, flight, axis, 0}) {
    drift_rngs_.reserve(model.drifts.size());
    states_.reserve(model.drifts.size());
    for (std::size_t i = 0; i < model.drifts.size(); ++i) {
        auto& rng = drift_rngs_.emplace_back(seed, std::initializer_list<std::uint64_t>{
                                                       group, flight, axis, i + 1});
        states_.push_back(init_drift_state(model.drifts[i], model.turn_on, rng));
    }
}

double GyroChannel::next(double dt) {
    double rate = noise_sample(model_->noise, dt, noise_rng_);
    for (std::size_t i = 0; i < states_.size(); ++i) {
        rate += states_[i];
        states_[i] = step_drift(states_[i], model_->drifts[i], dt, drift_rngs_[i]);
    }
    return rate;
}

RateTrace synthesize_rate_trace(const GyroErrorModel& m, double duration, double dt,
                                std::uint64_t seed) {
    validate(m);
    if (!(dt > 0.0) || !(duration >= dt)) {
        throw ModelError("rate trace needs duration >= dt > 0");
    }
    RateTrace trace;
    trace.dt = dt;
    const auto n = step_count(duration, dt);
    trace.duration = static_cast<double>(n) * dt;
    trace.samples.resize(n);
    GyroChannel channel(m, seed, 0, 0, 0);
    for (auto& s : trace.samples) s = channel.next(dt);
    return trace;
}

void write_rate_trace_csv(std::ostream& os, const RateTrace& trace) {
    os << "t_h,rate_deg_per_h\n";
    char buf[64];
    for (std::size_t k = 0; k < trace.samples.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", static_cast<double>(k) * trace.dt,
                      units::to_deg(trace.samples[k]));
        os << buf;
    }
}

RateTrace read_rate_trace_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("t_h,rate_deg_per_h", 0) != 0) {
        throw ModelError("rate trace CSV must start with header 't_h,rate_deg_per_h'");
    }
    std::vector<double> times;
    RateTrace trace;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        std::istringstream ls(line);
        double t = 0.0;
        double r = 0.0;
        char comma = 0;
        if (!(ls >> t >> comma >> r) || comma != ',') {
            throw ModelError("rate trace CSV: malformed row " + std::to_string(row));
        }
        times.push_back(t);
        trace.samples.push_back(units::deg_per_h(r));
    }
    if (times.size() < 2) throw ModelError("rate trace CSV needs at least two samples");
    trace.dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (!(trace.dt > 0.0)) throw ModelError("rate trace CSV: times must increase");
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (std::abs(times[k] - times[k - 1] - trace.dt) > 1e-6 * trace.dt) {
            throw ModelError("rate trace CSV: non-uniform sample spacing at row " +
                             std::to_string(k + 2));
        }
    }
    trace.duration = static_cast<double>(trace.samples.size()) * trace.dt;
    return trace;
}

}  // namespace gyrofde
