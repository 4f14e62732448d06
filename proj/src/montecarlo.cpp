#include "gyrofde/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>

namespace gyrofde {
namespace {

// Kahan-Babuska compensated accumulator.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct Recorded {
    std::vector<double> atrk;
    std::vector<double> xtrk;
};

// Integrates one flight, calling `record(k, atrk, xtrk)` at every step index k.
template <typename Record>
void integrate_flight(const GyroErrorModel& m, const FlightProfile& p, const FlightKey& key,
                      Record&& record) {
    const std::size_t steps = step_count(p.duration, p.dt);
    GyroChannel pitch(m, key.seed, key.group, key.flight, kPitchAxis);
    GyroChannel yaw(m, key.seed, key.group, key.flight, kYawAxis);
    CompensatedSum theta_pitch;
    CompensatedSum theta_yaw;
    CompensatedSum y;
    record(std::size_t{0}, 0.0, 0.0);
    for (std::size_t k = 0; k < steps; ++k) {
        const double yaw_before = theta_yaw.value();
        theta_pitch.add(pitch.next(p.dt) * p.dt);
        theta_yaw.add(yaw.next(p.dt) * p.dt);
        // Trapezoidal integration of the heading error into cross-track distance.
        y.add(p.v * p.dt * 0.5 * (yaw_before + theta_yaw.value()));
        record(k + 1, p.R * theta_pitch.value(), y.value());
    }
}

double sample_std(const std::vector<double>& x) {
    const auto n = static_cast<double>(x.size());
    double mean = 0.0;
    for (const double v : x) mean += v;
    mean /= n;
    double ss = 0.0;
    for (const double v : x) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / (n - 1.0));
}

AxisComparison compare_axis(const std::vector<double>& times,
                            const std::vector<std::vector<double>>& group_std,
                            const std::vector<double>& pooled,
                            const std::vector<double>& analytic_all, double lo, double hi) {
    AxisComparison out;
    out.deviation.resize(group_std.size());
    for (std::size_t t = 0; t < times.size(); ++t) {
        const double a = analytic_all[t];
        if (!(a > 0.0)) continue;
        out.times.push_back(times[t]);
        out.analytic.push_back(a);
        std::size_t inside = 0;
        for (std::size_t g = 0; g < group_std.size(); ++g) {
            const double ratio = group_std[g][t] / a;
            out.deviation[g].push_back(ratio - 1.0);
            if (ratio >= lo && ratio <= hi) ++inside;
        }
        out.coverage.push_back(static_cast<double>(inside) /
                               static_cast<double>(group_std.size()));
        out.pooled_deviation.push_back(pooled[t] / a - 1.0);
    }
    return out;
}

bool same_model(const GyroErrorModel& a, const GyroErrorModel& b) {
    if (a.noise.N != b.noise.N || a.turn_on != b.turn_on || a.drifts.size() != b.drifts.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.drifts.size(); ++i) {
        if (a.drifts[i].K != b.drifts[i].K || a.drifts[i].Tc != b.drifts[i].Tc) return false;
    }
    return true;
}

bool same_profile(const FlightProfile& a, const FlightProfile& b) {
    return a.v == b.v && a.duration == b.duration && a.R == b.R && a.dt == b.dt;
}

}  // namespace

unsigned default_worker_count() {
    if (const char* env = std::getenv("GYROFDE_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

FlightSample simulate_flight(const GyroErrorModel& m, const FlightProfile& p,
                             const FlightKey& key) {
    validate(m);
    validate(p);
    const std::size_t steps = step_count(p.duration, p.dt);
    FlightSample out;
    out.key = key;
    out.times.resize(steps + 1);
    out.atrk_err.resize(steps + 1);
    out.xtrk_err.resize(steps + 1);
    integrate_flight(m, p, key, [&](std::size_t k, double a, double x) {
        out.times[k] = static_cast<double>(k) * p.dt;
        out.atrk_err[k] = a;
        out.xtrk_err[k] = x;
    });
    return out;
}

EnsembleStats run_ensemble(const GyroErrorModel& m, const FlightProfile& p,
                           const EnsembleOptions& opts) {
    validate(m);
    validate(p);
    if (opts.n_flights < 2) throw std::invalid_argument("ensemble needs at least 2 flights");
    if (opts.n_groups < 1) throw std::invalid_argument("ensemble needs at least 1 group");

    const std::size_t steps = step_count(p.duration, p.dt);
    const std::size_t stride =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(opts.record_step / p.dt)));
    std::vector<std::size_t> epochs;
    for (std::size_t k = 0; k <= steps; k += stride) epochs.push_back(k);
    if (epochs.back() != steps) epochs.push_back(steps);

    const std::size_t total = opts.n_flights * opts.n_groups;
    std::vector<Recorded> flights(total);

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t idx = next++; idx < total; idx = next++) {
            const FlightKey key{opts.master_seed, idx / opts.n_flights, idx % opts.n_flights};
            auto& rec = flights[idx];
            rec.atrk.reserve(epochs.size());
            rec.xtrk.reserve(epochs.size());
            std::size_t e = 0;
            integrate_flight(m, p, key, [&](std::size_t k, double a, double x) {
                if (e < epochs.size() && epochs[e] == k) {
                    rec.atrk.push_back(a);
                    rec.xtrk.push_back(x);
                    ++e;
                }
            });
        }
    };
    const unsigned n_workers =
        std::min<std::size_t>(opts.workers ? opts.workers : default_worker_count(), total);
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    }

    // Reduction in flight-index order only.
    EnsembleStats stats;
    stats.n_flights = opts.n_flights;
    stats.n_groups = opts.n_groups;
    stats.master_seed = opts.master_seed;
    stats.model = m;
    stats.profile = p;
    for (const auto k : epochs) stats.times.push_back(static_cast<double>(k) * p.dt);
    const std::size_t n_t = epochs.size();
    stats.std_atrk.assign(opts.n_groups, std::vector<double>(n_t));
    stats.std_xtrk.assign(opts.n_groups, std::vector<double>(n_t));
    stats.pooled_std_atrk.resize(n_t);
    stats.pooled_std_xtrk.resize(n_t);
    std::vector<double> column_a(opts.n_flights);
    std::vector<double> column_x(opts.n_flights);
    std::vector<double> all_a(total);
    std::vector<double> all_x(total);
    for (std::size_t t = 0; t < n_t; ++t) {
        for (std::size_t g = 0; g < opts.n_groups; ++g) {
            for (std::size_t i = 0; i < opts.n_flights; ++i) {
                const auto& rec = flights[g * opts.n_flights + i];
                column_a[i] = rec.atrk[t];
                column_x[i] = rec.xtrk[t];
                all_a[g * opts.n_flights + i] = rec.atrk[t];
                all_x[g * opts.n_flights + i] = rec.xtrk[t];
            }
            stats.std_atrk[g][t] = sample_std(column_a);
            stats.std_xtrk[g][t] = sample_std(column_x);
        }
        stats.pooled_std_atrk[t] = sample_std(all_a);
        stats.pooled_std_xtrk[t] = sample_std(all_x);
    }
    return stats;
}

std::pair<double, double> sample_std_band(std::size_t n, double level) {
    if (n < 2) throw std::invalid_argument("sample std band needs n >= 2");
    const double df = static_cast<double>(n - 1);
    const boost::math::chi_squared dist(df);
    const double alpha = 1.0 - level;
    return {std::sqrt(boost::math::quantile(dist, alpha / 2.0) / df),
            std::sqrt(boost::math::quantile(dist, 1.0 - alpha / 2.0) / df)};
}

ComparisonReport compare_to_analytic(const EnsembleStats& stats, const GyroErrorModel& m,
                                     const FlightProfile& p, double level) {
    if (!same_model(stats.model, m) || !same_profile(stats.profile, p)) {
        throw std::invalid_argument(
            "ensemble statistics were produced from a different model or flight profile");
    }
    ComparisonReport report;
    report.level = level;
    std::tie(report.band_lower, report.band_upper) = sample_std_band(stats.n_flights, level);

    std::vector<double> sigma_a(stats.times.size());
    std::vector<double> sigma_x(stats.times.size());
    for (std::size_t t = 0; t < stats.times.size(); ++t) {
        const auto b = fde_sigma(m, p, std::min(stats.times[t], p.duration));
        sigma_a[t] = b.sigma_atrk;
        sigma_x[t] = b.sigma_xtrk;
    }
    report.atrk = compare_axis(stats.times, stats.std_atrk, stats.pooled_std_atrk, sigma_a,
                               report.band_lower, report.band_upper);
    report.xtrk = compare_axis(stats.times, stats.std_xtrk, stats.pooled_std_xtrk, sigma_x,
                               report.band_lower, report.band_upper);
    return report;
}

double coverage_at(const AxisComparison& axis, double t) {
    if (axis.times.empty()) throw std::invalid_argument("comparison has no epochs");
    std::size_t best = 0;
    for (std::size_t i = 1; i < axis.times.size(); ++i) {
        if (std::abs(axis.times[i] - t) < std::abs(axis.times[best] - t)) best = i;
    }
    return axis.coverage[best];
}

void write_ensemble_csv(std::ostream& os, const EnsembleStats& stats) {
    os << "t_h,group,std_atrk_km,std_xtrk_km\n";
    char buf[128];
    for (std::size_t t = 0; t < stats.times.size(); ++t) {
        for (std::size_t g = 0; g < stats.n_groups; ++g) {
            std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g,%.17g\n", stats.times[t], g,
                          stats.std_atrk[g][t], stats.std_xtrk[g][t]);
            os << buf;
        }
    }
}

}  // namespace gyrofde
