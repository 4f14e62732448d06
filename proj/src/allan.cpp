#include "gyrofde/allan.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gyrofde/markov_kernels.hpp"
#include "gyrofde/units.hpp"

namespace gyrofde {
namespace {

// Golden-section search for a minimum of f on [a, b].
double golden_section_min(const std::function<double(double)>& f, double a, double b,
                          double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (std::abs(b - a) > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

std::size_t tau_multiple(double tau, double dt) {
    const double ratio = tau / dt;
    const double m = std::round(ratio);
    if (m < 1.0 || std::abs(ratio - m) > 1e-6 * std::max(1.0, m)) {
        throw std::invalid_argument("tau = " + std::to_string(units::to_seconds(tau)) +
                                    " s is not an integer multiple of dt = " +
                                    std::to_string(units::to_seconds(dt)) + " s");
    }
    return static_cast<std::size_t>(m);
}

}  // namespace

double allan_variance_analytic(const GyroErrorModel& m, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("Allan variance needs tau > 0");
    double var = m.noise.N * m.noise.N / tau;
    for (const auto& d : m.drifts) {
        var += d.K * d.K * d.Tc * kernels::allan_markov(tau / d.Tc);
    }
    return var;
}

AllanCurve allan_curve_analytic(const GyroErrorModel& m, const std::vector<double>& taus) {
    AllanCurve curve;
    curve.source = AllanCurve::Source::analytic;
    curve.points.reserve(taus.size());
    for (const double tau : taus) {
        curve.points.push_back({tau, std::sqrt(allan_variance_analytic(m, tau))});
    }
    return curve;
}

AllanCurve allan_variance_empirical(const RateTrace& trace, const std::vector<double>& taus) {
    const std::size_t n = trace.samples.size();
    if (n == 0 || !(trace.dt > 0.0)) throw std::invalid_argument("empty rate trace");

    // Prefix sums in extended precision; window sums are differences of these.
    std::vector<long double> prefix(n + 1, 0.0L);
    for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + trace.samples[k];

    AllanCurve curve;
    curve.source = AllanCurve::Source::empirical;
    double last_tau = 0.0;
    for (const double tau : taus) {
        if (!(tau > last_tau)) throw std::invalid_argument("taus must be strictly increasing");
        last_tau = tau;
        const std::size_t m = tau_multiple(tau, trace.dt);
        if (2 * m > n) {
            throw std::invalid_argument("tau = " + std::to_string(units::to_seconds(tau)) +
                                        " s is too large for a " +
                                        std::to_string(trace.duration) + " h record");
        }
        const std::size_t starts = n - 2 * m + 1;
        const long double inv_m = 1.0L / static_cast<long double>(m);
        long double acc = 0.0L;
        for (std::size_t s = 0; s < starts; ++s) {
            const long double first = (prefix[s + m] - prefix[s]) * inv_m;
            const long double second = (prefix[s + 2 * m] - prefix[s + m]) * inv_m;
            const long double diff = second - first;
            acc += diff * diff;
        }
        const double avar = static_cast<double>(0.5L * acc / static_cast<long double>(starts));
        curve.points.push_back({static_cast<double>(m) * trace.dt, std::sqrt(avar)});
    }
    return curve;
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
    if (!(lo > 0.0) || !(hi >= lo) || per_decade < 1) {
        throw std::invalid_argument("log grid needs 0 < lo <= hi and per_decade >= 1");
    }
    const double decades = std::log10(hi / lo);
    const auto steps = static_cast<int>(std::ceil(decades * per_decade - 1e-9));
    std::vector<double> out;
    if (steps == 0) return {lo};
    for (int i = 0; i <= steps; ++i) {
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / steps));
    }
    return out;
}

std::vector<double> tau_grid(double dt, double lo, double hi, int per_decade) {
    std::vector<double> out;
    for (const double tau : log_grid(lo, hi, per_decade)) {
        const double m = std::max(1.0, std::round(tau / dt));
        const double snapped = m * dt;
        if (out.empty() || snapped > out.back() * (1.0 + 1e-12)) out.push_back(snapped);
    }
    return out;
}

std::vector<double> default_tau_grid(double dt, double duration) {
    const double hi = std::floor(duration / 5.0 / dt) * dt;
    if (!(hi >= 2.0 * dt)) throw std::invalid_argument("record too short for an Allan grid");
    return tau_grid(dt, 2.0 * dt, hi, 10);
}

ConfidenceBand allan_confidence_band(double sigma, double tau, double duration, double level) {
    const double windows = std::floor(duration / tau * (1.0 + 1e-12));
    if (windows < 2.0) throw std::invalid_argument("fewer than two tau windows in record");
    const double df = windows - 1.0;
    const boost::math::chi_squared dist(df);
    const double alpha = 1.0 - level;
    const double q_lo = boost::math::quantile(dist, alpha / 2.0);
    const double q_hi = boost::math::quantile(dist, 1.0 - alpha / 2.0);
    return {sigma * std::sqrt(q_lo / df), sigma * std::sqrt(q_hi / df)};
}

AllanLandmarks allan_landmarks_analytic(const GyroErrorModel& m) {
    if (m.drifts.size() != 1) {
        throw std::invalid_argument("Allan landmarks need exactly one drift process");
    }
    const double N = m.noise.N;
    const double K = m.drifts.front().K;
    const double Tc = m.drifts.front().Tc;
    if (!(N > 0.0) || !(K > 0.0)) {
        throw std::invalid_argument("Allan landmarks need N > 0 and K > 0");
    }

    AllanLandmarks out;
    out.approx_minimum = {std::sqrt(3.0) * N / K, kSigmaMinPerSqrtNK * std::sqrt(N * K)};
    out.approx_maximum = {kTauMaxPerTc * Tc, kSigmaMaxPerKSqrtTc * K * std::sqrt(Tc)};

    // Work in u = ln(tau) on a grid wide enough to hold both extrema.
    const double lo = std::log(1e-4 * std::min(Tc, out.approx_minimum.tau));
    const double hi = std::log(1e3 * Tc);
    const int n = static_cast<int>(std::ceil((hi - lo) / std::log(10.0) * 50.0));
    const double step = (hi - lo) / n;
    const auto avar = [&](double u) { return allan_variance_analytic(m, std::exp(u)); };

    std::vector<double> values(n + 1);
    for (int i = 0; i <= n; ++i) values[i] = avar(lo + i * step);

    int min_index = -1;
    for (int i = 1; i < n; ++i) {
        if (values[i] < values[i - 1] && values[i] <= values[i + 1]) {
            min_index = i;
            break;
        }
    }
    if (min_index < 0) return out;

    const double tol = 1e-10;
    const double u_min = golden_section_min(avar, lo + (min_index - 1) * step,
                                            lo + (min_index + 1) * step, tol);
    out.minimum = AllanExtremum{std::exp(u_min), std::sqrt(avar(u_min))};

    for (int i = min_index + 1; i < n; ++i) {
        if (values[i] > values[i - 1] && values[i] >= values[i + 1]) {
            const double u_max = golden_section_min([&](double u) { return -avar(u); },
                                                    lo + (i - 1) * step, lo + (i + 1) * step, tol);
            out.maximum = AllanExtremum{std::exp(u_max), std::sqrt(avar(u_max))};
            break;
        }
    }
    return out;
}

AllanExtremum drift_term_maximum(const DriftSpec& d) {
    validate(d);
    if (!(d.K > 0.0)) throw std::invalid_argument("drift maximum needs K > 0");
    GyroErrorModel m;
    m.drifts.push_back(d);
    const auto avar = [&](double u) { return allan_variance_analytic(m, std::exp(u)); };

    // The drift term rises as K^2 tau/3 and falls as K^2 Tc^2/tau; its single
    // peak sits within two decades of Tc.
    const double lo = std::log(1e-2 * d.Tc);
    const double hi = std::log(1e2 * d.Tc);
    const int n = 200;
    const double step = (hi - lo) / n;
    int best = 0;
    double best_value = avar(lo);
    for (int i = 1; i <= n; ++i) {
        const double v = avar(lo + i * step);
        if (v > best_value) {
            best = i;
            best_value = v;
        }
    }
    const double u = golden_section_min([&](double x) { return -avar(x); },
                                        lo + std::max(best - 1, 0) * step,
                                        lo + std::min(best + 1, n) * step, 1e-10);
    return {std::exp(u), std::sqrt(avar(u))};
}

DriftSpec identify_from_max(double tau_max, double sigma_max) {
    if (!(tau_max > 0.0) || !(sigma_max > 0.0)) {
        throw std::invalid_argument("Allan maximum must have tau > 0 and sigma > 0");
    }
    DriftSpec d;
    d.Tc = tau_max / kTauMaxPerTc;
    d.K = sigma_max / (kSigmaMaxPerKSqrtTc * std::sqrt(d.Tc));
    return d;
}

std::optional<AllanExtremum> curve_maximum(const AllanCurve& curve) {
    const auto& p = curve.points;
    std::optional<AllanExtremum> best;
    std::size_t best_i = 0;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        if (p[i].sigma > p[i - 1].sigma && p[i].sigma >= p[i + 1].sigma) {
            if (!best || p[i].sigma > best->sigma) {
                best = AllanExtremum{p[i].tau, p[i].sigma};
                best_i = i;
            }
        }
    }
    if (!best) return best;
    // Vertex of the parabola through the three points in (ln tau, ln sigma).
    const double x0 = std::log(p[best_i - 1].tau), y0 = std::log(p[best_i - 1].sigma);
    const double x1 = std::log(p[best_i].tau), y1 = std::log(p[best_i].sigma);
    const double x2 = std::log(p[best_i + 1].tau), y2 = std::log(p[best_i + 1].sigma);
    const double denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
    const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
    const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
    if (a < 0.0) {
        const double xv = std::clamp(-b / (2.0 * a), x0, x2);
        const double c = y1 - a * x1 * x1 - b * x1;
        best = AllanExtremum{std::exp(xv), std::exp(a * xv * xv + b * xv + c)};
    }
    return best;
}

void write_allan_csv(std::ostream& os, const AllanCurve& curve) {
    os << "tau_s,sigma_deg_per_h\n";
    char buf[64];
    for (const auto& pt : curve.points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", units::to_seconds(pt.tau),
                      units::to_deg(pt.sigma));
        os << buf;
    }
}

AllanCurve read_allan_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("tau_s,sigma_deg_per_h", 0) != 0) {
        throw std::invalid_argument("Allan CSV must start with header 'tau_s,sigma_deg_per_h'");
    }
    AllanCurve curve;
    curve.source = AllanCurve::Source::empirical;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        std::istringstream ls(line);
        double tau = 0.0;
        double sigma = 0.0;
        char comma = 0;
        if (!(ls >> tau >> comma >> sigma) || comma != ',' || !(tau > 0.0) || !(sigma >= 0.0)) {
            throw std::invalid_argument("Allan CSV: malformed row " + std::to_string(row));
        }
        if (!curve.points.empty() && !(units::seconds(tau) > curve.points.back().tau)) {
            throw std::invalid_argument("Allan CSV: tau must increase (row " +
                                        std::to_string(row) + ")");
        }
        curve.points.push_back({units::seconds(tau), units::deg_per_h(sigma)});
    }
    return curve;
}

}  // namespace gyrofde
