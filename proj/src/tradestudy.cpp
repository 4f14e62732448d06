#include "gyrofde/tradestudy.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace gyrofde {
namespace {

constexpr double kRelTol = 1e-4;
constexpr int kTcScanPoints = 50;

GyroErrorModel single_drift(double N, double K, double Tc) {
    GyroErrorModel m;
    m.noise.N = N;
    m.drifts.push_back({K, Tc});
    m.turn_on = true;
    return m;
}

}  // namespace

void validate(const RequirementTarget& r) {
    if (!(r.fde95 > 0.0)) throw std::invalid_argument("requirement fde95 must be > 0");
    validate(r.flight);
    const double t = r.time();
    if (!(t >= 0.0) || t > r.flight.duration) {
        throw std::invalid_argument("requirement evaluation time outside the flight");
    }
}

RequirementCheck check_requirement(const GyroErrorModel& m, const RequirementTarget& r) {
    validate(m);
    validate(r);
    RequirementCheck out;
    out.budget = fde_sigma(m, r.flight, r.time());
    out.fde95 = out.budget.fde95();
    out.margin = r.fde95 - out.fde95;
    out.pass = out.fde95 <= r.fde95;
    return out;
}

double fde95_single(double N, double K, double Tc, const RequirementTarget& r) {
    return fde_sigma(single_drift(N, K, Tc), r.flight, r.time()).fde95();
}

std::optional<double> solve_K(double N, double Tc, const RequirementTarget& r) {
    if (!(N >= 0.0) || !(Tc > 0.0)) throw std::invalid_argument("solve_K needs N >= 0, Tc > 0");
    validate(r);
    const double floor_fde = fde95_single(N, 0.0, Tc, r);
    if (floor_fde > r.fde95) return std::nullopt;
    if (floor_fde == r.fde95) return 0.0;

    double lo = 0.0;
    double hi = 1e-6;
    int doublings = 0;
    while (fde95_single(N, hi, Tc, r) < r.fde95) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > 200) throw std::runtime_error("solve_K: failed to bracket the target");
    }
    while (hi - lo > kRelTol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (fde95_single(N, mid, Tc, r) < r.fde95) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

TcSolution solve_Tc(double N, double K, const RequirementTarget& r) {
    if (!(N >= 0.0) || !(K > 0.0)) throw std::invalid_argument("solve_Tc needs N >= 0, K > 0");
    validate(r);
    const double log_lo = std::log(kTcSearchLo);
    const double log_hi = std::log(10.0 * r.flight.duration);
    const auto excess = [&](double log_tc) {
        return fde95_single(N, K, std::exp(log_tc), r) - r.fde95;
    };

    std::vector<double> grid(kTcScanPoints);
    std::vector<double> values(kTcScanPoints);
    for (int i = 0; i < kTcScanPoints; ++i) {
        grid[i] = log_lo + (log_hi - log_lo) * i / (kTcScanPoints - 1);
        values[i] = excess(grid[i]);
    }

    TcSolution out;
    int crossings = 0;
    int first = -1;
    for (int i = 0; i + 1 < kTcScanPoints; ++i) {
        if ((values[i] <= 0.0) != (values[i + 1] <= 0.0)) {
            if (first < 0) first = i;
            ++crossings;
        }
    }
    out.multi_crossing = crossings > 1;
    if (first < 0) return out;

    double a = grid[first];
    double b = grid[first + 1];
    const bool a_below = values[first] <= 0.0;
    // Bisection in log Tc; 1e-6 in log is a 1e-6 relative width in Tc.
    while (b - a > 1e-6) {
        const double mid = 0.5 * (a + b);
        if ((excess(mid) <= 0.0) == a_below) {
            a = mid;
        } else {
            b = mid;
        }
    }
    out.Tc = std::exp(0.5 * (a + b));
    return out;
}

std::vector<double> LogRange::values() const {
    if (count == 0) throw std::invalid_argument("empty range");
    if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("log range needs 0 < lo <= hi");
    if (count == 1) return {lo};
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return out;
}

FdeGrid fde_grid(const LogRange& N_range, const LogRange& K_range, double Tc,
                 const RequirementTarget& r) {
    if (!(Tc > 0.0)) throw std::invalid_argument("fde_grid needs Tc > 0");
    validate(r);
    FdeGrid grid;
    grid.N = N_range.values();
    grid.K = K_range.values();
    grid.fde95.reserve(grid.N.size() * grid.K.size());
    for (const double n : grid.N) {
        for (const double k : grid.K) grid.fde95.push_back(fde95_single(n, k, Tc, r));
    }
    return grid;
}

std::optional<double> ContourResult::equivalent_bias(std::size_t i) const {
    const auto& p = points.at(i);
    if (!p.K) return std::nullopt;
    return drift_stationary_std({*p.K, p.Tc});
}

ContourResult contour_over_noise(const LogRange& N_range, double Tc, const RequirementTarget& r) {
    ContourResult out;
    out.axis = ContourResult::Axis::noise;
    for (const double n : N_range.values()) {
        out.points.push_back({n, solve_K(n, Tc, r), r.fde95 - fde95_single(n, 0.0, Tc, r), Tc});
    }
    return out;
}

ContourResult contour_over_tc(double N, const LogRange& Tc_range, const RequirementTarget& r) {
    ContourResult out;
    out.axis = ContourResult::Axis::time_constant;
    for (const double tc : Tc_range.values()) {
        out.points.push_back({tc, solve_K(N, tc, r), r.fde95 - fde95_single(N, 0.0, tc, r), tc});
    }
    return out;
}

void write_grid_csv(std::ostream& os, const FdeGrid& grid) {
    os << "N_deg_sqrth,K_deg_h32,fde95_nmi\n";
    char buf[128];
    for (std::size_t i = 0; i < grid.N.size(); ++i) {
        for (std::size_t j = 0; j < grid.K.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", units::to_deg(grid.N[i]),
                          units::to_deg(grid.K[j]), units::to_nmi(grid.at(i, j)));
            os << buf;
        }
    }
}

void write_contour_csv(std::ostream& os, const ContourResult& contour) {
    const bool over_noise = contour.axis == ContourResult::Axis::noise;
    os << (over_noise ? "N_deg_sqrth" : "Tc_h") << ",K_deg_h32,feasible\n";
    char buf[128];
    for (const auto& p : contour.points) {
        const double axis = over_noise ? units::to_deg(p.axis) : p.axis;
        if (p.K) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,1\n", axis, units::to_deg(*p.K));
        } else {
            std::snprintf(buf, sizeof buf, "%.17g,,0\n", axis);
        }
        os << buf;
    }
}

}  // namespace gyrofde
