#include "gyrofde/analytic_error.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "gyrofde/markov_kernels.hpp"
#include "gyrofde/units.hpp"

namespace gyrofde {
namespace {

void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("time must be finite and >= 0, got " + std::to_string(t));
    }
}

}  // namespace

void validate(const FlightProfile& p) {
    if (!(p.v >= 0.0) || !std::isfinite(p.v)) throw ModelError("flight v must be >= 0");
    if (!(p.duration > 0.0) || !std::isfinite(p.duration)) {
        throw ModelError("flight duration must be > 0");
    }
    if (!(p.R > 0.0) || !std::isfinite(p.R)) throw ModelError("flight R must be > 0");
    if (!(p.dt > 0.0) || !std::isfinite(p.dt)) throw ModelError("flight dt must be > 0");
}

TermTriple atrk_variance(const GyroErrorModel& m, double R, double t) {
    require_time(t);
    TermTriple out;
    const double R2 = R * R;
    out.noise = m.noise.N * m.noise.N * R2 * t;
    for (const auto& d : m.drifts) {
        const double x = t / d.Tc;
        const double scale = d.K * d.K * d.Tc * d.Tc * d.Tc * R2;
        out.drift += scale * kernels::atrk_inflight(x);
        if (m.turn_on) out.turnon += scale * kernels::atrk_turnon(x);
    }
    return out;
}

TermTriple xtrk_variance(const GyroErrorModel& m, double v, double t) {
    require_time(t);
    TermTriple out;
    const double v2 = v * v;
    out.noise = m.noise.N * m.noise.N * v2 * t * t * t / 3.0;
    for (const auto& d : m.drifts) {
        const double x = t / d.Tc;
        const double tc2 = d.Tc * d.Tc;
        const double scale = d.K * d.K * tc2 * tc2 * d.Tc * v2;
        out.drift += scale * kernels::xtrk_inflight(x);
        if (m.turn_on) out.turnon += scale * kernels::xtrk_turnon(x);
    }
    return out;
}

ErrorBudget fde_sigma(const GyroErrorModel& m, const FlightProfile& p, double t) {
    if (!(t >= 0.0) || t > p.duration) {
        throw std::invalid_argument("time " + std::to_string(t) + " h outside flight [0, " +
                                    std::to_string(p.duration) + "] h");
    }
    ErrorBudget b;
    b.t = t;
    b.atrk = atrk_variance(m, p.R, t);
    b.xtrk = xtrk_variance(m, p.v, t);
    const double va = b.atrk.total();
    const double vx = b.xtrk.total();
    b.sigma_atrk = std::sqrt(va);
    b.sigma_xtrk = std::sqrt(vx);
    b.sigma_fde = std::sqrt(va + vx);
    return b;
}

double turnon_fraction(const GyroErrorModel& m, const FlightProfile& p, double t, Axis axis) {
    if (m.drifts.size() != 1) {
        throw std::invalid_argument("turn-on fraction needs exactly one drift process");
    }
    if (!(t > 0.0)) throw std::invalid_argument("turn-on fraction needs t > 0");
    GyroErrorModel with_turnon = m;
    with_turnon.turn_on = true;
    const auto terms = axis == Axis::atrk ? atrk_variance(with_turnon, p.R, t)
                                          : xtrk_variance(with_turnon, p.v, t);
    if (!(terms.drift > 0.0)) {
        throw std::domain_error("in-flight drift variance is zero; turn-on fraction undefined");
    }
    return terms.turnon / terms.drift;
}

void write_budget_csv_header(std::ostream& os) {
    os << "t_h,sigma_atrk_km,sigma_xtrk_km,sigma_fde_km,fde95_nmi,"
          "atrk_noise_km2,atrk_drift_km2,atrk_turnon_km2,"
          "xtrk_noise_km2,xtrk_drift_km2,xtrk_turnon_km2\n";
}

void write_budget_csv_row(std::ostream& os, const ErrorBudget& b) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", b.t,
                  b.sigma_atrk, b.sigma_xtrk, b.sigma_fde, units::to_nmi(b.fde95()), b.atrk.noise,
                  b.atrk.drift, b.atrk.turnon, b.xtrk.noise, b.xtrk.drift, b.xtrk.turnon);
    os << buf;
}

}  // namespace gyrofde
