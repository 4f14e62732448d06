#include "test_util.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "gyrofde/allan.hpp"
#include "gyrofde/units.hpp"
#include "oracles.hpp"

using namespace gyrofde;
namespace u = gyrofde::units;

namespace {

GyroErrorModel allan_example_model() {
    GyroErrorModel m;
    m.noise.N = u::canonical({0.03, u::Unit::deg_per_h_per_sqrt_hz});
    m.drifts.push_back({u::deg_per_h_3_2(0.03), 10.0});
    return m;
}

double log_slope(const GyroErrorModel& m, double tau) {
    const double h = 1e-3;
    const double a = std::log(std::sqrt(allan_variance_analytic(m, tau * std::exp(-h))));
    const double b = std::log(std::sqrt(allan_variance_analytic(m, tau * std::exp(h))));
    return (b - a) / (2.0 * h);
}

}  // namespace

TEST_CASE("analytic Allan deviation at 1 s reads the ARW") {
    GyroErrorModel m;
    m.noise.N = u::canonical({0.03, u::Unit::deg_per_h_per_sqrt_hz});
    const double sigma = std::sqrt(allan_variance_analytic(m, u::seconds(1.0)));
    CHECK(u::to_deg(sigma) == rel(0.03, 1e-12));
}

TEST_CASE("drift-free Allan variance is N^2/tau exactly") {
    GyroErrorModel m;
    m.noise.N = 0.0123;
    m.drifts.push_back({0.0, 2.0});
    for (const double tau : {1e-4, 0.1, 3.0, 500.0}) {
        CHECK(allan_variance_analytic(m, tau) == m.noise.N * m.noise.N / tau);
    }
    CHECK_THROWS_AS(allan_variance_analytic(m, 0.0), std::invalid_argument);
}

TEST_CASE("drift term for tau << Tc approaches K^2 tau / 3") {
    GyroErrorModel m;
    m.drifts.push_back({0.02, 5.0});
    for (const double frac : {1e-2, 1e-3, 1e-5}) {
        const double tau = frac * 5.0;
        CHECK(allan_variance_analytic(m, tau) == rel(0.02 * 0.02 * tau / 3.0, 0.01));
    }
}

TEST_CASE("analytic Allan variance agrees with direct evaluation away from cancellation") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> lg(-1.0, 2.0);
    for (int i = 0; i < 500; ++i) {
        const double N = 1e-4 * std::pow(10.0, lg(rng));
        const double K = 1e-4 * std::pow(10.0, lg(rng));
        const double Tc = std::pow(10.0, lg(rng));
        const double tau = Tc * std::pow(10.0, lg(rng) - 0.5);
        GyroErrorModel m;
        m.noise.N = N;
        m.drifts.push_back({K, Tc});
        CHECK(allan_variance_analytic(m, tau) == rel(oracle::allan_direct(N, K, Tc, tau), 1e-10));
    }
}

TEST_CASE("property: multi-drift Allan variance is additive") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> lg(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        GyroErrorModel both;
        both.noise.N = 1e-3 * std::pow(10.0, lg(rng));
        both.drifts = {{1e-3 * std::pow(10.0, lg(rng)), std::pow(10.0, lg(rng))},
                       {1e-3 * std::pow(10.0, lg(rng)), std::pow(10.0, lg(rng))}};
        GyroErrorModel first = both;
        first.drifts = {both.drifts[0]};
        GyroErrorModel second = both;
        second.drifts = {both.drifts[1]};
        second.noise.N = 0.0;
        const double tau = std::pow(10.0, lg(rng));
        const double sum = allan_variance_analytic(first, tau) + allan_variance_analytic(second, tau);
        CHECK(allan_variance_analytic(both, tau) == rel(sum, 1e-14));
    }
}

TEST_CASE("log-log slopes of the analytic curve") {
    const auto m = allan_example_model();
    const auto lm = allan_landmarks_analytic(m);
    REQUIRE(lm.minimum);
    REQUIRE(lm.maximum);
    // Three decades below the minimum: white noise, slope -1/2.
    CHECK(std::abs(log_slope(m, lm.minimum->tau * 1e-3) + 0.5) < 0.05);
    // Between the minimum and Tc: rate random walk, slope +1/2.
    CHECK(std::abs(log_slope(m, std::sqrt(lm.minimum->tau * 10.0) * 0.3) - 0.5) < 0.05);
    // Three decades past the maximum: averaged-out drift, slope -1/2.
    CHECK(std::abs(log_slope(m, lm.maximum->tau * 1e3) + 0.5) < 0.05);
}

TEST_CASE("landmarks of the example curve") {
    const auto lm = allan_landmarks_analytic(allan_example_model());
    REQUIRE(lm.minimum);
    REQUIRE(lm.maximum);
    CHECK(u::to_deg(lm.minimum->sigma) == rel(4.1e-3, 0.03));
    CHECK(std::abs(lm.maximum->tau / 10.0 - 1.89) <= 0.01);
    const double k_sqrt_tc = u::deg_per_h_3_2(0.03) * std::sqrt(10.0);
    CHECK(std::abs(lm.maximum->sigma / k_sqrt_tc - 0.437) <= 0.002);
    CHECK(lm.minimum->tau < lm.maximum->tau);

    // Closed-form companions.
    CHECK(u::to_deg(lm.approx_minimum.sigma) == rel(1.074 * std::sqrt(5e-4 * 0.03), 1e-12));
    CHECK(lm.approx_minimum.tau == rel(std::sqrt(3.0) * 5e-4 / 0.03, 1e-12));
    CHECK(lm.approx_maximum.tau == rel(18.9, 1e-12));
    CHECK(lm.minimum->tau == rel(lm.approx_minimum.tau, 0.02));
}

TEST_CASE("vanishing drift has no interior extremum") {
    GyroErrorModel m;
    m.noise.N = 1e-3;
    m.drifts.push_back({1e-12, 1.0});
    const auto lm = allan_landmarks_analytic(m);
    CHECK_FALSE(lm.minimum);
    CHECK_FALSE(lm.maximum);

    GyroErrorModel two = m;
    two.drifts.push_back({1e-3, 1.0});
    CHECK_THROWS_AS(allan_landmarks_analytic(two), std::invalid_argument);
    GyroErrorModel no_noise = m;
    no_noise.noise.N = 0.0;
    CHECK_THROWS_AS(allan_landmarks_analytic(no_noise), std::invalid_argument);
}

TEST_CASE("minimum is insensitive to Tc once Tc >> tau_min") {
    auto m = allan_example_model();
    m.drifts[0].Tc = 100.0 * std::sqrt(3.0) * m.noise.N / m.drifts[0].K;
    const auto a = allan_landmarks_analytic(m);
    m.drifts[0].Tc *= 10.0;
    const auto b = allan_landmarks_analytic(m);
    REQUIRE(a.minimum);
    REQUIRE(b.minimum);
    CHECK(b.minimum->sigma == rel(a.minimum->sigma, 0.01));
}

TEST_CASE("identify_from_max") {
    const auto d = identify_from_max(1.89, 0.437);
    CHECK(d.K == rel(1.0, 1e-12));
    CHECK(d.Tc == rel(1.0, 1e-12));
    CHECK_THROWS_AS(identify_from_max(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(identify_from_max(1.0, -1.0), std::invalid_argument);

    SUBCASE("round trip through the located maximum") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> lg(-1.5, 1.5);
        for (int i = 0; i < 50; ++i) {
            GyroErrorModel m;
            m.drifts.push_back({1e-3 * std::pow(10.0, lg(rng)), std::pow(10.0, lg(rng))});
            m.noise.N = 1e-4 * m.drifts[0].K;
            const auto lm = allan_landmarks_analytic(m);
            REQUIRE(lm.maximum);
            const auto id = identify_from_max(lm.maximum->tau, lm.maximum->sigma);
            CHECK(id.K == rel(m.drifts[0].K, 0.015));
            CHECK(id.Tc == rel(m.drifts[0].Tc, 0.015));
        }
    }
    SUBCASE("example curve") {
        const auto lm = allan_landmarks_analytic(allan_example_model());
        REQUIRE(lm.maximum);
        const auto id = identify_from_max(lm.maximum->tau, lm.maximum->sigma);
        CHECK(u::to_deg(id.K) == rel(0.03, 0.015));
        CHECK(id.Tc == rel(10.0, 0.015));
    }
}

TEST_CASE("empirical estimator edge cases") {
    RateTrace trace;
    trace.dt = u::seconds(1.0);
    trace.samples.assign(1000, 0.25);
    trace.duration = 1000 * trace.dt;
    const auto curve = allan_variance_empirical(trace, tau_grid(trace.dt, trace.dt, 400 * trace.dt));
    for (const auto& p : curve.points) CHECK(p.sigma == 0.0);

    CHECK_THROWS_AS(allan_variance_empirical(trace, {1.5 * trace.dt}), std::invalid_argument);
    CHECK_THROWS_AS(allan_variance_empirical(trace, {501 * trace.dt}), std::invalid_argument);
    CHECK_NOTHROW(allan_variance_empirical(trace, {500 * trace.dt}));
}

TEST_CASE("empirical estimator on a ramp grows linearly in tau") {
    // For x_k = r k dt the two window means differ by exactly r tau, so the
    // Allan variance is (r tau)^2 / 2.
    RateTrace trace;
    trace.dt = 0.01;
    const double r = 0.3;
    for (int k = 0; k < 5000; ++k) trace.samples.push_back(r * k * trace.dt);
    trace.duration = 5000 * trace.dt;
    const auto curve = allan_variance_empirical(trace, tau_grid(trace.dt, 0.02, 10.0));
    for (const auto& p : curve.points) {
        CHECK(p.sigma == rel(r * p.tau / std::sqrt(2.0), 1e-9));
    }
}

TEST_CASE("empirical estimator on white noise follows N/sqrt(tau)") {
    GyroErrorModel m;
    m.noise.N = u::deg_per_sqrt_h(0.03);
    const double dt = u::seconds(1.0);
    const auto trace = synthesize_rate_trace(m, 10.0, dt, 17);
    const auto taus = tau_grid(dt, 10.0 * dt, trace.duration / 10.0);
    const auto curve = allan_variance_empirical(trace, taus);
    for (const auto& p : curve.points) {
        const double expected = m.noise.N / std::sqrt(p.tau);
        // Relative std of a sigma estimate with M - 1 degrees of freedom is
        // about 1/sqrt(2(M - 1)); the overlapping estimator does better.
        const double windows = std::floor(trace.duration / p.tau);
        const double rel_std = 1.0 / std::sqrt(2.0 * (windows - 1.0));
        CHECK(std::abs(p.sigma / expected - 1.0) < 3.0 * rel_std);
    }
}

TEST_CASE("confidence band") {
    const auto band = allan_confidence_band(1.0, 1.0, 101.0, 0.99);
    CHECK(band.lower < 1.0);
    CHECK(band.upper > 1.0);
    // df = 100: chi2 quantiles 67.33 and 140.17
    CHECK(band.lower == rel(std::sqrt(67.3276 / 100.0), 1e-4));
    CHECK(band.upper == rel(std::sqrt(140.169 / 100.0), 1e-4));
    CHECK_THROWS_AS(allan_confidence_band(1.0, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("default grid") {
    const double dt = u::seconds(1.0);
    const auto taus = default_tau_grid(dt, 10.0);
    REQUIRE(taus.size() > 10);
    CHECK(taus.front() == rel(2.0 * dt, 1e-12));
    CHECK(taus.back() <= 2.0 + 1e-12);
    for (std::size_t i = 1; i < taus.size(); ++i) {
        CHECK(taus[i] > taus[i - 1]);
        const double m = taus[i] / dt;
        CHECK(std::abs(m - std::round(m)) < 1e-6);
    }
}

TEST_CASE("curve maximum and CSV round trip") {
    const auto m = allan_example_model();
    const auto curve = allan_curve_analytic(m, log_grid(u::seconds(1.0), 1000.0, 20));
    const auto peak = curve_maximum(curve);
    REQUIRE(peak);
    CHECK(peak->tau == rel(18.9, 0.02));

    std::stringstream ss;
    write_allan_csv(ss, curve);
    CHECK(ss.str().rfind("tau_s,sigma_deg_per_h\n", 0) == 0);
    const auto back = read_allan_csv(ss);
    REQUIRE(back.points.size() == curve.points.size());
    for (std::size_t i = 0; i < back.points.size(); ++i) {
        CHECK(back.points[i].tau == rel(curve.points[i].tau, 1e-14));
        CHECK(back.points[i].sigma == rel(curve.points[i].sigma, 1e-14));
    }
}

TEST_CASE("drift-only maximum scales with Tc and K sqrt(Tc)") {
    const auto unit = drift_term_maximum({1.0, 1.0});
    CHECK(std::abs(unit.tau - 1.89) <= 0.01);
    CHECK(std::abs(unit.sigma - 0.437) <= 0.002);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> lg(-2.0, 2.0);
    for (int i = 0; i < 20; ++i) {
        const DriftSpec d{std::pow(10.0, lg(rng) - 3.0), std::pow(10.0, lg(rng))};
        const auto peak = drift_term_maximum(d);
        CHECK(peak.tau / d.Tc == rel(unit.tau, 1e-6));
        CHECK(peak.sigma / (d.K * std::sqrt(d.Tc)) == rel(unit.sigma, 1e-9));
    }
    CHECK_THROWS_AS(drift_term_maximum({0.0, 1.0}), std::invalid_argument);
}
