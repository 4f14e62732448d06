#include "test_util.hpp"

#include <cmath>
#include <sstream>

#include "gyrofde/montecarlo.hpp"
#include "gyrofde/units.hpp"
#include "oracles.hpp"

using namespace gyrofde;
namespace u = gyrofde::units;

namespace {

GyroErrorModel benchmark() {
    GyroErrorModel m;
    m.noise.N = u::deg_per_sqrt_h(0.005);
    m.drifts.push_back({u::deg_per_h_3_2(0.01), 1.0});
    return m;
}

FlightProfile coarse(double duration = 10.0, double dt = 0.01) {
    FlightProfile p;
    p.duration = duration;
    p.dt = dt;
    return p;
}

EnsembleOptions one_group(std::size_t n, std::uint64_t seed, double record_step = 1.0) {
    EnsembleOptions o;
    o.n_groups = 1;
    o.n_flights = n;
    o.master_seed = seed;
    o.record_step = record_step;
    return o;
}

double pooled_var_at_end(const std::vector<double>& pooled) { return pooled.back() * pooled.back(); }

}  // namespace

TEST_CASE("ideal gyro flies without error") {
    const auto f = simulate_flight({}, coarse(1.0), {1, 0, 0});
    REQUIRE(f.times.size() == 101);
    CHECK(f.atrk_err.size() == f.times.size());
    CHECK(f.xtrk_err.size() == f.times.size());
    for (std::size_t k = 0; k < f.times.size(); ++k) {
        CHECK(f.atrk_err[k] == 0.0);
        CHECK(f.xtrk_err[k] == 0.0);
    }
    CHECK(f.times.back() == rel(1.0, 1e-12));
}

TEST_CASE("flights are reproducible from their key") {
    const auto m = benchmark();
    const auto p = coarse(2.0);
    const auto a = simulate_flight(m, p, {7, 1, 3});
    const auto b = simulate_flight(m, p, {7, 1, 3});
    const auto c = simulate_flight(m, p, {7, 1, 4});
    CHECK(a.atrk_err == b.atrk_err);
    CHECK(a.xtrk_err == b.xtrk_err);
    CHECK(a.atrk_err != c.atrk_err);
    CHECK(a.atrk_err.front() == 0.0);
    CHECK(a.xtrk_err.front() == 0.0);

    FlightProfile bad = p;
    bad.dt = -1.0;
    CHECK_THROWS(simulate_flight(m, bad, {}));
}

TEST_CASE("ensemble is bit-identical for any worker count") {
    const auto m = benchmark();
    const auto p = coarse(3.0);
    EnsembleOptions o;
    o.n_groups = 3;
    o.n_flights = 17;
    o.master_seed = 5;
    o.record_step = 0.5;
    o.workers = 1;
    const auto serial = run_ensemble(m, p, o);
    for (const unsigned w : {2u, 3u, 8u, 64u}) {
        o.workers = w;
        const auto par = run_ensemble(m, p, o);
        CHECK(par.times == serial.times);
        CHECK(par.std_atrk == serial.std_atrk);
        CHECK(par.std_xtrk == serial.std_xtrk);
        CHECK(par.pooled_std_atrk == serial.pooled_std_atrk);
        CHECK(par.pooled_std_xtrk == serial.pooled_std_xtrk);
    }
    CHECK(serial.times.size() == 7);
    CHECK(serial.std_atrk.size() == 3);
}

TEST_CASE("zero-error model gives zero spread") {
    EnsembleOptions o;
    o.n_groups = 2;
    o.n_flights = 2;
    const auto s = run_ensemble({}, coarse(1.0), o);
    for (const auto& g : s.std_atrk)
        for (const double v : g) CHECK(v == 0.0);
    for (const auto& g : s.std_xtrk)
        for (const double v : g) CHECK(v == 0.0);

    o.n_flights = 1;
    CHECK_THROWS_AS(run_ensemble({}, coarse(1.0), o), std::invalid_argument);
}

TEST_CASE("noise-only along-track variance grows as N^2 R^2 t") {
    GyroErrorModel m;
    m.noise.N = u::deg_per_sqrt_h(0.005);
    const auto p = coarse();
    const auto s = run_ensemble(m, p, one_group(10000, 101));
    for (std::size_t i = 1; i < s.times.size(); ++i) {
        const double expected = m.noise.N * m.noise.N * p.R * p.R * s.times[i];
        CHECK(s.pooled_std_atrk[i] * s.pooled_std_atrk[i] == rel(expected, 0.05));
    }
}

TEST_CASE("ensemble matches the exact variance of the discrete scheme") {
    const auto m = benchmark();
    const auto p = coarse();
    const std::size_t n = 4000;
    const auto s = run_ensemble(m, p, one_group(n, 202));
    const auto exact = oracle::discrete_scheme_variance(m.noise.N, m.drifts[0].K, m.drifts[0].Tc,
                                                        true, p.R, p.v, p.duration, p.dt);
    const auto [lo, hi] = sample_std_band(n, 0.999);
    const double ra = s.pooled_std_atrk.back() / std::sqrt(exact.atrk);
    const double rx = s.pooled_std_xtrk.back() / std::sqrt(exact.xtrk);
    CHECK(ra > lo);
    CHECK(ra < hi);
    CHECK(rx > lo);
    CHECK(rx < hi);
}

TEST_CASE("discretization convergence of the scheme") {
    const auto m = benchmark();
    const double N = m.noise.N;
    const double K = m.drifts[0].K;
    const double Tc = m.drifts[0].Tc;
    const FlightProfile p;
    for (const double dt : {Tc / 100.0, Tc / 400.0, u::seconds(1.0)}) {
        const auto a = oracle::discrete_scheme_variance(N, K, Tc, true, p.R, p.v, 10.0, dt);
        const auto b = oracle::discrete_scheme_variance(N, K, Tc, true, p.R, p.v, 10.0, dt / 2.0);
        CHECK(std::sqrt(a.atrk) == rel(std::sqrt(b.atrk), 0.01));
        CHECK(std::sqrt(a.xtrk) == rel(std::sqrt(b.xtrk), 0.01));
    }
    // ... and the fine scheme lands on the closed form.
    const auto fine = oracle::discrete_scheme_variance(N, K, Tc, true, p.R, p.v, 10.0, Tc / 1000.0);
    const auto budget = fde_sigma(m, p, 10.0);
    CHECK(fine.atrk == rel(budget.atrk.total(), 0.01));
    CHECK(fine.xtrk == rel(budget.xtrk.total(), 0.01));
}

TEST_CASE("pitch and yaw errors are uncorrelated") {
    const auto m = benchmark();
    const auto p = coarse();
    const std::size_t n = 1000;
    double sa = 0, sx = 0, saa = 0, sxx = 0, sax = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto f = simulate_flight(m, p, {303, 0, i});
        const double a = f.atrk_err.back();
        const double x = f.xtrk_err.back();
        sa += a;
        sx += x;
        saa += a * a;
        sxx += x * x;
        sax += a * x;
    }
    const double dn = static_cast<double>(n);
    const double cov = sax / dn - sa / dn * sx / dn;
    const double corr =
        cov / std::sqrt((saa / dn - sa * sa / dn / dn) * (sxx / dn - sx * sx / dn / dn));
    CHECK(std::abs(corr) < 3.0 / std::sqrt(dn));
}

TEST_CASE("turn-on state adds the turn-on cross-track variance") {
    GyroErrorModel on;
    on.drifts.push_back({u::deg_per_h_3_2(0.01), 1.0});
    GyroErrorModel off = on;
    off.turn_on = false;
    const auto p = coarse();
    const std::size_t n = 10000;
    const auto s_on = run_ensemble(on, p, one_group(n, 404));
    const auto s_off = run_ensemble(off, p, one_group(n, 405));
    const double v_on = pooled_var_at_end(s_on.pooled_std_xtrk);
    const double v_off = pooled_var_at_end(s_off.pooled_std_xtrk);
    const double expected = xtrk_variance(on, p.v, p.duration).turnon;
    // Each variance estimate has std var * sqrt(2/(n-1)); allow three of them.
    const double sd = std::sqrt(2.0 / (n - 1.0)) * std::hypot(v_on, v_off);
    CHECK(std::abs((v_on - v_off) - expected) < 3.0 * sd);
    CHECK(v_on > v_off);
}

TEST_CASE("group scatter of the std shrinks as sqrt(n)") {
    GyroErrorModel m;
    m.noise.N = u::deg_per_sqrt_h(0.005);
    const auto p = coarse(1.0, 0.05);
    const auto scatter = [&](std::size_t n) {
        EnsembleOptions o;
        o.n_groups = 200;
        o.n_flights = n;
        o.master_seed = 9 + n;
        o.record_step = 1.0;
        const auto s = run_ensemble(m, p, o);
        double mean = 0.0;
        for (const auto& g : s.std_atrk) mean += g.back();
        mean /= 200.0;
        double ss = 0.0;
        for (const auto& g : s.std_atrk) ss += (g.back() - mean) * (g.back() - mean);
        return std::sqrt(ss / 199.0);
    };
    CHECK(scatter(50) / scatter(100) == rel(std::sqrt(2.0), 0.2));
}

TEST_CASE("sample std band") {
    const auto [lo, hi] = sample_std_band(100, 0.95);
    CHECK(lo == rel(0.860826, 1e-5));
    CHECK(hi == rel(1.138943, 1e-5));
    CHECK_THROWS_AS(sample_std_band(1, 0.95), std::invalid_argument);
}

TEST_CASE("comparison against the closed form") {
    const auto m = benchmark();
    const auto p = coarse();

    SUBCASE("the analytic curve compared to itself has zero deviation") {
        EnsembleStats s;
        s.n_flights = 100;
        s.n_groups = 2;
        s.model = m;
        s.profile = p;
        s.times = {0.0, 2.5, 5.0, 10.0};
        s.std_atrk.assign(2, {});
        s.std_xtrk.assign(2, {});
        for (const double t : s.times) {
            const auto b = fde_sigma(m, p, t);
            for (std::size_t g = 0; g < 2; ++g) {
                s.std_atrk[g].push_back(b.sigma_atrk);
                s.std_xtrk[g].push_back(b.sigma_xtrk);
            }
            s.pooled_std_atrk.push_back(b.sigma_atrk);
            s.pooled_std_xtrk.push_back(b.sigma_xtrk);
        }
        const auto r = compare_to_analytic(s, m, p);
        // t = 0 has zero analytic sigma and is skipped.
        CHECK(r.atrk.times.size() == 3);
        for (const auto* axis : {&r.atrk, &r.xtrk}) {
            for (const auto& g : axis->deviation)
                for (const double d : g) CHECK(d == 0.0);
            for (const double c : axis->coverage) CHECK(c == 1.0);
            for (const double d : axis->pooled_deviation) CHECK(d == 0.0);
        }
        CHECK(coverage_at(r.xtrk, 4.9) == 1.0);
    }

    SUBCASE("statistics from another model are rejected") {
        EnsembleOptions o;
        o.n_groups = 1;
        o.n_flights = 3;
        const auto s = run_ensemble(m, coarse(1.0), o);
        auto other = m;
        other.drifts[0].Tc = 2.0;
        CHECK_THROWS_AS(compare_to_analytic(s, other, coarse(1.0)), std::invalid_argument);
        CHECK_THROWS_AS(compare_to_analytic(s, m, coarse(2.0)), std::invalid_argument);
        CHECK_NOTHROW(compare_to_analytic(s, m, coarse(1.0)));
    }
}

TEST_CASE("ensemble CSV") {
    EnsembleOptions o;
    o.n_groups = 2;
    o.n_flights = 3;
    o.record_step = 0.5;
    const auto s = run_ensemble(benchmark(), coarse(1.0), o);
    std::stringstream ss;
    write_ensemble_csv(ss, s);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "t_h,group,std_atrk_km,std_xtrk_km");
    std::size_t rows = 0;
    while (std::getline(ss, line)) ++rows;
    CHECK(rows == s.times.size() * 2);
}
